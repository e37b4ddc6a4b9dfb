#include <doctest.h>

#include <cmath>
#include <vector>

#include "contest/errors.hpp"
#include "contest/learning.hpp"
#include "contest/threshold.hpp"

using namespace contest;

namespace {

const auto kUniform = AbilityDistribution::uniform();
const auto kPerfect = RankingModel::perfect();

// Uniform, perfect ranking, p_C = 0: a*^(n-1) = (p_R - c_R + c_C) / (p_R - c_R + p_B).
double closed_form_threshold(std::size_t n, double p_B, double p_R, double c_C, double c_R) {
  const double base = (p_R - c_R + c_C) / (p_R - c_R + p_B);
  return std::pow(base, 1.0 / static_cast<double>(n - 1));
}

}  // namespace

TEST_CASE("contest series frequency matches the participation probability") {
  const SimulationPlan plan{0, 11, 0};
  const auto r = run_contest_series({1.0, 0.0, 0.0}, {0.1, 0.0, std::nullopt}, 2, kUniform,
                                    kPerfect, 10000, plan);
  CHECK(std::abs(r.threshold - 0.1) <= 1e-9);
  CHECK(r.counts.size() == 10000);
  CHECK(std::abs(r.f_hat - 0.9) <= 3.0 * std::sqrt(0.09 / 20000.0));
  CHECK(std::abs(r.stderr_proxy() - std::sqrt(r.f_hat * (1 - r.f_hat) / 20000.0)) <= 1e-15);
}

TEST_CASE("series corner cases") {
  const SimulationPlan plan{0, 3, 0};
  const auto one = run_contest_series({1.0, 0.0, 0.0}, {0.1, 0.0, std::nullopt}, 2, kUniform,
                                      kPerfect, 1, plan);
  CHECK((one.f_hat == 0.0 || one.f_hat == 0.5 || one.f_hat == 1.0));

  const auto none = run_contest_series({0.05, 0.0, 0.0}, {0.1, 0.0, std::nullopt}, 3, kUniform,
                                       kPerfect, 500, plan);
  CHECK(none.f_hat == 0.0);
  CHECK_THROWS_AS(run_contest_series({1.0, 0.0, 0.0}, {0.1, 0.0, std::nullopt}, 2, kUniform,
                                     kPerfect, 0, plan),
                  ContractError);
}

TEST_CASE("series is deterministic and converges in T") {
  const RewardScheme rewards{1.0, 0.0, 0.0};
  const CostModel costs{0.1, 0.0, std::nullopt};
  const SimulationPlan plan{0, 99, 0};
  const auto a = run_contest_series(rewards, costs, 2, kUniform, kPerfect, 1000, plan);
  const auto b = run_contest_series(rewards, costs, 2, kUniform, kPerfect, 1000, plan);
  CHECK(a.counts == b.counts);

  double previous = 1.0;
  for (std::size_t T : {100, 1000, 10000}) {
    double total = 0.0;
    int inside = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto r = run_contest_series(rewards, costs, 2, kUniform, kPerfect, T, {0, seed, 0});
      const double err = std::abs(r.f_hat - 0.9);
      total += err;
      if (err <= 3.0 * std::sqrt(0.09 / (2.0 * T))) ++inside;
    }
    CHECK(inside >= 9);
    CHECK(total / 10 <= previous);
    previous = total / 10;
  }
}

TEST_CASE("threshold strictly increasing in contribution cost") {
  const RewardScheme rewards{1.0, 0.0, 0.1};
  double previous = -1.0;
  for (int i = 1; i <= 49; ++i) {
    const double c = 0.01 * i;
    const auto r = solve_symmetric_threshold(rewards, {c, 0.05, std::nullopt}, 3, kUniform, kPerfect);
    CHECK(r.threshold > previous);
    CHECK(std::abs(r.threshold - closed_form_threshold(3, 1.0, 0.1, c, 0.05)) <= 1e-9);
    previous = r.threshold;
  }
}

TEST_CASE("noiseless inversion recovers the cost") {
  CHECK(std::abs(estimate_contribution_cost(0.9, {1.0, 0.0, 0.0}, 0.0, 2, kUniform, kPerfect, 0.5)
                     .c_C -
                 0.1) <= 1e-6);

  const RewardScheme rewards{1.0, 0.0, 0.1};
  for (std::size_t n : {2, 4}) {
    for (int i = 1; i <= 49; ++i) {
      const double c = 0.01 * i;
      const double a = closed_form_threshold(n, 1.0, 0.1, c, 0.05);
      const auto est = estimate_contribution_cost(1.0 - a, rewards, 0.05, n, kUniform, kPerfect, 0.5);
      CHECK(std::abs(est.c_C - c) <= 1e-6);
      CHECK(est.residual <= 1e-9);
    }
  }
}

TEST_CASE("inversion errors") {
  const RewardScheme rewards{1.0, 0.0, 0.0};
  CHECK_THROWS_AS(estimate_contribution_cost(1.0, rewards, 0.0, 2, kUniform, kPerfect, 0.5),
                  UnidentifiableError);
  CHECK_THROWS_AS(estimate_contribution_cost(0.0, rewards, 0.0, 2, kUniform, kPerfect, 0.5),
                  UnidentifiableError);
  CHECK_THROWS_AS(estimate_contribution_cost(0.9, {1.0, 0.1, 0.0}, 0.0, 2, kUniform, kPerfect, 0.5),
                  ContractError);
  CHECK_THROWS_AS(estimate_contribution_cost(0.9, {0.5, 0.0, 0.2}, 0.0, 2, kUniform, kPerfect, 0.5),
                  ContractError);
}

TEST_CASE("simulated series recovers the cost for most seeds") {
  const RewardScheme rewards{1.0, 0.0, 0.0};
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto series = run_contest_series(rewards, {0.1, 0.0, std::nullopt}, 2, kUniform, kPerfect,
                                           10000, {0, seed, 0});
    const auto est = estimate_contribution_cost(series.f_hat, rewards, 0.0, 2, kUniform, kPerfect, 0.5);
    if (std::abs(est.c_C - 0.1) <= 0.02) ++good;
  }
  CHECK(good >= 9);
}

TEST_CASE("two experiments identify both costs") {
  const auto pair = estimate_both_costs({1.0, 5.0 / 23.0}, {2.0, 5.0 / 43.0}, 0.2, 2, kUniform, kPerfect);
  CHECK(std::abs(pair.c_C - 0.1) <= 1e-9);
  CHECK(std::abs(pair.c_R - 0.05) <= 1e-9);

  // Forward-solve thresholds for n = 3 and invert.
  const double a1 = closed_form_threshold(3, 1.0, 0.2, 0.07, 0.03);
  const double a2 = closed_form_threshold(3, 1.6, 0.2, 0.07, 0.03);
  const auto three = estimate_both_costs({1.0, a1}, {1.6, a2}, 0.2, 3, kUniform, kPerfect);
  CHECK(std::abs(three.c_C - 0.07) <= 1e-9);
  CHECK(std::abs(three.c_R - 0.03) <= 1e-9);

  CHECK_THROWS_AS(estimate_both_costs({1.0, 0.2}, {1.0, 0.3}, 0.2, 2, kUniform, kPerfect),
                  DegenerateError);
  CHECK_THROWS_AS(estimate_both_costs({1.0, 0.2}, {2.0, 0.2}, 0.2, 2, kUniform, kPerfect),
                  DegenerateError);
}

TEST_CASE("two-experiment solve agrees with single inversion when c_R = 0") {
  const double a1 = closed_form_threshold(2, 1.0, 0.2, 0.15, 0.0);
  const double a2 = closed_form_threshold(2, 1.5, 0.2, 0.15, 0.0);
  const auto pair = estimate_both_costs({1.0, a1}, {1.5, a2}, 0.2, 2, kUniform, kPerfect);
  const auto single = estimate_contribution_cost(1.0 - a1, {1.0, 0.0, 0.2}, 0.0, 2, kUniform,
                                                 kPerfect, 0.5);
  CHECK(std::abs(pair.c_C - single.c_C) <= 1e-6);
  CHECK(std::abs(pair.c_R) <= 1e-9);
}
