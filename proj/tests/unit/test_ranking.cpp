#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "contest/errors.hpp"
#include "contest/ranking.hpp"
#include "oracles.hpp"

using namespace contest;

TEST_CASE("winner probabilities: perfect, beta mixture, softmax") {
  const std::vector<double> q{0.2, 0.7, 0.4};
  const auto perfect = winner_probabilities(RankingModel::perfect(), q);
  CHECK(perfect == std::vector<double>{0.0, 1.0, 0.0});

  const auto tied = winner_probabilities(RankingModel::perfect(), std::vector<double>{0.5, 0.5});
  CHECK(tied[0] == doctest::Approx(0.5));

  const auto mix = winner_probabilities(RankingModel::beta_mixture(0.4), q);
  CHECK(mix[1] == doctest::Approx(0.4 + 0.6 / 3));
  CHECK(mix[0] == doctest::Approx(0.2));

  const double eta = 0.5;
  const auto soft = winner_probabilities(RankingModel::softmax(eta), q);
  double z = 0.0;
  for (double x : q) z += std::exp(x / eta);
  for (std::size_t i = 0; i < q.size(); ++i) CHECK(soft[i] == doctest::Approx(std::exp(q[i] / eta) / z));
  CHECK(std::accumulate(soft.begin(), soft.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("own win probability agrees with the full vector") {
  const std::vector<double> q{0.55, 0.1, 0.9, 0.3};
  for (const auto& r : {RankingModel::perfect(), RankingModel::beta_mixture(0.3),
                        RankingModel::softmax(0.2)}) {
    const auto all = winner_probabilities(r, q);
    for (std::size_t i = 0; i < q.size(); ++i) {
      std::vector<double> others;
      for (std::size_t j = 0; j < q.size(); ++j) {
        if (j != i) others.push_back(q[j]);
      }
      CHECK(own_win_probability(r, q[i], others) == doctest::Approx(all[i]));
    }
  }
}

TEST_CASE("sampled winners match the closed-form probabilities") {
  const std::vector<double> q{0.3, 0.8, 0.5};
  const std::size_t draws = 100000;
  for (const auto& r : {RankingModel::beta_mixture(0.5), RankingModel::softmax(0.25)}) {
    const auto p = winner_probabilities(r, q);
    std::vector<double> counts(q.size(), 0.0);
    Stream s(31);
    for (std::size_t t = 0; t < draws; ++t) counts[draw_winner(r, q, s)] += 1.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double se = std::sqrt(p[i] * (1 - p[i]) / draws);
      CHECK_MESSAGE(std::abs(counts[i] / draws - p[i]) <= 3 * se + 1e-12, r.name());
    }
  }
}

TEST_CASE("random orderings are uniform over all 3! permutations") {
  const std::vector<double> q{0.1, 0.2, 0.3};
  std::map<std::vector<std::size_t>, int> counts;
  Stream s(4);
  const int draws = 60000;
  for (int t = 0; t < draws; ++t) ++counts[draw_ranking(0.0, q, s)];
  REQUIRE(counts.size() == 6);
  double chi2 = 0.0;
  for (const auto& [perm, c] : counts) chi2 += (c - draws / 6.0) * (c - draws / 6.0) / (draws / 6.0);
  CHECK(chi2 < 15.09);  // 99th percentile, 5 degrees of freedom

  Stream s2(4);
  CHECK(draw_ranking(1.0, q, s2) == std::vector<std::size_t>{2, 1, 0});
}

TEST_CASE("rank-order expected points by enumeration of orderings") {
  const RankPrizes prizes{{5.0, 2.0, 0.0}, 0.0};
  const std::vector<double> q{0.6, 0.9, 0.3};  // own is q[0]
  const double beta = 0.3;
  // Perfect branch: own ranks 2nd. Random branch: each of 6 permutations equally likely.
  std::vector<std::size_t> perm{0, 1, 2};
  double random_branch = 0.0;
  do {
    const auto pos = std::find(perm.begin(), perm.end(), 0) - perm.begin();
    random_branch += prizes.prize(static_cast<std::size_t>(pos) + 1) / 6.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double expected = beta * 2.0 + (1 - beta) * random_branch;
  const GeneralMechanism mech(GeneralMechanism::RankOrder{prizes, beta});
  const std::vector<double> others{0.9, 0.3};
  CHECK(expected_points(mech, 0.6, others) == doctest::Approx(expected));
}

TEST_CASE("expected points of the other mechanisms") {
  const std::vector<double> others{0.2, 0.3};
  const GeneralMechanism best(GeneralMechanism::BestContribution{{1.0, 0.2, 0.0}, RankingModel::softmax(1.0)});
  const double pi = own_win_probability(RankingModel::softmax(1.0), 0.5, others);
  CHECK(expected_points(best, 0.5, others) == doctest::Approx(pi + (1 - pi) * 0.2));

  const GeneralMechanism prop(GeneralMechanism::Proportional{2.0});
  CHECK(expected_points(prop, 0.5, others) == doctest::Approx(1.0));
  const std::vector<double> zeros{0.0, 0.0};
  CHECK(expected_points(prop, 0.0, zeros) == doctest::Approx(2.0 / 3.0));

  const auto scaled = GeneralMechanism::scaled(prop, 0.5);
  CHECK(expected_points(scaled, 0.5, others) == doctest::Approx(0.5));
  CHECK_THROWS_AS(GeneralMechanism(GeneralMechanism::Proportional{0.0}), ContractError);
}

TEST_CASE("ranking assumption validation") {
  auto soft = validate_ranking_assumptions(RankingModel::softmax(0.5), 11);
  CHECK(soft.pass);
  auto perfect = validate_ranking_assumptions(RankingModel::perfect(), 11);
  CHECK(perfect.pass);
  CHECK_FALSE(perfect.note.empty());
  CHECK(validate_ranking_assumptions(RankingModel::beta_mixture(0.5), 11).pass);

  // lower quality wins more often
  auto inverted = [](double own, std::span<const double> others) {
    return own_win_probability(RankingModel::softmax(0.5), -own, std::vector<double>(others.size(), 0.0));
  };
  CHECK_FALSE(validate_ranking_assumptions(inverted, 11, false).pass);

  // adding rivals raises the win probability
  auto crowd = [](double own, std::span<const double> others) {
    return std::min(1.0, 0.1 * own + 0.1 * static_cast<double>(others.size()));
  };
  auto report = validate_ranking_assumptions(crowd, 11, false);
  CHECK_FALSE(report.pass);
  REQUIRE(report.violation.has_value());
}
