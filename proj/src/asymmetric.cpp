#include "contest/asymmetric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "contest/errors.hpp"
#include "contest/threshold.hpp"

namespace contest {

StrategyProfile AsymmetricProfile::strategy_profile(std::size_t n) const {
  std::vector<AgentStrategy> strategies(n, AgentStrategy{a_star, EffortPolicy::constant(0.0)});
  strategies.at(0).threshold = 0.0;
  return StrategyProfile::per_agent(std::move(strategies));
}

std::pair<double, double> rating_payoffs(double a_star, std::size_t n,
                                         const AbilityDistribution& dist, double p_R, double c_R) {
  if (n < 2) throw ContractError("a contest needs n >= 2 agents");
  const double net = p_R - c_R;
  const double first = std::pow(1.0 - dist.cdf(a_star), static_cast<double>(n - 1)) * net;
  return {first, net};
}

namespace {

void check_rank_inputs(const RankPrizes& prizes, double beta, std::size_t n) {
  prizes.validate();
  if (n < 2) throw ContractError("a contest needs n >= 2 agents");
  if (prizes.prizes.size() != n) throw ContractError("rank-order prize list must have n entries");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ContractError("beta must lie in [0,1]");
}

std::vector<double> rival_thresholds(std::size_t agent, double a_star, std::size_t n) {
  if (agent >= n) throw ContractError("agent index out of range");
  std::vector<double> out;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == agent) continue;
    out.push_back(j == 0 ? 0.0 : a_star);
  }
  return out;
}

double mean_prize(const RankPrizes& prizes, std::size_t contributors) {
  double total = 0.0;
  for (std::size_t r = 1; r <= contributors; ++r) total += prizes.prize(r);
  return total / static_cast<double>(contributors);
}

}  // namespace

double rank_order_expected_prize(double a, std::span<const double> rival_thresholds,
                                 const RankPrizes& prizes, double beta,
                                 const AbilityDistribution& dist) {
  const std::size_t rivals = rival_thresholds.size();
  const double fa = dist.cdf(a);
  // dp[m][k]: m rivals contribute, k of them rank above ability a.
  std::vector<std::vector<double>> dp(rivals + 1, std::vector<double>(rivals + 1, 0.0));
  dp[0][0] = 1.0;
  for (std::size_t j = 0; j < rivals; ++j) {
    const double t = rival_thresholds[j];
    const double absent = dist.cdf(t);
    const double below = std::max(0.0, fa - absent);
    const double above = 1.0 - dist.cdf(std::max(a, t));
    std::vector<std::vector<double>> next(rivals + 1, std::vector<double>(rivals + 1, 0.0));
    for (std::size_t m = 0; m <= j; ++m) {
      for (std::size_t k = 0; k <= m; ++k) {
        const double p = dp[m][k];
        if (p == 0.0) continue;
        next[m][k] += p * absent;
        next[m + 1][k] += p * below;
        next[m + 1][k + 1] += p * above;
      }
    }
    dp = std::move(next);
  }
  double expected = 0.0;
  for (std::size_t m = 0; m <= rivals; ++m) {
    const double shuffled = mean_prize(prizes, m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
      if (dp[m][k] == 0.0) continue;
      expected += dp[m][k] * (beta * prizes.prize(k + 1) + (1.0 - beta) * shuffled);
    }
  }
  return expected;
}

double rank_order_contribution_payoff(std::size_t agent, double a, double a_star,
                                      const RankPrizes& prizes, double beta, std::size_t n,
                                      const AbilityDistribution& dist, double c_C) {
  check_rank_inputs(prizes, beta, n);
  const auto thresholds = rival_thresholds(agent, a_star, n);
  return rank_order_expected_prize(a, thresholds, prizes, beta, dist) - c_C;
}

Estimate rank_order_contribution_payoff_mc(std::size_t agent, double a, double a_star,
                                           const RankPrizes& prizes, double beta, std::size_t n,
                                           const AbilityDistribution& dist, double c_C,
                                           const SimulationPlan& plan) {
  check_rank_inputs(prizes, beta, n);
  const auto thresholds = rival_thresholds(agent, a_star, n);
  std::vector<double> values(plan.reps);
  parallel_for(plan.reps, [&](std::size_t r) {
    Stream stream = plan.stream_for(r);
    std::size_t present = 0;
    std::size_t above = 0;
    for (double t : thresholds) {
      const double b = dist.sample_one(stream);
      if (b >= t) {
        ++present;
        if (b > a) ++above;
      }
    }
    const bool perfect = stream.uniform() < beta;
    const std::size_t shuffled_rank = 1 + stream.below(present + 1);
    values[r] = prizes.prize(perfect ? above + 1 : shuffled_rank) - c_C;
  });
  return summarize(values);
}

double asymmetric_gap(double a_star, const RankPrizes& prizes, double beta, const CostModel& costs,
                      double p_R, std::size_t n, const AbilityDistribution& dist) {
  const double contribute =
      rank_order_contribution_payoff(1, a_star, a_star, prizes, beta, n, dist, costs.c_C);
  return (p_R - costs.c_R) - contribute;
}

AsymmetricProfile find_asymmetric_equilibrium(const RankPrizes& prizes, double beta,
                                              const CostModel& costs, double p_R, std::size_t n,
                                              const AbilityDistribution& dist) {
  check_rank_inputs(prizes, beta, n);
  costs.validate();
  const double rate = p_R - costs.c_R;
  const double top = prizes.prize(1) - costs.c_C;
  if (top <= 0.0) {
    throw PreconditionError(
        "all agents rating is an equilibrium: a lone contributor earns p_1 - c_C = " +
        std::to_string(top) + " <= 0");
  }
  const double worst =
      beta * prizes.prize(n) + (1.0 - beta) * mean_prize(prizes, n) - costs.c_C;
  if (worst >= rate) {
    throw PreconditionError(
        "all agents contributing is an equilibrium: the lowest-ability contributor earns " +
        std::to_string(worst) + " >= p_R - c_R = " + std::to_string(rate));
  }

  auto gap = [&](double a) { return asymmetric_gap(a, prizes, beta, costs, p_R, n, dist); };
  AsymmetricProfile out;
  const double at_one = gap(1.0);
  if (at_one >= 0.0) {
    out.a_star = 1.0;
    out.boundary = true;
    out.residual = 0.0;
  } else {
    const auto root = bisect_decreasing(gap, 0.0, 1.0);
    out.a_star = root.x;
    out.residual = root.residual;
  }

  const auto [first_rate, others_rate] = rating_payoffs(out.a_star, n, dist, p_R, costs.c_R);
  (void)others_rate;
  out.agent0_rate = first_rate;
  out.agent0_contribute =
      rank_order_contribution_payoff(0, 0.0, out.a_star, prizes, beta, n, dist, costs.c_C);
  for (int i = 0; i <= 10; ++i) {
    const double a = i == 10 ? 1.0 : 0.1 * i;
    const double c = rank_order_contribution_payoff(0, a, out.a_star, prizes, beta, n, dist,
                                                    costs.c_C);
    out.agent0_margins.emplace_back(a, c - first_rate);
  }
  for (const auto& [a, margin] : out.agent0_margins) {
    if (margin < -1e-12) {
      throw VerificationError("the always-contributing agent prefers rating", a, -margin);
    }
  }
  return out;
}

double symmetric_rank_order_threshold(const RankPrizes& prizes, double beta,
                                      const CostModel& costs, double p_R, std::size_t n,
                                      const AbilityDistribution& dist) {
  check_rank_inputs(prizes, beta, n);
  auto gap = [&](double a) {
    const std::vector<double> thresholds(n - 1, a);
    const double rate = (p_R - costs.c_R) * prob_any_other_contribution(a, n, dist);
    return rate - (rank_order_expected_prize(a, thresholds, prizes, beta, dist) - costs.c_C);
  };
  if (gap(0.0) <= 0.0) return 0.0;
  if (gap(1.0) >= 0.0) return 1.0;
  return bisect_decreasing(gap, 0.0, 1.0).x;
}

}  // namespace contest
