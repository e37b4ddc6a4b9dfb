#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "contest/ability_distribution.hpp"
#include "contest/model.hpp"
#include "contest/random.hpp"

namespace contest {

/// Agent 0 always contributes; agents 1..n-1 share threshold a_star.
struct AsymmetricProfile {
  double a_star = 0.0;
  double residual = 0.0;          // |w_delta(a_star)|
  bool boundary = false;          // a_star = 1: (always, never) is itself an equilibrium
  double agent0_contribute = 0.0; // agent 0 contribution payoff at ability 0
  double agent0_rate = 0.0;
  std::vector<std::pair<double, double>> agent0_margins;  // (ability, contribute - rate)

  double agent0_margin() const { return agent0_contribute - agent0_rate; }
  StrategyProfile strategy_profile(std::size_t n) const;
};

// (agent 0 rating payoff, rating payoff of the threshold agents).
std::pair<double, double> rating_payoffs(double a_star, std::size_t n,
                                         const AbilityDistribution& dist, double p_R, double c_R);

/// Exact expected contribution payoff of `agent` at ability a under the asymmetric profile,
/// by dynamic programming over how many rivals contribute and how many rank ahead.
double rank_order_contribution_payoff(std::size_t agent, double a, double a_star,
                                      const RankPrizes& prizes, double beta, std::size_t n,
                                      const AbilityDistribution& dist, double c_C);

// Monte Carlo counterpart with sampled abilities and sampled orderings.
Estimate rank_order_contribution_payoff_mc(std::size_t agent, double a, double a_star,
                                           const RankPrizes& prizes, double beta, std::size_t n,
                                           const AbilityDistribution& dist, double c_C,
                                           const SimulationPlan& plan);

// Expected rank-order prize at ability a against rivals with the given thresholds.
double rank_order_expected_prize(double a, std::span<const double> rival_thresholds,
                                 const RankPrizes& prizes, double beta,
                                 const AbilityDistribution& dist);

// w_delta: rating minus contributing for a threshold agent at ability a_star.
double asymmetric_gap(double a_star, const RankPrizes& prizes, double beta, const CostModel& costs,
                      double p_R, std::size_t n, const AbilityDistribution& dist);

AsymmetricProfile find_asymmetric_equilibrium(const RankPrizes& prizes, double beta,
                                              const CostModel& costs, double p_R, std::size_t n,
                                              const AbilityDistribution& dist);

// Threshold of the symmetric equilibrium of the same rank-order game (corners included).
double symmetric_rank_order_threshold(const RankPrizes& prizes, double beta,
                                      const CostModel& costs, double p_R, std::size_t n,
                                      const AbilityDistribution& dist);

}  // namespace contest
