#pragma once

#include <cstddef>
#include <vector>

#include "contest/ability_distribution.hpp"
#include "contest/model.hpp"
#include "contest/random.hpp"
#include "contest/ranking.hpp"

namespace contest {

struct ContestSeriesResult {
  std::size_t T = 0;
  std::size_t n = 0;
  double threshold = 1.0;               // equilibrium threshold under the true costs
  std::vector<std::size_t> counts;      // contributors per contest
  double f_hat = 0.0;                   // sum(counts) / (T n)

  // sqrt(f(1-f)/(T n)) evaluated at f_hat.
  double stderr_proxy() const;
};

// Solves the true equilibrium once, then runs T contests; contest t draws from
// plan.stream_for(t). plan.reps is ignored.
ContestSeriesResult run_contest_series(const RewardScheme& rewards, const CostModel& true_costs,
                                       std::size_t n, const AbilityDistribution& dist,
                                       const RankingModel& ranking, std::size_t T,
                                       const SimulationPlan& plan);

struct CostEstimate {
  double c_C = 0.0;
  double observed_threshold = 0.0;
  double residual = 0.0;  // |a*(c_C) - observed_threshold|
};

/// Inverts an observed contribution frequency into the contribution cost. Requires p_C = 0,
/// p_B > p_R + c_bar and f_hat strictly inside (0,1).
CostEstimate estimate_contribution_cost(double f_hat, const RewardScheme& rewards, double c_R,
                                        std::size_t n, const AbilityDistribution& dist,
                                        const RankingModel& ranking, double c_bar);

struct ThresholdExperiment {
  double p_B = 0.0;
  double observed_threshold = 0.0;
};

struct CostPair {
  double c_C = 0.0;
  double c_R = 0.0;
};

/// Recovers (c_C, c_R) from two experiments with p_C = 0 and different winner rewards by solving
///   c_C - c_R Pr(C>0|a) = p_B Pr(W|a) - p_R Pr(C>0|a)
/// for both observed thresholds.
CostPair estimate_both_costs(const ThresholdExperiment& first, const ThresholdExperiment& second,
                             double p_R, std::size_t n, const AbilityDistribution& dist,
                             const RankingModel& ranking);

}  // namespace contest
