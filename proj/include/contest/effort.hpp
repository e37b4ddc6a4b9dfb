#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contest/designer.hpp"
#include "contest/model.hpp"
#include "contest/random.hpp"
#include "contest/scenario.hpp"
#include "contest/simulation.hpp"

namespace contest {

struct EndogenousOptimum {
  double a_hat = 0.0;
  double effort = 1.0;
  ThresholdSearchResult search;
};

// Designer-optimal profile with endogenous effort: full effort, threshold optimized over the
// induced quality distribution q(a, 1).
EndogenousOptimum optimal_endogenous_strategy(const ScenarioConfig& scenario, std::size_t grid,
                                              const SimulationPlan& plan);

// Effort on `effort_grid` maximizing the paired payoff estimate; smallest on ties.
double best_response_effort(double a, const StrategyProfile& profile,
                            const ScenarioConfig& scenario, std::span<const double> effort_grid,
                            const SimulationPlan& plan);

struct EffortDeviationReport {
  double a_hat = 0.0;
  double win_full_effort = 0.0;  // at ability a_hat
  double win_zero_effort = 0.0;
  double gain = 0.0;             // payoff(e=0) - payoff(e=1) at a_hat
  double near_ability = 0.0;
  double near_gain = 0.0;        // same comparison at a_hat + 0.01
  bool optimum_is_equilibrium = true;
  std::string note;
};

/// Exact deviation analysis for perfect ranking: a contributor at the designer threshold wins
/// only when nobody else contributes, so full effort buys nothing.
EffortDeviationReport perfect_ranking_undermines_effort(const ScenarioConfig& scenario,
                                                        double a_hat,
                                                        const RewardScheme& rewards);

struct ConditionGrids {
  std::size_t effort_points = 21;
  std::size_t ability_points = 21;
  bool weak_form = false;  // evaluate at p_B = c(0) + max(p_R - c_R, 0)
};

struct EffortConditionReport {
  bool holds = false;
  double margin = 0.0;  // min over the grid of RHS - c'(e)
  double witness_effort = 0.0;
  double witness_ability = 0.0;
  std::size_t witness_contributors = 0;
  double p_B = 0.0;
  double p_C = 0.0;
  double min_sensitivity = 0.0;  // smallest d pi / d q over the grid
  std::string note;
};

/// Conservative check of c'(e) <= dq/de * dpi/dq * (p_B - p_C) * (1 - F(a_hat)^(n-1)) at the
/// lowest admissible p_B, with dpi/dq bounded over extreme rival quality profiles.
EffortConditionReport effort_condition_holds(const ScenarioConfig& scenario, double a_hat,
                                             double ratio, const ConditionGrids& grids = {});

struct EndogenousCalibration {
  CalibrationResult calibration;
  EffortConditionReport condition;
  RegretReport verification;
};

/// Calibrates rewards for the full-effort profile at a_hat under a softmax ranking, then
/// verifies participation and effort best responses. Throws PreconditionError if the effort
/// condition fails and VerificationError if the verification does not pass.
EndogenousCalibration calibrate_endogenous_rewards(double a_hat, double ratio,
                                                   const ScenarioConfig& scenario,
                                                   const SimulationPlan& verify_plan,
                                                   const SolverOptions& solver = {},
                                                   const ConditionGrids& grids = {});

// Sampled best-response effort curve (ability, effort) above the threshold.
std::vector<std::pair<double, double>> effort_response_curve(
    const StrategyProfile& profile, const ScenarioConfig& scenario,
    std::span<const double> abilities, std::span<const double> effort_grid,
    const SimulationPlan& plan);

}  // namespace contest
