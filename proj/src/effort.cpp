#include "contest/effort.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "contest/errors.hpp"
#include "contest/threshold.hpp"

namespace contest {

namespace {

const EffortCostFunction& require_effort_cost(const ScenarioConfig& scenario) {
  if (!scenario.effort_cost) throw ContractError("scenario has no effort cost function");
  return *scenario.effort_cost;
}

}  // namespace

EndogenousOptimum optimal_endogenous_strategy(const ScenarioConfig& scenario, std::size_t grid,
                                              const SimulationPlan& plan) {
  const QualityModel quality = scenario.quality;
  const QualityMap full_effort = [quality](double a) { return quality.quality(a, 1.0); };
  EndogenousOptimum out;
  out.search = optimal_threshold(scenario.n, scenario.dist, scenario.utility, grid, plan,
                                 scenario.pool, full_effort);
  out.a_hat = out.search.a_hat;
  out.effort = 1.0;
  return out;
}

double best_response_effort(double a, const StrategyProfile& profile,
                            const ScenarioConfig& scenario, std::span<const double> effort_grid,
                            const SimulationPlan& plan) {
  if (effort_grid.empty()) throw ContractError("effort grid must be nonempty");
  const FocalEvaluator evaluator(profile, scenario, 0, plan);
  double best_effort = effort_grid.front();
  double best_value = -std::numeric_limits<double>::infinity();
  for (double e : effort_grid) {
    const double value = evaluator.utility(a, Action::contribute(e)).mean;
    if (value > best_value) {
      best_value = value;
      best_effort = e;
    }
  }
  return best_effort;
}

EffortDeviationReport perfect_ranking_undermines_effort(const ScenarioConfig& scenario,
                                                        double a_hat,
                                                        const RewardScheme& rewards) {
  if (!std::holds_alternative<RankingModel::Perfect>(scenario.ranking.variant())) {
    throw ContractError("deviation analysis assumes a perfect ranking");
  }
  const auto& cost = require_effort_cost(scenario);
  rewards.validate();
  if (!(a_hat >= 0.0 && a_hat <= 1.0)) throw ContractError("threshold must lie in [0,1]");
  const QualityModel& quality = scenario.quality;
  const double others = static_cast<double>(scenario.n - 1);

  // Rivals contribute iff ability >= a_hat, at full effort; one beats the focal agent iff
  // its quality q(b, 1) exceeds hers.
  auto win = [&](double a, double e) {
    const double q = quality.quality(a, e);
    const double cut = std::max(a_hat, quality.ability_for_quality(q, 1.0));
    double w = std::pow(scenario.dist.cdf(std::min(cut, 1.0)), others);
    if (scenario.pool && scenario.pool->count > 0) {
      w *= std::pow(scenario.pool->quality_dist.cdf(std::clamp(q, 0.0, 1.0)),
                    static_cast<double>(scenario.pool->count));
    }
    return w;
  };
  auto payoff = [&](double a, double e) {
    const double w = win(a, e);
    return rewards.p_B * w + rewards.p_C * (1.0 - w) - cost.cost(e);
  };

  EffortDeviationReport out;
  out.a_hat = a_hat;
  out.win_full_effort = win(a_hat, 1.0);
  out.win_zero_effort = win(a_hat, 0.0);
  out.gain = payoff(a_hat, 0.0) - payoff(a_hat, 1.0);
  out.near_ability = std::min(1.0, a_hat + 0.01);
  out.near_gain = payoff(out.near_ability, 0.0) - payoff(out.near_ability, 1.0);
  out.optimum_is_equilibrium = !(out.gain > 0.0);
  if (cost.kappa == 0.0) {
    out.note = "flat effort cost: no deviation gain, impossibility not witnessed";
  } else if (out.gain > 0.0) {
    out.note = "threshold contributor gains by dropping to zero effort";
  }
  return out;
}

EffortConditionReport effort_condition_holds(const ScenarioConfig& scenario, double a_hat,
                                             double ratio, const ConditionGrids& grids) {
  const auto& cost = require_effort_cost(scenario);
  if (!(a_hat >= 0.0 && a_hat <= 1.0)) throw ContractError("threshold must lie in [0,1]");
  if (!(ratio > 1.0)) throw ContractError("ratio p_B/p_C must exceed 1");
  EffortConditionReport report;
  report.p_B = cost.cost(0.0);
  if (grids.weak_form) {
    report.p_B += std::max(scenario.rating_points() - scenario.costs.c_R, 0.0);
  }
  report.p_C = report.p_B / ratio;
  const auto* softmax = std::get_if<RankingModel::SoftmaxNoise>(&scenario.ranking.variant());
  if (!softmax) {
    report.holds = false;
    report.margin = -std::numeric_limits<double>::infinity();
    report.note = "win probability is a step function of quality: d pi / d q = 0 almost everywhere";
    return report;
  }
  const double eta = softmax->eta;
  const QualityModel& quality = scenario.quality;
  const double q_min = quality.quality(0.0, 0.0);
  const double q_max = quality.quality(1.0, 1.0);
  const double factor =
      1.0 - std::pow(scenario.dist.cdf(a_hat), static_cast<double>(scenario.n - 1));
  const double spread = report.p_B - report.p_C;

  const auto efforts = uniform_grid(std::max<std::size_t>(grids.effort_points, 2));
  const auto abilities_unit = uniform_grid(std::max<std::size_t>(grids.ability_points, 2));
  report.margin = std::numeric_limits<double>::infinity();
  report.min_sensitivity = std::numeric_limits<double>::infinity();
  for (double e : efforts) {
    for (double u : abilities_unit) {
      const double a = a_hat + (1.0 - a_hat) * u;
      const double q = quality.quality(a, e);
      const double dq = quality.d_quality_d_effort(a, e);
      for (std::size_t m = 2; m <= scenario.n; ++m) {
        const double rivals = static_cast<double>(m - 1);
        // pi(1-pi) is unimodal in pi, so its minimum sits at the extreme rival profiles.
        const double pi_low = 1.0 / (1.0 + rivals * std::exp((q_max - q) / eta));
        const double pi_high = 1.0 / (1.0 + rivals * std::exp((q_min - q) / eta));
        const double sensitivity =
            std::min(pi_low * (1.0 - pi_low), pi_high * (1.0 - pi_high)) / eta;
        report.min_sensitivity = std::min(report.min_sensitivity, sensitivity);
        const double margin = dq * sensitivity * spread * factor - cost.marginal(e);
        if (margin < report.margin) {
          report.margin = margin;
          report.witness_effort = e;
          report.witness_ability = a;
          report.witness_contributors = m;
        }
      }
    }
  }
  report.holds = report.margin >= 0.0;
  if (scenario.pool_count() > 0) report.note = "nonstrategic pool ignored in the bound";
  return report;
}

EndogenousCalibration calibrate_endogenous_rewards(double a_hat, double ratio,
                                                   const ScenarioConfig& scenario,
                                                   const SimulationPlan& verify_plan,
                                                   const SolverOptions& solver,
                                                   const ConditionGrids& grids) {
  const auto& cost = require_effort_cost(scenario);
  if (!scenario.ranking.is_softmax()) {
    throw PreconditionError("endogenous calibration needs a softmax (noisy) ranking");
  }
  EndogenousCalibration out;
  out.condition = effort_condition_holds(scenario, a_hat, ratio, grids);
  if (!out.condition.holds) {
    throw PreconditionError("effort condition fails: margin " +
                            std::to_string(out.condition.margin) + " at effort " +
                            std::to_string(out.condition.witness_effort));
  }
  const double p_R = scenario.reward_scheme().p_R;
  SolverOptions options = solver;
  const QualityModel quality = scenario.quality;
  options.quality = [quality](double a) { return quality.quality(a, 1.0); };
  const CostModel full_effort_costs{cost.cost(1.0), scenario.costs.c_R, std::nullopt};
  const SymmetricGame game(scenario.n, scenario.dist, RewardScheme{ratio, 1.0, p_R},
                           full_effort_costs, scenario.ranking, scenario.pool, options);
  out.calibration = calibrate_rewards(game, a_hat, ratio);
  if (!(out.calibration.p_B > cost.cost(0.0))) {
    throw InfeasibleError("calibrated p_B does not exceed c(0)");
  }

  ScenarioConfig calibrated = scenario;
  calibrated.rewards = out.calibration.rewards();
  const auto profile = StrategyProfile::symmetric(
      scenario.n, AgentStrategy{out.calibration.achieved_threshold, EffortPolicy::constant(1.0)});
  VerifyOptions verify;
  verify.ability_grid = verification_grid(out.calibration.achieved_threshold, 21, 5);
  verify.effort_grid = uniform_grid(std::max<std::size_t>(grids.effort_points, 2));
  out.verification = verify_equilibrium(profile, calibrated, verify, verify_plan);
  if (!out.verification.verified) {
    throw VerificationError("calibrated full-effort profile is not a best response",
                            out.verification.witness.ability, out.verification.witness.regret);
  }
  return out;
}

std::vector<std::pair<double, double>> effort_response_curve(
    const StrategyProfile& profile, const ScenarioConfig& scenario,
    std::span<const double> abilities, std::span<const double> effort_grid,
    const SimulationPlan& plan) {
  if (effort_grid.empty()) throw ContractError("effort grid must be nonempty");
  const FocalEvaluator evaluator(profile, scenario, 0, plan);
  std::vector<std::pair<double, double>> out;
  for (double a : abilities) {
    double best_effort = effort_grid.front();
    double best_value = -std::numeric_limits<double>::infinity();
    for (double e : effort_grid) {
      const double value = evaluator.utility(a, Action::contribute(e)).mean;
      if (value > best_value) {
        best_value = value;
        best_effort = e;
      }
    }
    out.emplace_back(a, best_effort);
  }
  return out;
}

}  // namespace contest
