#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "contest/ability_distribution.hpp"
#include "contest/model.hpp"
#include "contest/random.hpp"
#include "contest/ranking.hpp"
#include "contest/threshold.hpp"

namespace contest {

// E[V] when every agent contributes iff ability >= a_hat and contributes quality quality(a).
// Replication r draws abilities from plan.stream_for(r); thresholds sharing a plan are paired.
Estimate expected_designer_utility(double a_hat, std::size_t n, const AbilityDistribution& dist,
                                   const DesignerUtility& utility, const SimulationPlan& plan,
                                   const std::optional<NonstrategicPool>& pool = std::nullopt,
                                   const QualityMap& quality = {});

// E[V] under a mixed participation strategy, on the same draws as the threshold version.
Estimate expected_designer_utility(const MixedParticipationStrategy& sigma, std::size_t n,
                                   const AbilityDistribution& dist, const DesignerUtility& utility,
                                   const SimulationPlan& plan,
                                   const std::optional<NonstrategicPool>& pool = std::nullopt);

struct SweepRow {
  double a_hat = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
};

struct ThresholdSearchResult {
  double a_hat = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  bool flat_tie = false;  // several grid thresholds share the maximum; the smallest is returned
  std::vector<SweepRow> sweep;
};

/// Grid pass over [0,1] followed by golden-section refinement (width 1e-4) inside the best
/// bracket. E[V] is evaluated with the same ability draws at every threshold.
ThresholdSearchResult optimal_threshold(std::size_t n, const AbilityDistribution& dist,
                                        const DesignerUtility& utility, std::size_t grid,
                                        const SimulationPlan& plan,
                                        const std::optional<NonstrategicPool>& pool = std::nullopt,
                                        const QualityMap& quality = {});

struct CalibrationResult {
  double p_B = 0.0;
  double p_C = 0.0;
  double p_R = 0.0;
  double achieved_threshold = 0.0;
  double residual = 0.0;  // |a*(p_B, p_C) - a_hat|
  int iterations = 0;

  RewardScheme rewards() const { return {p_B, p_C, p_R}; }
};

/// Finds scale s with p_C = s, p_B = ratio*s whose equilibrium threshold equals a_hat.
CalibrationResult calibrate_rewards(double a_hat, double ratio, double p_R, const CostModel& costs,
                                    std::size_t n, const AbilityDistribution& dist,
                                    const RankingModel& ranking,
                                    const std::optional<NonstrategicPool>& pool = std::nullopt,
                                    const SolverOptions& options = {});

// Same search on an existing game (rewards replaced along the scale path).
CalibrationResult calibrate_rewards(const SymmetricGame& game, double a_hat, double ratio);

struct ScheduleRow {
  std::size_t n = 0;
  double p_B = 0.0;
  double p_C = 0.0;
  double residual = 0.0;
};

// Calibrated rewards per agent count for a fixed interior target; requires a_hat in (0,1).
std::vector<ScheduleRow> reward_schedule_vs_n(double a_hat, double ratio, double p_R,
                                              const CostModel& costs,
                                              const AbilityDistribution& dist,
                                              const RankingModel& ranking,
                                              std::span<const std::size_t> n_range);

/// Threshold game for a general mechanism paying k * p(q_i, q_-i, m) in expectation.
class GeneralMechanismGame {
 public:
  GeneralMechanismGame(GeneralMechanism base, double p_R, CostModel costs, std::size_t n,
                       AbilityDistribution dist, std::size_t reps = 20000,
                       std::uint64_t seed = 0x6e6eULL);

  // E[p(q_i, q_-i, m)] at ability a against opponents using threshold a_star (unscaled).
  double expected_base_points(double a, double a_star) const;
  double utility_gap(double a, double k) const;
  EquilibriumReport solve(double k) const;

 private:
  GeneralMechanism base_;
  double p_R_;
  CostModel costs_;
  std::size_t n_;
  AbilityDistribution dist_;
  OpponentSample sample_;
};

struct ScaleCalibration {
  double k = 0.0;
  double achieved_threshold = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

ScaleCalibration calibrate_general_scale(const GeneralMechanism& base, double a_hat, double p_R,
                                         const CostModel& costs, std::size_t n,
                                         const AbilityDistribution& dist, std::size_t reps = 20000,
                                         std::uint64_t seed = 0x6e6eULL);

}  // namespace contest
