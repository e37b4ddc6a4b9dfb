#include "contest/designer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "contest/errors.hpp"

namespace contest {

namespace {

// Per-replication draws: n abilities, then n participation coins, then the pool, in that order,
// so the threshold and mixed-strategy estimators share draws.
class DesignerDraws {
 public:
  DesignerDraws(std::size_t n, const AbilityDistribution& dist, const SimulationPlan& plan,
                const std::optional<NonstrategicPool>& pool)
      : n_(n), pool_count_(pool ? pool->count : 0), reps_(plan.reps) {
    if (n < 1) throw ContractError("designer utility needs at least one agent");
    if (plan.reps < 1) throw ContractError("reps must be at least 1");
    abilities_.resize(reps_ * n_);
    coins_.resize(reps_ * n_);
    pool_.resize(reps_ * pool_count_);
    parallel_for(reps_, [&](std::size_t r) {
      Stream stream = plan.stream_for(r);
      for (std::size_t i = 0; i < n_; ++i) abilities_[r * n_ + i] = dist.sample_one(stream);
      for (std::size_t i = 0; i < n_; ++i) coins_[r * n_ + i] = stream.uniform();
      for (std::size_t j = 0; j < pool_count_; ++j) {
        pool_[r * pool_count_ + j] = pool->quality_dist.sample_one(stream);
      }
    });
  }

  template <class Participates>
  Estimate evaluate(const DesignerUtility& utility, const QualityMap& quality,
                    Participates&& participates) const {
    std::vector<double> values(reps_);
    std::vector<double> qualities;
    qualities.reserve(n_ + pool_count_);
    for (std::size_t r = 0; r < reps_; ++r) {
      qualities.clear();
      for (std::size_t i = 0; i < n_; ++i) {
        const double a = abilities_[r * n_ + i];
        if (participates(a, coins_[r * n_ + i])) qualities.push_back(quality ? quality(a) : a);
      }
      for (std::size_t j = 0; j < pool_count_; ++j) qualities.push_back(pool_[r * pool_count_ + j]);
      std::sort(qualities.begin(), qualities.end(), std::greater<>());
      values[r] = utility(qualities);
    }
    return summarize(values);
  }

  Estimate at_threshold(double a_hat, const DesignerUtility& utility,
                        const QualityMap& quality) const {
    return evaluate(utility, quality,
                    [a_hat](double a, double) { return a_hat < 1.0 && a >= a_hat; });
  }

 private:
  std::size_t n_;
  std::size_t pool_count_;
  std::size_t reps_;
  std::vector<double> abilities_;
  std::vector<double> coins_;
  std::vector<double> pool_;
};

}  // namespace

Estimate expected_designer_utility(double a_hat, std::size_t n, const AbilityDistribution& dist,
                                   const DesignerUtility& utility, const SimulationPlan& plan,
                                   const std::optional<NonstrategicPool>& pool,
                                   const QualityMap& quality) {
  if (!(a_hat >= 0.0 && a_hat <= 1.0)) throw ContractError("threshold must lie in [0,1]");
  return DesignerDraws(n, dist, plan, pool).at_threshold(a_hat, utility, quality);
}

Estimate expected_designer_utility(const MixedParticipationStrategy& sigma, std::size_t n,
                                   const AbilityDistribution& dist, const DesignerUtility& utility,
                                   const SimulationPlan& plan,
                                   const std::optional<NonstrategicPool>& pool) {
  return DesignerDraws(n, dist, plan, pool)
      .evaluate(utility, {}, [&sigma](double a, double coin) { return coin < sigma(a); });
}

ThresholdSearchResult optimal_threshold(std::size_t n, const AbilityDistribution& dist,
                                        const DesignerUtility& utility, std::size_t grid,
                                        const SimulationPlan& plan,
                                        const std::optional<NonstrategicPool>& pool,
                                        const QualityMap& quality) {
  if (grid < 11) throw ContractError("threshold grid needs at least 11 points");
  const DesignerDraws draws(n, dist, plan, pool);
  ThresholdSearchResult result;
  const double step = 1.0 / static_cast<double>(grid - 1);
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double a = i == grid - 1 ? 1.0 : static_cast<double>(i) * step;
    const Estimate e = draws.at_threshold(a, utility, quality);
    result.sweep.push_back({a, e.mean, e.std_error});
    if (e.mean > result.sweep[best].mean) best = i;
  }
  const double top = result.sweep[best].mean;
  result.flat_tie = std::count_if(result.sweep.begin(), result.sweep.end(),
                                  [top](const SweepRow& row) { return row.mean == top; }) > 1;
  result.a_hat = result.sweep[best].a_hat;
  result.value = top;
  result.std_error = result.sweep[best].std_error;

  // Golden-section refinement inside the neighbouring grid cells.
  double lo = result.sweep[best == 0 ? 0 : best - 1].a_hat;
  double hi = result.sweep[std::min(best + 1, grid - 1)].a_hat;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto value_at = [&](double a) { return draws.at_threshold(a, utility, quality); };
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  Estimate f1 = value_at(x1);
  Estimate f2 = value_at(x2);
  while (hi - lo > 1e-4) {
    if (f1.mean >= f2.mean) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = value_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = value_at(x2);
    }
  }
  const double candidate = f1.mean >= f2.mean ? x1 : x2;
  const Estimate refined = f1.mean >= f2.mean ? f1 : f2;
  if (refined.mean > result.value) {
    result.a_hat = candidate;
    result.value = refined.mean;
    result.std_error = refined.std_error;
  }
  return result;
}

CalibrationResult calibrate_rewards(const SymmetricGame& game, double a_hat, double ratio) {
  if (!(a_hat >= 0.0 && a_hat <= 1.0)) throw ContractError("target threshold must lie in [0,1]");
  if (!(ratio > 1.0) || !std::isfinite(ratio)) throw ContractError("ratio p_B/p_C must exceed 1");
  const double p_R = game.rewards().p_R;
  int iterations = 0;
  auto threshold_at = [&](double s) {
    ++iterations;
    return game.with_rewards({ratio * s, s, p_R}).solve().threshold;
  };

  // a*(s) is nonincreasing in s: find lo with a*(lo) >= a_hat and hi with a*(hi) <= a_hat.
  double lo = 1e-12;
  double a_lo = threshold_at(lo);
  if (a_lo < a_hat) {
    throw InfeasibleError(
        "target threshold unreachable: even vanishing rewards make contributing beat rating "
        "(p_R - c_R <= -c_C), so a* < a_hat for every scale");
  }
  double hi = 1.0;
  double a_hi = threshold_at(hi);
  while (a_hi > a_hat) {
    hi *= 2.0;
    if (hi > 1e18) {
      throw InfeasibleError(
          "target threshold unreachable: rating beats contributing for every reward scale "
          "(p_R - c_R stays above the contribution payoff)");
    }
    a_hi = threshold_at(hi);
  }
  if (a_lo == a_hat) {
    hi = lo;
    a_hi = a_lo;
  }
  for (int i = 0; i < 200 && a_hi != a_hat && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double a_mid = threshold_at(mid);
    if (a_mid > a_hat) {
      lo = mid;
      a_lo = a_mid;
    } else {
      hi = mid;
      a_hi = a_mid;
    }
  }
  // hi is the smallest scale found reaching the target from above.
  const double s = std::abs(a_hi - a_hat) <= std::abs(a_lo - a_hat) ? hi : lo;
  CalibrationResult out;
  out.p_C = s;
  out.p_B = ratio * s;
  out.p_R = p_R;
  out.achieved_threshold = game.with_rewards(out.rewards()).solve().threshold;
  out.residual = std::abs(out.achieved_threshold - a_hat);
  out.iterations = iterations;
  if (out.residual > 1e-6) {
    throw InfeasibleError("calibration stalled at |a* - a_hat| = " + std::to_string(out.residual));
  }
  return out;
}

CalibrationResult calibrate_rewards(double a_hat, double ratio, double p_R, const CostModel& costs,
                                    std::size_t n, const AbilityDistribution& dist,
                                    const RankingModel& ranking,
                                    const std::optional<NonstrategicPool>& pool,
                                    const SolverOptions& options) {
  if (!(ratio > 1.0) || !std::isfinite(ratio)) throw ContractError("ratio p_B/p_C must exceed 1");
  const SymmetricGame game(n, dist, RewardScheme{ratio, 1.0, p_R}, costs, ranking, pool, options);
  return calibrate_rewards(game, a_hat, ratio);
}

std::vector<ScheduleRow> reward_schedule_vs_n(double a_hat, double ratio, double p_R,
                                              const CostModel& costs,
                                              const AbilityDistribution& dist,
                                              const RankingModel& ranking,
                                              std::span<const std::size_t> n_range) {
  if (!(a_hat > 0.0 && a_hat < 1.0)) {
    throw PreconditionError("reward schedule needs an interior target threshold in (0,1)");
  }
  std::vector<ScheduleRow> rows;
  for (std::size_t n : n_range) {
    const auto cal = calibrate_rewards(a_hat, ratio, p_R, costs, n, dist, ranking);
    rows.push_back({n, cal.p_B, cal.p_C, cal.residual});
  }
  return rows;
}

GeneralMechanismGame::GeneralMechanismGame(GeneralMechanism base, double p_R, CostModel costs,
                                           std::size_t n, AbilityDistribution dist,
                                           std::size_t reps, std::uint64_t seed)
    : base_(std::move(base)),
      p_R_(p_R),
      costs_(costs),
      n_(n),
      dist_(std::move(dist)),
      sample_(dist_, n >= 2 ? n - 1 : 1, std::nullopt, reps, seed) {
  if (n_ < 2) throw ContractError("a contest needs n >= 2 agents");
  if (p_R_ < 0.0) throw ContractError("p_R must be nonnegative");
  costs_.validate();
}

double GeneralMechanismGame::expected_base_points(double a, double a_star) const {
  std::vector<double> per_rep(sample_.reps());
  std::vector<double> others;
  others.reserve(n_ - 1);
  for (std::size_t r = 0; r < sample_.reps(); ++r) {
    others.clear();
    for (double b : sample_.abilities(r)) {
      if (b >= a_star) others.push_back(b);
    }
    per_rep[r] = expected_points(base_, a, others);
  }
  return pairwise_sum(per_rep) / static_cast<double>(sample_.reps());
}

double GeneralMechanismGame::utility_gap(double a, double k) const {
  const double rate = (p_R_ - costs_.c_R) * prob_any_other_contribution(a, n_, dist_);
  return rate - (k * expected_base_points(a, a) - costs_.c_C);
}

EquilibriumReport GeneralMechanismGame::solve(double k) const {
  if (!(k > 0.0)) throw ContractError("mechanism scale k must be positive");
  EquilibriumReport report;
  report.regime = Regime::Boundary;
  const double at_zero = utility_gap(0.0, k);
  if (at_zero <= 0.0) {
    report.threshold = 0.0;
    report.corner = Corner::AllContribute;
    report.residual = std::abs(at_zero);
    report.knife_edge = at_zero == 0.0;
    return report;
  }
  const double at_one = utility_gap(1.0, k);
  if (at_one >= 0.0) {
    report.threshold = 1.0;
    report.corner = Corner::AllRate;
    report.residual = std::abs(at_one);
    report.knife_edge = at_one == 0.0;
    return report;
  }
  const auto root = bisect_decreasing([&](double a) { return utility_gap(a, k); }, 0.0, 1.0);
  report.threshold = root.x;
  report.residual = root.residual;
  report.iterations = root.iterations;
  report.corner = Corner::Interior;
  report.regime = Regime::Intermediate;
  return report;
}

ScaleCalibration calibrate_general_scale(const GeneralMechanism& base, double a_hat, double p_R,
                                         const CostModel& costs, std::size_t n,
                                         const AbilityDistribution& dist, std::size_t reps,
                                         std::uint64_t seed) {
  if (!(a_hat > 0.0 && a_hat < 1.0)) {
    throw PreconditionError("scale calibration needs an interior target threshold in (0,1)");
  }
  const GeneralMechanismGame game(base, p_R, costs, n, dist, reps, seed);
  // The gap is affine in k at fixed a, so the indifference condition at a_hat is solved directly.
  const double rate = (p_R - costs.c_R) * prob_any_other_contribution(a_hat, n, dist);
  const double points = game.expected_base_points(a_hat, a_hat);
  if (!(points > 0.0)) {
    throw InfeasibleError("mechanism pays nothing at the target threshold; no scale reaches it");
  }
  const double k = (rate + costs.c_C) / points;
  if (!(k > 0.0)) {
    throw InfeasibleError(
        "target threshold unreachable: contributing beats rating at every positive scale");
  }
  ScaleCalibration out;
  out.k = k;
  const auto report = game.solve(k);
  out.achieved_threshold = report.threshold;
  out.residual = std::abs(report.threshold - a_hat);
  out.iterations = report.iterations;
  if (out.residual > 1e-6) {
    throw InfeasibleError("scale calibration stalled at |a* - a_hat| = " +
                          std::to_string(out.residual));
  }
  return out;
}

}  // namespace contest
