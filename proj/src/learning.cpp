#include "contest/learning.hpp"

#include <cmath>
#include <numeric>

#include "contest/errors.hpp"
#include "contest/threshold.hpp"

namespace contest {

double ContestSeriesResult::stderr_proxy() const {
  const double trials = static_cast<double>(T * n);
  if (trials <= 0.0) return 0.0;
  return std::sqrt(f_hat * (1.0 - f_hat) / trials);
}

ContestSeriesResult run_contest_series(const RewardScheme& rewards, const CostModel& true_costs,
                                       std::size_t n, const AbilityDistribution& dist,
                                       const RankingModel& ranking, std::size_t T,
                                       const SimulationPlan& plan) {
  if (T < 1) throw ContractError("a contest series needs T >= 1");
  ContestSeriesResult out;
  out.T = T;
  out.n = n;
  out.threshold = solve_symmetric_threshold(rewards, true_costs, n, dist, ranking).threshold;
  out.counts.assign(T, 0);
  const double threshold = out.threshold;
  parallel_for(T, [&](std::size_t t) {
    Stream stream = plan.stream_for(t);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = dist.sample_one(stream);
      if (threshold < 1.0 && a >= threshold) ++count;
    }
    out.counts[t] = count;
  });
  const std::size_t total = std::accumulate(out.counts.begin(), out.counts.end(), std::size_t{0});
  out.f_hat = static_cast<double>(total) / static_cast<double>(T * n);
  return out;
}

CostEstimate estimate_contribution_cost(double f_hat, const RewardScheme& rewards, double c_R,
                                        std::size_t n, const AbilityDistribution& dist,
                                        const RankingModel& ranking, double c_bar) {
  rewards.validate();
  if (rewards.p_C != 0.0) throw ContractError("cost inversion requires p_C = 0");
  if (!(c_bar > 0.0)) throw ContractError("cost bound c_bar must be positive");
  if (!(rewards.p_B > rewards.p_R + c_bar)) {
    throw ContractError("cost inversion requires p_B > p_R + c_bar");
  }
  if (!(f_hat >= 0.0 && f_hat <= 1.0)) throw ContractError("frequency must lie in [0,1]");
  if (f_hat == 0.0 || f_hat == 1.0) {
    throw UnidentifiableError(
        "observed frequency sits at a corner (threshold 0 or 1); the contribution cost is not "
        "identified");
  }
  CostEstimate out;
  out.observed_threshold = dist.inverse_cdf(1.0 - f_hat);
  const SymmetricGame game(n, dist, rewards, CostModel{0.0, c_R, c_bar}, ranking);
  auto threshold_at = [&](double c) {
    return game.with_costs(CostModel{c, c_R, c_bar}).solve().threshold;
  };
  const double target = out.observed_threshold;
  double lo = 0.0;
  double hi = c_bar;
  const double a_lo = threshold_at(lo);
  const double a_hi = threshold_at(hi);
  if (target < a_lo || target > a_hi) {
    throw InfeasibleError("observed threshold is outside the range reachable with c_C in (0, c_bar)");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (threshold_at(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double r_lo = std::abs(threshold_at(lo) - target);
  const double r_hi = std::abs(threshold_at(hi) - target);
  out.c_C = r_lo <= r_hi ? lo : hi;
  out.residual = std::min(r_lo, r_hi);
  return out;
}

CostPair estimate_both_costs(const ThresholdExperiment& first, const ThresholdExperiment& second,
                             double p_R, std::size_t n, const AbilityDistribution& dist,
                             const RankingModel& ranking) {
  if (first.p_B == second.p_B) {
    throw DegenerateError("both experiments use the same p_B; the linear system is singular");
  }
  for (const auto* e : {&first, &second}) {
    if (!(e->observed_threshold > 0.0 && e->observed_threshold < 1.0)) {
      throw ContractError("observed thresholds must be interior");
    }
  }
  struct Row {
    double contribution_prob;
    double rhs;
  };
  auto row = [&](const ThresholdExperiment& e) {
    const double a = e.observed_threshold;
    const double pc = prob_any_other_contribution(a, n, dist);
    const double w = win_probability(a, a, n, dist, ranking);
    return Row{pc, e.p_B * w - p_R * pc};
  };
  const Row r1 = row(first);
  const Row r2 = row(second);
  const double det = r1.contribution_prob - r2.contribution_prob;
  if (std::abs(det) < 1e-12) {
    throw DegenerateError("Pr(C>0) is equal at both thresholds; the linear system is singular");
  }
  CostPair out;
  out.c_R = (r2.rhs - r1.rhs) / det;
  out.c_C = r1.rhs + out.c_R * r1.contribution_prob;
  return out;
}

}  // namespace contest
