#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contest/ability_distribution.hpp"
#include "contest/model.hpp"
#include "contest/ranking.hpp"

namespace contest {

// Maps ability to contribution quality (identity when empty).
using QualityMap = std::function<double(double)>;

/// Options for Monte Carlo-backed gap evaluation (softmax rankings and general mechanisms).
struct SolverOptions {
  std::size_t mc_reps = 20000;
  std::uint64_t mc_seed = 0x51ed5eedULL;
  QualityMap quality;
};

/// Opponent ability draws shared across every candidate threshold (common random numbers).
class OpponentSample {
 public:
  OpponentSample(const AbilityDistribution& dist, std::size_t opponents,
                 const std::optional<NonstrategicPool>& pool, std::size_t reps,
                 std::uint64_t seed);

  std::size_t reps() const noexcept { return reps_; }
  std::size_t opponents() const noexcept { return opponents_; }
  std::span<const double> abilities(std::size_t rep) const {
    return {abilities_.data() + rep * opponents_, opponents_};
  }
  std::span<const double> pool_qualities(std::size_t rep) const {
    return {pool_.data() + rep * pool_count_, pool_count_};
  }

 private:
  std::size_t reps_;
  std::size_t opponents_;
  std::size_t pool_count_;
  std::vector<double> abilities_;
  std::vector<double> pool_;
};

enum class Corner { Interior, AllContribute, AllRate };

// Position of the rewards in the chain p_C - c_C < p_R - c_R < p_B - c_C.
enum class Regime { Intermediate, ContributeDominant, ContributeUnprofitable, Boundary };

std::string to_string(Corner corner);
std::string to_string(Regime regime);
Regime classify_regime(const RewardScheme& rewards, const CostModel& costs);

struct EquilibriumReport {
  double threshold = 1.0;
  double residual = 0.0;
  Corner corner = Corner::Interior;
  Regime regime = Regime::Intermediate;
  bool knife_edge = false;  // gap exactly zero at the reported corner
  int iterations = 0;
};

/// Symmetric threshold game of the best-contribution mechanism in the homogeneous model.
/// Closed forms for Perfect and BetaMixture rankings; SoftmaxNoise uses a fixed opponent sample.
class SymmetricGame {
 public:
  SymmetricGame(std::size_t n, AbilityDistribution dist, RewardScheme rewards, CostModel costs,
                RankingModel ranking, std::optional<NonstrategicPool> pool = std::nullopt,
                SolverOptions options = {});

  double prob_any_other_contribution(double a) const;
  // Win probability of a contributor of ability a when the other n-1 agents use threshold a_star.
  double win_probability(double a, double a_star) const;
  double rating_utility(double a_star) const;
  double contribution_utility(double a_star) const;
  // u_R(a) - u_C(a): strictly decreasing in a; its root is the equilibrium threshold.
  double utility_gap(double a) const;
  EquilibriumReport solve() const;

  // Copies share the opponent sample, so re-solves under new rewards or costs stay paired.
  SymmetricGame with_rewards(const RewardScheme& rewards) const;
  SymmetricGame with_costs(const CostModel& costs) const;

  std::size_t n() const noexcept { return n_; }
  const AbilityDistribution& dist() const noexcept { return dist_; }
  const RewardScheme& rewards() const noexcept { return rewards_; }
  const CostModel& costs() const noexcept { return costs_; }
  const RankingModel& ranking() const noexcept { return ranking_; }
  const std::optional<NonstrategicPool>& pool() const noexcept { return pool_; }
  const SolverOptions& options() const noexcept { return options_; }

 private:
  double quality(double a) const { return options_.quality ? options_.quality(a) : a; }
  double softmax_win_probability(double a, double a_star) const;
  std::size_t pool_count() const noexcept { return pool_ ? pool_->count : 0; }

  std::size_t n_;
  AbilityDistribution dist_;
  RewardScheme rewards_;
  CostModel costs_;
  RankingModel ranking_;
  std::optional<NonstrategicPool> pool_;
  SolverOptions options_;
  struct SoftmaxCache;
  std::shared_ptr<const SoftmaxCache> softmax_;
};

// E[1 / (M + extra + 1)] for M ~ Binomial(trials, p), by exact summation.
double expected_reciprocal_share(std::size_t trials, double p, std::size_t extra = 0);

double prob_any_other_contribution(double a, std::size_t n, const AbilityDistribution& dist,
                                   const std::optional<NonstrategicPool>& pool = std::nullopt);

double win_probability(double a, double a_star, std::size_t n, const AbilityDistribution& dist,
                       const RankingModel& ranking,
                       const std::optional<NonstrategicPool>& pool = std::nullopt,
                       const SolverOptions& options = {});

double utility_gap(double a, const RewardScheme& rewards, const CostModel& costs, std::size_t n,
                   const AbilityDistribution& dist, const RankingModel& ranking,
                   const std::optional<NonstrategicPool>& pool = std::nullopt,
                   const SolverOptions& options = {});

EquilibriumReport solve_symmetric_threshold(const RewardScheme& rewards, const CostModel& costs,
                                            std::size_t n, const AbilityDistribution& dist,
                                            const RankingModel& ranking,
                                            const std::optional<NonstrategicPool>& pool = std::nullopt,
                                            const SolverOptions& options = {});

// Bisection for the root of a strictly decreasing function on [lo, hi] with f(lo) > 0 > f(hi).
struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};
RootResult bisect_decreasing(const std::function<double(double)>& f, double lo, double hi,
                             double width_tol = 1e-14, int max_iter = 200);

}  // namespace contest
