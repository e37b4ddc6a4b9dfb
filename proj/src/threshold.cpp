#include "contest/threshold.hpp"

#include <algorithm>
#include <cmath>

#include "contest/errors.hpp"
#include "contest/random.hpp"

namespace contest {

OpponentSample::OpponentSample(const AbilityDistribution& dist, std::size_t opponents,
                               const std::optional<NonstrategicPool>& pool, std::size_t reps,
                               std::uint64_t seed)
    : reps_(reps),
      opponents_(opponents),
      pool_count_(pool ? pool->count : 0),
      abilities_(reps * opponents),
      pool_(reps * pool_count_) {
  if (reps == 0) throw ContractError("opponent sample needs at least one replication");
  parallel_for(reps, [&](std::size_t r) {
    Stream stream(seed, 0, r);
    for (std::size_t j = 0; j < opponents_; ++j) {
      abilities_[r * opponents_ + j] = dist.sample_one(stream);
    }
    for (std::size_t j = 0; j < pool_count_; ++j) {
      pool_[r * pool_count_ + j] = pool->quality_dist.sample_one(stream);
    }
  });
}

std::string to_string(Corner corner) {
  switch (corner) {
    case Corner::Interior:
      return "interior";
    case Corner::AllContribute:
      return "all-contribute";
    case Corner::AllRate:
      return "all-rate";
  }
  return "?";
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Intermediate:
      return "intermediate";
    case Regime::ContributeDominant:
      return "contribute-dominant";
    case Regime::ContributeUnprofitable:
      return "contribute-unprofitable";
    case Regime::Boundary:
      return "boundary";
  }
  return "?";
}

Regime classify_regime(const RewardScheme& rewards, const CostModel& costs) {
  const double lose = rewards.p_C - costs.c_C;
  const double rate = rewards.p_R - costs.c_R;
  const double win = rewards.p_B - costs.c_C;
  if (win < 0.0) return Regime::ContributeUnprofitable;
  if (lose > rate) return Regime::ContributeDominant;
  if (lose < rate && rate < win) return Regime::Intermediate;
  return Regime::Boundary;
}

// Shared draws for the softmax win probability. Each rival keeps a fixed uniform u, and a
// contributing rival at threshold a* has ability F^-1(F(a*) + (1 - F(a*)) u); averaging over the
// binomial number of contributors keeps the estimate continuous in a*.
struct SymmetricGame::SoftmaxCache {
  static constexpr std::size_t kTableCells = 4096;

  OpponentSample sample;
  std::vector<double> unit;          // F(b) for every sampled rival ability
  std::vector<double> pool_weight;   // sum of exp(g/eta) over the pool, per replication
  std::vector<double> inverse_table; // F^-1 on kTableCells + 1 equally spaced probabilities
  double eta;

  double conditional_ability(double f_star, double u) const {
    const double t = (f_star + (1.0 - f_star) * u) * static_cast<double>(kTableCells);
    const std::size_t i = std::min(static_cast<std::size_t>(t), kTableCells - 1);
    const double frac = t - static_cast<double>(i);
    return inverse_table[i] + frac * (inverse_table[i + 1] - inverse_table[i]);
  }
};

double expected_reciprocal_share(std::size_t trials, double p, std::size_t extra) {
  if (p <= 0.0) return 1.0 / static_cast<double>(extra + 1);
  if (p >= 1.0) return 1.0 / static_cast<double>(trials + extra + 1);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double t = static_cast<double>(trials);
  double total = 0.0;
  for (std::size_t k = 0; k <= trials; ++k) {
    const double kk = static_cast<double>(k);
    const double log_pmf = std::lgamma(t + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(t - kk + 1.0) +
                           kk * log_p + (t - kk) * log_q;
    total += std::exp(log_pmf) / static_cast<double>(k + extra + 1);
  }
  return total;
}

SymmetricGame::SymmetricGame(std::size_t n, AbilityDistribution dist, RewardScheme rewards,
                             CostModel costs, RankingModel ranking,
                             std::optional<NonstrategicPool> pool, SolverOptions options)
    : n_(n),
      dist_(std::move(dist)),
      rewards_(rewards),
      costs_(costs),
      ranking_(ranking),
      pool_(std::move(pool)),
      options_(std::move(options)) {
  if (n_ < 2) throw ContractError("a contest needs n >= 2 agents");
  rewards_.validate();
  costs_.validate();
  if (ranking_.is_softmax()) {
    const double eta = std::get<RankingModel::SoftmaxNoise>(ranking_.variant()).eta;
    auto cache = std::make_shared<SoftmaxCache>(SoftmaxCache{
        OpponentSample(dist_, n_ - 1, pool_, options_.mc_reps, options_.mc_seed), {}, {}, {}, eta});
    const auto& s = cache->sample;
    cache->unit.resize(s.reps() * s.opponents());
    cache->pool_weight.assign(s.reps(), 0.0);
    for (std::size_t r = 0; r < s.reps(); ++r) {
      const auto ab = s.abilities(r);
      for (std::size_t j = 0; j < ab.size(); ++j) {
        cache->unit[r * s.opponents() + j] = dist_.cdf(ab[j]);
      }
      for (double g : s.pool_qualities(r)) cache->pool_weight[r] += std::exp(g / eta);
    }
    const std::size_t cells = SoftmaxCache::kTableCells;
    cache->inverse_table.resize(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
      cache->inverse_table[i] =
          dist_.inverse_cdf(static_cast<double>(i) / static_cast<double>(cells));
    }
    softmax_ = std::move(cache);
  }
}

double SymmetricGame::prob_any_other_contribution(double a) const {
  if (pool_ && pool_->count >= 1) return 1.0;
  return 1.0 - std::pow(dist_.cdf(a), static_cast<double>(n_ - 1));
}

double SymmetricGame::win_probability(double a, double a_star) const {
  if (ranking_.is_softmax()) return softmax_win_probability(a, a_star);
  const double others = static_cast<double>(n_ - 1);
  double perfect = std::pow(dist_.cdf(std::max(a, a_star)), others);
  if (pool_ && pool_->count > 0) {
    const double own_q = std::clamp(quality(a), 0.0, 1.0);
    perfect *= std::pow(pool_->quality_dist.cdf(own_q), static_cast<double>(pool_->count));
  }
  const double beta = ranking_.accuracy().value_or(1.0);
  if (beta >= 1.0) return perfect;
  const double participation = 1.0 - dist_.cdf(a_star);
  return beta * perfect +
         (1.0 - beta) * expected_reciprocal_share(n_ - 1, participation, pool_count());
}

double SymmetricGame::softmax_win_probability(double a, double a_star) const {
  const auto& cache = *softmax_;
  const auto& s = cache.sample;
  const std::size_t k = s.opponents();
  const double f_star = dist_.cdf(a_star);
  const double p = 1.0 - f_star;
  // pmf[m] = Pr(m of the k rivals contribute).
  std::vector<double> pmf(k + 1);
  double choose = 1.0;
  for (std::size_t m = 0; m <= k; ++m) {
    const double mm = static_cast<double>(m);
    pmf[m] = choose * std::pow(p, mm) * std::pow(f_star, static_cast<double>(k) - mm);
    choose = choose * static_cast<double>(k - m) / static_cast<double>(m + 1);
  }
  const double inv_own = std::exp(-quality(a) / cache.eta);
  std::vector<double> per_rep(s.reps());
  for (std::size_t r = 0; r < s.reps(); ++r) {
    double rivals = cache.pool_weight[r];
    double w = pmf[0] / (1.0 + inv_own * rivals);
    for (std::size_t j = 0; j < k; ++j) {
      const double b = cache.conditional_ability(f_star, cache.unit[r * k + j]);
      rivals += std::exp(quality(b) / cache.eta);
      w += pmf[j + 1] / (1.0 + inv_own * rivals);
    }
    per_rep[r] = w;
  }
  return pairwise_sum(per_rep) / static_cast<double>(s.reps());
}

double SymmetricGame::rating_utility(double a_star) const {
  return (rewards_.p_R - costs_.c_R) * prob_any_other_contribution(a_star);
}

double SymmetricGame::contribution_utility(double a_star) const {
  const double w = win_probability(a_star, a_star);
  return (rewards_.p_B - costs_.c_C) * w + (rewards_.p_C - costs_.c_C) * (1.0 - w);
}

double SymmetricGame::utility_gap(double a) const {
  return rating_utility(a) - contribution_utility(a);
}

EquilibriumReport SymmetricGame::solve() const {
  EquilibriumReport report;
  report.regime = classify_regime(rewards_, costs_);
  const double at_zero = utility_gap(0.0);
  if (at_zero <= 0.0) {
    report.threshold = 0.0;
    report.corner = Corner::AllContribute;
    report.residual = std::abs(at_zero);
    report.knife_edge = at_zero == 0.0;
    return report;
  }
  const double at_one = utility_gap(1.0);
  if (at_one >= 0.0) {
    report.threshold = 1.0;
    report.corner = Corner::AllRate;
    report.residual = std::abs(at_one);
    report.knife_edge = at_one == 0.0;
    return report;
  }
  const auto root = bisect_decreasing([this](double a) { return utility_gap(a); }, 0.0, 1.0);
  report.threshold = root.x;
  report.residual = root.residual;
  report.iterations = root.iterations;
  report.corner = Corner::Interior;
  return report;
}

SymmetricGame SymmetricGame::with_rewards(const RewardScheme& rewards) const {
  rewards.validate();
  SymmetricGame copy = *this;
  copy.rewards_ = rewards;
  return copy;
}

SymmetricGame SymmetricGame::with_costs(const CostModel& costs) const {
  costs.validate();
  SymmetricGame copy = *this;
  copy.costs_ = costs;
  return copy;
}

RootResult bisect_decreasing(const std::function<double(double)>& f, double lo, double hi,
                             double width_tol, int max_iter) {
  RootResult out;
  double f_lo = f(lo);
  double f_hi = f(hi);
  while (out.iterations < max_iter && hi - lo > width_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double value = f(mid);
    ++out.iterations;
    if (value == 0.0) {
      out.x = mid;
      out.residual = 0.0;
      return out;
    }
    if (value > 0.0) {
      lo = mid;
      f_lo = value;
    } else {
      hi = mid;
      f_hi = value;
    }
  }
  if (std::abs(f_lo) <= std::abs(f_hi)) {
    out.x = lo;
    out.residual = std::abs(f_lo);
  } else {
    out.x = hi;
    out.residual = std::abs(f_hi);
  }
  return out;
}

double prob_any_other_contribution(double a, std::size_t n, const AbilityDistribution& dist,
                                   const std::optional<NonstrategicPool>& pool) {
  if (n < 2) throw ContractError("a contest needs n >= 2 agents");
  if (pool && pool->count >= 1) {
    (void)dist.cdf(a);  // domain check
    return 1.0;
  }
  return 1.0 - std::pow(dist.cdf(a), static_cast<double>(n - 1));
}

namespace {

SymmetricGame probe_game(std::size_t n, const AbilityDistribution& dist, const RankingModel& ranking,
                         const std::optional<NonstrategicPool>& pool, const SolverOptions& options) {
  return SymmetricGame(n, dist, RewardScheme{1.0, 0.0, 0.0}, CostModel{}, ranking, pool, options);
}

}  // namespace

double win_probability(double a, double a_star, std::size_t n, const AbilityDistribution& dist,
                       const RankingModel& ranking, const std::optional<NonstrategicPool>& pool,
                       const SolverOptions& options) {
  return probe_game(n, dist, ranking, pool, options).win_probability(a, a_star);
}

double utility_gap(double a, const RewardScheme& rewards, const CostModel& costs, std::size_t n,
                   const AbilityDistribution& dist, const RankingModel& ranking,
                   const std::optional<NonstrategicPool>& pool, const SolverOptions& options) {
  return SymmetricGame(n, dist, rewards, costs, ranking, pool, options).utility_gap(a);
}

EquilibriumReport solve_symmetric_threshold(const RewardScheme& rewards, const CostModel& costs,
                                            std::size_t n, const AbilityDistribution& dist,
                                            const RankingModel& ranking,
                                            const std::optional<NonstrategicPool>& pool,
                                            const SolverOptions& options) {
  return SymmetricGame(n, dist, rewards, costs, ranking, pool, options).solve();
}

}  // namespace contest
