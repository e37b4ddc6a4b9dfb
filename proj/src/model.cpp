#include "contest/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "contest/errors.hpp"

namespace contest {

void RewardScheme::validate() const {
  if (!std::isfinite(p_B) || !std::isfinite(p_C) || !std::isfinite(p_R)) {
    throw ContractError("rewards must be finite");
  }
  if (!(p_C >= 0.0)) throw ContractError("p_C must be >= 0");
  if (!(p_B > p_C)) throw ContractError("best-contribution mechanism requires p_B > p_C");
  if (!(p_R >= 0.0)) throw ContractError("p_R must be >= 0");
}

void RankPrizes::validate() const {
  if (prizes.empty()) throw ContractError("rank prizes must not be empty");
  bool strict = false;
  for (std::size_t k = 0; k < prizes.size(); ++k) {
    if (!std::isfinite(prizes[k]) || prizes[k] < 0.0) {
      throw ContractError("rank prizes must be finite and nonnegative");
    }
    if (k > 0) {
      if (prizes[k] > prizes[k - 1]) throw ContractError("rank prizes must be nonincreasing");
      if (prizes[k] < prizes[k - 1]) strict = true;
    }
  }
  if (!strict) throw ContractError("rank prizes need at least one strict inequality");
  if (!(p_R >= 0.0)) throw ContractError("p_R must be >= 0");
}

double RankPrizes::prize(std::size_t rank) const {
  if (rank == 0 || rank > prizes.size()) return 0.0;
  return prizes[rank - 1];
}

void CostModel::validate() const {
  if (!(c_C >= 0.0) || !(c_R >= 0.0)) throw ContractError("costs must be >= 0");
  if (c_bar && !(*c_bar > 0.0)) throw ContractError("c_bar must be > 0");
}

void EffortCostFunction::validate() const {
  if (!(c0 >= 0.0) || !(kappa >= 0.0)) throw ContractError("effort cost requires c0, kappa >= 0");
  if (!(p_exp >= 1.0)) throw ContractError("effort cost exponent must be >= 1");
}

double EffortCostFunction::cost(double e) const { return c0 + kappa * std::pow(e, p_exp); }

double EffortCostFunction::marginal(double e) const {
  if (p_exp == 1.0) return kappa;
  return kappa * p_exp * std::pow(e, p_exp - 1.0);
}

QualityModel QualityModel::linear_mix(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ContractError("linear quality mix needs gamma in (0,1]");
  return QualityModel(LinearMix{gamma});
}

QualityModel QualityModel::cobb_douglas(double theta, double e_min) {
  if (!(theta > 0.0 && theta < 1.0)) throw ContractError("Cobb-Douglas quality needs theta in (0,1)");
  if (!(e_min > 0.0 && e_min <= 1.0)) throw ContractError("Cobb-Douglas effort floor must be in (0,1]");
  return QualityModel(CobbDouglas{theta, e_min});
}

double QualityModel::quality(double a, double e) const {
  return std::visit(
      [a, e](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Homogeneous>) {
          return a;
        } else if constexpr (std::is_same_v<T, LinearMix>) {
          return m.gamma * a + (1.0 - m.gamma) * e;
        } else {
          const double eff = std::clamp(e, m.e_min, 1.0);
          return std::pow(a, m.theta) * std::pow(eff, 1.0 - m.theta);
        }
      },
      variant_);
}

double QualityModel::d_quality_d_effort(double a, double e) const {
  return std::visit(
      [a, e](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Homogeneous>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, LinearMix>) {
          return 1.0 - m.gamma;
        } else {
          const double eff = std::clamp(e, m.e_min, 1.0);
          return (1.0 - m.theta) * std::pow(a, m.theta) * std::pow(eff, -m.theta);
        }
      },
      variant_);
}

double QualityModel::ability_for_quality(double q, double e) const {
  const double a = std::visit(
      [q, e](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Homogeneous>) {
          return q;
        } else if constexpr (std::is_same_v<T, LinearMix>) {
          return (q - (1.0 - m.gamma) * e) / m.gamma;
        } else {
          const double eff = std::clamp(e, m.e_min, 1.0);
          if (q <= 0.0) return 0.0;
          return std::pow(q / std::pow(eff, 1.0 - m.theta), 1.0 / m.theta);
        }
      },
      variant_);
  return std::clamp(a, 0.0, 1.0);
}

std::string DesignerUtility::name() const {
  std::ostringstream out;
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MaxQuality>) {
          out << "max";
        } else if constexpr (std::is_same_v<T, SumQuality>) {
          out << "sum";
        } else if constexpr (std::is_same_v<T, TopK>) {
          out << "top_k(" << v.k << ")";
        } else if constexpr (std::is_same_v<T, SumMinusSearchCost>) {
          out << "search_cost(" << v.gamma << ")";
        } else {
          out << "tabulated(" << v.name << ")";
        }
      },
      variant_);
  return out.str();
}

double DesignerUtility::operator()(std::span<const double> sorted) const {
  return std::visit(
      [sorted](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MaxQuality>) {
          return sorted.empty() ? 0.0 : sorted.front();
        } else if constexpr (std::is_same_v<T, SumQuality>) {
          return std::accumulate(sorted.begin(), sorted.end(), 0.0);
        } else if constexpr (std::is_same_v<T, TopK>) {
          const std::size_t k = std::min(v.k, sorted.size());
          return std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
        } else if constexpr (std::is_same_v<T, SumMinusSearchCost>) {
          return std::accumulate(sorted.begin(), sorted.end(), 0.0) -
                 v.gamma * static_cast<double>(sorted.size());
        } else {
          return v.evaluate(sorted);
        }
      },
      variant_);
}

double evaluate_designer_utility(const DesignerUtility& utility, std::size_t m,
                                 std::span<const double> qualities) {
  if (qualities.size() != m) throw ContractError("quality list length must equal m");
  if (!std::is_sorted(qualities.begin(), qualities.end(), std::greater<>())) {
    throw ContractError("qualities must be sorted in nonincreasing order");
  }
  return utility(qualities);
}

std::string Action::label() const {
  switch (kind) {
    case Kind::Contribute: {
      std::ostringstream out;
      out << "contribute(e=" << effort << ")";
      return out.str();
    }
    case Kind::Rate:
      return "rate";
    case Kind::NotParticipate:
      return "not_participate";
  }
  return "?";
}

double realized_payoff(const Action& action, double points, const CostModel& costs,
                       const std::optional<EffortCostFunction>& effort_cost) {
  switch (action.kind) {
    case Action::Kind::Contribute:
      return points - (effort_cost ? effort_cost->cost(action.effort) : costs.c_C);
    case Action::Kind::Rate:
      return points - costs.c_R;
    case Action::Kind::NotParticipate:
      return 0.0;
  }
  return 0.0;
}

EffortPolicy EffortPolicy::constant(double effort) {
  return on_grid({effort});
}

EffortPolicy EffortPolicy::on_grid(std::vector<double> values) {
  if (values.empty()) throw ContractError("effort policy needs at least one value");
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw ContractError("effort values must lie in [0,1]");
  }
  EffortPolicy p;
  p.values_ = std::move(values);
  return p;
}

double EffortPolicy::operator()(double ability) const {
  if (values_.size() == 1) return values_.front();
  const double scaled = std::clamp(ability, 0.0, 1.0) * static_cast<double>(values_.size() - 1);
  const auto idx = static_cast<std::size_t>(std::floor(scaled + 1e-12));
  return values_[std::min(idx, values_.size() - 1)];
}

StrategyProfile::StrategyProfile(std::size_t n, std::vector<AgentStrategy> entries)
    : n_(n), entries_(std::move(entries)) {
  for (const auto& s : entries_) {
    if (!(s.threshold >= 0.0 && s.threshold <= 1.0)) {
      throw ContractError("strategy thresholds must lie in [0,1]");
    }
  }
}

StrategyProfile StrategyProfile::symmetric(std::size_t n, AgentStrategy strategy) {
  if (n < 1) throw ContractError("profile needs at least one agent");
  return StrategyProfile(n, {std::move(strategy)});
}

StrategyProfile StrategyProfile::per_agent(std::vector<AgentStrategy> strategies) {
  if (strategies.empty()) throw ContractError("profile needs at least one agent");
  const std::size_t n = strategies.size();
  if (std::all_of(strategies.begin(), strategies.end(),
                  [&](const AgentStrategy& s) { return s == strategies.front(); })) {
    return StrategyProfile(n, {strategies.front()});
  }
  return StrategyProfile(n, std::move(strategies));
}

const AgentStrategy& StrategyProfile::agent(std::size_t i) const {
  if (i >= n_) throw ContractError("agent index out of range");
  return entries_.size() == 1 ? entries_.front() : entries_[i];
}

std::vector<std::size_t> StrategyProfile::roles() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n_; ++i) {
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](std::size_t j) { return agent(j) == agent(i); });
    if (!seen) out.push_back(i);
  }
  return out;
}

MixedParticipationStrategy::MixedParticipationStrategy(std::vector<double> cell_values)
    : values_(std::move(cell_values)) {
  if (values_.empty()) throw ContractError("mixed strategy needs at least one cell");
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw ContractError("participation probabilities must lie in [0,1]");
  }
}

double MixedParticipationStrategy::operator()(double ability) const {
  const double k = static_cast<double>(values_.size());
  const auto idx = static_cast<std::size_t>(std::floor(std::clamp(ability, 0.0, 1.0) * k));
  return values_[std::min(idx, values_.size() - 1)];
}

double MixedParticipationStrategy::participation_rate(const AbilityDistribution& dist) const {
  const double k = static_cast<double>(values_.size());
  double lambda = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double upper = dist.cdf(std::min(1.0, static_cast<double>(i + 1) / k));
    lambda += values_[i] * (upper - prev);
    prev = upper;
  }
  return std::clamp(lambda, 0.0, 1.0);
}

}  // namespace contest
