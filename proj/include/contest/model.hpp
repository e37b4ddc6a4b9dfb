#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "contest/ability_distribution.hpp"

namespace contest {

/// Points for the best contribution, every other contribution, and rating.
struct RewardScheme {
  double p_B = 1.0;
  double p_C = 0.0;
  double p_R = 0.0;

  // Throws ContractError unless p_B > p_C >= 0 and p_R >= 0.
  void validate() const;
};

/// Rank-order prizes p_1 >= ... >= p_n with at least one strict step, plus the rating reward.
struct RankPrizes {
  std::vector<double> prizes;
  double p_R = 0.0;

  void validate() const;
  // Prize for 1-based rank k; ranks past the end of the list earn 0.
  double prize(std::size_t rank) const;
};

struct CostModel {
  double c_C = 0.0;
  double c_R = 0.0;
  std::optional<double> c_bar;

  void validate() const;
};

/// c(e) = c0 + kappa * e^p_exp on e in [0,1].
struct EffortCostFunction {
  double c0 = 0.0;
  double kappa = 0.0;
  double p_exp = 1.0;

  void validate() const;
  double cost(double e) const;
  double marginal(double e) const;
};

/// Contribution quality q(a, e).
class QualityModel {
 public:
  struct Homogeneous {};
  struct LinearMix {
    double gamma = 1.0;  // q = gamma*a + (1-gamma)*e
  };
  struct CobbDouglas {
    double theta = 0.5;  // q = a^theta * e^(1-theta), e clamped to [e_min, 1]
    double e_min = 0.05;
  };
  using Variant = std::variant<Homogeneous, LinearMix, CobbDouglas>;

  QualityModel() = default;
  static QualityModel homogeneous() { return QualityModel(Homogeneous{}); }
  static QualityModel linear_mix(double gamma);
  static QualityModel cobb_douglas(double theta, double e_min = 0.05);

  const Variant& variant() const noexcept { return variant_; }
  bool is_homogeneous() const noexcept { return std::holds_alternative<Homogeneous>(variant_); }

  double quality(double a, double e) const;
  double d_quality_d_effort(double a, double e) const;
  // Smallest ability reaching quality q at effort e (clamped to [0,1]).
  double ability_for_quality(double q, double e) const;

 private:
  explicit QualityModel(Variant v) : variant_(std::move(v)) {}
  Variant variant_ = Homogeneous{};
};

/// Designer objective V(m, q^1..q^m) over contribution qualities sorted best-first.
class DesignerUtility {
 public:
  struct MaxQuality {};
  struct SumQuality {};
  struct TopK {
    std::size_t k = 1;
  };
  struct SumMinusSearchCost {
    double gamma = 0.0;  // V = sum q - gamma * m
  };
  struct Tabulated {
    std::string name;
    std::function<double(std::span<const double>)> evaluate;
  };
  using Variant = std::variant<MaxQuality, SumQuality, TopK, SumMinusSearchCost, Tabulated>;

  DesignerUtility() = default;
  DesignerUtility(Variant v) : variant_(std::move(v)) {}  // NOLINT(implicit)

  const Variant& variant() const noexcept { return variant_; }
  std::string name() const;
  bool is_builtin() const noexcept { return !std::holds_alternative<Tabulated>(variant_); }

  // `sorted` must be nonincreasing; evaluation is unchecked for speed.
  double operator()(std::span<const double> sorted) const;

 private:
  Variant variant_ = MaxQuality{};
};

// Checked evaluation: throws ContractError if qualities.size() != m or the list is unsorted.
double evaluate_designer_utility(const DesignerUtility& utility, std::size_t m,
                                 std::span<const double> qualities);

struct Action {
  enum class Kind { Contribute, Rate, NotParticipate };

  Kind kind = Kind::NotParticipate;
  double effort = 0.0;

  static Action contribute(double effort = 0.0) { return {Kind::Contribute, effort}; }
  static Action rate() { return {Kind::Rate, 0.0}; }
  static Action not_participate() { return {Kind::NotParticipate, 0.0}; }

  std::string label() const;
  friend bool operator==(const Action&, const Action&) = default;
};

// points - cost of the action; NotParticipate is exactly 0. Without an effort cost
// function, contributing costs c_C.
double realized_payoff(const Action& action, double points, const CostModel& costs,
                       const std::optional<EffortCostFunction>& effort_cost = std::nullopt);

/// Effort as a function of ability, piecewise-constant on a uniform grid over [0,1].
class EffortPolicy {
 public:
  EffortPolicy() : values_{0.0} {}
  static EffortPolicy constant(double effort);
  // values[i] applies on [i/(K-1), (i+1)/(K-1)); default grid has 101 points.
  static EffortPolicy on_grid(std::vector<double> values);

  double operator()(double ability) const;
  std::span<const double> values() const noexcept { return values_; }
  bool is_constant() const noexcept { return values_.size() == 1; }

  friend bool operator==(const EffortPolicy&, const EffortPolicy&) = default;

 private:
  std::vector<double> values_;
};

struct AgentStrategy {
  double threshold = 1.0;
  EffortPolicy effort;

  friend bool operator==(const AgentStrategy&, const AgentStrategy&) = default;
};

/// Threshold strategies for all n agents; a symmetric profile stores one entry.
class StrategyProfile {
 public:
  static StrategyProfile symmetric(std::size_t n, AgentStrategy strategy);
  static StrategyProfile per_agent(std::vector<AgentStrategy> strategies);

  std::size_t size() const noexcept { return n_; }
  bool is_symmetric() const noexcept { return entries_.size() == 1; }
  const AgentStrategy& agent(std::size_t i) const;
  // Agent indices with pairwise-distinct strategies, in index order.
  std::vector<std::size_t> roles() const;

 private:
  StrategyProfile(std::size_t n, std::vector<AgentStrategy> entries);
  std::size_t n_ = 0;
  std::vector<AgentStrategy> entries_;
};

/// Participation probability sigma(a), piecewise-constant on K equal cells of [0,1].
class MixedParticipationStrategy {
 public:
  explicit MixedParticipationStrategy(std::vector<double> cell_values);

  double operator()(double ability) const;
  std::span<const double> values() const noexcept { return values_; }
  // lambda = integral of sigma dF.
  double participation_rate(const AbilityDistribution& dist) const;

 private:
  std::vector<double> values_;
};

/// Exogenous contributors: always contribute, qualities drawn from `quality_dist`.
struct NonstrategicPool {
  std::size_t count = 0;
  AbilityDistribution quality_dist = AbilityDistribution::uniform();
};

}  // namespace contest
