#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "contest/ability_distribution.hpp"
#include "contest/model.hpp"
#include "contest/ranking.hpp"

namespace contest {

/// One full contest specification.
struct ScenarioConfig {
  std::size_t n = 2;
  AbilityDistribution dist = AbilityDistribution::uniform();
  std::variant<RewardScheme, RankPrizes> rewards = RewardScheme{};
  CostModel costs;
  std::optional<EffortCostFunction> effort_cost;  // present => endogenous effort
  QualityModel quality;
  RankingModel ranking;
  DesignerUtility utility;
  std::optional<NonstrategicPool> pool;
  std::uint64_t seed = 1;

  void validate() const;

  bool endogenous() const noexcept { return effort_cost.has_value(); }
  double rating_points() const;
  std::size_t pool_count() const noexcept { return pool ? pool->count : 0; }
  // BestContribution(rewards, ranking) or RankOrder(prizes, beta of the ranking).
  GeneralMechanism mechanism() const;
  // Throws ContractError unless the rewards are a RewardScheme.
  const RewardScheme& reward_scheme() const;
  double contribution_cost(double effort) const;
};

struct AgentRecord {
  Action action;
  double ability = 0.0;
  std::optional<double> quality;
  double points = 0.0;
  double payoff = 0.0;
};

struct ContestOutcome {
  std::vector<AgentRecord> agents;
  std::vector<double> pool_qualities;
  std::vector<double> pool_points;
  std::size_t contributors = 0;           // m, including the nonstrategic pool
  std::vector<double> sorted_qualities;   // q^1 >= ... >= q^m
  std::optional<std::size_t> winner;      // index into agents, or agents.size() + pool index
  std::size_t raters = 0;

  double total_points() const;
};

}  // namespace contest
