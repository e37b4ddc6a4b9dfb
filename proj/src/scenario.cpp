#include "contest/scenario.hpp"

#include <numeric>

#include "contest/errors.hpp"

namespace contest {

void ScenarioConfig::validate() const {
  if (n < 2) throw ContractError("a contest needs n >= 2 agents");
  costs.validate();
  if (effort_cost) effort_cost->validate();
  if (const auto* rs = std::get_if<RewardScheme>(&rewards)) {
    rs->validate();
  } else {
    const auto& rp = std::get<RankPrizes>(rewards);
    rp.validate();
    if (rp.prizes.size() != n) throw ContractError("rank prizes must list one prize per agent");
    if (ranking.is_softmax()) {
      throw ContractError("rank-order rewards need a perfect or beta-mixture ranking");
    }
  }
  if (!effort_cost && !quality.is_homogeneous()) {
    throw ContractError("a non-homogeneous quality model needs an effort cost function");
  }
}

double ScenarioConfig::rating_points() const {
  if (const auto* rs = std::get_if<RewardScheme>(&rewards)) return rs->p_R;
  return std::get<RankPrizes>(rewards).p_R;
}

GeneralMechanism ScenarioConfig::mechanism() const {
  if (const auto* rs = std::get_if<RewardScheme>(&rewards)) {
    return GeneralMechanism(GeneralMechanism::BestContribution{*rs, ranking});
  }
  return GeneralMechanism(
      GeneralMechanism::RankOrder{std::get<RankPrizes>(rewards), ranking.accuracy().value_or(1.0)});
}

const RewardScheme& ScenarioConfig::reward_scheme() const {
  if (const auto* rs = std::get_if<RewardScheme>(&rewards)) return *rs;
  throw ContractError("operation requires best-contribution rewards (p_B, p_C, p_R)");
}

double ScenarioConfig::contribution_cost(double effort) const {
  return effort_cost ? effort_cost->cost(effort) : costs.c_C;
}

double ContestOutcome::total_points() const {
  double total = std::accumulate(pool_points.begin(), pool_points.end(), 0.0);
  for (const auto& a : agents) total += a.points;
  return total;
}

}  // namespace contest
