#include "contest/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "contest/errors.hpp"

namespace contest {

Action prescribed_action(const AgentStrategy& strategy, double ability,
                         const ScenarioConfig& scenario) {
  if (strategy.threshold < 1.0 && ability >= strategy.threshold) {
    return Action::contribute(strategy.effort(ability));
  }
  if (scenario.rating_points() >= scenario.costs.c_R) return Action::rate();
  return Action::not_participate();
}

ContestOutcome simulate_contest(const StrategyProfile& profile, const ScenarioConfig& scenario,
                                Stream& stream) {
  const std::size_t n = scenario.n;
  if (profile.size() != n) throw ContractError("strategy profile arity does not match n");
  ContestOutcome out;
  out.agents.resize(n);
  std::vector<double> qualities;
  std::vector<std::size_t> owners;  // index into agents, or n + pool index
  for (std::size_t i = 0; i < n; ++i) {
    auto& rec = out.agents[i];
    rec.ability = scenario.dist.sample_one(stream);
    rec.action = prescribed_action(profile.agent(i), rec.ability, scenario);
    if (rec.action.kind == Action::Kind::Contribute) {
      rec.quality = scenario.quality.quality(rec.ability, rec.action.effort);
      qualities.push_back(*rec.quality);
      owners.push_back(i);
    } else if (rec.action.kind == Action::Kind::Rate) {
      ++out.raters;
    }
  }
  for (std::size_t j = 0; j < scenario.pool_count(); ++j) {
    out.pool_qualities.push_back(scenario.pool->quality_dist.sample_one(stream));
    qualities.push_back(out.pool_qualities.back());
    owners.push_back(n + j);
  }
  out.pool_points.assign(out.pool_qualities.size(), 0.0);
  out.contributors = qualities.size();

  auto credit = [&](std::size_t owner, double points) {
    if (owner < n) {
      out.agents[owner].points = points;
    } else {
      out.pool_points[owner - n] = points;
    }
  };
  if (!qualities.empty()) {
    if (const auto* rs = std::get_if<RewardScheme>(&scenario.rewards)) {
      const std::size_t w = draw_winner(scenario.ranking, qualities, stream);
      out.winner = owners[w];
      for (std::size_t c = 0; c < qualities.size(); ++c) {
        credit(owners[c], c == w ? rs->p_B : rs->p_C);
      }
    } else {
      const auto& prizes = std::get<RankPrizes>(scenario.rewards);
      const auto order =
          draw_ranking(scenario.ranking.accuracy().value_or(1.0), qualities, stream);
      out.winner = owners[order.front()];
      for (std::size_t r = 0; r < order.size(); ++r) credit(owners[order[r]], prizes.prize(r + 1));
    }
    for (auto& rec : out.agents) {
      if (rec.action.kind == Action::Kind::Rate) rec.points = scenario.rating_points();
    }
  }
  for (auto& rec : out.agents) {
    rec.payoff = realized_payoff(rec.action, rec.points, scenario.costs, scenario.effort_cost);
  }
  out.sorted_qualities = qualities;
  std::sort(out.sorted_qualities.begin(), out.sorted_qualities.end(), std::greater<>());
  return out;
}

FocalEvaluator::FocalEvaluator(const StrategyProfile& profile, const ScenarioConfig& scenario,
                               std::size_t agent, const SimulationPlan& plan)
    : scenario_(scenario), mechanism_(scenario.mechanism()) {
  const std::size_t n = scenario.n;
  if (profile.size() != n) throw ContractError("strategy profile arity does not match n");
  if (agent >= n) throw ContractError("agent index out of range");
  if (plan.reps < 1) throw ContractError("reps must be at least 1");
  std::vector<std::vector<double>> per_rep(plan.reps);
  parallel_for(plan.reps, [&](std::size_t r) {
    Stream stream = plan.stream_for(r);
    auto& rivals = per_rep[r];
    for (std::size_t i = 0; i < n; ++i) {
      const double b = scenario.dist.sample_one(stream);
      if (i == agent) continue;
      const Action act = prescribed_action(profile.agent(i), b, scenario);
      if (act.kind == Action::Kind::Contribute) {
        rivals.push_back(scenario.quality.quality(b, act.effort));
      }
    }
    for (std::size_t j = 0; j < scenario.pool_count(); ++j) {
      rivals.push_back(scenario.pool->quality_dist.sample_one(stream));
    }
  });
  offsets_.reserve(plan.reps + 1);
  offsets_.push_back(0);
  for (const auto& rivals : per_rep) {
    qualities_.insert(qualities_.end(), rivals.begin(), rivals.end());
    offsets_.push_back(qualities_.size());
  }
}

std::vector<double> FocalEvaluator::payoffs(double ability, const Action& action) const {
  if (!(ability >= 0.0 && ability <= 1.0)) throw DomainError("ability must lie in [0,1]");
  std::vector<double> out(reps(), 0.0);
  switch (action.kind) {
    case Action::Kind::NotParticipate:
      break;
    case Action::Kind::Rate: {
      const double p_R = scenario_.rating_points();
      for (std::size_t r = 0; r < reps(); ++r) {
        out[r] = realized_payoff(action, rivals(r).empty() ? 0.0 : p_R, scenario_.costs);
      }
      break;
    }
    case Action::Kind::Contribute: {
      const double q = scenario_.quality.quality(ability, action.effort);
      parallel_for(reps(), [&](std::size_t r) {
        out[r] = realized_payoff(action, expected_points(mechanism_, q, rivals(r)),
                                 scenario_.costs, scenario_.effort_cost);
      });
      break;
    }
  }
  return out;
}

Estimate FocalEvaluator::utility(double ability, const Action& action) const {
  return summarize(payoffs(ability, action));
}

Estimate estimate_action_utility(std::size_t agent, double ability, const Action& action,
                                 const StrategyProfile& profile, const ScenarioConfig& scenario,
                                 const SimulationPlan& plan) {
  return FocalEvaluator(profile, scenario, agent, plan).utility(ability, action);
}

std::vector<double> uniform_grid(std::size_t points) {
  if (points < 2) return {0.0};
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = i + 1 == points ? 1.0 : static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return out;
}

std::vector<double> verification_grid(double threshold, std::size_t above, std::size_t below) {
  std::vector<double> out;
  if (threshold > 0.0) {
    for (std::size_t i = 0; i < below; ++i) {
      out.push_back(threshold * static_cast<double>(i) / static_cast<double>(below));
    }
  }
  if (threshold < 1.0) {
    for (std::size_t i = 0; i < above; ++i) {
      const double t = above == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(above - 1);
      out.push_back(i + 1 == above && above > 1 ? 1.0 : threshold + (1.0 - threshold) * t);
    }
  } else {
    out.push_back(1.0);
  }
  return out;
}

RegretReport verify_equilibrium(const StrategyProfile& profile, const ScenarioConfig& scenario,
                                const VerifyOptions& options, const SimulationPlan& plan) {
  if (options.ability_grid.empty() || options.effort_grid.empty()) {
    throw ContractError("verification grids must be nonempty");
  }
  RegretReport report;
  report.sigmas = options.sigmas;
  report.max_regret = -std::numeric_limits<double>::infinity();
  double worst_excess = -std::numeric_limits<double>::infinity();

  std::vector<Action> alternatives{Action::rate(), Action::not_participate()};
  for (double e : options.effort_grid) alternatives.push_back(Action::contribute(e));

  for (std::size_t agent : profile.roles()) {
    const FocalEvaluator evaluator(profile, scenario, agent, plan);
    for (double a : options.ability_grid) {
      const Action prescribed = prescribed_action(profile.agent(agent), a, scenario);
      const auto base = evaluator.payoffs(a, prescribed);
      RegretRecord record;
      record.agent = agent;
      record.ability = a;
      record.prescribed = prescribed;
      double record_excess = -std::numeric_limits<double>::infinity();
      std::vector<double> diff(base.size());
      for (const Action& alt : alternatives) {
        if (alt == prescribed) continue;
        const auto values = evaluator.payoffs(a, alt);
        for (std::size_t r = 0; r < diff.size(); ++r) diff[r] = values[r] - base[r];
        const Estimate d = summarize(diff);
        const double excess = d.mean - (options.sigmas * d.std_error + options.abs_tolerance);
        if (excess > record_excess) {
          record_excess = excess;
          record.best_alternative = alt;
          record.regret = d.mean;
          record.std_error = d.std_error;
        }
      }
      record.within_tolerance = record_excess <= 0.0;
      report.max_regret = std::max(report.max_regret, record.regret);
      if (record_excess > worst_excess) {
        worst_excess = record_excess;
        report.witness = record;
      }
      if (!record.within_tolerance) report.verified = false;
      report.records.push_back(record);
    }
  }
  return report;
}

}  // namespace contest
