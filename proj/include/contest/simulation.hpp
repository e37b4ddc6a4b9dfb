#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "contest/model.hpp"
#include "contest/random.hpp"
#include "contest/scenario.hpp"

namespace contest {

// Plays one contest: draws abilities, applies the profile, selects the winner or ordering,
// and pays points per the scenario mechanism. Raters are paid only if m >= 1.
ContestOutcome simulate_contest(const StrategyProfile& profile, const ScenarioConfig& scenario,
                                Stream& stream);

/// Paired payoff evaluation for one agent slot. Replication r fixes the other agents' draws
/// (plan.stream_for(r)); every candidate (ability, action) is scored on the same draws, with
/// the winner lottery replaced by its conditional expectation.
class FocalEvaluator {
 public:
  FocalEvaluator(const StrategyProfile& profile, const ScenarioConfig& scenario, std::size_t agent,
                 const SimulationPlan& plan);

  std::size_t reps() const noexcept { return offsets_.size() - 1; }
  std::vector<double> payoffs(double ability, const Action& action) const;
  Estimate utility(double ability, const Action& action) const;

 private:
  std::span<const double> rivals(std::size_t rep) const {
    return {qualities_.data() + offsets_[rep], offsets_[rep + 1] - offsets_[rep]};
  }

  ScenarioConfig scenario_;
  GeneralMechanism mechanism_;
  std::vector<double> qualities_;  // contributing rivals (strategic and pool) per replication
  std::vector<std::size_t> offsets_;
};

Estimate estimate_action_utility(std::size_t agent, double ability, const Action& action,
                                 const StrategyProfile& profile, const ScenarioConfig& scenario,
                                 const SimulationPlan& plan);

struct RegretRecord {
  std::size_t agent = 0;
  double ability = 0.0;
  Action prescribed;
  Action best_alternative;
  double regret = 0.0;     // best alternative minus prescribed (paired)
  double std_error = 0.0;  // of the paired difference
  bool within_tolerance = true;
};

struct RegretReport {
  std::vector<RegretRecord> records;
  double max_regret = 0.0;
  RegretRecord witness;    // record with the largest regret in units of its tolerance
  double sigmas = 3.0;
  bool verified = true;
};

struct VerifyOptions {
  std::vector<double> ability_grid;
  std::vector<double> effort_grid{0.0};
  double sigmas = 3.0;
  double abs_tolerance = 1e-12;
};

// Ability grid with `above` points on [threshold, 1] and `below` points on [0, threshold).
std::vector<double> verification_grid(double threshold, std::size_t above, std::size_t below);
std::vector<double> uniform_grid(std::size_t points);

// Compares each prescribed action with Rate, NotParticipate and Contribute at every grid effort,
// for every distinct agent role. Verified iff every regret <= sigmas * stderr + abs_tolerance.
RegretReport verify_equilibrium(const StrategyProfile& profile, const ScenarioConfig& scenario,
                                const VerifyOptions& options, const SimulationPlan& plan);

// Action a threshold strategy prescribes at this ability.
Action prescribed_action(const AgentStrategy& strategy, double ability,
                         const ScenarioConfig& scenario);

}  // namespace contest
