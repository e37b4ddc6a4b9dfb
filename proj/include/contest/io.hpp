#pragma once

#include "json.hpp"

#include <ostream>
#include <string>
#include <vector>

#include "contest/ability_distribution.hpp"
#include "contest/asymmetric.hpp"
#include "contest/designer.hpp"
#include "contest/effort.hpp"
#include "contest/learning.hpp"
#include "contest/ranking.hpp"
#include "contest/scenario.hpp"
#include "contest/simulation.hpp"
#include "contest/threshold.hpp"

namespace contest {

// Strict-schema codecs: unknown keys and missing required keys throw ContractError.
AbilityDistribution distribution_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AbilityDistribution& dist);

RankingModel ranking_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RankingModel& ranking);

GeneralMechanism mechanism_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GeneralMechanism& mech);

ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& config);

nlohmann::json to_json(const EquilibriumReport& report);
nlohmann::json to_json(const CalibrationResult& result);
nlohmann::json to_json(const ContestSeriesResult& series);
nlohmann::json to_json(const AsymmetricProfile& profile);
nlohmann::json to_json(const RegretReport& report);
nlohmann::json to_json(const EffortConditionReport& report);
nlohmann::json to_json(const EffortDeviationReport& report);
nlohmann::json to_json(const ContestOutcome& outcome);

/// Minimal CSV table: fixed header, numeric rows.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<double> row);
  void write(std::ostream& out) const;
  std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace contest
