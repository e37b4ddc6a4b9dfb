#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "contest/errors.hpp"
#include "contest/io.hpp"
#include "contest/threshold.hpp"

using namespace contest;
using nlohmann::json;

namespace {

json base_config() {
  return json::parse(R"({
    "n": 3,
    "dist": {"kind": "beta", "alpha": 2.0, "beta": 3.0},
    "rewards": {"kind": "best", "p_B": 1.0, "p_C": 0.1, "p_R": 0.05},
    "costs": {"c_C": 0.1, "c_R": 0.02, "c_bar": 0.5},
    "ranking": {"kind": "beta", "beta": 0.5},
    "utility": {"kind": "top_k", "k": 2},
    "pool": {"count": 2, "dist": {"kind": "uniform"}},
    "seed": 42
  })");
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

}  // namespace

TEST_CASE("scenario round trip") {
  const auto config = scenario_from_json(base_config());
  CHECK(config.n == 3);
  CHECK(config.seed == 42);
  CHECK(config.pool_count() == 2);
  const json echoed = to_json(config);
  CHECK(to_json(scenario_from_json(echoed)) == echoed);

  json effort = base_config();
  effort["effort_cost"] = {{"c0", 0.05}, {"kappa", 0.003}, {"p_exp", 2.0}};
  effort["quality"] = {{"kind", "cobb_douglas"}, {"theta", 0.4}, {"e_min", 0.1}};
  effort["ranking"] = {{"kind", "softmax"}, {"eta", 0.7}};
  const auto e = scenario_from_json(effort);
  CHECK(e.endogenous());
  CHECK(to_json(scenario_from_json(to_json(e))) == to_json(e));

  json rank = base_config();
  rank["n"] = 2;
  rank["rewards"] = {{"kind", "rank_order"}, {"prizes", {1.0, 0.0}}, {"p_R", 0.05}};
  const auto r = scenario_from_json(rank);
  CHECK(std::holds_alternative<RankPrizes>(r.rewards));
  CHECK(to_json(scenario_from_json(to_json(r))) == to_json(r));
}

TEST_CASE("strict schema") {
  auto bad = base_config();
  bad["extra"] = 1;
  CHECK_THROWS_AS(scenario_from_json(bad), ContractError);

  bad = base_config();
  bad["costs"]["c_X"] = 0.1;
  CHECK_THROWS_AS(scenario_from_json(bad), ContractError);

  bad = base_config();
  bad.erase("rewards");
  CHECK_THROWS_AS(scenario_from_json(bad), ContractError);

  bad = base_config();
  bad["n"] = "three";
  CHECK_THROWS_AS(scenario_from_json(bad), ContractError);

  bad = base_config();
  bad["seed"] = -1;
  CHECK_THROWS_AS(scenario_from_json(bad), ContractError);

  bad = base_config();
  bad["dist"] = {{"kind", "lognormal"}};
  CHECK_THROWS_AS(scenario_from_json(bad), ContractError);

  bad = base_config();
  bad["rewards"]["p_C"] = 2.0;  // p_C >= p_B
  CHECK_THROWS_AS(scenario_from_json(bad), ContractError);

  bad = base_config();
  bad["mechanism"] = {{"kind", "proportional"}, {"k", 1.0}, {"z", 0}};
  CHECK_THROWS_AS(scenario_from_json(bad), ContractError);

  CHECK_THROWS_AS(scenario_from_json(json::array()), ContractError);
}

TEST_CASE("component codecs round trip") {
  for (const auto& d : {AbilityDistribution::uniform(), AbilityDistribution::beta(0.5, 2.0)}) {
    CHECK(to_json(distribution_from_json(to_json(d))) == to_json(d));
  }
  for (const auto& r : {RankingModel::perfect(), RankingModel::beta_mixture(0.3),
                        RankingModel::softmax(2.0)}) {
    CHECK(to_json(ranking_from_json(to_json(r))) == to_json(r));
  }
  const json mech = json::parse(R"({"kind": "scaled", "k": 2.5,
      "base": {"kind": "rank_order", "prizes": [1.0, 0.5, 0.0], "beta": 0.8}})");
  CHECK(to_json(mechanism_from_json(mech)) == mech);
}

TEST_CASE("shipped configs parse") {
  for (const char* name : {"uniform_n2.json", "rank_order_n2.json", "effort_perfect.json",
                           "effort_softmax.json", "proportional_n2.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(scenario_from_json(read_file(std::string(CONTEST_CONFIGS) + "/" + name)));
  }
}

TEST_CASE("report serialization") {
  const auto r = solve_symmetric_threshold({1.0, 0.0, 0.0}, {0.1, 0.0, std::nullopt}, 2,
                                           AbilityDistribution::uniform(), RankingModel::perfect());
  const json j = to_json(r);
  CHECK(j.at("a_star").get<double>() == r.threshold);
  CHECK(j.at("corner") == "interior");
}

TEST_CASE("csv tables keep full precision") {
  CsvTable table({"n", "p_B", "p_C", "residual"});
  table.add_row({2.0, 0.1 + 0.2, 1.0 / 3.0, 0.0});
  CHECK_THROWS_AS(table.add_row({1.0}), ContractError);
  std::ostringstream out;
  table.write(out);
  std::istringstream in(out.str());
  std::string header;
  std::string row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "n,p_B,p_C,residual");
  std::istringstream cells(row);
  std::string cell;
  std::vector<double> values;
  while (std::getline(cells, cell, ',')) values.push_back(std::stod(cell));
  REQUIRE(values.size() == 4);
  CHECK(values[1] == 0.1 + 0.2);
  CHECK(values[2] == 1.0 / 3.0);
  CHECK(table.rows() == 1);
}
