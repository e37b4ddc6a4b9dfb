#include "contest/io.hpp"

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <iomanip>
#include <limits>
#include <set>
#include <string>

#include "contest/errors.hpp"

namespace contest {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& what,
                    std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ContractError(what + " must be a JSON object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!keys.contains(key)) throw ContractError("unknown key '" + key + "' in " + what);
  }
}

double number(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw ContractError("missing key '" + std::string(key) + "' in " + what);
  const auto& v = j.at(key);
  if (!v.is_number()) throw ContractError("'" + std::string(key) + "' in " + what + " must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& what) {
  return j.contains(key) ? number(j, key, what) : fallback;
}

bool nonnegative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::size_t count(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw ContractError("missing key '" + std::string(key) + "' in " + what);
  const auto& v = j.at(key);
  if (!nonnegative_integer(v)) {
    throw ContractError("'" + std::string(key) + "' in " + what + " must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::string kind(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ContractError(what + " needs a string 'kind'");
  }
  return j.at("kind").get<std::string>();
}

std::vector<double> number_list(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ContractError("'" + std::string(key) + "' in " + what + " must be an array");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ContractError("'" + std::string(key) + "' entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

RewardScheme reward_scheme_from_json(const json& j, const std::string& what) {
  require_object(j, what, {"kind", "p_B", "p_C", "p_R"});
  RewardScheme r{number(j, "p_B", what), number_or(j, "p_C", 0.0, what),
                 number_or(j, "p_R", 0.0, what)};
  r.validate();
  return r;
}

json to_json(const RewardScheme& r) {
  return {{"kind", "best"}, {"p_B", r.p_B}, {"p_C", r.p_C}, {"p_R", r.p_R}};
}

json to_json(const RankPrizes& r) {
  return {{"kind", "rank_order"}, {"prizes", r.prizes}, {"p_R", r.p_R}};
}

DesignerUtility utility_from_json(const json& j) {
  const std::string k = kind(j, "utility");
  if (k == "max") {
    require_object(j, "utility", {"kind"});
    return DesignerUtility(DesignerUtility::MaxQuality{});
  }
  if (k == "sum") {
    require_object(j, "utility", {"kind"});
    return DesignerUtility(DesignerUtility::SumQuality{});
  }
  if (k == "top_k") {
    require_object(j, "utility", {"kind", "k"});
    const std::size_t top = count(j, "k", "utility");
    if (top < 1) throw ContractError("top_k utility needs k >= 1");
    return DesignerUtility(DesignerUtility::TopK{top});
  }
  if (k == "search_cost") {
    require_object(j, "utility", {"kind", "gamma"});
    const double gamma = number(j, "gamma", "utility");
    if (!(gamma >= 0.0)) throw ContractError("search cost gamma must be nonnegative");
    return DesignerUtility(DesignerUtility::SumMinusSearchCost{gamma});
  }
  throw ContractError("unknown utility kind '" + k + "'");
}

json to_json(const DesignerUtility& u) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DesignerUtility::MaxQuality>) {
          return {{"kind", "max"}};
        } else if constexpr (std::is_same_v<T, DesignerUtility::SumQuality>) {
          return {{"kind", "sum"}};
        } else if constexpr (std::is_same_v<T, DesignerUtility::TopK>) {
          return {{"kind", "top_k"}, {"k", v.k}};
        } else if constexpr (std::is_same_v<T, DesignerUtility::SumMinusSearchCost>) {
          return {{"kind", "search_cost"}, {"gamma", v.gamma}};
        } else {
          return {{"kind", "tabulated"}, {"name", v.name}};
        }
      },
      u.variant());
}

QualityModel quality_from_json(const json& j) {
  const std::string k = kind(j, "quality");
  if (k == "homogeneous") {
    require_object(j, "quality", {"kind"});
    return QualityModel::homogeneous();
  }
  if (k == "linear") {
    require_object(j, "quality", {"kind", "gamma"});
    return QualityModel::linear_mix(number(j, "gamma", "quality"));
  }
  if (k == "cobb_douglas") {
    require_object(j, "quality", {"kind", "theta", "e_min"});
    return QualityModel::cobb_douglas(number(j, "theta", "quality"),
                                      number_or(j, "e_min", 0.05, "quality"));
  }
  throw ContractError("unknown quality kind '" + k + "'");
}

json to_json(const QualityModel& q) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, QualityModel::Homogeneous>) {
          return {{"kind", "homogeneous"}};
        } else if constexpr (std::is_same_v<T, QualityModel::LinearMix>) {
          return {{"kind", "linear"}, {"gamma", v.gamma}};
        } else {
          return {{"kind", "cobb_douglas"}, {"theta", v.theta}, {"e_min", v.e_min}};
        }
      },
      q.variant());
}

template <class Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ContractError(std::string("malformed JSON value: ") + e.what());
  }
}

}  // namespace

AbilityDistribution distribution_from_json(const json& j) {
  return guarded([&] {
    const std::string k = kind(j, "dist");
    if (k == "uniform") {
      require_object(j, "dist", {"kind"});
      return AbilityDistribution::uniform();
    }
    if (k == "beta") {
      require_object(j, "dist", {"kind", "alpha", "beta"});
      return AbilityDistribution::beta(number(j, "alpha", "dist"), number(j, "beta", "dist"));
    }
    if (k == "piecewise") {
      require_object(j, "dist", {"kind", "knots"});
      if (!j.at("knots").is_array()) throw ContractError("knots must be an array of [x, F] pairs");
      std::vector<Knot> knots;
      for (const auto& pair : j.at("knots")) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
          throw ContractError("each knot must be a pair [x, F]");
        }
        knots.push_back({pair[0].get<double>(), pair[1].get<double>()});
      }
      return AbilityDistribution::piecewise_linear(std::move(knots));
    }
    throw ContractError("unknown distribution kind '" + k + "'");
  });
}

json to_json(const AbilityDistribution& dist) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AbilityDistribution::Uniform>) {
          return {{"kind", "uniform"}};
        } else if constexpr (std::is_same_v<T, AbilityDistribution::Beta>) {
          return {{"kind", "beta"}, {"alpha", v.alpha}, {"beta", v.beta}};
        } else {
          json knots = json::array();
          for (const auto& k : v.knots) knots.push_back({k.x, k.F});
          return {{"kind", "piecewise"}, {"knots", knots}};
        }
      },
      dist.kind());
}

RankingModel ranking_from_json(const json& j) {
  return guarded([&] {
    const std::string k = kind(j, "ranking");
    if (k == "perfect") {
      require_object(j, "ranking", {"kind"});
      return RankingModel::perfect();
    }
    if (k == "beta") {
      require_object(j, "ranking", {"kind", "beta"});
      return RankingModel::beta_mixture(number(j, "beta", "ranking"));
    }
    if (k == "softmax") {
      require_object(j, "ranking", {"kind", "eta"});
      return RankingModel::softmax(number(j, "eta", "ranking"));
    }
    throw ContractError("unknown ranking kind '" + k + "'");
  });
}

json to_json(const RankingModel& ranking) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RankingModel::Perfect>) {
          return {{"kind", "perfect"}};
        } else if constexpr (std::is_same_v<T, RankingModel::BetaMixture>) {
          return {{"kind", "beta"}, {"beta", v.beta}};
        } else {
          return {{"kind", "softmax"}, {"eta", v.eta}};
        }
      },
      ranking.variant());
}

GeneralMechanism mechanism_from_json(const json& j) {
  return guarded([&]() -> GeneralMechanism {
    const std::string k = kind(j, "mechanism");
    if (k == "best") {
      require_object(j, "mechanism", {"kind", "p_B", "p_C", "p_R", "ranking"});
      json rewards = j;
      rewards.erase("ranking");
      const RankingModel ranking =
          j.contains("ranking") ? ranking_from_json(j.at("ranking")) : RankingModel::perfect();
      return GeneralMechanism(GeneralMechanism::BestContribution{
          reward_scheme_from_json(rewards, "mechanism"), ranking});
    }
    if (k == "rank_order") {
      require_object(j, "mechanism", {"kind", "prizes", "beta"});
      return GeneralMechanism(GeneralMechanism::RankOrder{
          RankPrizes{number_list(j, "prizes", "mechanism"), 0.0},
          number_or(j, "beta", 1.0, "mechanism")});
    }
    if (k == "proportional") {
      require_object(j, "mechanism", {"kind", "k"});
      return GeneralMechanism(GeneralMechanism::Proportional{number_or(j, "k", 1.0, "mechanism")});
    }
    if (k == "scaled") {
      require_object(j, "mechanism", {"kind", "k", "base"});
      if (!j.contains("base")) throw ContractError("scaled mechanism needs 'base'");
      return GeneralMechanism::scaled(mechanism_from_json(j.at("base")),
                                      number(j, "k", "mechanism"));
    }
    throw ContractError("unknown mechanism kind '" + k + "'");
  });
}

json to_json(const GeneralMechanism& mech) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GeneralMechanism::BestContribution>) {
          json out = to_json(m.rewards);
          out["ranking"] = to_json(m.ranking);
          return out;
        } else if constexpr (std::is_same_v<T, GeneralMechanism::RankOrder>) {
          return {{"kind", "rank_order"}, {"prizes", m.prizes.prizes}, {"beta", m.beta}};
        } else if constexpr (std::is_same_v<T, GeneralMechanism::Proportional>) {
          return {{"kind", "proportional"}, {"k", m.k}};
        } else {
          return {{"kind", "scaled"}, {"k", m.k}, {"base", to_json(*m.base)}};
        }
      },
      mech.variant());
}

ScenarioConfig scenario_from_json(const json& j) {
  return guarded([&] {
    require_object(j, "config",
                   {"n", "dist", "rewards", "costs", "effort_cost", "quality", "ranking",
                    "utility", "pool", "mechanism", "seed"});
    ScenarioConfig c;
    c.n = count(j, "n", "config");
    if (j.contains("dist")) c.dist = distribution_from_json(j.at("dist"));
    if (!j.contains("rewards")) throw ContractError("missing key 'rewards' in config");
    const auto& rj = j.at("rewards");
    const std::string rk = kind(rj, "rewards");
    if (rk == "best") {
      c.rewards = reward_scheme_from_json(rj, "rewards");
    } else if (rk == "rank_order") {
      require_object(rj, "rewards", {"kind", "prizes", "p_R"});
      RankPrizes prizes{number_list(rj, "prizes", "rewards"), number_or(rj, "p_R", 0.0, "rewards")};
      prizes.validate();
      c.rewards = std::move(prizes);
    } else {
      throw ContractError("unknown rewards kind '" + rk + "'");
    }
    if (!j.contains("costs")) throw ContractError("missing key 'costs' in config");
    const auto& cj = j.at("costs");
    require_object(cj, "costs", {"c_C", "c_R", "c_bar"});
    c.costs.c_C = number(cj, "c_C", "costs");
    c.costs.c_R = number_or(cj, "c_R", 0.0, "costs");
    if (cj.contains("c_bar")) c.costs.c_bar = number(cj, "c_bar", "costs");
    if (j.contains("effort_cost")) {
      const auto& ej = j.at("effort_cost");
      require_object(ej, "effort_cost", {"c0", "kappa", "p_exp"});
      c.effort_cost = EffortCostFunction{number(ej, "c0", "effort_cost"),
                                         number(ej, "kappa", "effort_cost"),
                                         number_or(ej, "p_exp", 1.0, "effort_cost")};
    }
    if (j.contains("quality")) c.quality = quality_from_json(j.at("quality"));
    if (j.contains("ranking")) c.ranking = ranking_from_json(j.at("ranking"));
    if (j.contains("utility")) c.utility = utility_from_json(j.at("utility"));
    if (j.contains("pool")) {
      const auto& pj = j.at("pool");
      require_object(pj, "pool", {"count", "dist"});
      NonstrategicPool pool;
      pool.count = count(pj, "count", "pool");
      if (pj.contains("dist")) pool.quality_dist = distribution_from_json(pj.at("dist"));
      c.pool = pool;
    }
    if (j.contains("mechanism")) (void)mechanism_from_json(j.at("mechanism"));
    if (j.contains("seed")) {
      if (!nonnegative_integer(j.at("seed"))) throw ContractError("seed must be an unsigned integer");
      c.seed = j.at("seed").get<std::uint64_t>();
    }
    c.validate();
    return c;
  });
}

json to_json(const ScenarioConfig& c) {
  json out;
  out["n"] = c.n;
  out["dist"] = to_json(c.dist);
  out["rewards"] = std::visit([](const auto& r) { return to_json(r); }, c.rewards);
  json costs{{"c_C", c.costs.c_C}, {"c_R", c.costs.c_R}};
  if (c.costs.c_bar) costs["c_bar"] = *c.costs.c_bar;
  out["costs"] = costs;
  if (c.effort_cost) {
    out["effort_cost"] = {{"c0", c.effort_cost->c0},
                          {"kappa", c.effort_cost->kappa},
                          {"p_exp", c.effort_cost->p_exp}};
  }
  out["quality"] = to_json(c.quality);
  out["ranking"] = to_json(c.ranking);
  out["utility"] = to_json(c.utility);
  if (c.pool) out["pool"] = {{"count", c.pool->count}, {"dist", to_json(c.pool->quality_dist)}};
  out["seed"] = c.seed;
  return out;
}

json to_json(const EquilibriumReport& r) {
  return {{"a_star", r.threshold},     {"residual", r.residual},
          {"corner", to_string(r.corner)}, {"regime", to_string(r.regime)},
          {"knife_edge", r.knife_edge}, {"iterations", r.iterations}};
}

json to_json(const CalibrationResult& r) {
  return {{"p_B", r.p_B},
          {"p_C", r.p_C},
          {"p_R", r.p_R},
          {"achieved_threshold", r.achieved_threshold},
          {"residual", r.residual},
          {"iterations", r.iterations}};
}

json to_json(const ContestSeriesResult& s) {
  return {{"T", s.T},
          {"n", s.n},
          {"threshold", s.threshold},
          {"f_hat", s.f_hat},
          {"stderr_proxy", s.stderr_proxy()}};
}

json to_json(const AsymmetricProfile& p) {
  json margins = json::array();
  for (const auto& [a, m] : p.agent0_margins) margins.push_back({{"ability", a}, {"margin", m}});
  return {{"a_star", p.a_star},
          {"residual", p.residual},
          {"boundary", p.boundary},
          {"agent1_contribute", p.agent0_contribute},
          {"agent1_rate", p.agent0_rate},
          {"agent1_margin", p.agent0_margin()},
          {"agent1_margins", margins}};
}

namespace {

json to_json(const Action& a) {
  json out{{"action", a.label()}};
  if (a.kind == Action::Kind::Contribute) out["effort"] = a.effort;
  return out;
}

json to_json(const RegretRecord& r) {
  return {{"agent", r.agent},
          {"ability", r.ability},
          {"prescribed", to_json(r.prescribed)},
          {"best_alternative", to_json(r.best_alternative)},
          {"regret", r.regret},
          {"stderr", r.std_error},
          {"within_tolerance", r.within_tolerance}};
}

}  // namespace

json to_json(const RegretReport& r) {
  json records = json::array();
  for (const auto& rec : r.records) records.push_back(to_json(rec));
  return {{"verified", r.verified},
          {"max_regret", r.max_regret},
          {"sigmas", r.sigmas},
          {"witness", to_json(r.witness)},
          {"records", records}};
}

json to_json(const EffortConditionReport& r) {
  const auto finite = [](double x) -> json {
    if (std::isfinite(x)) return x;
    return x < 0 ? "-inf" : "inf";
  };
  return {{"holds", r.holds},
          {"margin", finite(r.margin)},
          {"witness_effort", r.witness_effort},
          {"witness_ability", r.witness_ability},
          {"witness_contributors", r.witness_contributors},
          {"p_B", r.p_B},
          {"p_C", r.p_C},
          {"min_sensitivity", finite(r.min_sensitivity)},
          {"note", r.note}};
}

json to_json(const EffortDeviationReport& r) {
  return {{"a_hat", r.a_hat},
          {"win_full_effort", r.win_full_effort},
          {"win_zero_effort", r.win_zero_effort},
          {"gain", r.gain},
          {"near_ability", r.near_ability},
          {"near_gain", r.near_gain},
          {"optimum_is_equilibrium", r.optimum_is_equilibrium},
          {"note", r.note}};
}

json to_json(const ContestOutcome& o) {
  json agents = json::array();
  for (const auto& a : o.agents) {
    json rec = to_json(a.action);
    rec["ability"] = a.ability;
    if (a.quality) rec["quality"] = *a.quality;
    rec["points"] = a.points;
    rec["payoff"] = a.payoff;
    agents.push_back(rec);
  }
  json out{{"agents", agents},
           {"pool_qualities", o.pool_qualities},
           {"pool_points", o.pool_points},
           {"contributors", o.contributors},
           {"raters", o.raters},
           {"total_points", o.total_points()}};
  if (o.winner) out["winner"] = *o.winner;
  return out;
}

void CsvTable::add_row(std::vector<double> row) {
  if (row.size() != header_.size()) throw ContractError("CSV row width does not match header");
  rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
  for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
  out << '\n';
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  out.precision(old);
}

}  // namespace contest
