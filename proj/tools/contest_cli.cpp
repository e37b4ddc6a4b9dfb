// Command-line front end: one scenario config per run, artifacts as JSON or CSV.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "contest/errors.hpp"
#include "contest/io.hpp"

namespace {

using contest::CsvTable;
using nlohmann::json;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::string out_dir;
  std::string format = "json";
};

struct Inputs {
  json raw;
  contest::ScenarioConfig scenario;
  std::uint64_t seed = 1;
};

// Exit code 2: the run cannot start (bad flags, unreadable or invalid config).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Inputs load(const CommonOptions& opts) {
  std::ifstream in(opts.config_path);
  if (!in) throw UsageError("cannot open config " + opts.config_path);
  Inputs inputs;
  try {
    inputs.raw = json::parse(in);
    inputs.scenario = contest::scenario_from_json(inputs.raw);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  } catch (const contest::ContractError& e) {
    throw UsageError(std::string("invalid config: ") + e.what());
  } catch (const contest::DomainError& e) {
    throw UsageError(std::string("invalid config: ") + e.what());
  }
  inputs.seed = opts.seed.value_or(inputs.scenario.seed);
  inputs.scenario.seed = inputs.seed;
  return inputs;
}

contest::SimulationPlan plan_for(const Inputs& inputs, const CommonOptions& opts,
                                 std::size_t default_reps) {
  return contest::SimulationPlan{opts.reps.value_or(default_reps), inputs.seed, 0};
}

contest::SolverOptions solver_for(const Inputs& inputs, const CommonOptions& opts) {
  contest::SolverOptions options;
  options.mc_seed = inputs.seed;
  if (opts.reps) options.mc_reps = *opts.reps;
  return options;
}

void emit(const std::string& command, const CommonOptions& opts, const std::string& body,
          const std::string& extension) {
  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    std::ofstream file(std::filesystem::path(opts.out_dir) / (command + "." + extension));
    file << body;
  }
  std::cout << body;
}

// JSON envelope echoing the resolved config and seed, or the CSV table when requested.
void finish(const std::string& command, const CommonOptions& opts, const Inputs& inputs,
            json result, const std::optional<CsvTable>& table) {
  if (opts.format == "csv") {
    std::ostringstream out;
    if (table) {
      table->write(out);
    } else {
      out << "key,value\n";
      for (const auto& [key, value] : result.items()) {
        if (value.is_primitive()) out << key << ',' << value.dump() << '\n';
      }
    }
    emit(command, opts, out.str(), "csv");
    return;
  }
  json envelope{{"command", command},
                {"seed", inputs.seed},
                {"config", contest::to_json(inputs.scenario)},
                {"result", std::move(result)}};
  if (inputs.raw.contains("mechanism")) envelope["config"]["mechanism"] = inputs.raw["mechanism"];
  emit(command, opts, envelope.dump(2) + "\n", "json");
}

void add_common(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("--config", opts.config_path, "scenario JSON")->required()->check(
      CLI::ExistingFile);
  sub->add_option("--seed", opts.seed, "base seed (overrides the config)");
  sub->add_option("--reps", opts.reps, "Monte Carlo replications or contests")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", opts.out_dir, "directory for output artifacts");
  sub->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

double solved_threshold(const Inputs& inputs, const CommonOptions& opts) {
  const auto& s = inputs.scenario;
  if (const auto* prizes = std::get_if<contest::RankPrizes>(&s.rewards)) {
    return contest::symmetric_rank_order_threshold(*prizes, s.ranking.accuracy().value_or(1.0),
                                                   s.costs, prizes->p_R, s.n, s.dist);
  }
  return contest::solve_symmetric_threshold(s.reward_scheme(), s.costs, s.n, s.dist, s.ranking,
                                            s.pool, solver_for(inputs, opts))
      .threshold;
}

contest::StrategyProfile symmetric_profile(const contest::ScenarioConfig& s, double threshold,
                                           double effort) {
  return contest::StrategyProfile::symmetric(
      s.n, contest::AgentStrategy{threshold, contest::EffortPolicy::constant(effort)});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crowdsourcing contest equilibria, reward design and simulation"};
  app.require_subcommand(1);
  CommonOptions opts;
  double target = -1.0;
  double ratio = 10.0;
  double threshold = -1.0;
  std::size_t grid = 101;
  std::size_t n_min = 2;
  std::size_t n_max = 10;
  double p_b1 = 1.0;
  double p_b2 = 2.0;
  bool weak_form = false;
  double effort = 1.0;

  auto* solve = app.add_subcommand("solve", "symmetric equilibrium threshold");
  auto* design = app.add_subcommand("design", "designer-optimal threshold");
  auto* calibrate = app.add_subcommand("calibrate", "rewards implementing a target threshold");
  auto* learn = app.add_subcommand("learn", "recover c_C from a simulated contest series");
  auto* learn2 = app.add_subcommand("learn2", "recover (c_C, c_R) from two experiments");
  auto* asymmetric = app.add_subcommand("asymmetric", "asymmetric rank-order equilibrium");
  auto* endo_check = app.add_subcommand("endogenous-check", "effort condition report");
  auto* endo_cal = app.add_subcommand("endogenous-calibrate", "full-effort reward calibration");
  auto* simulate = app.add_subcommand("simulate", "simulate contests at a threshold profile");
  auto* verify = app.add_subcommand("verify", "best-response verification of a profile");
  auto* schedule = app.add_subcommand("schedule", "calibrated rewards across agent counts");

  for (auto* sub : {solve, design, calibrate, learn, learn2, asymmetric, endo_check, endo_cal,
                    simulate, verify, schedule}) {
    add_common(sub, opts);
  }
  for (auto* sub : {calibrate, endo_check, endo_cal, schedule}) {
    sub->add_option("--target", target, "target threshold a_hat")->required()->check(
        CLI::Range(0.0, 1.0));
    sub->add_option("--ratio", ratio, "p_B / p_C")->check(CLI::Range(1.0, 1e300));
  }
  design->add_option("--grid", grid, "threshold grid points")->check(CLI::Range(11, 100001));
  schedule->add_option("--n-min", n_min)->check(CLI::Range(2, 1000));
  schedule->add_option("--n-max", n_max)->check(CLI::Range(2, 1000));
  learn2->add_option("--p-b1", p_b1, "winner reward of the first experiment");
  learn2->add_option("--p-b2", p_b2, "winner reward of the second experiment");
  endo_check->add_flag("--weak", weak_form, "evaluate at p_B = c(0) + max(p_R - c_R, 0)");
  for (auto* sub : {simulate, verify}) {
    sub->add_option("--threshold", threshold, "profile threshold (default: solved)")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--effort", effort, "profile effort")->check(CLI::Range(0.0, 1.0));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const Inputs inputs = load(opts);
    const auto& s = inputs.scenario;

    if (command == "solve") {
      json result;
      if (const auto* prizes = std::get_if<contest::RankPrizes>(&s.rewards)) {
        result["a_star"] = solved_threshold(inputs, opts);
        result["mechanism"] = "rank_order";
        result["prizes"] = prizes->prizes;
      } else {
        result = contest::to_json(contest::solve_symmetric_threshold(
            s.reward_scheme(), s.costs, s.n, s.dist, s.ranking, s.pool, solver_for(inputs, opts)));
      }
      finish(command, opts, inputs, result, std::nullopt);

    } else if (command == "design") {
      const auto plan = plan_for(inputs, opts, 10000);
      contest::ThresholdSearchResult search;
      if (s.endogenous()) {
        search = contest::optimal_endogenous_strategy(s, grid, plan).search;
      } else {
        search = contest::optimal_threshold(s.n, s.dist, s.utility, grid, plan, s.pool);
      }
      CsvTable table({"a_hat", "EV_mean", "EV_stderr"});
      json sweep = json::array();
      for (const auto& row : search.sweep) {
        table.add_row({row.a_hat, row.mean, row.std_error});
        sweep.push_back({{"a_hat", row.a_hat}, {"EV_mean", row.mean}, {"EV_stderr", row.std_error}});
      }
      json result{{"a_hat", search.a_hat},
                  {"EV_mean", search.value},
                  {"EV_stderr", search.std_error},
                  {"flat_tie", search.flat_tie},
                  {"effort", s.endogenous() ? 1.0 : 0.0},
                  {"sweep", sweep}};
      if (search.flat_tie) result["note"] = "several thresholds tie; the smallest is reported";
      finish(command, opts, inputs, result, table);

    } else if (command == "calibrate") {
      json result;
      if (inputs.raw.contains("mechanism")) {
        const auto mech = contest::mechanism_from_json(inputs.raw.at("mechanism"));
        const auto scale = contest::calibrate_general_scale(
            mech, target, s.rating_points(), s.costs, s.n, s.dist,
            opts.reps.value_or(20000), inputs.seed);
        result = {{"k", scale.k},
                  {"achieved_threshold", scale.achieved_threshold},
                  {"residual", scale.residual}};
      } else {
        result = contest::to_json(contest::calibrate_rewards(
            target, ratio, s.reward_scheme().p_R, s.costs, s.n, s.dist, s.ranking, s.pool,
            solver_for(inputs, opts)));
      }
      result["target"] = target;
      result["ratio"] = ratio;
      finish(command, opts, inputs, result, std::nullopt);

    } else if (command == "learn") {
      if (!s.costs.c_bar) throw UsageError("learn needs costs.c_bar in the config");
      const auto series = contest::run_contest_series(
          s.reward_scheme(), s.costs, s.n, s.dist, s.ranking, opts.reps.value_or(10000),
          contest::SimulationPlan{1, inputs.seed, 0});
      json result = contest::to_json(series);
      const auto estimate = contest::estimate_contribution_cost(
          series.f_hat, s.reward_scheme(), s.costs.c_R, s.n, s.dist, s.ranking, *s.costs.c_bar);
      result["c_C_hat"] = estimate.c_C;
      result["observed_threshold"] = estimate.observed_threshold;
      CsvTable table({"contest", "contributors"});
      for (std::size_t t = 0; t < series.counts.size(); ++t) {
        table.add_row({static_cast<double>(t), static_cast<double>(series.counts[t])});
      }
      finish(command, opts, inputs, result, table);

    } else if (command == "learn2") {
      const auto& rewards = s.reward_scheme();
      auto observed = [&](double p_B) {
        return contest::solve_symmetric_threshold({p_B, 0.0, rewards.p_R}, s.costs, s.n, s.dist,
                                                  s.ranking, std::nullopt,
                                                  solver_for(inputs, opts))
            .threshold;
      };
      const contest::ThresholdExperiment first{p_b1, observed(p_b1)};
      const contest::ThresholdExperiment second{p_b2, observed(p_b2)};
      const auto costs =
          contest::estimate_both_costs(first, second, rewards.p_R, s.n, s.dist, s.ranking);
      json result{{"experiments",
                   {{{"p_B", first.p_B}, {"threshold", first.observed_threshold}},
                    {{"p_B", second.p_B}, {"threshold", second.observed_threshold}}}},
                  {"c_C_hat", costs.c_C},
                  {"c_R_hat", costs.c_R}};
      finish(command, opts, inputs, result, std::nullopt);

    } else if (command == "asymmetric") {
      const auto* prizes = std::get_if<contest::RankPrizes>(&s.rewards);
      if (!prizes) throw UsageError("asymmetric needs rank_order rewards");
      const double beta = s.ranking.accuracy().value_or(1.0);
      const auto profile =
          contest::find_asymmetric_equilibrium(*prizes, beta, s.costs, prizes->p_R, s.n, s.dist);
      contest::VerifyOptions vopts;
      vopts.ability_grid = contest::verification_grid(profile.a_star, 21, 5);
      const auto report = contest::verify_equilibrium(profile.strategy_profile(s.n), s, vopts,
                                                      plan_for(inputs, opts, 100000));
      json result = contest::to_json(profile);
      result["verified"] = report.verified;
      result["verified_regret"] = report.max_regret;
      result["symmetric_threshold"] =
          contest::symmetric_rank_order_threshold(*prizes, beta, s.costs, prizes->p_R, s.n, s.dist);
      if (!report.verified) {
        throw contest::VerificationError("asymmetric profile failed verification",
                                         report.witness.ability, report.witness.regret);
      }
      finish(command, opts, inputs, result, std::nullopt);

    } else if (command == "endogenous-check") {
      contest::ConditionGrids grids;
      grids.weak_form = weak_form;
      json result{{"condition", contest::to_json(contest::effort_condition_holds(s, target, ratio,
                                                                                 grids))}};
      if (std::holds_alternative<contest::RankingModel::Perfect>(s.ranking.variant())) {
        result["deviation"] = contest::to_json(
            contest::perfect_ranking_undermines_effort(s, target, s.reward_scheme()));
      }
      finish(command, opts, inputs, result, std::nullopt);

    } else if (command == "endogenous-calibrate") {
      const auto cal = contest::calibrate_endogenous_rewards(
          target, ratio, s, plan_for(inputs, opts, 20000), solver_for(inputs, opts));
      json result{{"calibration", contest::to_json(cal.calibration)},
                  {"condition", contest::to_json(cal.condition)},
                  {"verification",
                   {{"verified", cal.verification.verified},
                    {"max_regret", cal.verification.max_regret}}}};
      finish(command, opts, inputs, result, std::nullopt);

    } else if (command == "simulate") {
      const double thr = threshold >= 0.0 ? threshold : solved_threshold(inputs, opts);
      const auto profile = symmetric_profile(s, thr, s.endogenous() ? effort : 0.0);
      const std::size_t contests = opts.reps.value_or(1000);
      const auto plan = plan_for(inputs, opts, contests);
      CsvTable table({"contest", "contributors", "raters", "total_points"});
      double contributors = 0.0;
      for (std::size_t t = 0; t < contests; ++t) {
        contest::Stream stream = plan.stream_for(t);
        const auto outcome = contest::simulate_contest(profile, s, stream);
        contributors += static_cast<double>(outcome.contributors);
        table.add_row({static_cast<double>(t), static_cast<double>(outcome.contributors),
                       static_cast<double>(outcome.raters), outcome.total_points()});
      }
      json result{{"threshold", thr},
                  {"contests", contests},
                  {"mean_contributors", contributors / static_cast<double>(contests)}};
      finish(command, opts, inputs, result, table);

    } else if (command == "verify") {
      const double thr = threshold >= 0.0 ? threshold : solved_threshold(inputs, opts);
      const auto profile = symmetric_profile(s, thr, s.endogenous() ? effort : 0.0);
      contest::VerifyOptions vopts;
      vopts.ability_grid = contest::verification_grid(thr, 21, 5);
      if (s.endogenous()) vopts.effort_grid = contest::uniform_grid(21);
      const auto report = contest::verify_equilibrium(profile, s, vopts,
                                                      plan_for(inputs, opts, 20000));
      json result = contest::to_json(report);
      result["threshold"] = thr;
      if (!report.verified) {
        json error{{"error", "verification_failed"},
                   {"message", "profile is not an equilibrium within tolerance"},
                   {"report", result}};
        std::cout << error.dump(2) << "\n";
        return 1;
      }
      finish(command, opts, inputs, result, std::nullopt);

    } else if (command == "schedule") {
      if (n_max < n_min) throw UsageError("--n-max must be >= --n-min");
      std::vector<std::size_t> ns;
      for (std::size_t n = n_min; n <= n_max; ++n) ns.push_back(n);
      const auto rows = contest::reward_schedule_vs_n(target, ratio, s.reward_scheme().p_R,
                                                      s.costs, s.dist, s.ranking, ns);
      CsvTable table({"n", "p_B", "p_C", "residual"});
      json list = json::array();
      for (const auto& row : rows) {
        table.add_row({static_cast<double>(row.n), row.p_B, row.p_C, row.residual});
        list.push_back({{"n", row.n}, {"p_B", row.p_B}, {"p_C", row.p_C},
                        {"residual", row.residual}});
      }
      finish(command, opts, inputs, json{{"rows", list}, {"target", target}, {"ratio", ratio}},
             table);
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const contest::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const contest::VerificationError& e) {
    json error{{"error", "verification_failed"},
               {"message", e.what()},
               {"witness_ability", e.witness_ability()},
               {"regret", e.regret()}};
    std::cout << error.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::string kind = "domain_error";
    if (dynamic_cast<const contest::InfeasibleError*>(&e)) kind = "infeasible";
    if (dynamic_cast<const contest::PreconditionError*>(&e)) kind = "precondition";
    if (dynamic_cast<const contest::UnidentifiableError*>(&e)) kind = "unidentifiable";
    if (dynamic_cast<const contest::DegenerateError*>(&e)) kind = "degenerate";
    json error{{"error", kind}, {"message", e.what()}};
    std::cout << error.dump(2) << "\n";
    return 1;
  }
}
