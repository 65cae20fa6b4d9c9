// idtrack: simulate intruder tracking under an energy budget.
//
//   idtrack run    --scenario line41 --algo id_gamma_mcts --lambda 0.3 --out run.csv
//   idtrack sweep  --scenario grid8 --algo q_mdp --lambdas 0,0.1,0.2 --runs 10 --out sweep.csv
//   idtrack oracle-check --seed 7

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idtrack/csv.hpp"
#include "idtrack/errors.hpp"
#include "idtrack/oracle.hpp"
#include "idtrack/scenario.hpp"
#include "idtrack/sweep.hpp"

namespace {

struct CommonOptions {
  std::string scenario = "line41";
  std::string algo = "id_gamma_mcts";
  double gamma = 0.6;
  std::size_t iterations = 500;
  std::size_t max_depth = 15;
  double uct_c = 2.0;
  std::optional<std::size_t> horizon;
  std::optional<std::size_t> restart_threshold;
  bool no_restart = false;
  bool reveal_state = false;
  std::size_t support_cap = idtrack::kDefaultSupportCap;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--scenario", o.scenario, "Preset (line41|grid8|grid16) or JSON file")->required();
  cmd->add_option("--algo", o.algo, "id_tg | id_mcts | id_gamma_mcts | q_mdp")
      ->required()
      ->check(CLI::IsMember({"id_tg", "id_mcts", "id_gamma_mcts", "q_mdp"}));
  cmd->add_option("--gamma", o.gamma, "Confidence index for id_tg")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--iterations", o.iterations, "MCTS iterations per decision");
  cmd->add_option("--max-depth", o.max_depth, "MCTS depth cutoff");
  cmd->add_option("--uct-c", o.uct_c, "UCT exploration constant");
  cmd->add_option("--horizon", o.horizon, "Periods per episode");
  cmd->add_option("--restart-threshold", o.restart_threshold, "Belief support that triggers a restart");
  cmd->add_flag("--no-restart", o.no_restart, "Disable the restart mechanism");
  cmd->add_flag("--reveal-state", o.reveal_state, "Reveal the intruder position after every period");
  cmd->add_option("--support-cap", o.support_cap, "Largest support id_mcts will enumerate");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--out", o.out, "Output CSV path ('-' for stdout)")->required();
}

std::vector<double> parse_lambdas(const std::string& text) {
  std::vector<double> out;
  // start:step:end
  if (text.find(':') != std::string::npos) {
    std::istringstream in(text);
    double lo = 0, step = 0, hi = 0;
    char c1 = 0, c2 = 0;
    if (!(in >> lo >> c1 >> step >> c2 >> hi) || c1 != ':' || c2 != ':' || !(step > 0.0))
      throw idtrack::ConfigError("lambda range must look like start:step:end");
    for (int k = 0;; ++k) {
      const double v = lo + step * k;
      if (v > hi + 1e-9) break;
      out.push_back(std::min(v, hi));
    }
    return out;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw idtrack::ConfigError("bad lambda value '" + item + "'");
    }
  }
  return out;
}

int execute(const CommonOptions& o, std::vector<double> lambdas, std::size_t runs,
            std::optional<double> budget) {
  idtrack::Scenario scenario = idtrack::load_scenario(o.scenario);
  if (o.horizon) scenario.horizon = *o.horizon;
  if (o.restart_threshold) scenario.restart_threshold = *o.restart_threshold;
  if (o.no_restart) scenario.restart_enabled = false;
  if (o.reveal_state) scenario.reveal_state = true;

  idtrack::SweepSpec sweep;
  sweep.lambdas = std::move(lambdas);
  sweep.runs_per_lambda = runs;
  sweep.budget = budget;
  sweep.seed = o.seed;
  sweep.threads = o.threads;
  sweep.planner.algo = idtrack::parse_algorithm(o.algo);
  sweep.planner.gamma = o.gamma;
  sweep.planner.search.iterations = o.iterations;
  sweep.planner.search.max_depth = o.max_depth;
  sweep.planner.search.uct_c = o.uct_c;
  sweep.planner.support_cap = o.support_cap;

  const auto rows = idtrack::run_sweep(scenario, sweep);
  const idtrack::CsvContext ctx{scenario.name, o.algo, scenario.horizon, o.seed};
  if (o.out == "-") {
    idtrack::write_csv(std::cout, ctx, rows);
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw idtrack::ConfigError("cannot write '" + o.out + "'");
    idtrack::write_csv(file, ctx, rows);
  }

  if (budget) {
    try {
      std::cerr << "selected lambda for budget " << *budget << ": "
                << idtrack::select_lambda(rows, *budget) << '\n';
    } catch (const idtrack::InfeasibleBudgetError& e) {
      std::cerr << e.what() << '\n';
      return 3;
    }
  }
  return 0;
}

int oracle_check(std::uint64_t seed, std::size_t iterations) {
  idtrack::SearchConfig config;
  config.iterations = iterations;
  std::size_t matches = 0;
  bool values_ok = true;
  const auto cases = idtrack::oracle_cases(seed);
  for (std::size_t k = 0; k < cases.size(); ++k) {
    config.seed = idtrack::derive_seed(seed, 1, k);
    const auto cmp = idtrack::compare_with_oracle(cases[k], config);
    matches += cmp.match ? 1 : 0;
    if (cmp.match && cmp.relative_error > 0.10) values_ok = false;
    std::cout << "case " << k << " lambda=" << cases[k].params.lambda
              << " oracle=" << cmp.oracle.action.to_string() << " (" << cmp.oracle.value << ")"
              << " search=" << cmp.search_action.to_string() << " (" << cmp.search_value << ")"
              << " rel_err=" << cmp.relative_error << (cmp.match ? "" : "  MISMATCH") << '\n';
  }
  const bool ok = matches >= 9 && values_ok;
  std::cout << matches << "/" << cases.size() << " root actions match; "
            << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware intruder tracking simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  double lambda = 0.0;
  auto* run = app.add_subcommand("run", "Simulate one episode at a single lambda");
  add_common(run, run_opts);
  run->add_option("--lambda", lambda, "Energy price per powered sensor")->required()->check(CLI::Range(0.0, 1.0));

  CommonOptions sweep_opts;
  std::string lambdas_text;
  std::size_t runs = 10;
  std::optional<double> budget;
  auto* sweep = app.add_subcommand("sweep", "Average several episodes over a lambda grid");
  add_common(sweep, sweep_opts);
  sweep->add_option("--lambdas", lambdas_text, "Comma list or start:step:end")->required();
  sweep->add_option("--runs", runs, "Episodes per lambda");
  sweep->add_option("--budget", budget, "Report the best lambda within this many sensors awake");

  std::uint64_t oracle_seed = 0;
  std::size_t oracle_iterations = 50000;
  auto* oracle = app.add_subcommand("oracle-check", "Compare MCTS against exact expectimax");
  oracle->add_option("--seed", oracle_seed, "Instance seed");
  oracle->add_option("--iterations", oracle_iterations, "MCTS iterations per instance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return execute(run_opts, {lambda}, 1, std::nullopt);
    if (*sweep) return execute(sweep_opts, parse_lambdas(lambdas_text), runs, budget);
    if (*oracle) return oracle_check(oracle_seed, oracle_iterations);
  } catch (const idtrack::Error& e) {
    std::cerr << "idtrack: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
