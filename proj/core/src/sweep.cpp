#include "idtrack/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "idtrack/errors.hpp"
#include "idtrack/rng.hpp"

namespace idtrack {

std::string_view algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::IdTg:
      return "id_tg";
    case Algorithm::IdMcts:
      return "id_mcts";
    case Algorithm::IdGammaMcts:
      return "id_gamma_mcts";
    case Algorithm::Qmdp:
      return "q_mdp";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "id_tg") return Algorithm::IdTg;
  if (name == "id_mcts") return Algorithm::IdMcts;
  if (name == "id_gamma_mcts") return Algorithm::IdGammaMcts;
  if (name == "q_mdp") return Algorithm::Qmdp;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

std::unique_ptr<Planner> make_planner(const PlannerSpec& spec, const TransitionModel& model,
                                      const CostParams& params, std::uint64_t seed) {
  SearchConfig search = spec.search;
  search.discount = params.discount;
  search.seed = seed;
  switch (spec.algo) {
    case Algorithm::IdTg:
      return std::make_unique<IdTgPlanner>(model, spec.gamma);
    case Algorithm::Qmdp:
      return std::make_unique<QmdpPlanner>(model, params.lambda);
    case Algorithm::IdMcts:
      return std::make_unique<IdMctsPlanner>(model, search, params, spec.support_cap);
    case Algorithm::IdGammaMcts:
      return std::make_unique<IdGammaMctsPlanner>(model, search, params, spec.grid);
  }
  throw ConfigError("unknown algorithm");
}

void SweepSpec::validate() const {
  if (lambdas.empty()) throw ConfigError("sweep needs at least one lambda");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] >= 0.0 && lambdas[i] <= 1.0)) throw ConfigError("lambda values must lie in [0, 1]");
    if (i > 0 && lambdas[i] < lambdas[i - 1]) throw ConfigError("lambdas must be sorted ascending");
  }
  if (runs_per_lambda == 0) throw ConfigError("runs per lambda must be >= 1");
  if (budget && !(*budget > 0.0)) throw ConfigError("budget must be positive");
}

std::uint64_t episode_seed(std::uint64_t master, std::size_t lambda_index, std::size_t run) {
  return derive_seed(master, lambda_index, run);
}

std::uint64_t planner_seed(std::uint64_t episode) { return splitmix64(episode ^ 0xa0761d6478bd642fULL); }

std::vector<SweepRow> run_sweep(const Scenario& scenario, const SweepSpec& sweep) {
  scenario.validate();
  sweep.validate();
  const std::size_t runs = sweep.runs_per_lambda;
  const std::size_t total = sweep.lambdas.size() * runs;
  std::vector<EpisodeMetrics> results(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job = next.fetch_add(1); job < total; job = next.fetch_add(1)) {
      try {
        const std::size_t j = job / runs;
        const std::size_t i = job % runs;
        const CostParams params{sweep.lambdas[j], sweep.discount};
        const std::uint64_t seed = episode_seed(sweep.seed, j, i);
        auto planner = make_planner(sweep.planner, *scenario.model, params, planner_seed(seed));
        results[job] = run_episode(scenario, *planner, params, seed);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
      }
    }
  };

  std::size_t threads = sweep.threads != 0 ? sweep.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, total);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRow> rows;
  rows.reserve(sweep.lambdas.size());
  for (std::size_t j = 0; j < sweep.lambdas.size(); ++j) {
    SweepRow row;
    row.lambda = sweep.lambdas[j];
    row.runs = runs;
    double gamma_sum = 0.0;
    std::size_t gamma_runs = 0;
    for (std::size_t i = 0; i < runs; ++i) {
      const EpisodeMetrics& m = results[j * runs + i];
      row.avg_sensors_awake += m.avg_sensors_awake();
      row.avg_tracking_error += m.avg_tracking_error();
      row.restarts += m.restarts;
      if (auto g = m.gamma_mean()) {
        gamma_sum += *g;
        ++gamma_runs;
      }
    }
    row.avg_sensors_awake /= static_cast<double>(runs);
    row.avg_tracking_error /= static_cast<double>(runs);
    if (gamma_runs > 0) row.gamma_mean = gamma_sum / static_cast<double>(gamma_runs);
    rows.push_back(row);
  }
  return rows;
}

double select_lambda(std::span<const SweepRow> rows, double budget) {
  if (rows.empty()) throw ConfigError("select_lambda on an empty sweep");
  const SweepRow* best = nullptr;
  for (const SweepRow& row : rows) {
    if (row.avg_sensors_awake > budget) continue;
    if (!best || row.avg_tracking_error < best->avg_tracking_error ||
        (row.avg_tracking_error == best->avg_tracking_error && row.lambda < best->lambda))
      best = &row;
  }
  if (!best) throw InfeasibleBudgetError("no lambda meets the energy budget");
  return best->lambda;
}

}  // namespace idtrack
