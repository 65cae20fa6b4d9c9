#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idtrack/mcts.hpp"
#include "idtrack/planners.hpp"
#include "idtrack/simulation.hpp"

namespace idtrack {

enum class Algorithm { IdTg, IdMcts, IdGammaMcts, Qmdp };

std::string_view algorithm_name(Algorithm algo);
Algorithm parse_algorithm(std::string_view name);

struct PlannerSpec {
  Algorithm algo = Algorithm::IdGammaMcts;
  double gamma = 0.6;  ///< ID_TG only
  SearchConfig search;
  std::size_t support_cap = kDefaultSupportCap;
  GammaGrid grid = GammaGrid::standard();
};

/// Builds a fresh planner for one episode. The search discount follows
/// `params.discount`; `seed` seeds the planner's own stream.
std::unique_ptr<Planner> make_planner(const PlannerSpec& spec, const TransitionModel& model,
                                      const CostParams& params, std::uint64_t seed);

struct SweepSpec {
  std::vector<double> lambdas;
  std::size_t runs_per_lambda = 10;
  std::optional<double> budget;
  PlannerSpec planner;
  std::uint64_t seed = 0;
  double discount = 0.9;
  /// 0 = hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
};

struct SweepRow {
  double lambda = 0.0;
  double avg_sensors_awake = 0.0;
  double avg_tracking_error = 0.0;
  std::optional<double> gamma_mean;
  std::size_t runs = 0;
  std::size_t restarts = 0;
};

/// Environment and planner seeds for run `run` of lambda index `lambda_index`.
std::uint64_t episode_seed(std::uint64_t master, std::size_t lambda_index, std::size_t run);
std::uint64_t planner_seed(std::uint64_t episode_seed);

/// Runs every (lambda, run) episode, in parallel, and averages the headline
/// metrics per lambda. The result depends only on the spec, not on threading.
std::vector<SweepRow> run_sweep(const Scenario& scenario, const SweepSpec& sweep);

/// Among rows within budget, the lambda with the lowest tracking error
/// (ties to the smaller lambda). Throws InfeasibleBudgetError if none fit.
double select_lambda(std::span<const SweepRow> rows, double budget);

}  // namespace idtrack
