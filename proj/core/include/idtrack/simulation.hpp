#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "idtrack/belief.hpp"
#include "idtrack/model.hpp"
#include "idtrack/planners.hpp"
#include "idtrack/rng.hpp"

namespace idtrack {

enum class InitialBelief {
  KnownStart,  ///< e_start
  Uniform,     ///< uniform over live positions
};

struct Scenario {
  std::string name;
  std::shared_ptr<const TransitionModel> model;
  Position start = 0;
  std::size_t horizon = 30;
  std::size_t restart_threshold = 14;
  bool restart_enabled = true;
  InitialBelief prior = InitialBelief::KnownStart;
  /// Observation-after-control: the controller learns the true position
  /// after every period regardless of which sensors were on.
  bool reveal_state = false;

  void validate() const;
};

struct EpisodeMetrics {
  std::size_t periods = 0;
  std::size_t sensors_on_total = 0;
  std::size_t untracked_periods = 0;
  double total_discounted_cost = 0.0;
  std::size_t restarts = 0;
  /// Miss observations whose projection left no mass under the planner's model.
  std::size_t model_mismatches = 0;
  double gamma_sum = 0.0;
  std::size_t gamma_decisions = 0;

  double avg_sensors_awake() const;
  double avg_tracking_error() const;
  std::optional<double> gamma_mean() const;
};

struct StepResult {
  Position next_state;
  Observation obs;
};

/// Samples the intruder's move from row `state` and derives the observation.
StepResult step(Position state, const TransitionModel& model, const ActionMask& action, Rng& rng);

/// Runs one episode of at most `scenario.horizon` periods (stopping early on
/// exit). Decisions pass through the restart wrapper configured by the
/// scenario. The environment stream is seeded with `seed`.
EpisodeMetrics run_episode(const Scenario& scenario, Planner& planner, const CostParams& params,
                           std::uint64_t seed);

}  // namespace idtrack
