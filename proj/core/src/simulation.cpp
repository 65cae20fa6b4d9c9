#include "idtrack/simulation.hpp"

#include <cmath>

#include "idtrack/errors.hpp"

namespace idtrack {

void Scenario::validate() const {
  if (!model) throw ConfigError("scenario has no transition model");
  if (start >= model->sensors()) throw ConfigError("scenario start must be a live position");
  if (horizon == 0) throw ConfigError("scenario horizon must be >= 1");
  if (restart_threshold == 0) throw ConfigError("restart threshold must be >= 1");
}

double EpisodeMetrics::avg_sensors_awake() const {
  return periods == 0 ? 0.0 : static_cast<double>(sensors_on_total) / static_cast<double>(periods);
}

double EpisodeMetrics::avg_tracking_error() const {
  return periods == 0 ? 0.0 : static_cast<double>(untracked_periods) / static_cast<double>(periods);
}

std::optional<double> EpisodeMetrics::gamma_mean() const {
  if (gamma_decisions == 0) return std::nullopt;
  return gamma_sum / static_cast<double>(gamma_decisions);
}

StepResult step(Position state, const TransitionModel& model, const ActionMask& action, Rng& rng) {
  if (state >= model.sensors()) throw InvalidStateError("step from a non-live state");
  const Position next = model.sample_next(state, uniform01(rng));
  if (next == model.exit_index()) return {next, Observation::exited()};
  if (action.on(next)) return {next, Observation::tracked(next)};
  return {next, Observation::miss()};
}

EpisodeMetrics run_episode(const Scenario& scenario, Planner& planner, const CostParams& params,
                           std::uint64_t seed) {
  scenario.validate();
  params.validate();
  const TransitionModel& model = *scenario.model;
  RestartPlanner policy(planner, model, scenario.restart_threshold, scenario.restart_enabled);
  Rng rng(seed);

  Belief belief = scenario.prior == InitialBelief::KnownStart
                      ? Belief::unit(model.sensors(), scenario.start)
                      : Belief::uniform(model.sensors());
  Position state = scenario.start;
  EpisodeMetrics m;
  double weight = 1.0;

  for (std::size_t k = 0; k < scenario.horizon; ++k) {
    const ActionMask action = policy.next_action(belief);
    if (policy.last_restarted()) ++m.restarts;
    if (auto g = policy.last_gamma()) {
      m.gamma_sum += *g;
      ++m.gamma_decisions;
    }

    const StepResult outcome = step(state, model, action, rng);
    m.periods += 1;
    m.sensors_on_total += energy_cost(action);
    m.untracked_periods += static_cast<std::size_t>(tracking_cost(action, outcome.next_state));
    m.total_discounted_cost += weight * relaxed_cost(action, outcome.next_state, params);
    weight *= params.discount;

    if (outcome.obs.is_exited()) break;

    if (scenario.reveal_state) {
      belief = Belief::unit(model.sensors(), outcome.next_state);
    } else {
      try {
        belief = belief_update(belief, model, action, outcome.obs);
      } catch (const DegenerateProjectionError&) {
        // Model mismatch: keep the prediction without zeroing.
        ++m.model_mismatches;
        belief = predict(belief, model);
      }
    }
    state = outcome.next_state;
  }
  return m;
}

}  // namespace idtrack
