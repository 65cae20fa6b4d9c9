#include "idtrack/belief.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "idtrack/errors.hpp"

namespace idtrack {

Belief normalize_trusted(std::vector<double> v) {
  double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (!(total > 0.0)) throw DegenerateProjectionError("belief has no remaining mass");
  bool floored = false;
  for (double& x : v) {
    x /= total;
    if (x < kBeliefFloor && x != 0.0) {
      x = 0.0;
      floored = true;
    }
  }
  if (floored) {
    total = std::accumulate(v.begin(), v.end(), 0.0);
    for (double& x : v) x /= total;
  }
  return Belief(std::move(v), Belief::Trusted{});
}

Belief::Belief(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) throw InvalidBeliefError("belief needs at least one position plus exit");
  double total = 0.0;
  for (double x : probs_) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidBeliefError("belief entries must be non-negative");
    total += x;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance)
    throw InvalidBeliefError("belief must sum to one");
}

Belief Belief::unit(std::size_t sensors, std::size_t index) {
  if (index > sensors) throw InvalidStateError("unit belief index out of range");
  std::vector<double> v(sensors + 1, 0.0);
  v[index] = 1.0;
  return Belief(std::move(v), Trusted{});
}

Belief Belief::uniform(std::size_t sensors) {
  if (sensors == 0) throw InvalidBeliefError("uniform belief needs at least one position");
  std::vector<double> v(sensors + 1, 1.0 / static_cast<double>(sensors));
  v[sensors] = 0.0;
  return Belief(std::move(v), Trusted{});
}

std::size_t Belief::argmax() const noexcept {
  return static_cast<std::size_t>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

Position Belief::argmax_position() const noexcept {
  const auto live = probs().first(sensors());
  return static_cast<Position>(std::max_element(live.begin(), live.end()) - live.begin());
}

Belief project_and_normalize(std::span<const double> v, std::span<const std::size_t> zero_set) {
  std::vector<double> out(v.begin(), v.end());
  for (double x : out)
    if (!(x >= 0.0)) throw InvalidBeliefError("projection input must be non-negative");
  for (std::size_t i : zero_set) {
    if (i >= out.size()) throw InvalidStateError("zero-set index out of range");
    out[i] = 0.0;
  }
  if (out.size() < 2) throw InvalidBeliefError("belief needs at least one position plus exit");
  return normalize_trusted(std::move(out));
}

Belief predict(const Belief& p, const TransitionModel& model) {
  if (p.dim() != model.dim()) throw InvalidBeliefError("belief and model dimensions differ");
  std::vector<double> out(p.dim(), 0.0);
  const auto probs = p.probs();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double w = probs[i];
    if (w == 0.0) continue;
    for (const auto& e : model.row(i)) out[e.to] += w * e.prob;
  }
  return normalize_trusted(std::move(out));
}

Belief miss_update(const Belief& predicted, const ActionMask& action) {
  if (action.size() != predicted.sensors()) throw InvalidStateError("mask length differs from sensor count");
  std::vector<double> out(predicted.probs().begin(), predicted.probs().end());
  for (std::size_t l = 0; l < action.size(); ++l)
    if (action.on(l)) out[l] = 0.0;
  // Exit is always observed, so a miss rules it out.
  out.back() = 0.0;
  return normalize_trusted(std::move(out));
}

Belief belief_update(const Belief& p, const TransitionModel& model, const ActionMask& action,
                     const Observation& obs) {
  if (action.size() != model.sensors()) throw InvalidStateError("mask length differs from sensor count");
  switch (obs.kind()) {
    case Observation::Kind::Exited:
      return Belief::unit(model.sensors(), model.exit_index());
    case Observation::Kind::Tracked:
      if (obs.position() >= model.sensors()) throw InvalidStateError("tracked position out of range");
      if (!action.on(obs.position()))
        throw InconsistentObservationError("tracked at a position whose sensor was off");
      return Belief::unit(model.sensors(), obs.position());
    case Observation::Kind::Miss:
      break;
  }
  return miss_update(predict(p, model), action);
}

std::size_t support_size(const Belief& p, double eps) {
  const auto probs = p.probs().first(p.sensors());
  return static_cast<std::size_t>(
      std::count_if(probs.begin(), probs.end(), [eps](double x) { return x > eps; }));
}

}  // namespace idtrack
