#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "idtrack/model.hpp"

namespace idtrack {

/// Entries below this after normalization are truncated to zero.
inline constexpr double kBeliefFloor = 1e-12;
/// Default threshold for counting a position as part of the belief support.
inline constexpr double kSupportEpsilon = 1e-9;

/// Posterior over the intruder position; the last entry is the exit state.
class Belief {
 public:
  /// Validates non-negativity and unit mass.
  explicit Belief(std::vector<double> probs);

  /// Unit vector on `index` (which may be the exit index `sensors`).
  static Belief unit(std::size_t sensors, std::size_t index);
  /// Uniform over the live positions, zero on exit.
  static Belief uniform(std::size_t sensors);

  std::size_t dim() const noexcept { return probs_.size(); }
  std::size_t sensors() const noexcept { return probs_.size() - 1; }
  std::size_t exit_index() const noexcept { return probs_.size() - 1; }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }

  /// Most probable entry (exit included), ties to the lowest index.
  std::size_t argmax() const noexcept;
  /// Most probable live position, ties to the lowest index.
  Position argmax_position() const noexcept;

 private:
  struct Trusted {};
  Belief(std::vector<double> probs, Trusted) : probs_(std::move(probs)) {}

  friend Belief normalize_trusted(std::vector<double> v);

  std::vector<double> probs_;
};

/// Zeroes `zero_set` entries of `v`, rescales to unit mass and applies the
/// numerical floor. Throws DegenerateProjectionError when nothing survives.
Belief project_and_normalize(std::span<const double> v, std::span<const std::size_t> zero_set);

/// One-step prediction p * P.
Belief predict(const Belief& p, const TransitionModel& model);

/// Exact filter: Exited -> e_exit, Tracked(l) -> e_l, Miss -> [pP] with every
/// powered sensor and the exit state zeroed.
Belief belief_update(const Belief& p, const TransitionModel& model, const ActionMask& action,
                     const Observation& obs);

/// Miss-branch update given an already computed prediction.
Belief miss_update(const Belief& predicted, const ActionMask& action);

/// Number of live positions carrying probability strictly above `eps`.
std::size_t support_size(const Belief& p, double eps = kSupportEpsilon);

}  // namespace idtrack
