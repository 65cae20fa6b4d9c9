#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace idtrack {

/// Grid position index. Positions are 0..n-1; index n is the exit state.
using Position = std::size_t;

/// Tolerance used for every row-sum and belief-sum check.
inline constexpr double kProbabilityTolerance = 1e-9;

/// Which sensors are powered for the next period.
class ActionMask {
 public:
  ActionMask() = default;
  explicit ActionMask(std::size_t sensors) : bits_(sensors, 0) {}

  static ActionMask none(std::size_t sensors) { return ActionMask(sensors); }
  static ActionMask all(std::size_t sensors);
  static ActionMask from_positions(std::size_t sensors, std::span<const Position> on);
  static ActionMask from_bits(std::span<const int> bits);

  std::size_t size() const noexcept { return bits_.size(); }
  bool on(Position l) const { return bits_.at(l) != 0; }
  void set(Position l, bool value = true) { bits_.at(l) = value ? 1 : 0; }
  std::size_t count() const noexcept;
  std::vector<Position> on_positions() const;
  std::string to_string() const;

  bool operator==(const ActionMask&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// What the controller learns at the end of a period.
class Observation {
 public:
  enum class Kind : std::uint8_t { Tracked, Miss, Exited };

  static Observation tracked(Position l) { return Observation(Kind::Tracked, l); }
  static Observation miss() { return Observation(Kind::Miss, 0); }
  static Observation exited() { return Observation(Kind::Exited, 0); }

  Kind kind() const noexcept { return kind_; }
  bool is_tracked() const noexcept { return kind_ == Kind::Tracked; }
  bool is_miss() const noexcept { return kind_ == Kind::Miss; }
  bool is_exited() const noexcept { return kind_ == Kind::Exited; }
  /// Only meaningful for Tracked.
  Position position() const noexcept { return position_; }

  bool operator==(const Observation&) const = default;

 private:
  Observation(Kind kind, Position position) : kind_(kind), position_(position) {}

  Kind kind_;
  Position position_;
};

/// Relaxed single-stage cost weights.
struct CostParams {
  double lambda = 0.0;    ///< price per powered sensor, in [0, 1]
  double discount = 0.9;  ///< in (0, 1)

  void validate() const;
};

/// n positions in a row; the intruder moves at most max_step cells per period.
/// `kernel` (optional) weights offsets -max_step..+max_step; empty means uniform.
struct Line1D {
  std::size_t n = 0;
  std::size_t max_step = 1;
  std::vector<double> kernel;
};

/// rows x cols grid with 8-connected moves and random weights.
struct Grid2D {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

using Topology = std::variant<Line1D, Grid2D>;

/// Row-stochastic (n+1)x(n+1) movement matrix with absorbing exit state.
/// Keeps both a dense copy and a sparse per-row view, since beliefs are
/// propagated many times per search.
class TransitionModel {
 public:
  struct Entry {
    Position to;
    double prob;
  };

  /// `dense` is row-major with (n+1)^2 entries; validated on construction.
  TransitionModel(std::size_t sensors, std::vector<double> dense);

  std::size_t sensors() const noexcept { return n_; }
  std::size_t dim() const noexcept { return n_ + 1; }
  Position exit_index() const noexcept { return n_; }

  double operator()(Position from, Position to) const { return dense_[from * dim() + to]; }
  std::span<const Entry> row(Position from) const;
  std::span<const double> dense() const noexcept { return dense_; }

  /// Samples the next state given a uniform draw u in [0, 1).
  Position sample_next(Position from, double u) const;

 private:
  std::size_t n_;
  std::vector<double> dense_;
  std::vector<std::size_t> row_begin_;
  std::vector<Entry> entries_;
};

/// 1 if the intruder lands on a live position whose sensor is off, else 0.
int tracking_cost(const ActionMask& action, Position next_state);

/// Number of powered sensors.
std::size_t energy_cost(const ActionMask& action) noexcept;

/// tracking_cost + lambda * energy_cost.
double relaxed_cost(const ActionMask& action, Position next_state, const CostParams& params);

TransitionModel build_line_model(std::size_t n, std::size_t max_step, double exit_prob,
                                 std::span<const double> kernel = {});

/// Weights over the in-grid 8-neighbourhood are drawn from a generator seeded
/// with `seed`, so the same seed always yields the same matrix.
TransitionModel build_grid_model(std::size_t rows, std::size_t cols, double exit_prob,
                                 std::uint64_t seed);

TransitionModel build_model(const Topology& topology, double exit_prob, std::uint64_t seed);

std::size_t topology_sensors(const Topology& topology);

}  // namespace idtrack
