#include "idtrack/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "idtrack/errors.hpp"
#include "idtrack/rng.hpp"

namespace idtrack {

ActionMask ActionMask::all(std::size_t sensors) {
  ActionMask mask(sensors);
  std::fill(mask.bits_.begin(), mask.bits_.end(), std::uint8_t{1});
  return mask;
}

ActionMask ActionMask::from_positions(std::size_t sensors, std::span<const Position> on) {
  ActionMask mask(sensors);
  for (Position l : on) {
    if (l >= sensors) throw InvalidStateError("sensor index out of range");
    mask.bits_[l] = 1;
  }
  return mask;
}

ActionMask ActionMask::from_bits(std::span<const int> bits) {
  ActionMask mask(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) mask.bits_[i] = bits[i] != 0 ? 1 : 0;
  return mask;
}

std::size_t ActionMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<Position> ActionMask::on_positions() const {
  std::vector<Position> out;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(i);
  return out;
}

std::string ActionMask::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

void CostParams::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
  if (!(discount > 0.0 && discount < 1.0)) throw ConfigError("discount must lie in (0, 1)");
}

TransitionModel::TransitionModel(std::size_t sensors, std::vector<double> dense)
    : n_(sensors), dense_(std::move(dense)) {
  if (n_ == 0) throw InvalidModelError("transition model needs at least one sensor");
  const std::size_t d = dim();
  if (dense_.size() != d * d) throw InvalidModelError("transition matrix must be (n+1)x(n+1)");

  row_begin_.reserve(d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    row_begin_.push_back(entries_.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double p = dense_[i * d + j];
      if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream msg;
        msg << "transition entry (" << i << ',' << j << ") = " << p << " outside [0, 1]";
        throw InvalidModelError(msg.str());
      }
      sum += p;
      if (p > 0.0) entries_.push_back({j, p});
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
      std::ostringstream msg;
      msg << "transition row " << i << " sums to " << sum;
      throw InvalidModelError(msg.str());
    }
  }
  row_begin_.push_back(entries_.size());

  if (dense_[n_ * d + n_] != 1.0) throw InvalidModelError("exit state must be absorbing");
}

std::span<const TransitionModel::Entry> TransitionModel::row(Position from) const {
  if (from >= dim()) throw InvalidStateError("row index out of range");
  return std::span<const Entry>(entries_).subspan(row_begin_[from],
                                                  row_begin_[from + 1] - row_begin_[from]);
}

Position TransitionModel::sample_next(Position from, double u) const {
  const auto entries = row(from);
  double acc = 0.0;
  for (const auto& e : entries) {
    acc += e.prob;
    if (u < acc) return e.to;
  }
  // Round-off can leave acc a hair below u; fall back to the last support point.
  return entries.back().to;
}

int tracking_cost(const ActionMask& action, Position next_state) {
  const std::size_t n = action.size();
  if (next_state > n) throw InvalidStateError("next state index beyond exit state");
  if (next_state == n) return 0;
  return action.on(next_state) ? 0 : 1;
}

std::size_t energy_cost(const ActionMask& action) noexcept { return action.count(); }

double relaxed_cost(const ActionMask& action, Position next_state, const CostParams& params) {
  return static_cast<double>(tracking_cost(action, next_state)) +
         params.lambda * static_cast<double>(energy_cost(action));
}

namespace {

void check_exit_prob(double exit_prob) {
  if (!(exit_prob >= 0.0 && exit_prob < 1.0)) throw ConfigError("exit_prob must lie in [0, 1)");
}

}  // namespace

TransitionModel build_line_model(std::size_t n, std::size_t max_step, double exit_prob,
                                 std::span<const double> kernel) {
  check_exit_prob(exit_prob);
  if (max_step == 0) throw ConfigError("max_step must be positive");
  if (n < 2 * max_step + 1) throw ConfigError("line model needs n >= 2*max_step + 1");

  const std::size_t width = 2 * max_step + 1;
  std::vector<double> weights(width, 1.0);
  if (!kernel.empty()) {
    if (kernel.size() != width) throw InvalidKernelError("kernel length must be 2*max_step + 1");
    for (double w : kernel)
      if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidKernelError("kernel weights must be non-negative");
    weights.assign(kernel.begin(), kernel.end());
  }

  const std::size_t d = n + 1;
  std::vector<double> dense(d * d, 0.0);
  const auto step = static_cast<std::ptrdiff_t>(max_step);
  for (std::size_t i = 0; i < n; ++i) {
    double in_range = 0.0;
    for (std::ptrdiff_t off = -step; off <= step; ++off) {
      const auto j = static_cast<std::ptrdiff_t>(i) + off;
      if (j >= 0 && j < static_cast<std::ptrdiff_t>(n)) in_range += weights[off + step];
    }
    if (in_range <= 0.0) throw InvalidKernelError("kernel leaves a row with no in-range mass");
    for (std::ptrdiff_t off = -step; off <= step; ++off) {
      const auto j = static_cast<std::ptrdiff_t>(i) + off;
      if (j >= 0 && j < static_cast<std::ptrdiff_t>(n))
        dense[i * d + static_cast<std::size_t>(j)] = (1.0 - exit_prob) * weights[off + step] / in_range;
    }
    dense[i * d + n] = exit_prob;
  }
  dense[n * d + n] = 1.0;
  return TransitionModel(n, std::move(dense));
}

TransitionModel build_grid_model(std::size_t rows, std::size_t cols, double exit_prob,
                                 std::uint64_t seed) {
  check_exit_prob(exit_prob);
  if (rows < 2 || cols < 2) throw ConfigError("grid model needs rows, cols >= 2");

  const std::size_t n = rows * cols;
  const std::size_t d = n + 1;
  std::vector<double> dense(d * d, 0.0);
  Rng rng(seed);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = r * cols + c;
      double total = 0.0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const auto rr = static_cast<std::ptrdiff_t>(r) + dr;
          const auto cc = static_cast<std::ptrdiff_t>(c) + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(rows) ||
              cc >= static_cast<std::ptrdiff_t>(cols))
            continue;
          // (0, 1]: every in-grid neighbour keeps strictly positive mass.
          const double w = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
          dense[i * d + static_cast<std::size_t>(rr) * cols + static_cast<std::size_t>(cc)] = w;
          total += w;
        }
      }
      for (std::size_t j = 0; j < n; ++j) dense[i * d + j] *= (1.0 - exit_prob) / total;
      dense[i * d + n] = exit_prob;
    }
  }
  dense[n * d + n] = 1.0;
  return TransitionModel(n, std::move(dense));
}

TransitionModel build_model(const Topology& topology, double exit_prob, std::uint64_t seed) {
  return std::visit(
      [&](const auto& t) -> TransitionModel {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Line1D>) {
          return build_line_model(t.n, t.max_step, exit_prob, t.kernel);
        } else {
          return build_grid_model(t.rows, t.cols, exit_prob, seed);
        }
      },
      topology);
}

std::size_t topology_sensors(const Topology& topology) {
  return std::visit(
      [](const auto& t) -> std::size_t {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Line1D>) {
          return t.n;
        } else {
          return t.rows * t.cols;
        }
      },
      topology);
}

}  // namespace idtrack
