#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "idtrack/belief.hpp"
#include "idtrack/mcts.hpp"
#include "idtrack/model.hpp"

namespace idtrack {

inline constexpr std::size_t kOracleMaxSensors = 5;
inline constexpr std::size_t kOracleMaxHorizon = 4;

struct OracleResult {
  ActionMask action;
  double value = 0.0;
};

/// Exact finite-horizon expectimax over every sensor subset and every
/// observation outcome, using dense matrix arithmetic of its own. Ties go to
/// the lowest subset bitmask. Limited to n <= 5 and horizon <= 4.
OracleResult expectimax_oracle(const TransitionModel& model, const Belief& root,
                               const CostParams& params, std::size_t horizon);

/// Random row-stochastic model on n positions; some rows leak to the exit.
TransitionModel random_small_model(std::size_t sensors, std::uint64_t seed);

struct OracleCase {
  TransitionModel model;
  Belief root;
  CostParams params;
  std::size_t horizon;
};

/// `count` seeded instances with n = 4, horizon 3, lambda alternating 0.2 / 0.5
/// and a known starting position.
std::vector<OracleCase> oracle_cases(std::uint64_t seed, std::size_t count = 10);

struct OracleComparison {
  OracleResult oracle;
  ActionMask search_action;
  double search_value = 0.0;
  bool match = false;
  double relative_error = 0.0;
};

/// Runs search (subset action space, max_depth = horizon) against the oracle.
OracleComparison compare_with_oracle(const OracleCase& c, const SearchConfig& config);

}  // namespace idtrack
