#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "idtrack/belief.hpp"
#include "idtrack/model.hpp"

namespace idtrack {

/// How each simulation picks the hidden root state from the root belief.
enum class RootState {
  ArgMax,  ///< most probable position, ties to the lowest index
  Sample,  ///< draw from the root belief
};

/// Value a recursive simulation hands back to its parent.
enum class Backup {
  Sampled,  ///< the sampled discounted return of this trajectory
  BestMean, ///< the child's lowest mean cost after its own update
};

/// Order in which a node works through its untried actions.
enum class Expansion {
  Index,   ///< lowest action index first
  Myopic,  ///< lowest exact one-step expected cost first, ties to the lowest index
};

struct SearchConfig {
  std::size_t iterations = 500;
  std::size_t max_depth = 15;
  double uct_c = 2.0;
  double discount = 0.9;
  std::uint64_t seed = 0;
  RootState root_state = RootState::ArgMax;
  Backup backup = Backup::BestMean;
  Expansion expansion = Expansion::Myopic;

  void validate() const;
};

/// Per-action statistics N(p, a) and the running mean cost.
struct ActionStats {
  std::uint64_t visits = 0;
  double mean_cost = 0.0;
};

/// Increment the visit count, then fold `sampled_cost` into the running mean.
void update_stats(ActionStats& stats, double sampled_cost);

/// Cost-minimising UCT choice: lowest-indexed untried action if any, else
/// argmin of mean - c * sqrt(log N / N_j), ties to the lowest index.
std::size_t uct_select(std::span<const ActionStats> stats, double uct_c);

/// Expected single-stage cost of `action` when the next state is drawn from
/// `predicted`: lambda per ON sensor plus the live mass left uncovered.
double myopic_cost(const ActionMask& action, const Belief& predicted, double lambda);

/// The action set materialised at one search node.
class NodeActions {
 public:
  virtual ~NodeActions() = default;
  virtual std::size_t size() const = 0;
  virtual ActionMask mask(std::size_t action) const = 0;
  /// Action tried the `slot`-th time this node meets an untried action.
  /// Slots are requested in increasing order starting from 0.
  virtual std::size_t untried(std::size_t slot) { return slot; }
};

struct ExpansionContext {
  std::size_t depth = 0;
  Expansion order = Expansion::Index;
  double lambda = 0.0;
};

/// Builds the action set for a node from its belief and one-step prediction.
class ActionSpace {
 public:
  virtual ~ActionSpace() = default;
  virtual std::unique_ptr<NodeActions> expand(const Belief& belief, const Belief& predicted,
                                              const ExpansionContext& context) const = 0;
};

/// Generative problem: known dynamics, relaxed costs and an action space.
struct SearchProblem {
  const TransitionModel& model;
  CostParams costs;
  const ActionSpace& actions;
};

struct SearchResult {
  std::size_t action = 0;
  ActionMask mask;
  /// Mean cost of the chosen root action.
  double value = 0.0;
  std::size_t root_action_count = 0;
  /// Root actions in the order they were first tried, with their statistics.
  std::vector<std::size_t> root_actions;
  std::vector<ActionStats> root_stats;
  std::size_t node_count = 0;

  /// Statistics of `action` at the root; zero visits if it was never tried.
  ActionStats stats_for(std::size_t action) const;
};

/// Finite-horizon UCT from `root`. Each iteration determinises the hidden
/// state, descends by UCT, samples transitions from the model, updates node
/// beliefs with the exact filter and backs up cost + discount * future, with
/// value 0 at max_depth. Returns argmin of the root mean costs, ties to the
/// action tried first (the lowest index under Expansion::Index).
SearchResult search(const Belief& root, const SearchProblem& problem, const SearchConfig& config);

}  // namespace idtrack
