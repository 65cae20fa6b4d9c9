#include "idtrack/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "idtrack/errors.hpp"
#include "idtrack/rng.hpp"

namespace idtrack {

void SearchConfig::validate() const {
  if (iterations == 0) throw ConfigError("iterations must be >= 1");
  if (max_depth == 0) throw ConfigError("max_depth must be >= 1");
  if (!(uct_c > 0.0)) throw ConfigError("uct_c must be positive");
  if (!(discount > 0.0 && discount < 1.0)) throw ConfigError("discount must lie in (0, 1)");
}

void update_stats(ActionStats& stats, double sampled_cost) {
  stats.visits += 1;
  stats.mean_cost += (sampled_cost - stats.mean_cost) / static_cast<double>(stats.visits);
}

std::size_t uct_select(std::span<const ActionStats> stats, double uct_c) {
  if (stats.empty()) throw ConfigError("uct_select on an empty action set");
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < stats.size(); ++j) {
    if (stats[j].visits == 0) return j;
    total += stats[j].visits;
  }
  const double log_total = std::log(static_cast<double>(total));
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < stats.size(); ++j) {
    const double bonus = uct_c * std::sqrt(log_total / static_cast<double>(stats[j].visits));
    const double score = stats[j].mean_cost - bonus;
    if (score < best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

double myopic_cost(const ActionMask& action, const Belief& predicted, double lambda) {
  double uncovered = 0.0;
  for (Position l = 0; l < predicted.sensors(); ++l)
    if (!action.on(l)) uncovered += predicted[l];
  return lambda * static_cast<double>(action.count()) + uncovered;
}

ActionStats SearchResult::stats_for(std::size_t a) const {
  for (std::size_t i = 0; i < root_actions.size(); ++i)
    if (root_actions[i] == a) return root_stats[i];
  return {};
}

namespace {

struct Node {
  Belief belief;
  Belief predicted;
  std::unique_ptr<NodeActions> actions;
  std::size_t action_count;
  // Statistics are kept per expansion slot; tried[k] is the action in slot k.
  // Untried-first selection fills slots in order, so huge subset spaces stay cheap.
  std::vector<std::size_t> tried;
  std::vector<ActionStats> stats;
  std::unordered_map<std::uint64_t, std::uint32_t> children;
};

class Tree {
 public:
  Tree(const SearchProblem& problem, const SearchConfig& config)
      : problem_(problem), config_(config), rng_(config.seed) {}

  std::uint32_t make_node(Belief belief, std::size_t depth) {
    Belief predicted = predict(belief, problem_.model);
    const ExpansionContext context{depth, config_.expansion, problem_.costs.lambda};
    auto actions = problem_.actions.expand(belief, predicted, context);
    const std::size_t count = actions->size();
    if (count == 0) throw ConfigError("action space produced no actions");
    nodes_.push_back(
        Node{std::move(belief), std::move(predicted), std::move(actions), count, {}, {}, {}});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  Position root_state(const Belief& root) {
    if (config_.root_state == RootState::ArgMax) return root.argmax_position();
    // Sample a live position; the exit state ends a trajectory immediately.
    const auto live = root.probs().first(root.sensors());
    const double u = uniform01(rng_) * (1.0 - root[root.exit_index()]);
    double acc = 0.0;
    for (std::size_t i = 0; i < live.size(); ++i) {
      acc += live[i];
      if (u < acc) return i;
    }
    return root.argmax_position();
  }

  double simulate(std::uint32_t node_id, Position state, std::size_t depth) {
    if (depth >= config_.max_depth) return 0.0;

    std::size_t slot;
    std::size_t action;
    {
      Node& node = nodes_[node_id];
      slot = node.stats.size() < node.action_count ? node.stats.size()
                                                    : uct_select(node.stats, config_.uct_c);
      action = slot < node.tried.size() ? node.tried[slot] : node.actions->untried(slot);
    }
    const ActionMask mask = nodes_[node_id].actions->mask(action);
    const Position next = problem_.model.sample_next(state, uniform01(rng_));
    const double cost = relaxed_cost(mask, next, problem_.costs);

    double future = 0.0;
    if (next != problem_.model.exit_index()) {
      const bool tracked = mask.on(next);
      const std::uint64_t code = tracked ? next : problem_.model.sensors();
      const std::uint64_t key = static_cast<std::uint64_t>(slot) * (problem_.model.dim() + 1) + code;
      std::uint32_t child;
      auto it = nodes_[node_id].children.find(key);
      if (it != nodes_[node_id].children.end()) {
        child = it->second;
      } else {
        Belief next_belief = tracked ? Belief::unit(problem_.model.sensors(), next)
                                     : miss_update(nodes_[node_id].predicted, mask);
        child = make_node(std::move(next_belief), depth + 1);
        nodes_[node_id].children.emplace(key, child);
      }
      future = simulate(child, next, depth + 1);
    }

    const double total = cost + config_.discount * future;
    Node& node = nodes_[node_id];
    if (slot == node.stats.size()) {
      node.stats.emplace_back();
      node.tried.push_back(action);
    }
    update_stats(node.stats[slot], total);
    if (config_.backup == Backup::Sampled) return total;
    double best = node.stats.front().mean_cost;
    for (const auto& st : node.stats) best = std::min(best, st.mean_cost);
    return best;
  }

  const Node& node(std::uint32_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

 private:
  const SearchProblem& problem_;
  const SearchConfig& config_;
  Rng rng_;
  std::vector<Node> nodes_;
};

}  // namespace

SearchResult search(const Belief& root, const SearchProblem& problem, const SearchConfig& config) {
  config.validate();
  if (root.dim() != problem.model.dim()) throw InvalidBeliefError("root belief dimension mismatch");
  if (root[root.exit_index()] >= 1.0) throw InvalidBeliefError("root belief is concentrated on exit");

  Tree tree(problem, config);
  const std::uint32_t root_id = tree.make_node(root, 0);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    tree.simulate(root_id, tree.root_state(root), 0);
  }

  const Node& r = tree.node(root_id);
  SearchResult result;
  result.root_action_count = r.action_count;
  result.root_actions = r.tried;
  result.root_stats = r.stats;
  result.node_count = tree.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < r.stats.size(); ++k) {
    const double m = r.stats[k].mean_cost;
    if (m < best) {
      best = m;
      result.action = r.tried[k];
    }
  }
  result.value = best;
  result.mask = r.actions->mask(result.action);
  return result;
}

}  // namespace idtrack
