#include "idtrack/planners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "idtrack/errors.hpp"

namespace idtrack {

namespace {

// Mass that counts as having reached gamma despite round-off (0.3 + 0.3 vs 0.6).
constexpr double kGammaSlack = 1e-12;

std::size_t gamma_prefix(std::span<const double> ranked_probs, double gamma) {
  double mass = 0.0;
  std::size_t k = 0;
  while (k < ranked_probs.size() && mass < gamma - kGammaSlack) mass += ranked_probs[k++];
  return k;
}

class SubsetNodeActions final : public NodeActions {
 public:
  SubsetNodeActions(std::size_t sensors, std::vector<Position> support, const Belief& predicted,
                    const ExpansionContext& context)
      : sensors_(sensors), support_(std::move(support)), myopic_(context.order == Expansion::Myopic) {
    if (!myopic_) return;
    // cost(S) = const + sum over S of (lambda - p). Start from the cheapest set
    // and enumerate flips by their nonnegative cost increments |lambda - p|.
    const std::size_t s = support_.size();
    std::vector<double> delta(s);
    for (std::size_t b = 0; b < s; ++b) {
      const double p = predicted[support_[b]];
      if (p > context.lambda) base_ |= std::size_t{1} << b;
      delta[b] = std::abs(context.lambda - p);
    }
    flip_bit_.resize(s);
    std::iota(flip_bit_.begin(), flip_bit_.end(), std::size_t{0});
    std::stable_sort(flip_bit_.begin(), flip_bit_.end(),
                     [&](std::size_t a, std::size_t b) { return delta[a] < delta[b]; });
    flip_delta_.resize(s);
    for (std::size_t i = 0; i < s; ++i) flip_delta_[i] = delta[flip_bit_[i]];
  }

  std::size_t size() const override { return std::size_t{1} << support_.size(); }

  ActionMask mask(std::size_t action) const override {
    ActionMask m(sensors_);
    for (std::size_t b = 0; b < support_.size(); ++b)
      if ((action >> b) & 1U) m.set(support_[b]);
    return m;
  }

  std::size_t untried(std::size_t slot) override {
    if (!myopic_) return slot;
    while (order_.size() <= slot) advance();
    return order_[slot];
  }

 private:
  struct Candidate {
    double extra;
    std::size_t action;
    std::size_t flips;  // bitmask over flip_bit_ indices
    std::size_t last;   // highest flip index in `flips`
    bool operator>(const Candidate& o) const {
      return extra != o.extra ? extra > o.extra : action > o.action;
    }
  };

  void push(double extra, std::size_t flips, std::size_t last) {
    std::size_t action = base_;
    for (std::size_t i = 0; i <= last; ++i)
      if ((flips >> i) & 1U) action ^= std::size_t{1} << flip_bit_[i];
    heap_.push(Candidate{extra, action, flips, last});
  }

  // Each subset of flips is reached exactly once: from a set with highest
  // index m, either add m+1 or move m to m+1.
  void advance() {
    if (order_.empty()) {
      order_.push_back(base_);
      if (!flip_delta_.empty()) push(flip_delta_[0], 1, 0);
      return;
    }
    const Candidate c = heap_.top();
    heap_.pop();
    order_.push_back(c.action);
    const std::size_t m = c.last;
    if (m + 1 < flip_delta_.size()) {
      const std::size_t next = std::size_t{1} << (m + 1);
      push(c.extra + flip_delta_[m + 1], c.flips | next, m + 1);
      push(c.extra - flip_delta_[m] + flip_delta_[m + 1], (c.flips & ~(std::size_t{1} << m)) | next,
           m + 1);
    }
  }

  std::size_t sensors_;
  std::vector<Position> support_;
  bool myopic_;
  std::size_t base_ = 0;
  std::vector<std::size_t> flip_bit_;
  std::vector<double> flip_delta_;
  std::vector<std::size_t> order_;
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap_;
};

class GammaNodeActions final : public NodeActions {
 public:
  GammaNodeActions(std::size_t sensors, std::vector<Position> ranked, std::vector<std::size_t> prefix,
                   const Belief& predicted, const ExpansionContext& context)
      : sensors_(sensors), ranked_(std::move(ranked)), prefix_(std::move(prefix)), order_(prefix_.size()) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (context.order != Expansion::Myopic) return;
    std::vector<double> cost(prefix_.size());
    for (std::size_t a = 0; a < prefix_.size(); ++a)
      cost[a] = myopic_cost(mask(a), predicted, context.lambda);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });
  }

  std::size_t size() const override { return prefix_.size(); }

  ActionMask mask(std::size_t action) const override {
    return ActionMask::from_positions(
        sensors_, std::span<const Position>(ranked_).first(prefix_.at(action)));
  }

  std::size_t untried(std::size_t slot) override { return order_.at(slot); }

 private:
  std::size_t sensors_;
  std::vector<Position> ranked_;
  std::vector<std::size_t> prefix_;
  std::vector<std::size_t> order_;
};

}  // namespace

GammaGrid::GammaGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ConfigError("gamma grid is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) throw ConfigError("gamma values must lie in [0, 1]");
    if (i > 0 && !(values_[i] > values_[i - 1])) throw ConfigError("gamma grid must be strictly increasing");
  }
}

GammaGrid GammaGrid::standard() {
  std::vector<double> v;
  for (int i = 0; i < 20; ++i) v.push_back(0.05 * i);
  return GammaGrid(std::move(v));
}

std::vector<Position> ranked_support(const Belief& belief, double eps) {
  std::vector<Position> ranked;
  for (Position l = 0; l < belief.sensors(); ++l)
    if (belief[l] > eps) ranked.push_back(l);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](Position a, Position b) { return belief[a] > belief[b]; });
  return ranked;
}

std::vector<Position> top_gamma_selection(const Belief& abv, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
  std::vector<Position> ranked = ranked_support(abv);
  std::vector<double> probs(ranked.size());
  std::transform(ranked.begin(), ranked.end(), probs.begin(), [&](Position l) { return abv[l]; });
  ranked.resize(gamma_prefix(probs, gamma));
  return ranked;
}

ActionMask id_tg_action(const Belief& p, const TransitionModel& model, double gamma) {
  const auto chosen = top_gamma_selection(predict(p, model), gamma);
  return ActionMask::from_positions(model.sensors(), chosen);
}

ActionMask q_mdp_action(const Belief& p, const TransitionModel& model, double lambda) {
  const Belief next = predict(p, model);
  ActionMask mask(model.sensors());
  for (Position l = 0; l < model.sensors(); ++l)
    if (next[l] > lambda) mask.set(l);
  return mask;
}

SubsetActionSpace::SubsetActionSpace(std::size_t cap, double eps) : cap_(cap), eps_(eps) {
  if (cap_ == 0 || cap_ > 30) throw ConfigError("support cap must lie in [1, 30]");
}

std::unique_ptr<NodeActions> SubsetActionSpace::expand(const Belief&, const Belief& predicted,
                                                       const ExpansionContext& context) const {
  std::vector<Position> support = ranked_support(predicted, eps_);
  if (support.size() > cap_) {
    if (context.depth == 0) {
      std::ostringstream msg;
      msg << "ID_MCTS would enumerate 2^" << support.size() << " sensor subsets (cap " << cap_
          << "); use id_gamma_mcts for networks of this size";
      throw ActionExplosionError(msg.str());
    }
    support.resize(cap_);
  }
  return std::make_unique<SubsetNodeActions>(predicted.sensors(), std::move(support), predicted,
                                             context);
}

GammaActionSpace::GammaActionSpace(GammaGrid grid) : grid_(std::move(grid)) {}

std::unique_ptr<NodeActions> GammaActionSpace::expand(const Belief&, const Belief& predicted,
                                                      const ExpansionContext& context) const {
  std::vector<Position> ranked = ranked_support(predicted);
  std::vector<double> probs(ranked.size());
  std::transform(ranked.begin(), ranked.end(), probs.begin(),
                 [&](Position l) { return predicted[l]; });
  std::vector<std::size_t> prefix;
  prefix.reserve(grid_.size());
  for (double g : grid_.values()) prefix.push_back(gamma_prefix(probs, g));
  return std::make_unique<GammaNodeActions>(predicted.sensors(), std::move(ranked), std::move(prefix),
                                            predicted, context);
}

SearchResult id_mcts_search(const Belief& p, const TransitionModel& model,
                            const SearchConfig& config, const CostParams& params,
                            std::size_t support_cap) {
  const SubsetActionSpace space(support_cap);
  return search(p, SearchProblem{model, params, space}, config);
}

ActionMask id_mcts_action(const Belief& p, const TransitionModel& model, const SearchConfig& config,
                          const CostParams& params, std::size_t support_cap) {
  return id_mcts_search(p, model, config, params, support_cap).mask;
}

SearchResult id_gamma_mcts_search(const Belief& p, const TransitionModel& model,
                                  const SearchConfig& config, const CostParams& params,
                                  const GammaGrid& grid) {
  const GammaActionSpace space(grid);
  return search(p, SearchProblem{model, params, space}, config);
}

ActionMask id_gamma_mcts_action(const Belief& p, const TransitionModel& model,
                                const SearchConfig& config, const CostParams& params,
                                const GammaGrid& grid) {
  return id_gamma_mcts_search(p, model, config, params, grid).mask;
}

IdTgPlanner::IdTgPlanner(const TransitionModel& model, double gamma) : model_(model), gamma_(gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
}

ActionMask IdTgPlanner::next_action(const Belief& belief) { return id_tg_action(belief, model_, gamma_); }

QmdpPlanner::QmdpPlanner(const TransitionModel& model, double lambda) : model_(model), lambda_(lambda) {}

ActionMask QmdpPlanner::next_action(const Belief& belief) { return q_mdp_action(belief, model_, lambda_); }

IdMctsPlanner::IdMctsPlanner(const TransitionModel& model, SearchConfig config, CostParams params,
                             std::size_t support_cap)
    : model_(model), config_(config), params_(params), space_(support_cap), rng_(config.seed) {
  config_.validate();
  params_.validate();
}

ActionMask IdMctsPlanner::next_action(const Belief& belief) {
  SearchConfig cfg = config_;
  cfg.seed = rng_();
  return search(belief, SearchProblem{model_, params_, space_}, cfg).mask;
}

IdGammaMctsPlanner::IdGammaMctsPlanner(const TransitionModel& model, SearchConfig config,
                                       CostParams params, GammaGrid grid)
    : model_(model), config_(config), params_(params), space_(std::move(grid)), rng_(config.seed) {
  config_.validate();
  params_.validate();
}

ActionMask IdGammaMctsPlanner::next_action(const Belief& belief) {
  SearchConfig cfg = config_;
  cfg.seed = rng_();
  const SearchResult result = search(belief, SearchProblem{model_, params_, space_}, cfg);
  last_gamma_ = space_.grid()[result.action];
  return result.mask;
}

RestartPlanner::RestartPlanner(Planner& inner, const TransitionModel& model, std::size_t threshold,
                               bool enabled)
    : inner_(inner), model_(model), threshold_(threshold), enabled_(enabled) {
  if (threshold_ == 0) throw ConfigError("restart threshold must be >= 1");
}

ActionMask RestartPlanner::next_action(const Belief& belief) {
  last_restarted_ = enabled_ && support_size(belief) > threshold_;
  if (!last_restarted_) return inner_.next_action(belief);
  const Belief next = predict(belief, model_);
  ActionMask mask(model_.sensors());
  for (Position l = 0; l < model_.sensors(); ++l)
    if (next[l] > 0.0) mask.set(l);
  return mask;
}

std::optional<double> RestartPlanner::last_gamma() const {
  if (last_restarted_) return std::nullopt;
  return inner_.last_gamma();
}

RestartPlanner restart_wrap(Planner& inner, const TransitionModel& model, std::size_t threshold,
                            bool enabled) {
  return RestartPlanner(inner, model, threshold, enabled);
}

}  // namespace idtrack
