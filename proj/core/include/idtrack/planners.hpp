#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "idtrack/belief.hpp"
#include "idtrack/mcts.hpp"
#include "idtrack/model.hpp"
#include "idtrack/rng.hpp"

namespace idtrack {

/// Largest predicted support whose subsets ID_MCTS will enumerate at the root.
inline constexpr std::size_t kDefaultSupportCap = 26;

/// Maps the current belief to the sensors to power next period.
class Planner {
 public:
  virtual ~Planner() = default;
  virtual ActionMask next_action(const Belief& belief) = 0;
  /// Confidence index behind the last decision, for planners that have one.
  virtual std::optional<double> last_gamma() const { return std::nullopt; }
};

/// Sorted, strictly increasing set of confidence indices in [0, 1].
class GammaGrid {
 public:
  explicit GammaGrid(std::vector<double> values);
  /// {0, 0.05, ..., 0.95}: twenty evenly spaced values.
  static GammaGrid standard();

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Live positions with probability > eps, most probable first, ties to the
/// lowest index.
std::vector<Position> ranked_support(const Belief& belief, double eps = 0.0);

/// Highest-probability positions accumulated until their mass reaches gamma.
std::vector<Position> top_gamma_selection(const Belief& abv, double gamma);

ActionMask id_tg_action(const Belief& p, const TransitionModel& model, double gamma);

/// ON at l iff the one-step prediction at l exceeds lambda.
ActionMask q_mdp_action(const Belief& p, const TransitionModel& model, double lambda);

/// All subsets of the predicted support, indexed by bitmask over the ranked
/// support (bit 0 = most probable position, action 0 = all off). At the root a
/// support above `cap` raises ActionExplosionError; deeper nodes keep the `cap`
/// most probable positions.
class SubsetActionSpace final : public ActionSpace {
 public:
  explicit SubsetActionSpace(std::size_t cap = kDefaultSupportCap, double eps = kSupportEpsilon);
  std::unique_ptr<NodeActions> expand(const Belief& belief, const Belief& predicted,
                                      const ExpansionContext& context) const override;

 private:
  std::size_t cap_;
  double eps_;
};

/// One action per grid value; each expands to the top-gamma mask of the
/// node's prediction.
class GammaActionSpace final : public ActionSpace {
 public:
  explicit GammaActionSpace(GammaGrid grid);
  std::unique_ptr<NodeActions> expand(const Belief& belief, const Belief& predicted,
                                      const ExpansionContext& context) const override;
  const GammaGrid& grid() const noexcept { return grid_; }

 private:
  GammaGrid grid_;
};

SearchResult id_mcts_search(const Belief& p, const TransitionModel& model,
                            const SearchConfig& config, const CostParams& params,
                            std::size_t support_cap = kDefaultSupportCap);
ActionMask id_mcts_action(const Belief& p, const TransitionModel& model, const SearchConfig& config,
                          const CostParams& params, std::size_t support_cap = kDefaultSupportCap);

SearchResult id_gamma_mcts_search(const Belief& p, const TransitionModel& model,
                                  const SearchConfig& config, const CostParams& params,
                                  const GammaGrid& grid);
ActionMask id_gamma_mcts_action(const Belief& p, const TransitionModel& model,
                                const SearchConfig& config, const CostParams& params,
                                const GammaGrid& grid);

class IdTgPlanner final : public Planner {
 public:
  IdTgPlanner(const TransitionModel& model, double gamma);
  ActionMask next_action(const Belief& belief) override;
  std::optional<double> last_gamma() const override { return gamma_; }

 private:
  const TransitionModel& model_;
  double gamma_;
};

class QmdpPlanner final : public Planner {
 public:
  QmdpPlanner(const TransitionModel& model, double lambda);
  ActionMask next_action(const Belief& belief) override;

 private:
  const TransitionModel& model_;
  double lambda_;
};

/// Each decision runs a fresh search seeded from the planner's own stream.
class IdMctsPlanner final : public Planner {
 public:
  IdMctsPlanner(const TransitionModel& model, SearchConfig config, CostParams params,
                std::size_t support_cap = kDefaultSupportCap);
  ActionMask next_action(const Belief& belief) override;

 private:
  const TransitionModel& model_;
  SearchConfig config_;
  CostParams params_;
  SubsetActionSpace space_;
  Rng rng_;
};

class IdGammaMctsPlanner final : public Planner {
 public:
  IdGammaMctsPlanner(const TransitionModel& model, SearchConfig config, CostParams params,
                     GammaGrid grid = GammaGrid::standard());
  ActionMask next_action(const Belief& belief) override;
  std::optional<double> last_gamma() const override { return last_gamma_; }

 private:
  const TransitionModel& model_;
  SearchConfig config_;
  CostParams params_;
  GammaActionSpace space_;
  Rng rng_;
  std::optional<double> last_gamma_;
};

/// Powers every position the prediction can reach whenever the belief support
/// exceeds `threshold`; otherwise defers to `inner`. Does not own `inner`.
class RestartPlanner final : public Planner {
 public:
  RestartPlanner(Planner& inner, const TransitionModel& model, std::size_t threshold, bool enabled);
  ActionMask next_action(const Belief& belief) override;
  std::optional<double> last_gamma() const override;
  bool last_restarted() const noexcept { return last_restarted_; }

 private:
  Planner& inner_;
  const TransitionModel& model_;
  std::size_t threshold_;
  bool enabled_;
  bool last_restarted_ = false;
};

RestartPlanner restart_wrap(Planner& inner, const TransitionModel& model, std::size_t threshold,
                            bool enabled);

}  // namespace idtrack
