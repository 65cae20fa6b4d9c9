#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "idtrack/errors.hpp"
#include "idtrack/planners.hpp"
#include "idtrack/scenario.hpp"
#include "idtrack/simulation.hpp"

namespace idtrack {
namespace {

std::vector<Position> positions(const ActionMask& m) { return m.on_positions(); }

// Deterministic drift one cell to the right; the last cell leaves the network.
TransitionModel drift_right(std::size_t n) {
  const std::size_t d = n + 1;
  std::vector<double> dense(d * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) dense[i * d + i + 1] = 1.0;
  dense[n * d + n] = 1.0;
  return TransitionModel(n, std::move(dense));
}

TEST(TopGamma, WorkedExampleSelectsTheTwoLeadingPositions) {
  const Belief abv({0.3, 0.3, 0.2, 0.2, 0.0});
  EXPECT_EQ(top_gamma_selection(abv, 0.6), (std::vector<Position>{0, 1}));
}

TEST(TopGamma, UnitMassAndBoundaries) {
  EXPECT_EQ(top_gamma_selection(Belief::unit(8, 5), 0.99), (std::vector<Position>{5}));
  const Belief abv({0.5, 0.25, 0.25, 0.0});
  EXPECT_TRUE(top_gamma_selection(abv, 0.0).empty());
  EXPECT_EQ(top_gamma_selection(abv, 0.5), (std::vector<Position>{0}));
  EXPECT_EQ(top_gamma_selection(abv, 0.51), (std::vector<Position>{0, 1}));
  EXPECT_EQ(top_gamma_selection(abv, 1.0), (std::vector<Position>{0, 1, 2}));
  EXPECT_THROW(top_gamma_selection(abv, 1.5), ConfigError);
}

TEST(TopGamma, TiesGoToTheLowerIndex) {
  const Belief abv({0.2, 0.3, 0.2, 0.3, 0.0});
  EXPECT_EQ(top_gamma_selection(abv, 0.5), (std::vector<Position>{1, 3}));
  EXPECT_EQ(top_gamma_selection(abv, 0.7), (std::vector<Position>{1, 3, 0}));
}

TEST(TopGamma, ExitIsNeverSelected) {
  const Belief abv({0.1, 0.2, 0.7});
  EXPECT_EQ(top_gamma_selection(abv, 1.0), (std::vector<Position>{1, 0}));
}

TEST(IdTg, Examples) {
  const auto det = drift_right(6);
  for (double g : {0.0 + 1e-9, 0.4, 1.0}) EXPECT_EQ(positions(id_tg_action(Belief::unit(6, 2), det, g)), (std::vector<Position>{3}));
  // Row 0 gives the worked-example prediction.
  const TransitionModel m(4, {0.3, 0.3, 0.2, 0.2, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1});
  EXPECT_EQ(id_tg_action(Belief::unit(4, 0), m, 0.6), ActionMask::from_bits(std::vector<int>{1, 1, 0, 0}));
  const auto line = build_line_model(41, 3, 0.0);
  EXPECT_EQ(id_tg_action(Belief::unit(41, 20), line, 1.0).count(), 7u);
}

TEST(IdTg, CoverageIsMonotoneInGamma) {
  std::mt19937_64 rng(4);
  std::exponential_distribution<double> e(1.0);
  const auto model = build_grid_model(5, 5, 0.05, 3);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(26, 0.0);
    for (int i = 0; i < 25; ++i) v[i] = (rng() % 3 == 0) ? e(rng) : 0.0;
    v[rng() % 25] += 0.5;
    double s = 0.0;
    for (double x : v) s += x;
    for (double& x : v) x /= s;
    const Belief p(v);
    const Belief pred = predict(p, model);
    double last = -1.0;
    for (double g = 0.0; g <= 1.0; g += 0.05) {
      const auto a = id_tg_action(p, model, std::min(g, 1.0));
      double covered = 0.0;
      for (Position l : a.on_positions()) covered += pred[l];
      EXPECT_GE(covered, last - 1e-15);
      last = covered;
    }
  }
}

TEST(Qmdp, ThresholdRule) {
  const TransitionModel m(2, {0.6, 0.4, 0, 0.6, 0.4, 0, 0, 0, 1});
  EXPECT_EQ(q_mdp_action(Belief::unit(2, 0), m, 0.5), ActionMask::from_bits(std::vector<int>{1, 0}));
  const auto line = build_line_model(41, 3, 0.0);
  EXPECT_EQ(q_mdp_action(Belief::unit(41, 20), line, 0.0).count(), 7u);
  EXPECT_EQ(q_mdp_action(Belief::unit(41, 20), line, 1.0).count(), 0u);
}

TEST(Qmdp, MasksShrinkAsLambdaGrows) {
  const auto model = build_grid_model(6, 6, 0.0, 8);
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const Belief p = Belief::unit(36, rng() % 36);
    ActionMask prev = q_mdp_action(p, model, 0.0);
    for (double lam = 0.05; lam <= 1.0; lam += 0.05) {
      const auto cur = q_mdp_action(p, model, lam);
      for (Position l : cur.on_positions()) EXPECT_TRUE(prev.on(l));
      prev = cur;
    }
  }
}

TEST(GammaGrid, StandardGridHasTwentyIncreasingValues) {
  const auto g = GammaGrid::standard();
  ASSERT_EQ(g.size(), 20u);
  EXPECT_EQ(g[0], 0.0);
  EXPECT_NEAR(g[19], 0.95, 1e-12);
  EXPECT_THROW(GammaGrid({}), ConfigError);
  EXPECT_THROW(GammaGrid({0.2, 0.2}), ConfigError);
  EXPECT_THROW(GammaGrid({0.5, 1.2}), ConfigError);
}

TEST(IdMcts, SingleSupportFollowsTheEnergyPrice) {
  const auto det = drift_right(6);
  SearchConfig cfg;
  cfg.iterations = 200;
  EXPECT_EQ(positions(id_mcts_action(Belief::unit(6, 2), det, cfg, {0.5, 0.9})),
            (std::vector<Position>{3}));
  const auto r = id_mcts_search(Belief::unit(6, 2), det, cfg, {1.0, 0.9});
  EXPECT_EQ(r.root_action_count, 2u);
  EXPECT_EQ(r.mask.count(), 0u);
  EXPECT_EQ(r.action, 0u);
}

TEST(IdMcts, LineRootEnumeratesAllSubsetsOfTheReachableCells) {
  const auto line = build_line_model(41, 3, 0.0);
  SearchConfig cfg;
  cfg.iterations = 300;
  const auto r = id_mcts_search(Belief::unit(41, 20), line, cfg, {0.3, 0.9});
  EXPECT_EQ(r.root_action_count, 128u);
  EXPECT_EQ(r.root_actions.size(), 128u);
}

TEST(IdMcts, LargeRootSupportIsAnActionExplosion) {
  const auto grid = build_grid_model(16, 16, 0.0, kPresetGridSeed);
  SearchConfig cfg;
  cfg.iterations = 10;
  EXPECT_THROW(id_mcts_action(Belief::uniform(256), grid, cfg, {0.3, 0.9}), ActionExplosionError);
  EXPECT_THROW(SubsetActionSpace(0), ConfigError);
  EXPECT_THROW(SubsetActionSpace(31), ConfigError);
}

TEST(IdMcts, SingleSupportTracksPerfectlyOverAnEpisode) {
  Scenario sc;
  sc.name = "drift";
  sc.model = std::make_shared<TransitionModel>(drift_right(12));
  sc.start = 0;
  sc.horizon = 30;
  sc.restart_enabled = false;
  SearchConfig cfg;
  cfg.iterations = 100;
  for (double lam : {0.1, 0.5, 0.9}) {
    IdMctsPlanner planner(*sc.model, cfg, {lam, 0.9});
    const auto m = run_episode(sc, planner, {lam, 0.9}, 1);
    EXPECT_EQ(m.avg_tracking_error(), 0.0);
    EXPECT_EQ(m.periods, 12u);
  }
}

// Enumerates the root action order through a search with one iteration per slot.
std::vector<std::size_t> expansion_order(const ActionSpace& space, const Belief& pred, double lambda,
                                         std::size_t depth = 0) {
  auto actions = space.expand(pred, pred, {depth, Expansion::Myopic, lambda});
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < actions->size(); ++k) order.push_back(actions->untried(k));
  return order;
}

TEST(SubsetExpansion, VisitsEverySubsetOnceInCostOrder) {
  std::mt19937_64 rng(21);
  std::exponential_distribution<double> e(1.0);
  const SubsetActionSpace space(12);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 3 + rng() % 7;
    std::vector<double> v(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i] = e(rng);
    double s = 0.0;
    for (double x : v) s += x;
    for (double& x : v) x /= s;
    const Belief pred(v);
    const double lambda = (rng() % 21) * 0.05;
    const auto order = expansion_order(space, pred, lambda);
    auto actions = space.expand(pred, pred, {0, Expansion::Myopic, lambda});
    ASSERT_EQ(order.size(), std::size_t{1} << n);
    EXPECT_EQ(std::set<std::size_t>(order.begin(), order.end()).size(), order.size());
    double last = -1.0;
    for (std::size_t a : order) {
      const double c = myopic_cost(actions->mask(a), pred, lambda);
      EXPECT_GE(c, last - 1e-12);
      last = c;
    }
  }
}

TEST(SubsetExpansion, EmptyMaskComesFirstWhenNothingIsWorthPowering) {
  const SubsetActionSpace space;
  const Belief pred({1.0, 0.0, 0.0});
  EXPECT_EQ(expansion_order(space, pred, 1.0).front(), 0u);
  EXPECT_EQ(expansion_order(space, pred, 0.5).front(), 1u);
}

TEST(GammaExpansion, FullCoverageFirstWhenEnergyIsFree) {
  const GammaActionSpace space(GammaGrid::standard());
  const auto line = build_line_model(41, 3, 0.0);
  const Belief pred = predict(Belief::unit(41, 20), line);
  const auto order0 = expansion_order(space, pred, 0.0);
  auto actions = space.expand(pred, pred, {0, Expansion::Myopic, 0.0});
  EXPECT_EQ(actions->mask(order0.front()).count(), 7u);
  const auto order1 = expansion_order(space, pred, 1.0);
  EXPECT_EQ(order1.front(), 0u);
  std::vector<std::size_t> sorted = order1;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) EXPECT_EQ(sorted[k], k);
}

TEST(IdGammaMcts, EndpointsOnTheLine) {
  const auto line = build_line_model(41, 3, 0.0);
  SearchConfig cfg;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    const auto free = id_gamma_mcts_search(Belief::unit(41, 20), line, cfg, {0.0, 0.9}, GammaGrid::standard());
    EXPECT_EQ(free.root_action_count, 20u);
    EXPECT_EQ(free.mask.count(), 7u);
    EXPECT_EQ(id_gamma_mcts_action(Belief::unit(41, 20), line, cfg, {1.0, 0.9}, GammaGrid::standard()).count(), 0u);
  }
}

TEST(IdGammaMcts, PlannerReportsTheChosenGamma) {
  const auto line = build_line_model(41, 3, 0.0);
  IdGammaMctsPlanner planner(line, SearchConfig{}, {0.0, 0.9});
  const auto mask = planner.next_action(Belief::unit(41, 20));
  ASSERT_TRUE(planner.last_gamma().has_value());
  EXPECT_EQ(top_gamma_selection(predict(Belief::unit(41, 20), line), *planner.last_gamma()).size(), mask.count());
}

// Returns a fixed mask and counts calls.
class ConstantPlanner final : public Planner {
 public:
  explicit ConstantPlanner(ActionMask m) : mask_(std::move(m)) {}
  ActionMask next_action(const Belief&) override {
    ++calls;
    return mask_;
  }
  int calls = 0;

 private:
  ActionMask mask_;
};

TEST(Restart, TriggersStrictlyAboveTheThreshold) {
  const auto line = build_line_model(41, 3, 0.0);
  ConstantPlanner inner(ActionMask::none(41));
  auto wrapped = restart_wrap(inner, line, 14, true);

  std::vector<double> v15(42, 0.0), v14(42, 0.0);
  for (int i = 10; i < 25; ++i) v15[i] = 1.0 / 15.0;
  for (int i = 10; i < 24; ++i) v14[i] = 1.0 / 14.0;

  const auto full = wrapped.next_action(Belief(v15));
  EXPECT_TRUE(wrapped.last_restarted());
  EXPECT_EQ(inner.calls, 0);
  const Belief pred = predict(Belief(v15), line);
  for (Position l = 0; l < 41; ++l) EXPECT_EQ(full.on(l), pred[l] > 0.0);
  EXPECT_EQ(full.count(), 21u);

  EXPECT_EQ(wrapped.next_action(Belief(v14)).count(), 0u);
  EXPECT_FALSE(wrapped.last_restarted());
  EXPECT_EQ(inner.calls, 1);

  auto off = restart_wrap(inner, line, 14, false);
  EXPECT_EQ(off.next_action(Belief(v15)).count(), 0u);
  EXPECT_THROW(restart_wrap(inner, line, 0, true), ConfigError);
}

}  // namespace
}  // namespace idtrack
