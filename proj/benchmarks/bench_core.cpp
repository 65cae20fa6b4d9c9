#include <benchmark/benchmark.h>

#include "idtrack/belief.hpp"
#include "idtrack/planners.hpp"
#include "idtrack/scenario.hpp"

namespace {

using namespace idtrack;

Belief spread_belief(const TransitionModel& model, Position start, int steps) {
  Belief b = Belief::unit(model.sensors(), start);
  for (int k = 0; k < steps; ++k) b = predict(b, model);
  return b;
}

void BM_Predict(benchmark::State& state) {
  const Scenario sc = preset_scenario(state.range(0) == 0 ? "line41" : "grid16");
  const Belief b = spread_belief(*sc.model, sc.start, 4);
  for (auto _ : state) benchmark::DoNotOptimize(predict(b, *sc.model));
}
BENCHMARK(BM_Predict)->Arg(0)->Arg(1);

void BM_MissUpdate(benchmark::State& state) {
  const Scenario sc = preset_scenario("grid16");
  const Belief b = spread_belief(*sc.model, sc.start, 4);
  const auto on = top_gamma_selection(predict(b, *sc.model), 0.5);
  const ActionMask action = ActionMask::from_positions(sc.model->sensors(), on);
  for (auto _ : state) benchmark::DoNotOptimize(belief_update(b, *sc.model, action, Observation::miss()));
}
BENCHMARK(BM_MissUpdate);

void BM_GammaSearch(benchmark::State& state) {
  const Scenario sc = preset_scenario(state.range(0) == 0 ? "line41" : "grid8");
  const Belief root = Belief::unit(sc.model->sensors(), sc.start);
  SearchConfig cfg;
  cfg.iterations = static_cast<std::size_t>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(id_gamma_mcts_search(root, *sc.model, cfg, {0.2, 0.9}, GammaGrid::standard()));
}
BENCHMARK(BM_GammaSearch)->Args({0, 500})->Args({1, 500})->Unit(benchmark::kMillisecond);

void BM_SubsetSearch(benchmark::State& state) {
  const Scenario sc = preset_scenario("line41");
  const Belief root = Belief::unit(sc.model->sensors(), sc.start);
  SearchConfig cfg;
  cfg.iterations = 500;
  for (auto _ : state) benchmark::DoNotOptimize(id_mcts_search(root, *sc.model, cfg, {0.2, 0.9}));
}
BENCHMARK(BM_SubsetSearch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
