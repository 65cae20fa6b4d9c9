#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idtrack/model.hpp"
#include "idtrack/simulation.hpp"

namespace idtrack {

/// Seed behind the randomly weighted grid presets.
inline constexpr std::uint64_t kPresetGridSeed = 1;

/// Parsed form of a scenario description file.
struct ScenarioSpec {
  std::string name;
  Topology topology;
  double exit_prob = 0.0;
  std::uint64_t seed = kPresetGridSeed;
  std::optional<Position> start;
  std::size_t horizon = 30;
  std::optional<std::size_t> restart_threshold;
  bool restart_enabled = true;
  InitialBelief prior = InitialBelief::KnownStart;
};

/// Builds the model and fills defaults: start at the centre cell, restart
/// threshold 14 on a line and 20 on a grid.
Scenario make_scenario(const ScenarioSpec& spec);

/// line41, grid8 or grid16.
Scenario preset_scenario(std::string_view name);
std::vector<std::string> preset_names();

/// Accepts {"topology": {"kind": "line"|"grid", ...}, "exit_prob": r, "seed": u}
/// plus optional name/start/horizon/restart_threshold/restart_enabled/prior.
ScenarioSpec parse_scenario_json(std::string_view text);

/// A preset name or a path to a JSON scenario file.
Scenario load_scenario(std::string_view preset_or_path);

}  // namespace idtrack
