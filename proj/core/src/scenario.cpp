#include "idtrack/scenario.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "idtrack/errors.hpp"

namespace idtrack {

namespace {

Position centre(const Topology& topology) {
  if (const auto* line = std::get_if<Line1D>(&topology)) return line->n / 2;
  const auto& grid = std::get<Grid2D>(topology);
  return (grid.rows / 2) * grid.cols + grid.cols / 2;
}

}  // namespace

Scenario make_scenario(const ScenarioSpec& spec) {
  Scenario s;
  s.model = std::make_shared<const TransitionModel>(build_model(spec.topology, spec.exit_prob, spec.seed));
  s.name = spec.name;
  s.start = spec.start.value_or(centre(spec.topology));
  s.horizon = spec.horizon;
  s.restart_threshold = spec.restart_threshold.value_or(
      std::holds_alternative<Line1D>(spec.topology) ? std::size_t{14} : std::size_t{20});
  s.restart_enabled = spec.restart_enabled;
  s.prior = spec.prior;
  s.validate();
  return s;
}

Scenario preset_scenario(std::string_view name) {
  ScenarioSpec spec;
  spec.name = std::string(name);
  if (name == "line41") {
    spec.topology = Line1D{41, 3, {}};
    spec.start = 20;
    spec.restart_threshold = 14;
  } else if (name == "grid8") {
    spec.topology = Grid2D{8, 8};
    spec.restart_threshold = 20;
  } else if (name == "grid16") {
    spec.topology = Grid2D{16, 16};
    spec.restart_threshold = 20;
  } else {
    throw ConfigError("unknown scenario preset '" + std::string(name) + "'");
  }
  return make_scenario(spec);
}

std::vector<std::string> preset_names() { return {"line41", "grid8", "grid16"}; }

ScenarioSpec parse_scenario_json(std::string_view text) {
  ScenarioSpec spec;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& topo = j.at("topology");
    const auto kind = topo.at("kind").get<std::string>();
    if (kind == "line") {
      Line1D line;
      line.n = topo.at("n").get<std::size_t>();
      line.max_step = topo.value("max_step", std::size_t{3});
      if (topo.contains("kernel")) line.kernel = topo.at("kernel").get<std::vector<double>>();
      spec.topology = std::move(line);
    } else if (kind == "grid") {
      spec.topology = Grid2D{topo.at("rows").get<std::size_t>(), topo.at("cols").get<std::size_t>()};
    } else {
      throw ConfigError("topology kind must be 'line' or 'grid'");
    }
    spec.exit_prob = j.value("exit_prob", 0.0);
    spec.seed = j.value("seed", kPresetGridSeed);
    spec.name = j.value("name", kind == "line" ? std::string("line") : std::string("grid"));
    if (j.contains("start")) spec.start = j.at("start").get<Position>();
    spec.horizon = j.value("horizon", std::size_t{30});
    if (j.contains("restart_threshold")) spec.restart_threshold = j.at("restart_threshold").get<std::size_t>();
    spec.restart_enabled = j.value("restart_enabled", true);
    const auto prior = j.value("prior", std::string("known"));
    if (prior == "known") {
      spec.prior = InitialBelief::KnownStart;
    } else if (prior == "uniform") {
      spec.prior = InitialBelief::Uniform;
    } else {
      throw ConfigError("prior must be 'known' or 'uniform'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad scenario file: ") + e.what());
  }
  return spec;
}

Scenario load_scenario(std::string_view preset_or_path) {
  for (const auto& name : preset_names())
    if (preset_or_path == name) return preset_scenario(name);
  std::ifstream in{std::string(preset_or_path)};
  if (!in) throw ConfigError("cannot open scenario '" + std::string(preset_or_path) + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return make_scenario(parse_scenario_json(text.str()));
}

}  // namespace idtrack
