#pragma once

#include <string>
#include <vector>

#include "calibration.hpp"
#include "model.hpp"
#include "phase_diagram.hpp"
#include "terrain_map.hpp"

namespace granslope {

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// fixed 9-significant-digit formatting used by every writer
std::string format_double(double value);

// --- measurement files -----------------------------------------------------
// CSV with header `depth_m,force_N` / `displacement_m,force_N`; `# key=value`
// comment lines carry metadata; a sidecar JSON (same path, .json extension)
// overrides the inline metadata on conflict.
PenetrationRecord load_penetration_csv(const std::string& path);
ShearRecord load_shear_csv(const std::string& path);

// --- terrain interchange ---------------------------------------------------
// {"k_n": float, "k_s_profile": [{"theta_deg": float, "k_s": float}, ...]}
TerrainStrength terrain_from_json(const std::string& text);
TerrainStrength load_terrain_json(const std::string& path);
std::string terrain_to_json(const TerrainStrength& terrain);

// --- robot / run config ----------------------------------------------------
// accepts either a bare robot object or {"robot": {...}, "terrain": {...}}
RobotConfig robot_from_json(const std::string& text);
RobotConfig load_robot_json(const std::string& path);
// terrain comes from an inline "terrain" object or a "terrain_file" path
// (resolved relative to the config file); absent -> has_terrain = false
struct RunConfig {
  RobotConfig robot;
  bool has_terrain = false;
  TerrainStrength terrain;
};
RunConfig load_run_config(const std::string& path);

// --- heightmap -------------------------------------------------------------
// first line `ncols nrows cell_size_m`, then nrows elevation rows
TerrainMap load_heightmap(const std::string& path);
TerrainMap heightmap_from_text(const std::string& text);

// --- result writers --------------------------------------------------------
std::string phase_diagram_to_json(const PhaseDiagram& diagram);
std::string phase_diagram_to_csv(const PhaseDiagram& diagram);
std::string path_result_to_json(const PathResult& path);
std::string risk_map_to_csv(const RiskMap& risk);
std::string trace_to_csv(const std::vector<TracePoint>& trace);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace granslope
