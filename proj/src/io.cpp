#include "io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace granslope {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string sidecar_path(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + ".json";
  return path.substr(0, dot) + ".json";
}

double parse_number(const std::string& text, const std::string& context) {
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (trim(text.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(context + ": expected a number, got '" + text + "'");
}

struct CsvData {
  std::map<std::string, double> metadata;
  std::vector<std::pair<double, double>> samples;
};

CsvData load_measurement_csv(const std::string& path, const std::string& col0,
                             const std::string& col1) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");

  CsvData data;
  std::string line;
  bool header_seen = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      std::string body = trim(t.substr(1));
      std::size_t eq = body.find('=');
      if (eq != std::string::npos) {
        std::string key = trim(body.substr(0, eq));
        std::string val = trim(body.substr(eq + 1));
        if (!key.empty())
          data.metadata[key] = parse_number(val, path + ": metadata '" + key + "'");
      }
      continue;
    }
    std::size_t comma = t.find(',');
    if (comma == std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected two comma-separated columns");
    std::string a = trim(t.substr(0, comma));
    std::string b = trim(t.substr(comma + 1));
    if (!header_seen) {
      if (a != col0)
        throw ParseError(path + ": bad header column '" + a + "', expected '" + col0 + "'");
      if (b != col1)
        throw ParseError(path + ": bad header column '" + b + "', expected '" + col1 + "'");
      header_seen = true;
      continue;
    }
    data.samples.emplace_back(parse_number(a, path + ":" + std::to_string(lineno)),
                              parse_number(b, path + ":" + std::to_string(lineno)));
  }
  if (!header_seen) throw ParseError(path + ": missing header line");

  // sidecar JSON overrides inline metadata on conflict
  std::ifstream side(sidecar_path(path));
  if (side) {
    json j;
    try {
      side >> j;
    } catch (const json::exception& e) {
      throw ParseError(sidecar_path(path) + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError(sidecar_path(path) + ": expected a JSON object");
    for (auto& [key, value] : j.items()) {
      if (!key.empty() && key[0] == '_') continue;
      if (!value.is_number())
        throw ParseError(sidecar_path(path) + ": key '" + key + "' must be a number");
      data.metadata[key] = value.get<double>();
    }
  }
  return data;
}

double require_key(const CsvData& data, const std::string& key, const std::string& path) {
  auto it = data.metadata.find(key);
  if (it == data.metadata.end())
    throw ParseError(path + ": missing metadata key '" + key + "'");
  return it->second;
}

double optional_key(const CsvData& data, const std::string& key, double fallback) {
  auto it = data.metadata.find(key);
  return it == data.metadata.end() ? fallback : it->second;
}

constexpr double kDegToRad = kPi / 180.0;

double json_number(const json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key))
    throw ParseError(context + ": missing key '" + key + "'");
  if (!j[key].is_number())
    throw ParseError(context + ": key '" + key + "' must be a number");
  return j[key].get<double>();
}

RobotConfig robot_from_object(const json& j, const std::string& context) {
  static const std::map<std::string, int> known = {
      {"mass_kg", 0},          {"leg_radius_m", 0},  {"hip_height_m", 0},
      {"leg_width_m", 0},      {"omega_rad_s", 0},   {"n_stance", 0},
      {"delta_t_s", 0},        {"stride_period_s", 0}, {"contact_area_m2", 0},
      {"gravity_m_s2", 0},     {"s_star_m", 0}};
  for (auto& [key, value] : j.items()) {
    if (!key.empty() && key[0] == '_') continue;
    if (!known.count(key))
      throw ParseError(context + ": unknown robot key '" + key + "'");
  }

  RobotConfig robot;
  robot.mass = json_number(j, "mass_kg", context);
  robot.leg_radius = json_number(j, "leg_radius_m", context);
  robot.leg_width = json_number(j, "leg_width_m", context);
  robot.omega = json_number(j, "omega_rad_s", context);
  robot.response_time = json_number(j, "delta_t_s", context);
  robot.stride_period = json_number(j, "stride_period_s", context);
  double n = json_number(j, "n_stance", context);
  if (n < 1.0 || n != std::floor(n))
    throw ParseError(context + ": n_stance must be a positive integer");
  robot.stance_legs = static_cast<int>(n);
  robot.hip_height =
      j.contains("hip_height_m") ? json_number(j, "hip_height_m", context) : robot.leg_radius;
  robot.contact_area = j.contains("contact_area_m2")
                           ? json_number(j, "contact_area_m2", context)
                           : robot.leg_width * robot.leg_width;
  robot.gravity =
      j.contains("gravity_m_s2") ? json_number(j, "gravity_m_s2", context) : 9.81;
  if (j.contains("s_star_m"))
    robot.level_step_override = json_number(j, "s_star_m", context);
  try {
    robot.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(context + ": " + e.what());
  }
  return robot;
}

TerrainStrength terrain_from_object(const json& j, const std::string& context) {
  TerrainStrength terrain;
  terrain.normal_resistance = json_number(j, "k_n", context);
  if (!j.contains("k_s_profile") || !j["k_s_profile"].is_array())
    throw ParseError(context + ": missing 'k_s_profile' array");
  std::vector<std::pair<double, double>> samples;
  for (const auto& entry : j["k_s_profile"]) {
    samples.emplace_back(json_number(entry, "theta_deg", context) * kDegToRad,
                         json_number(entry, "k_s", context));
  }
  try {
    terrain.shear = ShearStrengthProfile(std::move(samples));
    terrain.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(context + ": " + e.what());
  }
  return terrain;
}

std::string dirname_of(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

PenetrationRecord load_penetration_csv(const std::string& path) {
  CsvData data = load_measurement_csv(path, "depth_m", "force_N");
  PenetrationRecord rec;
  rec.theta = require_key(data, "theta_deg", path) * kDegToRad;
  rec.probe_area = require_key(data, "probe_area_m2", path);
  rec.tare = optional_key(data, "tare_N", 0.0);
  rec.samples = std::move(data.samples);
  return rec;
}

ShearRecord load_shear_csv(const std::string& path) {
  CsvData data = load_measurement_csv(path, "displacement_m", "force_N");
  ShearRecord rec;
  rec.theta = require_key(data, "theta_deg", path) * kDegToRad;
  rec.plate_width = require_key(data, "plate_width_m", path);
  rec.plate_depth = require_key(data, "plate_depth_m", path);
  rec.tare = optional_key(data, "tare_N", 0.0);
  rec.plateau_start = optional_key(data, "plateau_start_m", rec.plateau_start);
  rec.plateau_end = optional_key(data, "plateau_end_m", rec.plateau_end);
  rec.samples = std::move(data.samples);
  return rec;
}

TerrainStrength terrain_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("terrain JSON: ") + e.what());
  }
  return terrain_from_object(j, "terrain");
}

TerrainStrength load_terrain_json(const std::string& path) {
  try {
    return terrain_from_json(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string terrain_to_json(const TerrainStrength& terrain) {
  std::string out = "{\n  \"k_n\": " + format_double(terrain.normal_resistance) +
                    ",\n  \"k_s_profile\": [\n";
  const auto& samples = terrain.shear.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out += "    {\"theta_deg\": " + format_double(samples[i].first / kDegToRad) +
           ", \"k_s\": " + format_double(samples[i].second) + "}";
    out += i + 1 < samples.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

RobotConfig robot_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("robot JSON: ") + e.what());
  }
  if (j.contains("robot")) return robot_from_object(j["robot"], "robot");
  return robot_from_object(j, "robot");
}

RobotConfig load_robot_json(const std::string& path) {
  try {
    return robot_from_json(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

RunConfig load_run_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  RunConfig config;
  try {
    if (j.contains("robot"))
      config.robot = robot_from_object(j["robot"], "robot");
    else
      config.robot = robot_from_object(j, "robot");

    if (j.contains("terrain")) {
      config.terrain = terrain_from_object(j["terrain"], "terrain");
      config.has_terrain = true;
    } else if (j.contains("terrain_file")) {
      std::string rel = j["terrain_file"].get<std::string>();
      std::string resolved =
          (!rel.empty() && rel[0] == '/') ? rel : dirname_of(path) + rel;
      config.terrain = load_terrain_json(resolved);
      config.has_terrain = true;
    }
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return config;
}

TerrainMap heightmap_from_text(const std::string& text) {
  std::istringstream in(text);
  TerrainMap map;
  if (!(in >> map.width >> map.height >> map.cell_size))
    throw ParseError("heightmap: bad first line, expected 'ncols nrows cell_size_m'");
  if (map.width < 2 || map.height < 2 || !(map.cell_size > 0.0))
    throw ParseError("heightmap: invalid dimensions");
  map.elevations.resize(static_cast<std::size_t>(map.width) *
                        static_cast<std::size_t>(map.height));
  for (auto& z : map.elevations)
    if (!(in >> z)) throw ParseError("heightmap: too few elevation values");
  double extra;
  if (in >> extra) throw ParseError("heightmap: trailing data after elevation grid");
  map.validate();
  return map;
}

TerrainMap load_heightmap(const std::string& path) {
  try {
    return heightmap_from_text(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string phase_diagram_to_json(const PhaseDiagram& diagram) {
  const SweepSpec& spec = diagram.spec;
  std::string out = "{\n  \"spec\": {";
  out += "\"k_n_min\": " + format_double(spec.k_n.min);
  out += ", \"k_n_max\": " + format_double(spec.k_n.max);
  out += ", \"k_n_count\": " + std::to_string(spec.k_n.count);
  out += ", \"k_s_min\": " + format_double(spec.k_s.min);
  out += ", \"k_s_max\": " + format_double(spec.k_s.max);
  out += ", \"k_s_count\": " + std::to_string(spec.k_s.count);
  out += std::string(", \"scale\": \"") +
         (spec.scale == AxisScale::Logarithmic ? "log" : "linear") + "\"";
  out += ", \"theta_deg\": " + format_double(spec.theta * 180.0 / kPi);
  out += ", \"mass_kg\": " + format_double(spec.robot.mass);
  out += ", \"leg_radius_m\": " + format_double(spec.robot.leg_radius);
  out += "},\n";

  auto write_values = [&](const char* key, const std::vector<double>& values) {
    out += std::string("  \"") + key + "\": [";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out += ", ";
      out += format_double(values[i]);
    }
    out += "],\n";
  };
  write_values("k_n_values", diagram.k_n_values);
  write_values("k_s_values", diagram.k_s_values);

  std::size_t cols = diagram.k_n_values.size();
  std::size_t rows = diagram.k_s_values.size();

  out += "  \"labels\": [\n";
  for (std::size_t r = 0; r < rows; ++r) {
    out += "    [";
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) out += ",";
      out += std::to_string(static_cast<int>(diagram.labels[r * cols + c]));
    }
    out += r + 1 < rows ? "],\n" : "]\n";
  }
  out += "  ],\n";

  out += "  \"step_lengths_m\": [\n";
  for (std::size_t r = 0; r < rows; ++r) {
    out += "    [";
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) out += ", ";
      double s = diagram.step_lengths[r * cols + c];
      out += std::isfinite(s) ? format_double(s) : "null";
    }
    out += r + 1 < rows ? "],\n" : "]\n";
  }
  out += "  ],\n";

  out += "  \"contours\": [\n";
  for (std::size_t i = 0; i < diagram.contours.size(); ++i) {
    out += "    [";
    const Polyline& line = diagram.contours[i];
    for (std::size_t p = 0; p < line.size(); ++p) {
      if (p) out += ", ";
      out += "[" + format_double(line[p][0]) + ", " + format_double(line[p][1]) + "]";
    }
    out += i + 1 < diagram.contours.size() ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string phase_diagram_to_csv(const PhaseDiagram& diagram) {
  std::string out = "k_n,k_s,s_m,label\n";
  std::size_t cols = diagram.k_n_values.size();
  for (std::size_t r = 0; r < diagram.k_s_values.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double s = diagram.step_lengths[r * cols + c];
      out += format_double(diagram.k_n_values[c]) + "," +
             format_double(diagram.k_s_values[r]) + "," +
             (std::isfinite(s) ? format_double(s) : "-inf") + "," +
             std::to_string(static_cast<int>(diagram.labels[r * cols + c])) + "\n";
    }
  }
  return out;
}

std::string path_result_to_json(const PathResult& path) {
  std::string out = "{\n  \"waypoints\": [";
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    if (i) out += ", ";
    out += "[" + std::to_string(path.waypoints[i].col) + "," +
           std::to_string(path.waypoints[i].row) + "]";
  }
  out += "],\n  \"total_cost\": " + format_double(path.total_cost);
  out += ",\n  \"total_length_m\": " + format_double(path.total_length);
  out += ",\n  \"regime_counts\": {";
  for (int i = 0; i < 4; ++i) {
    if (i) out += ", ";
    out += std::string("\"") + regime_name(static_cast<Regime>(i)) +
           "\": " + std::to_string(path.regime_counts[static_cast<std::size_t>(i)]);
  }
  out += "}\n}\n";
  return out;
}

std::string risk_map_to_csv(const RiskMap& risk) {
  std::string out = "col,row,slope_deg,s_m,label,cost\n";
  for (int r = 0; r < risk.height; ++r) {
    for (int c = 0; c < risk.width; ++c) {
      std::size_t i = risk.index(c, r);
      double s = risk.step[i];
      double cost = risk.cost[i];
      out += std::to_string(c) + "," + std::to_string(r) + "," +
             format_double(risk.slope_deg[i]) + "," +
             (std::isfinite(s) ? format_double(s) : "nan") + "," +
             regime_name(risk.regime[i]) + "," +
             (std::isfinite(cost) ? format_double(cost) : "inf") + "\n";
    }
  }
  return out;
}

std::string trace_to_csv(const std::vector<TracePoint>& trace) {
  std::string out = "t_s,v_m_s\n";
  for (const auto& p : trace)
    out += format_double(p.t) + "," + format_double(p.v) + "\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << content;
  if (!out) throw ParseError(path + ": write failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace granslope
