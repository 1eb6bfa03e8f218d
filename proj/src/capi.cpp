#include "granslope.h"

#include <cstring>
#include <limits>
#include <string>

#include "calibration.hpp"
#include "io.hpp"
#include "model.hpp"
#include "phase_diagram.hpp"
#include "terrain_map.hpp"

using namespace granslope;

namespace {

thread_local std::string g_last_error;

constexpr double kDegToRad = kPi / 180.0;

void set_error(const std::string& message) { g_last_error = message; }

// maps C++ exceptions thrown by the core onto status codes
template <typename Fn>
gs_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const GeometricInfeasible& e) {
    set_error(e.what());
    return GS_ERR_INFEASIBLE;
  } catch (const CalibrationError& e) {
    set_error(e.what());
    return GS_ERR_CALIBRATION;
  } catch (const ParseError& e) {
    set_error(e.what());
    return GS_ERR_PARSE;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return GS_ERR_INVALID_ARGUMENT;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return GS_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return GS_ERR_INTERNAL;
  }
}

gs_status require_args(bool ok) {
  if (!ok) {
    set_error("null argument");
    return GS_ERR_INVALID_ARGUMENT;
  }
  return GS_OK;
}

gs_status copy_string(const std::string& text, char* buffer, size_t* size) {
  if (!size) return require_args(false);
  size_t needed = text.size() + 1;
  if (!buffer) {
    *size = needed;
    return GS_OK;
  }
  if (*size < needed) {
    *size = needed;
    set_error("buffer too small");
    return GS_ERR_BUFFER_TOO_SMALL;
  }
  std::memcpy(buffer, text.c_str(), needed);
  *size = needed;
  return GS_OK;
}

gs_status copy_file(const std::string& text, const char* path) {
  return guarded([&] {
    write_file(path, text);
    return GS_OK;
  });
}

}  // namespace

struct gs_robot {
  RobotConfig config;
};
struct gs_terrain {
  TerrainStrength terrain;
};
struct gs_phase_diagram {
  PhaseDiagram diagram;
};
struct gs_heightmap {
  TerrainMap map;
};
struct gs_risk_map {
  RiskMap risk;
};
struct gs_path {
  PathResult path;
};

extern "C" {

const char* gs_last_error(void) { return g_last_error.c_str(); }

void gs_robot_params_init(gs_robot_params* params) {
  if (!params) return;
  RobotConfig d;
  params->mass_kg = d.mass;
  params->leg_radius_m = d.leg_radius;
  params->hip_height_m = d.hip_height;
  params->leg_width_m = d.leg_width;
  params->omega_rad_s = d.omega;
  params->n_stance = d.stance_legs;
  params->delta_t_s = d.response_time;
  params->stride_period_s = d.stride_period;
  params->contact_area_m2 = d.contact_area;
  params->gravity_m_s2 = d.gravity;
  params->s_star_m = 0.0;
}

gs_status gs_robot_create(const gs_robot_params* params, gs_robot** out) {
  if (auto st = require_args(params && out)) return st;
  return guarded([&] {
    RobotConfig config;
    config.mass = params->mass_kg;
    config.leg_radius = params->leg_radius_m;
    config.hip_height = params->hip_height_m;
    config.leg_width = params->leg_width_m;
    config.omega = params->omega_rad_s;
    config.stance_legs = params->n_stance;
    config.response_time = params->delta_t_s;
    config.stride_period = params->stride_period_s;
    config.contact_area = params->contact_area_m2;
    config.gravity = params->gravity_m_s2;
    if (params->s_star_m > 0.0) config.level_step_override = params->s_star_m;
    config.validate();
    *out = new gs_robot{config};
    return GS_OK;
  });
}

gs_status gs_robot_from_json_file(const char* path, gs_robot** out) {
  if (auto st = require_args(path && out)) return st;
  return guarded([&] {
    *out = new gs_robot{load_robot_json(path)};
    return GS_OK;
  });
}

void gs_robot_destroy(gs_robot* robot) { delete robot; }

gs_status gs_terrain_create(double k_n, const double* theta_deg, const double* k_s,
                            size_t count, gs_terrain** out) {
  if (auto st = require_args(theta_deg && k_s && out)) return st;
  return guarded([&] {
    std::vector<std::pair<double, double>> samples;
    samples.reserve(count);
    for (size_t i = 0; i < count; ++i)
      samples.emplace_back(theta_deg[i] * kDegToRad, k_s[i]);
    TerrainStrength terrain;
    terrain.normal_resistance = k_n;
    terrain.shear = build_profile(std::move(samples));
    terrain.validate();
    *out = new gs_terrain{std::move(terrain)};
    return GS_OK;
  });
}

gs_status gs_terrain_from_json_file(const char* path, gs_terrain** out) {
  if (auto st = require_args(path && out)) return st;
  return guarded([&] {
    *out = new gs_terrain{load_terrain_json(path)};
    return GS_OK;
  });
}

gs_status gs_terrain_to_json(const gs_terrain* terrain, char* buffer, size_t* size) {
  if (auto st = require_args(terrain != nullptr)) return st;
  return copy_string(terrain_to_json(terrain->terrain), buffer, size);
}

gs_status gs_terrain_max_theta_deg(const gs_terrain* terrain, double* out) {
  if (auto st = require_args(terrain && out)) return st;
  return guarded([&] {
    *out = terrain->terrain.shear.max_theta() / kDegToRad;
    return GS_OK;
  });
}

void gs_terrain_destroy(gs_terrain* terrain) { delete terrain; }

gs_status gs_config_load(const char* path, gs_robot** robot, gs_terrain** terrain) {
  if (auto st = require_args(path && robot && terrain)) return st;
  return guarded([&] {
    RunConfig config = load_run_config(path);
    *robot = new gs_robot{config.robot};
    *terrain = config.has_terrain ? new gs_terrain{std::move(config.terrain)} : nullptr;
    return GS_OK;
  });
}

const char* gs_regime_name(gs_regime regime) {
  return regime_name(static_cast<Regime>(regime));
}

gs_status gs_stride_eval(const gs_robot* robot, const gs_terrain* terrain,
                         double theta_deg, gs_stride_outcome* out) {
  if (auto st = require_args(robot && terrain && out)) return st;
  return guarded([&] {
    double theta = theta_deg * kDegToRad;
    if (theta < 0.0 || theta >= kPi / 2.0)
      throw std::invalid_argument("theta_deg must be in [0, 90)");
    StrideOutcome o = net_step(robot->config, terrain->terrain, theta);
    bool clamped = false;
    terrain->terrain.shear.evaluate(theta, &clamped);
    out->shear_depth_m = o.shear_depth;
    out->normal_depth_m = o.normal_depth;
    out->anchoring_time_s = o.anchoring_time;
    out->slip_m = o.slip;
    out->propulsion_m = o.propulsion;
    out->step_m = o.step;
    out->mean_speed_m_s = o.mean_speed;
    out->level_step_m = o.level_step;
    out->geometric_feasible = o.geometric_feasible ? 1 : 0;
    out->regime = static_cast<gs_regime>(o.regime);
    out->profile_clamped = clamped ? 1 : 0;
    return GS_OK;
  });
}

gs_status gs_velocity_trace(const gs_robot* robot, const gs_terrain* terrain,
                            double theta_deg, double dt_s, double* t, double* v,
                            size_t* count) {
  if (auto st = require_args(robot && terrain && count)) return st;
  return guarded([&] {
    double theta = theta_deg * kDegToRad;
    StrideOutcome o = net_step(robot->config, terrain->terrain, theta);
    auto trace = velocity_trace(robot->config, o, theta, dt_s);
    if (!t || !v) {
      *count = trace.size();
      return GS_OK;
    }
    if (*count < trace.size()) {
      *count = trace.size();
      set_error("buffer too small");
      return GS_ERR_BUFFER_TOO_SMALL;
    }
    for (size_t i = 0; i < trace.size(); ++i) {
      t[i] = trace[i].t;
      v[i] = trace[i].v;
    }
    *count = trace.size();
    return GS_OK;
  });
}

gs_status gs_fit_normal_csv(const char* path, gs_normal_fit* out) {
  if (auto st = require_args(path && out)) return st;
  return guarded([&] {
    NormalFit fit = fit_normal_resistance(load_penetration_csv(path));
    out->k_n = fit.k_n;
    out->r_squared = fit.r_squared;
    return GS_OK;
  });
}

gs_status gs_fit_shear_csv(const char* path, gs_shear_fit* out) {
  if (auto st = require_args(path && out)) return st;
  return guarded([&] {
    ShearFit fit = fit_shear_strength(load_shear_csv(path));
    out->theta_deg = fit.theta / kDegToRad;
    out->k_s = fit.k_s;
    out->plateau_force_n = fit.plateau_force;
    return GS_OK;
  });
}

gs_status gs_sweep_run(const gs_robot* robot, const gs_sweep_spec* spec,
                       gs_phase_diagram** out) {
  if (auto st = require_args(robot && spec && out)) return st;
  return guarded([&] {
    SweepSpec s;
    s.k_n = {spec->k_n_min, spec->k_n_max, spec->k_n_count};
    s.k_s = {spec->k_s_min, spec->k_s_max, spec->k_s_count};
    s.scale = spec->log_scale ? AxisScale::Logarithmic : AxisScale::Linear;
    s.robot = robot->config;
    s.theta = spec->theta_deg * kDegToRad;
    s.threads = spec->threads;
    *out = new gs_phase_diagram{sweep(s)};
    return GS_OK;
  });
}

gs_status gs_diagram_shape(const gs_phase_diagram* diagram, size_t* ks_rows,
                           size_t* kn_cols) {
  if (auto st = require_args(diagram && ks_rows && kn_cols)) return st;
  *ks_rows = diagram->diagram.k_s_values.size();
  *kn_cols = diagram->diagram.k_n_values.size();
  return GS_OK;
}

gs_status gs_diagram_cell(const gs_phase_diagram* diagram, size_t ks_row,
                          size_t kn_col, double* step_m, gs_regime* regime) {
  if (auto st = require_args(diagram != nullptr)) return st;
  const PhaseDiagram& d = diagram->diagram;
  if (ks_row >= d.k_s_values.size() || kn_col >= d.k_n_values.size()) {
    set_error("cell index out of range");
    return GS_ERR_INVALID_ARGUMENT;
  }
  size_t i = ks_row * d.k_n_values.size() + kn_col;
  if (step_m) *step_m = d.step_lengths[i];
  if (regime) *regime = static_cast<gs_regime>(d.labels[i]);
  return GS_OK;
}

gs_status gs_diagram_contour_count(const gs_phase_diagram* diagram, size_t* count) {
  if (auto st = require_args(diagram && count)) return st;
  *count = diagram->diagram.contours.size();
  return GS_OK;
}

gs_status gs_diagram_contour(const gs_phase_diagram* diagram, size_t index,
                             double* k_n, double* k_s, size_t* count) {
  if (auto st = require_args(diagram && count)) return st;
  if (index >= diagram->diagram.contours.size()) {
    set_error("contour index out of range");
    return GS_ERR_INVALID_ARGUMENT;
  }
  const Polyline& line = diagram->diagram.contours[index];
  if (!k_n || !k_s) {
    *count = line.size();
    return GS_OK;
  }
  if (*count < line.size()) {
    *count = line.size();
    set_error("buffer too small");
    return GS_ERR_BUFFER_TOO_SMALL;
  }
  for (size_t i = 0; i < line.size(); ++i) {
    k_n[i] = line[i][0];
    k_s[i] = line[i][1];
  }
  *count = line.size();
  return GS_OK;
}

gs_status gs_diagram_write_json(const gs_phase_diagram* diagram, const char* path) {
  if (auto st = require_args(diagram && path)) return st;
  return copy_file(phase_diagram_to_json(diagram->diagram), path);
}

gs_status gs_diagram_write_csv(const gs_phase_diagram* diagram, const char* path) {
  if (auto st = require_args(diagram && path)) return st;
  return copy_file(phase_diagram_to_csv(diagram->diagram), path);
}

void gs_phase_diagram_destroy(gs_phase_diagram* diagram) { delete diagram; }

gs_status gs_heightmap_load(const char* path, gs_heightmap** out) {
  if (auto st = require_args(path && out)) return st;
  return guarded([&] {
    *out = new gs_heightmap{load_heightmap(path)};
    return GS_OK;
  });
}

gs_status gs_heightmap_create(int ncols, int nrows, double cell_size_m,
                              const double* elevations_row_major, gs_heightmap** out) {
  if (auto st = require_args(elevations_row_major && out)) return st;
  return guarded([&] {
    TerrainMap map;
    map.width = ncols;
    map.height = nrows;
    map.cell_size = cell_size_m;
    if (ncols >= 2 && nrows >= 2)
      map.elevations.assign(
          elevations_row_major,
          elevations_row_major + static_cast<size_t>(ncols) * static_cast<size_t>(nrows));
    map.validate();
    *out = new gs_heightmap{std::move(map)};
    return GS_OK;
  });
}

void gs_heightmap_destroy(gs_heightmap* map) { delete map; }

gs_status gs_risk_map_build(const gs_heightmap* map, const gs_robot* robot,
                            const gs_terrain* terrain, double lambda,
                            gs_risk_map** out) {
  if (auto st = require_args(map && robot && terrain && out)) return st;
  return guarded([&] {
    *out = new gs_risk_map{
        build_risk_map(map->map, robot->config, terrain->terrain, lambda)};
    return GS_OK;
  });
}

gs_status gs_risk_map_cell(const gs_risk_map* risk, int col, int row,
                           double* slope_deg, double* step_m, gs_regime* regime,
                           double* cost) {
  if (auto st = require_args(risk != nullptr)) return st;
  const RiskMap& r = risk->risk;
  if (col < 0 || col >= r.width || row < 0 || row >= r.height) {
    set_error("cell index out of range");
    return GS_ERR_INVALID_ARGUMENT;
  }
  size_t i = r.index(col, row);
  if (slope_deg) *slope_deg = r.slope_deg[i];
  if (step_m) *step_m = r.step[i];
  if (regime) *regime = static_cast<gs_regime>(r.regime[i]);
  if (cost) *cost = r.cost[i];
  return GS_OK;
}

gs_status gs_risk_map_write_csv(const gs_risk_map* risk, const char* path) {
  if (auto st = require_args(risk && path)) return st;
  return copy_file(risk_map_to_csv(risk->risk), path);
}

void gs_risk_map_destroy(gs_risk_map* risk) { delete risk; }

gs_status gs_plan_path(const gs_risk_map* risk, int start_col, int start_row,
                       int goal_col, int goal_row, gs_path** out) {
  if (auto st = require_args(risk && out)) return st;
  return guarded([&] {
    auto result =
        plan_path(risk->risk, {start_col, start_row}, {goal_col, goal_row});
    if (!result) {
      set_error("no path: goal unreachable through passable cells");
      return GS_ERR_NO_PATH;
    }
    *out = new gs_path{std::move(*result)};
    return GS_OK;
  });
}

gs_status gs_path_length(const gs_path* path, size_t* waypoint_count) {
  if (auto st = require_args(path && waypoint_count)) return st;
  *waypoint_count = path->path.waypoints.size();
  return GS_OK;
}

gs_status gs_path_waypoint(const gs_path* path, size_t index, int* col, int* row) {
  if (auto st = require_args(path && col && row)) return st;
  if (index >= path->path.waypoints.size()) {
    set_error("waypoint index out of range");
    return GS_ERR_INVALID_ARGUMENT;
  }
  *col = path->path.waypoints[index].col;
  *row = path->path.waypoints[index].row;
  return GS_OK;
}

gs_status gs_path_totals(const gs_path* path, double* total_cost,
                         double* total_length_m) {
  if (auto st = require_args(path != nullptr)) return st;
  if (total_cost) *total_cost = path->path.total_cost;
  if (total_length_m) *total_length_m = path->path.total_length;
  return GS_OK;
}

gs_status gs_path_regime_counts(const gs_path* path, int counts[4]) {
  if (auto st = require_args(path && counts)) return st;
  for (int i = 0; i < 4; ++i)
    counts[i] = path->path.regime_counts[static_cast<size_t>(i)];
  return GS_OK;
}

gs_status gs_path_write_json(const gs_path* path, const char* file_path) {
  if (auto st = require_args(path && file_path)) return st;
  return copy_file(path_result_to_json(path->path), file_path);
}

void gs_path_destroy(gs_path* path) { delete path; }

}  // extern "C"
