// granslope CLI: file-to-file runs over the shared-library C API.
// Exit codes: 0 success, 2 input/config error, 3 domain result error (no path).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "granslope.h"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDomain = 3;

[[noreturn]] void fail(int code, const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  std::exit(code);
}

void check(gs_status status, int code = kExitInput) {
  if (status == GS_OK) return;
  fail(status == GS_ERR_NO_PATH ? kExitDomain : code, gs_last_error());
}

std::string fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

int sweep_threads_from_env() {
  const char* env = std::getenv("GRANULAR_SLOPE_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 0) fail(kExitInput, "GRANULAR_SLOPE_THREADS must be a non-negative integer");
  return static_cast<int>(n);
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(kExitInput, path + ": cannot open for writing");
  out << content;
  if (!out) fail(kExitInput, path + ": write failed");
}

struct LoadedConfig {
  gs_robot* robot = nullptr;
  gs_terrain* terrain = nullptr;
};

LoadedConfig load_config(const std::string& path, bool need_terrain) {
  LoadedConfig c;
  check(gs_config_load(path.c_str(), &c.robot, &c.terrain));
  if (need_terrain && !c.terrain)
    fail(kExitInput, path + ": config has no terrain (inline \"terrain\" or \"terrain_file\")");
  return c;
}

void warn_clamped(const gs_terrain* terrain, double theta_deg, bool quiet) {
  double max_theta = 0.0;
  if (gs_terrain_max_theta_deg(terrain, &max_theta) == GS_OK &&
      theta_deg > max_theta && !quiet)
    std::fprintf(stderr,
                 "warning: theta %s deg exceeds the calibrated profile maximum %s deg; "
                 "endpoint value used\n",
                 fmt(theta_deg).c_str(), fmt(max_theta).c_str());
}

int run_calibrate(const std::string& penetration, const std::vector<std::string>& shear,
                  const std::string& out, bool quiet) {
  gs_normal_fit normal{};
  check(gs_fit_normal_csv(penetration.c_str(), &normal));
  if (!quiet)
    std::printf("k_n = %s N/m^3 (R^2 = %s) from %s\n", fmt(normal.k_n).c_str(),
                fmt(normal.r_squared).c_str(), penetration.c_str());

  std::vector<double> thetas, values;
  for (const auto& path : shear) {
    gs_shear_fit fit{};
    check(gs_fit_shear_csv(path.c_str(), &fit));
    if (!quiet)
      std::printf("k_s(%s deg) = %s N/m^3 (plateau %s N) from %s\n",
                  fmt(fit.theta_deg).c_str(), fmt(fit.k_s).c_str(),
                  fmt(fit.plateau_force_n).c_str(), path.c_str());
    for (double seen : thetas)
      if (seen == fit.theta_deg && !quiet)
        std::fprintf(stderr, "warning: duplicate shear angle %s deg; samples averaged\n",
                     fmt(fit.theta_deg).c_str());
    thetas.push_back(fit.theta_deg);
    values.push_back(fit.k_s);
  }

  gs_terrain* terrain = nullptr;
  check(gs_terrain_create(normal.k_n, thetas.data(), values.data(), thetas.size(),
                          &terrain));
  size_t size = 0;
  check(gs_terrain_to_json(terrain, nullptr, &size));
  std::string json(size, '\0');
  check(gs_terrain_to_json(terrain, json.data(), &size));
  json.resize(size - 1);
  if (out.empty())
    std::fputs(json.c_str(), stdout);
  else
    write_text(out, json);
  gs_terrain_destroy(terrain);
  return 0;
}

int run_stride(const std::string& config_path, std::vector<double> thetas,
               const std::string& out, bool quiet) {
  LoadedConfig c = load_config(config_path, true);
  if (thetas.empty()) thetas = {0.0, 10.0, 15.0, 20.0, 24.0};

  std::string table = "theta_deg,d_s_m,d_n_m,t1_s,s1_m,s2_m,s_m,v_bar_m_s,regime\n";
  for (double theta : thetas) {
    warn_clamped(c.terrain, theta, quiet);
    gs_stride_outcome o{};
    check(gs_stride_eval(c.robot, c.terrain, theta, &o));
    table += fmt(theta) + "," + fmt(o.shear_depth_m) + "," + fmt(o.normal_depth_m) +
             "," + fmt(o.anchoring_time_s) + "," + fmt(o.slip_m) + "," +
             fmt(o.propulsion_m) + "," + fmt(o.step_m) + "," + fmt(o.mean_speed_m_s) +
             "," + gs_regime_name(o.regime) + "\n";
  }
  if (!quiet) std::fputs(table.c_str(), stdout);
  if (!out.empty()) write_text(out, table);
  gs_robot_destroy(c.robot);
  gs_terrain_destroy(c.terrain);
  return 0;
}

int run_sweep(const std::string& config_path, gs_sweep_spec spec, const std::string& out,
              const std::string& format, bool quiet) {
  gs_robot* robot = nullptr;
  gs_terrain* terrain = nullptr;
  check(gs_config_load(config_path.c_str(), &robot, &terrain));
  spec.threads = sweep_threads_from_env();

  gs_phase_diagram* diagram = nullptr;
  check(gs_sweep_run(robot, &spec, &diagram));

  if (format == "csv")
    check(gs_diagram_write_csv(diagram, out.c_str()));
  else
    check(gs_diagram_write_json(diagram, out.c_str()));

  if (!quiet) {
    size_t rows = 0, cols = 0;
    gs_diagram_shape(diagram, &rows, &cols);
    int counts[4] = {0, 0, 0, 0};
    for (size_t r = 0; r < rows; ++r)
      for (size_t col = 0; col < cols; ++col) {
        gs_regime regime;
        gs_diagram_cell(diagram, r, col, nullptr, &regime);
        counts[regime] += 1;
      }
    std::printf("grid %zux%zu: Success=%d Metastable=%d Slippage=%d Sinkage=%d -> %s\n",
                rows, cols, counts[0], counts[1], counts[2], counts[3], out.c_str());
  }
  gs_phase_diagram_destroy(diagram);
  gs_terrain_destroy(terrain);
  gs_robot_destroy(robot);
  return 0;
}

bool parse_cell(const std::string& text, int& col, int& row) {
  return std::sscanf(text.c_str(), "%d,%d", &col, &row) == 2;
}

int run_plan(const std::string& config_path, const std::string& map_path,
             const std::string& start, const std::string& goal, double lambda,
             const std::string& out, const std::string& risk_csv, bool quiet) {
  LoadedConfig c = load_config(config_path, true);
  gs_heightmap* map = nullptr;
  check(gs_heightmap_load(map_path.c_str(), &map));
  gs_risk_map* risk = nullptr;
  check(gs_risk_map_build(map, c.robot, c.terrain, lambda, &risk));
  if (!risk_csv.empty()) check(gs_risk_map_write_csv(risk, risk_csv.c_str()));

  int sc, sr, gc, gr;
  if (!parse_cell(start, sc, sr) || !parse_cell(goal, gc, gr))
    fail(kExitInput, "--start/--goal must be 'col,row'");

  gs_path* path = nullptr;
  check(gs_plan_path(risk, sc, sr, gc, gr, &path));

  if (!out.empty()) check(gs_path_write_json(path, out.c_str()));
  if (!quiet) {
    double cost = 0.0, length = 0.0;
    size_t n = 0;
    gs_path_totals(path, &cost, &length);
    gs_path_length(path, &n);
    std::printf("path: %zu waypoints, cost %s, length %s m\n", n, fmt(cost).c_str(),
                fmt(length).c_str());
  }
  gs_path_destroy(path);
  gs_risk_map_destroy(risk);
  gs_heightmap_destroy(map);
  gs_terrain_destroy(c.terrain);
  gs_robot_destroy(c.robot);
  return 0;
}

int run_trace(const std::string& config_path, double theta, double dt,
              const std::string& out, bool quiet) {
  LoadedConfig c = load_config(config_path, true);
  warn_clamped(c.terrain, theta, quiet);

  size_t count = 0;
  check(gs_velocity_trace(c.robot, c.terrain, theta, dt, nullptr, nullptr, &count));
  std::vector<double> t(count), v(count);
  check(gs_velocity_trace(c.robot, c.terrain, theta, dt, t.data(), v.data(), &count));

  std::string csv = "t_s,v_m_s\n";
  double integral = 0.0;
  for (size_t i = 0; i < count; ++i) {
    csv += fmt(t[i]) + "," + fmt(v[i]) + "\n";
    if (i) integral += 0.5 * (v[i] + v[i - 1]) * (t[i] - t[i - 1]);
  }
  if (out.empty())
    std::fputs(csv.c_str(), stdout);
  else
    write_text(out, csv);

  gs_stride_outcome o{};
  check(gs_stride_eval(c.robot, c.terrain, theta, &o));
  if (!quiet)
    std::printf("integral check: trapezoid=%s m, s2-s1=%s m, diff=%s m\n",
                fmt(integral).c_str(), fmt(o.step_m).c_str(),
                fmt(std::fabs(integral - o.step_m)).c_str());
  gs_terrain_destroy(c.terrain);
  gs_robot_destroy(c.robot);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"granular-slope locomotion toolkit"};
  app.require_subcommand(1);

  std::string config, out, format = "json";
  bool quiet = false;

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "fit terrain strength from force CSVs");
  std::string penetration;
  std::vector<std::string> shear;
  calibrate->add_option("--penetration", penetration, "penetration CSV")->required();
  calibrate->add_option("--shear", shear, "shear CSV (repeatable)")->required();
  calibrate->add_option("--out", out, "output terrain JSON path");
  calibrate->add_flag("--quiet", quiet, "suppress diagnostics");

  // stride
  auto* stride = app.add_subcommand("stride", "per-angle stride table");
  std::vector<double> thetas;
  stride->add_option("--config", config, "run config JSON")->required();
  stride->add_option("--theta", thetas, "slope angle in degrees (repeatable)");
  stride->add_option("--out", out, "also write the table as CSV");
  stride->add_flag("--quiet", quiet, "suppress stdout table");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "terrain-strength phase diagram");
  gs_sweep_spec spec{};
  spec.k_n_count = 200;
  spec.k_s_count = 200;
  spec.log_scale = 1;
  std::string scale = "log";
  sweep->add_option("--config", config, "run config JSON")->required();
  sweep->add_option("--theta", spec.theta_deg, "slope angle in degrees")->required();
  sweep->add_option("--kn-min", spec.k_n_min, "k_n axis minimum, N/m^3")->required();
  sweep->add_option("--kn-max", spec.k_n_max, "k_n axis maximum, N/m^3")->required();
  sweep->add_option("--kn-count", spec.k_n_count, "k_n samples (default 200)");
  sweep->add_option("--ks-min", spec.k_s_min, "k_s axis minimum, N/m^3")->required();
  sweep->add_option("--ks-max", spec.k_s_max, "k_s axis maximum, N/m^3")->required();
  sweep->add_option("--ks-count", spec.k_s_count, "k_s samples (default 200)");
  sweep->add_option("--scale", scale, "axis scale: log|linear")
      ->check(CLI::IsMember({"log", "linear"}));
  sweep->add_option("--out", out, "output path")->required();
  sweep->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sweep->add_flag("--quiet", quiet, "suppress summary line");

  // plan
  auto* plan = app.add_subcommand("plan", "risk-aware path over a heightmap");
  std::string map_path, start, goal, risk_csv;
  double lambda = 1.0;
  plan->add_option("--config", config, "run config JSON")->required();
  plan->add_option("--map", map_path, "heightmap file")->required();
  plan->add_option("--start", start, "start cell 'col,row'")->required();
  plan->add_option("--goal", goal, "goal cell 'col,row'")->required();
  plan->add_option("--lambda", lambda, "risk weight (default 1)");
  plan->add_option("--out", out, "path JSON output");
  plan->add_option("--risk-csv", risk_csv, "also export the risk map as CSV");
  plan->add_flag("--quiet", quiet, "suppress summary line");

  // trace
  auto* trace = app.add_subcommand("trace", "velocity trace over one step");
  double theta = 0.0, dt = 1e-4;
  trace->add_option("--config", config, "run config JSON")->required();
  trace->add_option("--theta", theta, "slope angle in degrees")->required();
  trace->add_option("--dt", dt, "time step, s (default 1e-4)");
  trace->add_option("--out", out, "trace CSV output");
  trace->add_flag("--quiet", quiet, "suppress integral check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (calibrate->parsed()) return run_calibrate(penetration, shear, out, quiet);
  if (stride->parsed()) return run_stride(config, thetas, out, quiet);
  if (sweep->parsed()) {
    spec.log_scale = scale == "log" ? 1 : 0;
    return run_sweep(config, spec, out, format, quiet);
  }
  if (plan->parsed())
    return run_plan(config, map_path, start, goal, lambda, out, risk_csv, quiet);
  if (trace->parsed()) return run_trace(config, theta, dt, out, quiet);
  return kExitInput;
}
