/*
 * granslope — terramechanics toolkit for legged locomotion on granular slopes.
 *
 * C API over the C++ core. All objects are opaque handles created and
 * destroyed through this interface; every function returns a gs_status and
 * writes results through out parameters. Angles cross this boundary in
 * degrees, everything else is strict SI.
 *
 * Functions returning string or array data use the two-call pattern: pass a
 * NULL buffer to query the required size, then call again with storage.
 */

#ifndef GRANSLOPE_H
#define GRANSLOPE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GS_API __declspec(dllexport)
#else
#define GS_API __attribute__((visibility("default")))
#endif

typedef enum gs_status {
  GS_OK = 0,
  GS_ERR_INVALID_ARGUMENT = 1, /* bad parameter or violated invariant */
  GS_ERR_PARSE = 2,            /* malformed file or JSON */
  GS_ERR_IO = 3,               /* file cannot be read or written */
  GS_ERR_CALIBRATION = 4,      /* measurement data inconsistent with the model */
  GS_ERR_INFEASIBLE = 5,       /* depth beyond the leg geometry */
  GS_ERR_NO_PATH = 6,          /* goal unreachable through passable cells */
  GS_ERR_BUFFER_TOO_SMALL = 7,
  GS_ERR_INTERNAL = 8
} gs_status;

/* Message for the most recent failure on the calling thread. */
GS_API const char* gs_last_error(void);

/* ---- robot ---------------------------------------------------------- */

typedef struct gs_robot gs_robot;

typedef struct gs_robot_params {
  double mass_kg;
  double leg_radius_m;
  double hip_height_m;
  double leg_width_m;
  double omega_rad_s;
  int n_stance;
  double delta_t_s;
  double stride_period_s;
  double contact_area_m2;
  double gravity_m_s2;
  /* measured level-sand step length; <= 0 derives it from the normal
   * equilibrium depth instead */
  double s_star_m;
} gs_robot_params;

/* paper-robot defaults: 0.35 kg hexapod with 4 cm C-legs */
GS_API void gs_robot_params_init(gs_robot_params* params);

GS_API gs_status gs_robot_create(const gs_robot_params* params, gs_robot** out);
GS_API gs_status gs_robot_from_json_file(const char* path, gs_robot** out);
GS_API void gs_robot_destroy(gs_robot* robot);

/* ---- terrain strength ------------------------------------------------ */

typedef struct gs_terrain gs_terrain;

/* k_s profile samples are (theta_deg[i], k_s[i]); duplicates are averaged */
GS_API gs_status gs_terrain_create(double k_n, const double* theta_deg,
                                   const double* k_s, size_t count,
                                   gs_terrain** out);
GS_API gs_status gs_terrain_from_json_file(const char* path, gs_terrain** out);
GS_API gs_status gs_terrain_to_json(const gs_terrain* terrain, char* buffer,
                                    size_t* size);
GS_API gs_status gs_terrain_max_theta_deg(const gs_terrain* terrain, double* out);
GS_API void gs_terrain_destroy(gs_terrain* terrain);

/* loads a run config holding a robot plus optional terrain (inline or via
 * "terrain_file"); *terrain is NULL when the config has none */
GS_API gs_status gs_config_load(const char* path, gs_robot** robot,
                                gs_terrain** terrain);

/* ---- stride model ---------------------------------------------------- */

typedef enum gs_regime {
  GS_REGIME_SUCCESS = 0,
  GS_REGIME_METASTABLE = 1,
  GS_REGIME_SLIPPAGE_FAILURE = 2,
  GS_REGIME_SINKAGE_FAILURE = 3
} gs_regime;

GS_API const char* gs_regime_name(gs_regime regime);

typedef struct gs_stride_outcome {
  double shear_depth_m;    /* d_s */
  double normal_depth_m;   /* d_n */
  double anchoring_time_s; /* t1 */
  double slip_m;           /* s1 */
  double propulsion_m;     /* s2 */
  double step_m;           /* s = s2 - s1 */
  double mean_speed_m_s;   /* s / (T/2) */
  double level_step_m;     /* s* */
  int geometric_feasible;
  gs_regime regime;
  /* set when theta fell outside the calibrated k_s profile and the endpoint
   * value was used */
  int profile_clamped;
} gs_stride_outcome;

GS_API gs_status gs_stride_eval(const gs_robot* robot, const gs_terrain* terrain,
                                double theta_deg, gs_stride_outcome* out);

/* piecewise speed reconstruction over one step period; two-call pattern on
 * (t, v); both arrays share *count */
GS_API gs_status gs_velocity_trace(const gs_robot* robot, const gs_terrain* terrain,
                                   double theta_deg, double dt_s, double* t,
                                   double* v, size_t* count);

/* ---- calibration ----------------------------------------------------- */

typedef struct gs_normal_fit {
  double k_n;       /* N/m^3 */
  double r_squared; /* uncentered, through-origin fit */
} gs_normal_fit;

typedef struct gs_shear_fit {
  double theta_deg;
  double k_s;            /* N/m^3 */
  double plateau_force_n;
} gs_shear_fit;

/* CSV with header depth_m,force_N; metadata from `# key=value` comments or a
 * sidecar .json (the sidecar wins on conflict) */
GS_API gs_status gs_fit_normal_csv(const char* path, gs_normal_fit* out);
/* CSV with header displacement_m,force_N */
GS_API gs_status gs_fit_shear_csv(const char* path, gs_shear_fit* out);

/* ---- phase diagram --------------------------------------------------- */

typedef struct gs_phase_diagram gs_phase_diagram;

typedef struct gs_sweep_spec {
  double k_n_min, k_n_max;
  int k_n_count;
  double k_s_min, k_s_max;
  int k_s_count;
  int log_scale;   /* nonzero: sample exponents uniformly */
  double theta_deg;
  int threads;     /* 0 = hardware concurrency */
} gs_sweep_spec;

GS_API gs_status gs_sweep_run(const gs_robot* robot, const gs_sweep_spec* spec,
                              gs_phase_diagram** out);
GS_API gs_status gs_diagram_shape(const gs_phase_diagram* diagram, size_t* ks_rows,
                                  size_t* kn_cols);
/* step length in meters; -infinity marks geometrically infeasible cells */
GS_API gs_status gs_diagram_cell(const gs_phase_diagram* diagram, size_t ks_row,
                                 size_t kn_col, double* step_m, gs_regime* regime);
GS_API gs_status gs_diagram_contour_count(const gs_phase_diagram* diagram,
                                          size_t* count);
/* vertices of one s = R polyline; k_n/k_s arrays share *count */
GS_API gs_status gs_diagram_contour(const gs_phase_diagram* diagram, size_t index,
                                    double* k_n, double* k_s, size_t* count);
GS_API gs_status gs_diagram_write_json(const gs_phase_diagram* diagram,
                                       const char* path);
GS_API gs_status gs_diagram_write_csv(const gs_phase_diagram* diagram,
                                      const char* path);
GS_API void gs_phase_diagram_destroy(gs_phase_diagram* diagram);

/* ---- terrain maps and planning --------------------------------------- */

typedef struct gs_heightmap gs_heightmap;
typedef struct gs_risk_map gs_risk_map;
typedef struct gs_path gs_path;

/* ASCII grid: first line `ncols nrows cell_size_m`, then nrows elevation
 * rows, row 0 = north edge */
GS_API gs_status gs_heightmap_load(const char* path, gs_heightmap** out);
GS_API gs_status gs_heightmap_create(int ncols, int nrows, double cell_size_m,
                                     const double* elevations_row_major,
                                     gs_heightmap** out);
GS_API void gs_heightmap_destroy(gs_heightmap* map);

GS_API gs_status gs_risk_map_build(const gs_heightmap* map, const gs_robot* robot,
                                   const gs_terrain* terrain, double lambda,
                                   gs_risk_map** out);
GS_API gs_status gs_risk_map_cell(const gs_risk_map* risk, int col, int row,
                                  double* slope_deg, double* step_m,
                                  gs_regime* regime, double* cost);
GS_API gs_status gs_risk_map_write_csv(const gs_risk_map* risk, const char* path);
GS_API void gs_risk_map_destroy(gs_risk_map* risk);

GS_API gs_status gs_plan_path(const gs_risk_map* risk, int start_col, int start_row,
                              int goal_col, int goal_row, gs_path** out);
GS_API gs_status gs_path_length(const gs_path* path, size_t* waypoint_count);
GS_API gs_status gs_path_waypoint(const gs_path* path, size_t index, int* col,
                                  int* row);
GS_API gs_status gs_path_totals(const gs_path* path, double* total_cost,
                                double* total_length_m);
/* cells on the path per regime, indexed by gs_regime code (length 4) */
GS_API gs_status gs_path_regime_counts(const gs_path* path, int counts[4]);
GS_API gs_status gs_path_write_json(const gs_path* path, const char* file_path);
GS_API void gs_path_destroy(gs_path* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GRANSLOPE_H */
