#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace granslope {

inline constexpr double kPi = 3.14159265358979323846;

/// Thrown when a requested depth exceeds what the C-leg geometry can reach
/// (d > 2R - h). Callers that classify stride outcomes catch this and map it
/// to a sinkage failure instead of propagating.
class GeometricInfeasible : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Geometry, mass and gait parameters of the hexapod. Strict SI units,
/// angles in radians.
struct RobotConfig {
  double mass = 0.35;            // kg
  double leg_radius = 0.04;      // m, C-leg radius R
  double hip_height = 0.04;      // m, axle to body bottom
  double leg_width = 0.01;       // m
  double omega = 2.0 * kPi;      // rad/s, leg angular speed
  int stance_legs = 3;           // legs per tripod group
  double response_time = 0.2;    // s, characteristic elastic response
  double stride_period = 1.0;    // s, full stride T; step period is T/2
  double contact_area = 1e-4;    // m^2, effective normal contact area per leg
  double gravity = 9.81;         // m/s^2
  // Measured level-sand step length; when set it replaces the value derived
  // from the normal-equilibrium depth.
  std::optional<double> level_step_override;

  // arcsin((h-R)/R), the leg angle at touchdown
  double touchdown_angle() const;
  // deepest point the leg geometry can reach, 2R - h
  double max_depth() const { return 2.0 * leg_radius - hip_height; }
  // throws std::invalid_argument on any violated bound
  void validate() const;
};

/// Slope-dependent shear strength k_s(theta), piecewise linear between
/// measured samples, clamped to the nearest endpoint outside the range.
class ShearStrengthProfile {
public:
  ShearStrengthProfile() = default;
  // samples are (theta_rad, k_s); sorted here, duplicate angles averaged
  explicit ShearStrengthProfile(std::vector<std::pair<double, double>> samples);

  // clamped evaluation; *clamped is set when theta falls outside the range
  double evaluate(double theta, bool* clamped = nullptr) const;
  double max_theta() const;
  double min_theta() const;
  const std::vector<std::pair<double, double>>& samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }

private:
  std::vector<std::pair<double, double>> samples_;
};

struct TerrainStrength {
  double normal_resistance = 0.0;  // k_n, N/m^3
  ShearStrengthProfile shear;
  void validate() const;
};

enum class Regime { Success = 0, Metastable = 1, SlippageFailure = 2, SinkageFailure = 3 };

const char* regime_name(Regime r);

/// Everything derived for one step at a given slope angle. When the stride is
/// geometrically infeasible the kinematic fields are NaN and only the
/// equilibrium depths are meaningful.
struct StrideOutcome {
  double shear_depth = 0.0;     // d_s, m
  double normal_depth = 0.0;    // d_n, m
  double anchoring_time = 0.0;  // t1, s (clamped to T/2 when anchoring never occurs)
  double slip = 0.0;            // s1, m
  double propulsion = 0.0;      // s2, m
  double step = 0.0;            // s = s2 - s1, m
  double mean_speed = 0.0;      // v_bar = s / (T/2), m/s
  double level_step = 0.0;      // s*, m
  bool geometric_feasible = true;
  Regime regime = Regime::Success;
};

// F_a = m (g sin(theta) + R omega / dt) / n
double applied_shear_load(const RobotConfig& robot, double theta);

// d_s = sqrt(F_a / (k_s W))
double shear_equilibrium_depth(const RobotConfig& robot, double theta, double k_s);

// d(t) = R sin(omega t + phi0) + R - h on [0, t_max]; throws std::domain_error
// outside the monotone interval
double penetration_depth(const RobotConfig& robot, double t);

// time at which the leg reaches its maximum depth
double penetration_time_limit(const RobotConfig& robot);

// t1 = (arcsin((d_s + h)/R - 1) - phi0) / omega; throws GeometricInfeasible
// when d_s > 2R - h
double anchoring_time(const RobotConfig& robot, double shear_depth);

// s1 = 1/2 g sin(theta) t1^2
double slip_displacement(double theta, double t1, double gravity);

// s = 2 sqrt(R^2 - (d_n + h - R)^2); throws GeometricInfeasible when
// d_n > 2R - h
double level_step_length(const RobotConfig& robot, double normal_depth);

// d_n = (m g cos(theta) / n) / (k_n A)
double normal_equilibrium_depth(const RobotConfig& robot, double theta, double k_n);

// s2 = s* ((T/2 - t1)/(T/2))^2 - g sin(theta) t1 (T/2 - t1)
double propulsion_displacement(const RobotConfig& robot, double theta, double t1,
                               double level_step);

// the single-expression expansion of s2 - s1; used as an algebraic cross-check
double net_step_closed_form(const RobotConfig& robot, double theta, double t1,
                            double level_step);

// full chain: equilibrium depths -> anchoring -> slip/propulsion -> regime
StrideOutcome net_step(const RobotConfig& robot, const TerrainStrength& terrain,
                       double theta);

// SinkageFailure if infeasible, SlippageFailure if s <= 0, Metastable if
// 0 < s < R, Success if s >= R
Regime classify_outcome(double step, bool geometric_feasible, const RobotConfig& robot);

struct TracePoint {
  double t;
  double v;
};

// piecewise-linear speed reconstruction over one step period [0, T/2]:
// gravity-driven slip until t1, then constant propulsion acceleration
// a_p = 2 s* / (T/2)^2
std::vector<TracePoint> velocity_trace(const RobotConfig& robot,
                                       const StrideOutcome& outcome, double theta,
                                       double dt);

}  // namespace granslope
