#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace granslope {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("RobotConfig: ") + what);
}

}  // namespace

double RobotConfig::touchdown_angle() const {
  return std::asin((hip_height - leg_radius) / leg_radius);
}

void RobotConfig::validate() const {
  require(mass > 0.0, "mass must be positive");
  require(leg_radius > 0.0, "leg_radius must be positive");
  require(leg_width > 0.0, "leg_width must be positive");
  require(omega > 0.0, "omega must be positive");
  require(stance_legs >= 1, "stance_legs must be >= 1");
  require(response_time > 0.0, "response_time must be positive");
  require(stride_period > 0.0, "stride_period must be positive");
  require(contact_area > 0.0, "contact_area must be positive");
  require(gravity > 0.0, "gravity must be positive");
  require(hip_height > 0.0 && hip_height <= 2.0 * leg_radius,
          "hip_height must satisfy 0 < h <= 2R");
  if (level_step_override)
    require(*level_step_override > 0.0, "level_step_override must be positive");
}

ShearStrengthProfile::ShearStrengthProfile(
    std::vector<std::pair<double, double>> samples) {
  std::sort(samples.begin(), samples.end());
  // average duplicate angles
  for (std::size_t i = 0; i < samples.size();) {
    double theta = samples[i].first;
    double sum = 0.0;
    std::size_t j = i;
    while (j < samples.size() && samples[j].first == theta) sum += samples[j++].second;
    samples_.emplace_back(theta, sum / static_cast<double>(j - i));
    i = j;
  }
  for (const auto& [theta, ks] : samples_) {
    if (!(ks > 0.0))
      throw std::invalid_argument("ShearStrengthProfile: k_s must be positive");
    if (!(theta >= 0.0))
      throw std::invalid_argument("ShearStrengthProfile: theta must be >= 0");
  }
}

double ShearStrengthProfile::evaluate(double theta, bool* clamped) const {
  if (samples_.empty())
    throw std::logic_error("ShearStrengthProfile: no samples");
  if (clamped) *clamped = false;
  if (theta <= samples_.front().first) {
    if (clamped && theta < samples_.front().first) *clamped = true;
    return samples_.front().second;
  }
  if (theta >= samples_.back().first) {
    if (clamped && theta > samples_.back().first) *clamped = true;
    return samples_.back().second;
  }
  auto hi = std::upper_bound(samples_.begin(), samples_.end(),
                             std::make_pair(theta, std::numeric_limits<double>::max()));
  auto lo = std::prev(hi);
  double f = (theta - lo->first) / (hi->first - lo->first);
  return lo->second + f * (hi->second - lo->second);
}

double ShearStrengthProfile::max_theta() const {
  if (samples_.empty()) throw std::logic_error("ShearStrengthProfile: no samples");
  return samples_.back().first;
}

double ShearStrengthProfile::min_theta() const {
  if (samples_.empty()) throw std::logic_error("ShearStrengthProfile: no samples");
  return samples_.front().first;
}

void TerrainStrength::validate() const {
  if (!(normal_resistance > 0.0))
    throw std::invalid_argument("TerrainStrength: k_n must be positive");
  if (shear.empty())
    throw std::invalid_argument("TerrainStrength: shear profile is empty");
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Success: return "Success";
    case Regime::Metastable: return "Metastable";
    case Regime::SlippageFailure: return "SlippageFailure";
    case Regime::SinkageFailure: return "SinkageFailure";
  }
  return "Unknown";
}

double applied_shear_load(const RobotConfig& robot, double theta) {
  return robot.mass *
         (robot.gravity * std::sin(theta) +
          robot.leg_radius * robot.omega / robot.response_time) /
         static_cast<double>(robot.stance_legs);
}

double shear_equilibrium_depth(const RobotConfig& robot, double theta, double k_s) {
  if (!(k_s > 0.0))
    throw std::invalid_argument("shear_equilibrium_depth: k_s must be positive");
  return std::sqrt(applied_shear_load(robot, theta) / (k_s * robot.leg_width));
}

double penetration_time_limit(const RobotConfig& robot) {
  return (kPi / 2.0 - robot.touchdown_angle()) / robot.omega;
}

double penetration_depth(const RobotConfig& robot, double t) {
  if (t < 0.0 || t > penetration_time_limit(robot))
    throw std::domain_error("penetration_depth: t outside the monotone stance interval");
  return robot.leg_radius * std::sin(robot.omega * t + robot.touchdown_angle()) +
         robot.leg_radius - robot.hip_height;
}

double anchoring_time(const RobotConfig& robot, double shear_depth) {
  if (shear_depth < 0.0)
    throw std::invalid_argument("anchoring_time: depth must be non-negative");
  if (shear_depth > robot.max_depth())
    throw GeometricInfeasible("anchoring_time: shear-equilibrium depth beyond 2R - h");
  double arg = (shear_depth + robot.hip_height) / robot.leg_radius - 1.0;
  return (std::asin(std::clamp(arg, -1.0, 1.0)) - robot.touchdown_angle()) / robot.omega;
}

double slip_displacement(double theta, double t1, double gravity) {
  if (t1 < 0.0) throw std::invalid_argument("slip_displacement: t1 must be >= 0");
  return 0.5 * gravity * std::sin(theta) * t1 * t1;
}

double level_step_length(const RobotConfig& robot, double normal_depth) {
  if (normal_depth < 0.0)
    throw std::invalid_argument("level_step_length: depth must be non-negative");
  if (normal_depth > robot.max_depth())
    throw GeometricInfeasible("level_step_length: sinkage beyond pivot geometry");
  double off = normal_depth + robot.hip_height - robot.leg_radius;
  return 2.0 * std::sqrt(std::max(0.0, robot.leg_radius * robot.leg_radius - off * off));
}

double normal_equilibrium_depth(const RobotConfig& robot, double theta, double k_n) {
  if (!(k_n > 0.0))
    throw std::invalid_argument("normal_equilibrium_depth: k_n must be positive");
  return robot.mass * robot.gravity * std::cos(theta) /
         (static_cast<double>(robot.stance_legs) * k_n * robot.contact_area);
}

double propulsion_displacement(const RobotConfig& robot, double theta, double t1,
                               double level_step) {
  double half = robot.stride_period / 2.0;
  if (t1 < 0.0 || t1 > half)
    throw std::invalid_argument("propulsion_displacement: t1 outside [0, T/2]");
  double frac = (half - t1) / half;
  return level_step * frac * frac -
         robot.gravity * std::sin(theta) * t1 * (half - t1);
}

double net_step_closed_form(const RobotConfig& robot, double theta, double t1,
                            double level_step) {
  double half = robot.stride_period / 2.0;
  double frac = (half - t1) / half;
  return -0.5 * robot.gravity * std::sin(theta) * t1 * (robot.stride_period - t1) +
         level_step * frac * frac;
}

Regime classify_outcome(double step, bool geometric_feasible, const RobotConfig& robot) {
  if (!geometric_feasible) return Regime::SinkageFailure;
  if (step <= 0.0) return Regime::SlippageFailure;
  if (step < robot.leg_radius) return Regime::Metastable;
  return Regime::Success;
}

StrideOutcome net_step(const RobotConfig& robot, const TerrainStrength& terrain,
                       double theta) {
  robot.validate();
  terrain.validate();

  StrideOutcome out;
  out.normal_depth = normal_equilibrium_depth(robot, theta, terrain.normal_resistance);
  double k_s = terrain.shear.evaluate(theta);
  out.shear_depth = shear_equilibrium_depth(robot, theta, k_s);

  // sinkage check first: either equilibrium depth beyond the leg geometry
  if (out.normal_depth > robot.max_depth() || out.shear_depth > robot.max_depth()) {
    out.geometric_feasible = false;
    out.anchoring_time = kNaN;
    out.slip = kNaN;
    out.propulsion = kNaN;
    out.step = kNaN;
    out.mean_speed = kNaN;
    out.level_step = robot.level_step_override.value_or(kNaN);
    out.regime = Regime::SinkageFailure;
    return out;
  }

  out.level_step = robot.level_step_override
                       ? *robot.level_step_override
                       : level_step_length(robot, out.normal_depth);

  double half = robot.stride_period / 2.0;
  double t1 = anchoring_time(robot, out.shear_depth);
  bool anchored_within_step = t1 <= half;
  if (!anchored_within_step) t1 = half;
  out.anchoring_time = t1;
  out.slip = slip_displacement(theta, t1, robot.gravity);
  out.propulsion =
      anchored_within_step ? propulsion_displacement(robot, theta, t1, out.level_step)
                           : 0.0;
  out.step = out.propulsion - out.slip;
  out.mean_speed = out.step / half;
  out.regime = anchored_within_step ? classify_outcome(out.step, true, robot)
                                    : Regime::SlippageFailure;
  return out;
}

std::vector<TracePoint> velocity_trace(const RobotConfig& robot,
                                       const StrideOutcome& outcome, double theta,
                                       double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("velocity_trace: dt must be positive");
  if (!outcome.geometric_feasible)
    throw std::invalid_argument("velocity_trace: outcome is geometrically infeasible");

  double half = robot.stride_period / 2.0;
  double t1 = outcome.anchoring_time;
  double slip_accel = -robot.gravity * std::sin(theta);
  double prop_accel = 2.0 * outcome.level_step / (half * half);
  double v1 = slip_accel * t1;

  std::vector<TracePoint> trace;
  auto n = static_cast<std::size_t>(std::ceil(half / dt));
  trace.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) {
    double t = std::min(half, static_cast<double>(i) * dt);
    double v = t <= t1 ? slip_accel * t : v1 + prop_accel * (t - t1);
    trace.push_back({t, v});
    if (t >= half) break;
  }
  // make sure t1 itself is a sample so the trapezoid sees the kink
  if (t1 > 0.0 && t1 < half) {
    auto it = std::lower_bound(trace.begin(), trace.end(), t1,
                               [](const TracePoint& p, double t) { return p.t < t; });
    if (it == trace.end() || it->t != t1) trace.insert(it, {t1, v1});
  }
  return trace;
}

}  // namespace granslope
