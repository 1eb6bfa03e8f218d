#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "model.hpp"

using namespace granslope;

namespace {

RobotConfig paper_robot() {
  RobotConfig robot;
  robot.mass = 0.35;
  robot.leg_radius = 0.04;
  robot.hip_height = 0.04;
  robot.leg_width = 0.01;
  robot.omega = 2.0 * kPi;
  robot.stance_legs = 3;
  robot.response_time = 0.2;
  robot.stride_period = 1.0;
  robot.contact_area = 1e-4;
  robot.gravity = 9.81;
  return robot;
}

double deg(double d) { return d * kPi / 180.0; }

TerrainStrength flat_terrain(double k_n, double k_s) {
  TerrainStrength t;
  t.normal_resistance = k_n;
  t.shear = ShearStrengthProfile({{0.0, k_s}, {kPi / 2.0, k_s}});
  return t;
}

// independent root-finder on the penetration kinematics
double bisect_anchoring_time(const RobotConfig& robot, double d_s) {
  double lo = 0.0;
  double hi = penetration_time_limit(robot);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (penetration_depth(robot, mid) < d_s)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("applied shear load") {
  RobotConfig robot = paper_robot();
  CHECK(applied_shear_load(robot, 0.0) ==
        doctest::Approx(0.14660765716752366).epsilon(1e-12));
  CHECK(applied_shear_load(robot, deg(24)) ==
        doctest::Approx(0.612117745167777).epsilon(1e-12));

  RobotConfig heavy = robot;
  heavy.mass *= 2.0;
  CHECK(applied_shear_load(heavy, deg(17)) ==
        doctest::Approx(2.0 * applied_shear_load(robot, deg(17))).epsilon(1e-12));

  // strictly increasing in theta
  double prev = applied_shear_load(robot, 0.0);
  for (double t = 0.05; t < kPi / 2.0; t += 0.05) {
    double cur = applied_shear_load(robot, t);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("shear equilibrium depth") {
  RobotConfig robot = paper_robot();
  CHECK(shear_equilibrium_depth(robot, deg(24), 2.0e5) ==
        doctest::Approx(0.017494538364412147).epsilon(1e-12));

  double d = shear_equilibrium_depth(robot, 0.0, 1.0e5);
  CHECK(shear_equilibrium_depth(robot, 0.0, 4.0e5) ==
        doctest::Approx(d / 2.0).epsilon(1e-12));
  CHECK(shear_equilibrium_depth(robot, 0.0, 2.0e5) <
        shear_equilibrium_depth(robot, deg(24), 2.0e5));
  CHECK_THROWS_AS(shear_equilibrium_depth(robot, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("shear depth scaling in mass and strength") {
  RobotConfig robot = paper_robot();
  double base = shear_equilibrium_depth(robot, 0.0, 2.5e5);
  RobotConfig heavy = robot;
  heavy.mass *= 4.0;
  CHECK(shear_equilibrium_depth(heavy, 0.0, 2.5e5) ==
        doctest::Approx(2.0 * base).epsilon(1e-12));
  CHECK(shear_equilibrium_depth(robot, 0.0, 4.0 * 2.5e5) ==
        doctest::Approx(0.5 * base).epsilon(1e-12));
}

TEST_CASE("penetration depth") {
  RobotConfig robot = paper_robot();
  CHECK(penetration_depth(robot, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(penetration_depth(robot, 0.25) == doctest::Approx(0.04).epsilon(1e-12));

  RobotConfig high = robot;
  high.hip_height = 0.06;
  CHECK(penetration_depth(high, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(high.touchdown_angle() == doctest::Approx(kPi / 6.0).epsilon(1e-12));

  CHECK_THROWS_AS(penetration_depth(robot, -0.01), std::domain_error);
  CHECK_THROWS_AS(penetration_depth(robot, 0.26), std::domain_error);

  // monotone non-decreasing on the allowed interval
  double prev = 0.0;
  double tmax = penetration_time_limit(robot);
  for (int i = 1; i <= 50; ++i) {
    double d = penetration_depth(robot, tmax * i / 50.0);
    CHECK(d >= prev);
    CHECK(d <= robot.max_depth() + 1e-12);
    prev = d;
  }
}

TEST_CASE("anchoring time") {
  RobotConfig robot = paper_robot();
  CHECK(anchoring_time(robot, 0.02) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(anchoring_time(robot, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(anchoring_time(robot, robot.max_depth()) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(anchoring_time(robot, 0.05), GeometricInfeasible);

  // strictly increasing in d_s
  double prev = -1.0;
  for (int i = 0; i <= 40; ++i) {
    double t1 = anchoring_time(robot, robot.max_depth() * i / 40.0);
    CHECK(t1 > prev);
    prev = t1;
  }
}

TEST_CASE("anchoring time inverts the penetration kinematics") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> radius(0.01, 0.1);
  std::uniform_real_distribution<double> hip_frac(0.2, 1.8);
  std::uniform_real_distribution<double> omega(kPi / 2.0, 8.0 * kPi);
  std::uniform_real_distribution<double> depth_frac(0.0, 1.0);

  for (int i = 0; i < 1000; ++i) {
    RobotConfig robot = paper_robot();
    robot.leg_radius = radius(rng);
    robot.hip_height = hip_frac(rng) * robot.leg_radius;
    robot.omega = omega(rng);
    double d_s = depth_frac(rng) * robot.max_depth();

    double t1 = anchoring_time(robot, d_s);
    CHECK(std::fabs(penetration_depth(robot, t1) - d_s) < 1e-9);
    CHECK(std::fabs(t1 - bisect_anchoring_time(robot, d_s)) < 1e-9);
  }
}

TEST_CASE("slip displacement") {
  CHECK(slip_displacement(0.0, 0.2, 9.81) == doctest::Approx(0.0));
  CHECK(slip_displacement(deg(24), 0.1, 9.81) ==
        doctest::Approx(0.019950432342868005).epsilon(1e-12));
  double s1 = slip_displacement(deg(12), 0.07, 9.81);
  CHECK(slip_displacement(deg(12), 0.14, 9.81) ==
        doctest::Approx(4.0 * s1).epsilon(1e-12));
}

TEST_CASE("level step length") {
  RobotConfig robot = paper_robot();
  CHECK(level_step_length(robot, 0.0) == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(level_step_length(robot, 0.02) ==
        doctest::Approx(0.06928203230275509).epsilon(1e-12));
  CHECK_THROWS_AS(level_step_length(robot, 0.05), GeometricInfeasible);
}

TEST_CASE("normal equilibrium depth") {
  RobotConfig robot = paper_robot();
  CHECK(normal_equilibrium_depth(robot, 0.0, 3.0e5) ==
        doctest::Approx(0.03815).epsilon(1e-12));
  double d = normal_equilibrium_depth(robot, 0.0, 3.0e5);
  CHECK(normal_equilibrium_depth(robot, 0.0, 6.0e5) ==
        doctest::Approx(d / 2.0).epsilon(1e-12));
  CHECK(normal_equilibrium_depth(robot, deg(24), 3.0e5) ==
        doctest::Approx(d * 0.9135454576426009).epsilon(1e-9));
}

TEST_CASE("propulsion displacement") {
  RobotConfig robot = paper_robot();
  CHECK(propulsion_displacement(robot, 0.0, 0.0, 0.0785) ==
        doctest::Approx(0.0785).epsilon(1e-12));
  CHECK(propulsion_displacement(robot, deg(24), 0.1, 0.0785) ==
        doctest::Approx(-0.10936345874294401).epsilon(1e-12));
  CHECK(propulsion_displacement(robot, 0.0, 0.25, 0.0785) ==
        doctest::Approx(0.0785 * 0.25).epsilon(1e-12));
  CHECK_THROWS_AS(propulsion_displacement(robot, 0.0, 0.6, 0.0785),
                  std::invalid_argument);
}

TEST_CASE("closed-form step identity") {
  RobotConfig robot = paper_robot();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> theta(0.0, deg(40));
  std::uniform_real_distribution<double> t1(0.0, 0.5);
  std::uniform_real_distribution<double> s_star(0.0, 0.12);
  for (int i = 0; i < 1000; ++i) {
    double th = theta(rng);
    double t = t1(rng);
    double s = s_star(rng);
    double direct = propulsion_displacement(robot, th, t, s) -
                    slip_displacement(th, t, robot.gravity);
    double closed = net_step_closed_form(robot, th, t, s);
    CHECK(std::fabs(direct - closed) <=
          1e-12 * std::max(1.0, std::max(std::fabs(direct), std::fabs(closed))));
  }
}

TEST_CASE("net step composition at 24 degrees") {
  RobotConfig robot = paper_robot();
  robot.level_step_override = 0.0785;
  // k_s chosen so that d_s hits the depth reached at t = 0.1 s
  TerrainStrength terrain = flat_terrain(3.0e5, 110733.14035669818);
  StrideOutcome o = net_step(robot, terrain, deg(24));
  CHECK(o.anchoring_time == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(o.slip == doctest::Approx(0.019950432342868005).epsilon(1e-9));
  CHECK(o.propulsion == doctest::Approx(-0.10936345874294401).epsilon(1e-9));
  CHECK(o.step == doctest::Approx(-0.129313891085812).epsilon(1e-9));
  CHECK(o.step == o.propulsion - o.slip);
  CHECK(o.mean_speed == doctest::Approx(o.step / 0.5).epsilon(1e-12));
  CHECK(o.regime == Regime::SlippageFailure);
}

TEST_CASE("net step level degeneracy") {
  RobotConfig robot = paper_robot();
  robot.level_step_override = 0.0785;
  TerrainStrength terrain = flat_terrain(3.0e5, 5.0e5);
  StrideOutcome o = net_step(robot, terrain, 0.0);
  CHECK(o.slip == 0.0);
  double frac = (0.5 - o.anchoring_time) / 0.5;
  CHECK(o.step == doctest::Approx(0.0785 * frac * frac).epsilon(1e-12));
  CHECK(o.mean_speed == doctest::Approx(o.step / 0.5).epsilon(1e-12));
}

TEST_CASE("net step flags sinkage") {
  RobotConfig robot = paper_robot();
  // k_n low enough that d_n exceeds 2R - h
  StrideOutcome o = net_step(robot, flat_terrain(1.0e4, 5.0e5), 0.0);
  CHECK_FALSE(o.geometric_feasible);
  CHECK(o.regime == Regime::SinkageFailure);
  CHECK(std::isnan(o.step));

  // k_s low enough that d_s exceeds 2R - h; sinkage takes precedence
  StrideOutcome o2 = net_step(robot, flat_terrain(3.0e5, 5.0e3), deg(24));
  CHECK_FALSE(o2.geometric_feasible);
  CHECK(o2.regime == Regime::SinkageFailure);
}

TEST_CASE("anchoring past the step period clamps to full slip") {
  RobotConfig robot = paper_robot();
  robot.omega = 0.5;  // slow leg: anchoring takes longer than T/2
  robot.level_step_override = 0.0785;
  TerrainStrength terrain = flat_terrain(3.0e5, 2.0e5);
  StrideOutcome o = net_step(robot, terrain, deg(20));
  CHECK(o.anchoring_time == doctest::Approx(0.5));
  CHECK(o.propulsion == 0.0);
  CHECK(o.slip ==
        doctest::Approx(slip_displacement(deg(20), 0.5, robot.gravity)).epsilon(1e-12));
  CHECK(o.regime == Regime::SlippageFailure);
}

TEST_CASE("outcome classification") {
  RobotConfig robot = paper_robot();
  CHECK(classify_outcome(-0.01, true, robot) == Regime::SlippageFailure);
  CHECK(classify_outcome(0.02, true, robot) == Regime::Metastable);
  CHECK(classify_outcome(0.05, false, robot) == Regime::SinkageFailure);
  CHECK(classify_outcome(-1.0, false, robot) == Regime::SinkageFailure);
  // tie-breaks: s = 0 slips, s = R succeeds
  CHECK(classify_outcome(0.0, true, robot) == Regime::SlippageFailure);
  CHECK(classify_outcome(robot.leg_radius, true, robot) == Regime::Success);
  CHECK(classify_outcome(0.09, true, robot) == Regime::Success);
}

TEST_CASE("slope trends with a weakening shear profile") {
  RobotConfig robot = paper_robot();
  robot.level_step_override = 0.0785;
  TerrainStrength terrain;
  terrain.normal_resistance = 3.0e6;
  terrain.shear = ShearStrengthProfile({{deg(0), 3.0e6},
                                        {deg(10), 2.2e6},
                                        {deg(15), 1.75e6},
                                        {deg(20), 1.2e6},
                                        {deg(24), 0.95e6}});
  double prev_t1 = -1.0;
  double prev_s = 1e9;
  for (double theta_deg : {0.0, 10.0, 15.0, 20.0, 24.0}) {
    StrideOutcome o = net_step(robot, terrain, deg(theta_deg));
    CHECK(o.anchoring_time > prev_t1);
    CHECK(o.step < prev_s);
    prev_t1 = o.anchoring_time;
    prev_s = o.step;
  }
}

TEST_CASE("shear profile interpolation and clamping") {
  ShearStrengthProfile profile({{deg(0), 5.0e5}, {deg(10), 4.0e5}, {deg(20), 2.0e5}});
  CHECK(profile.evaluate(deg(15)) == doctest::Approx(3.0e5).epsilon(1e-12));
  bool clamped = false;
  CHECK(profile.evaluate(deg(30), &clamped) == doctest::Approx(2.0e5));
  CHECK(clamped);
  clamped = false;
  CHECK(profile.evaluate(deg(10), &clamped) == doctest::Approx(4.0e5));
  CHECK_FALSE(clamped);

  // duplicate angles averaged
  ShearStrengthProfile dup({{deg(5), 4.0e5}, {deg(5), 6.0e5}, {deg(15), 1.0e5}});
  CHECK(dup.evaluate(deg(5)) == doctest::Approx(5.0e5).epsilon(1e-12));
}

TEST_CASE("velocity trace") {
  RobotConfig robot = paper_robot();

  SUBCASE("level sand with instant anchoring is a triangle ramp") {
    StrideOutcome o;
    o.anchoring_time = 0.0;
    o.level_step = 0.0785;
    o.geometric_feasible = true;
    auto trace = velocity_trace(robot, o, 0.0, 1e-3);
    CHECK(trace.front().v == doctest::Approx(0.0));
    CHECK(trace.back().t == doctest::Approx(0.5));
    CHECK(trace.back().v == doctest::Approx(2.0 * 0.0785 / 0.5).epsilon(1e-9));
    double integral = 0.0;
    for (std::size_t i = 1; i < trace.size(); ++i)
      integral += 0.5 * (trace[i].v + trace[i - 1].v) * (trace[i].t - trace[i - 1].t);
    CHECK(integral == doctest::Approx(0.0785).epsilon(1e-9));
  }

  SUBCASE("slip speed at anchoring") {
    robot.level_step_override = 0.0785;
    TerrainStrength terrain = flat_terrain(3.0e5, 110733.14035669818);
    StrideOutcome o = net_step(robot, terrain, deg(24));
    auto trace = velocity_trace(robot, o, deg(24), 1e-4);
    // the kink sample at t1 must exist
    bool found = false;
    for (const auto& p : trace)
      if (p.t == doctest::Approx(o.anchoring_time).epsilon(1e-12)) {
        CHECK(p.v == doctest::Approx(-0.39900864685736004).epsilon(1e-9));
        found = true;
      }
    CHECK(found);
  }

  SUBCASE("trapezoid integral matches the net step") {
    robot.level_step_override = 0.0785;
    for (double theta_deg : {0.0, 10.0, 15.0, 20.0, 24.0}) {
      TerrainStrength terrain = flat_terrain(3.0e5, 2.5e5);
      StrideOutcome o = net_step(robot, terrain, deg(theta_deg));
      double dt = 1e-4;
      auto trace = velocity_trace(robot, o, deg(theta_deg), dt);
      double integral = 0.0;
      double vmax = 0.0;
      for (std::size_t i = 1; i < trace.size(); ++i) {
        integral += 0.5 * (trace[i].v + trace[i - 1].v) * (trace[i].t - trace[i - 1].t);
        vmax = std::max(vmax, std::fabs(trace[i].v));
      }
      CHECK(std::fabs(integral - o.step) <= 2.0 * dt * vmax);
    }
  }
}

TEST_CASE("config validation") {
  RobotConfig robot = paper_robot();
  robot.hip_height = 0.09;  // > 2R
  CHECK_THROWS_AS(robot.validate(), std::invalid_argument);
  robot = paper_robot();
  robot.mass = 0.0;
  CHECK_THROWS_AS(robot.validate(), std::invalid_argument);
  robot = paper_robot();
  CHECK_NOTHROW(robot.validate());
}
