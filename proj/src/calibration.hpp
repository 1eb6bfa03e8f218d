#pragma once

#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "model.hpp"

namespace granslope {

class CalibrationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Force vs. depth samples from a disk penetration trial.
struct PenetrationRecord {
  double theta = 0.0;       // rad
  double probe_area = 0.0;  // m^2
  double tare = 0.0;        // N, constant offset subtracted before fitting
  std::vector<std::pair<double, double>> samples;  // (depth m, force N), increasing depth
  void validate() const;
};

/// Force vs. displacement samples from a plate shear drag trial.
struct ShearRecord {
  double theta = 0.0;        // rad
  double plate_width = 0.0;  // m
  double plate_depth = 0.0;  // m
  double tare = 0.0;         // N
  // plateau averaging window in displacement; defaults (NaN) mean the final
  // half of the displacement range
  double plateau_start = std::numeric_limits<double>::quiet_NaN();
  double plateau_end = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, double>> samples;  // (displacement m, force N)
  void validate() const;
  // window with defaults resolved against the displacement range
  std::pair<double, double> plateau_window() const;
};

struct NormalFit {
  double k_n = 0.0;       // N/m^3
  double slope = 0.0;     // N/m, force-vs-depth slope through the origin
  double r_squared = 0.0; // uncentered R^2 of the through-origin fit
};

struct ShearFit {
  double k_s = 0.0;           // N/m^3
  double plateau_force = 0.0; // N, mean over the plateau window
  double theta = 0.0;         // rad, copied from the record
};

// least-squares slope of F vs d through the origin, divided by probe area
NormalFit fit_normal_resistance(const PenetrationRecord& rec);

// mean force over the plateau window; k_s = F_plateau / (W d^2)
ShearFit fit_shear_strength(const ShearRecord& rec);

// fit each record, sort by angle, average duplicates
ShearStrengthProfile build_profile(const std::vector<ShearRecord>& records);

// assembly from already-fitted (theta_rad, k_s) points
ShearStrengthProfile build_profile(std::vector<std::pair<double, double>> samples);

}  // namespace granslope
