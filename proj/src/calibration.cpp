#include "calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace granslope {

namespace {

void check_increasing(const std::vector<std::pair<double, double>>& samples,
                      const char* what) {
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].first > samples[i - 1].first))
      throw CalibrationError(std::string(what) + " must be strictly increasing");
}

}  // namespace

void PenetrationRecord::validate() const {
  if (!(probe_area > 0.0)) throw CalibrationError("probe_area must be positive");
  if (samples.size() < 3)
    throw CalibrationError("penetration record needs at least 3 samples");
  if (samples.front().first < 0.0)
    throw CalibrationError("depths must be non-negative");
  check_increasing(samples, "depths");
}

void ShearRecord::validate() const {
  if (!(plate_width > 0.0)) throw CalibrationError("plate_width must be positive");
  if (!(plate_depth > 0.0)) throw CalibrationError("plate_depth must be positive");
  if (samples.empty()) throw CalibrationError("shear record has no samples");
  check_increasing(samples, "displacements");
  auto [lo, hi] = plateau_window();
  if (!(lo < hi)) throw CalibrationError("plateau window is empty");
  if (lo < samples.front().first || hi > samples.back().first)
    throw CalibrationError("plateau window outside the displacement range");
}

std::pair<double, double> ShearRecord::plateau_window() const {
  double lo = plateau_start;
  double hi = plateau_end;
  if (std::isnan(lo) || std::isnan(hi)) {
    // default: final half of the displacement range
    double a = samples.front().first;
    double b = samples.back().first;
    if (std::isnan(lo)) lo = a + 0.5 * (b - a);
    if (std::isnan(hi)) hi = b;
  }
  return {lo, hi};
}

NormalFit fit_normal_resistance(const PenetrationRecord& rec) {
  rec.validate();
  double span = rec.samples.back().first - rec.samples.front().first;
  if (!(span > 0.0)) throw CalibrationError("zero depth span");

  // through-origin least squares: slope = sum(F d) / sum(d^2)
  double sum_fd = 0.0;
  double sum_dd = 0.0;
  for (const auto& [d, f] : rec.samples) {
    double force = f - rec.tare;
    sum_fd += force * d;
    sum_dd += d * d;
  }
  if (!(sum_dd > 0.0)) throw CalibrationError("degenerate depth samples");
  double slope = sum_fd / sum_dd;
  if (!(slope > 0.0))
    throw CalibrationError("non-positive force-depth slope; data inconsistent with F = k_n d A");

  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (const auto& [d, f] : rec.samples) {
    double force = f - rec.tare;
    double r = force - slope * d;
    ss_res += r * r;
    ss_tot += force * force;
  }
  NormalFit fit;
  fit.slope = slope;
  fit.k_n = slope / rec.probe_area;
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

ShearFit fit_shear_strength(const ShearRecord& rec) {
  rec.validate();
  auto [lo, hi] = rec.plateau_window();
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& [x, f] : rec.samples) {
    if (x < lo || x > hi) continue;
    sum += f - rec.tare;
    ++count;
  }
  if (count < 3) throw CalibrationError("plateau window contains fewer than 3 samples");
  double plateau = sum / static_cast<double>(count);
  if (!(plateau > 0.0)) throw CalibrationError("non-positive plateau force");

  ShearFit fit;
  fit.plateau_force = plateau;
  fit.k_s = plateau / (rec.plate_width * rec.plate_depth * rec.plate_depth);
  fit.theta = rec.theta;
  return fit;
}

ShearStrengthProfile build_profile(const std::vector<ShearRecord>& records) {
  std::vector<std::pair<double, double>> samples;
  samples.reserve(records.size());
  for (const auto& rec : records) {
    auto fit = fit_shear_strength(rec);
    samples.emplace_back(fit.theta, fit.k_s);
  }
  return build_profile(std::move(samples));
}

ShearStrengthProfile build_profile(std::vector<std::pair<double, double>> samples) {
  // count distinct angles before the profile constructor averages duplicates
  std::vector<double> distinct;
  for (const auto& [theta, ks] : samples) distinct.push_back(theta);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2)
    throw CalibrationError("profile needs at least 2 distinct slope angles");
  try {
    return ShearStrengthProfile(std::move(samples));
  } catch (const std::invalid_argument& e) {
    throw CalibrationError(e.what());
  }
}

}  // namespace granslope
