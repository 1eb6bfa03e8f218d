#pragma once

#include <array>
#include <vector>

#include "model.hpp"

namespace granslope {

enum class AxisScale { Linear, Logarithmic };

struct AxisSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 0;
};

struct SweepSpec {
  AxisSpec k_n;            // N/m^3
  AxisSpec k_s;            // N/m^3
  AxisScale scale = AxisScale::Logarithmic;
  RobotConfig robot;
  double theta = 0.0;      // rad
  int threads = 0;         // 0 = hardware concurrency
  void validate() const;
};

using ContourPoint = std::array<double, 2>;  // (k_n, k_s), linear units
using Polyline = std::vector<ContourPoint>;

/// Regime classification over (k_n, k_s) space. Grids are row-major with k_s
/// as the row index and k_n as the column index. Infeasible cells carry
/// -infinity in step_lengths and are excluded from contouring.
struct PhaseDiagram {
  SweepSpec spec;
  std::vector<double> k_n_values;
  std::vector<double> k_s_values;
  std::vector<Regime> labels;        // k_s.count x k_n.count
  std::vector<double> step_lengths;  // same shape, -inf where infeasible
  std::vector<Polyline> contours;    // step length == R level set

  std::size_t index(int ks_row, int kn_col) const {
    return static_cast<std::size_t>(ks_row) * k_n_values.size() +
           static_cast<std::size_t>(kn_col);
  }
};

std::vector<double> axis_values(const AxisSpec& axis, AxisScale scale);

// classify every cell with net_step; deterministic regardless of thread count
PhaseDiagram sweep(const SweepSpec& spec);

// marching-squares level set of the step-length field; cells touching an
// infeasible corner contribute no segments
std::vector<Polyline> extract_contour(const std::vector<double>& field,
                                      const std::vector<double>& k_n_values,
                                      const std::vector<double>& k_s_values,
                                      AxisScale scale, double level);

}  // namespace granslope
