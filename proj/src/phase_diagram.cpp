#include "phase_diagram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace granslope {

namespace {

constexpr double kInfeasible = -std::numeric_limits<double>::infinity();

void check_axis(const AxisSpec& axis, const char* name) {
  if (!(axis.min > 0.0) || !(axis.min < axis.max))
    throw std::invalid_argument(std::string(name) + ": need 0 < min < max");
  if (axis.count < 2)
    throw std::invalid_argument(std::string(name) + ": count must be >= 2");
}

double to_axis_coord(double value, AxisScale scale) {
  return scale == AxisScale::Logarithmic ? std::log10(value) : value;
}

double from_axis_coord(double coord, AxisScale scale) {
  return scale == AxisScale::Logarithmic ? std::pow(10.0, coord) : coord;
}

}  // namespace

void SweepSpec::validate() const {
  check_axis(k_n, "k_n axis");
  check_axis(k_s, "k_s axis");
  robot.validate();
  if (!(theta >= 0.0 && theta < kPi / 2.0))
    throw std::invalid_argument("theta must be in [0, pi/2)");
}

std::vector<double> axis_values(const AxisSpec& axis, AxisScale scale) {
  std::vector<double> values(static_cast<std::size_t>(axis.count));
  double lo = to_axis_coord(axis.min, scale);
  double hi = to_axis_coord(axis.max, scale);
  for (int i = 0; i < axis.count; ++i) {
    double f = static_cast<double>(i) / static_cast<double>(axis.count - 1);
    values[static_cast<std::size_t>(i)] = from_axis_coord(lo + f * (hi - lo), scale);
  }
  // pin endpoints against round-trip error through the log map
  values.front() = axis.min;
  values.back() = axis.max;
  return values;
}

PhaseDiagram sweep(const SweepSpec& spec) {
  spec.validate();

  PhaseDiagram out;
  out.spec = spec;
  out.k_n_values = axis_values(spec.k_n, spec.scale);
  out.k_s_values = axis_values(spec.k_s, spec.scale);

  std::size_t rows = out.k_s_values.size();
  std::size_t cols = out.k_n_values.size();
  out.labels.resize(rows * cols);
  out.step_lengths.resize(rows * cols);

  auto eval_row = [&](std::size_t r) {
    TerrainStrength terrain;
    // single-point shear profiles are not valid terrain; pin the swept k_s as
    // a flat two-point profile instead
    double ks = out.k_s_values[r];
    terrain.shear = ShearStrengthProfile({{0.0, ks}, {kPi / 2.0, ks}});
    for (std::size_t c = 0; c < cols; ++c) {
      terrain.normal_resistance = out.k_n_values[c];
      StrideOutcome o = net_step(spec.robot, terrain, spec.theta);
      std::size_t i = r * cols + c;
      out.labels[i] = o.regime;
      out.step_lengths[i] = o.geometric_feasible ? o.step : kInfeasible;
    }
  };

  unsigned threads = spec.threads > 0
                         ? static_cast<unsigned>(spec.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(rows));
  if (threads <= 1) {
    for (std::size_t r = 0; r < rows; ++r) eval_row(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t r = next.fetch_add(1); r < rows; r = next.fetch_add(1))
          eval_row(r);
      });
    }
    for (auto& th : pool) th.join();
  }

  out.contours = extract_contour(out.step_lengths, out.k_n_values, out.k_s_values,
                                 spec.scale, spec.robot.leg_radius);
  return out;
}

namespace {

// grid edge between two adjacent samples; vertical edges run along k_s
struct EdgeId {
  bool vertical;
  int r;
  int c;
  auto operator<=>(const EdgeId&) const = default;
};

struct Segment {
  EdgeId a;
  EdgeId b;
};

}  // namespace

std::vector<Polyline> extract_contour(const std::vector<double>& field,
                                      const std::vector<double>& k_n_values,
                                      const std::vector<double>& k_s_values,
                                      AxisScale scale, double level) {
  int cols = static_cast<int>(k_n_values.size());
  int rows = static_cast<int>(k_s_values.size());
  if (field.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw std::invalid_argument("extract_contour: field shape mismatch");

  auto value = [&](int r, int c) {
    return field[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                 static_cast<std::size_t>(c)];
  };
  auto coord_x = [&](int c) { return to_axis_coord(k_n_values[static_cast<std::size_t>(c)], scale); };
  auto coord_y = [&](int r) { return to_axis_coord(k_s_values[static_cast<std::size_t>(r)], scale); };

  // interpolated crossing point of an edge, in axis coordinates; computed the
  // same way from both cells sharing the edge so chained endpoints match
  auto edge_point = [&](const EdgeId& e) -> ContourPoint {
    int r2 = e.vertical ? e.r + 1 : e.r;
    int c2 = e.vertical ? e.c : e.c + 1;
    double s0 = value(e.r, e.c);
    double s1 = value(r2, c2);
    double f = (level - s0) / (s1 - s0);
    double x0 = coord_x(e.c), x1 = coord_x(c2);
    double y0 = coord_y(e.r), y1 = coord_y(r2);
    return {from_axis_coord(x0 + f * (x1 - x0), scale),
            from_axis_coord(y0 + f * (y1 - y0), scale)};
  };

  std::vector<Segment> segments;
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) {
      double v0 = value(r, c);
      double v1 = value(r, c + 1);
      double v2 = value(r + 1, c + 1);
      double v3 = value(r + 1, c);
      if (!std::isfinite(v0) || !std::isfinite(v1) || !std::isfinite(v2) ||
          !std::isfinite(v3))
        continue;

      int mask = (v0 >= level ? 1 : 0) | (v1 >= level ? 2 : 0) |
                 (v2 >= level ? 4 : 0) | (v3 >= level ? 8 : 0);
      if (mask == 0 || mask == 15) continue;

      EdgeId bottom{false, r, c};
      EdgeId right{true, r, c + 1};
      EdgeId top{false, r + 1, c};
      EdgeId left{true, r, c};
      auto emit = [&](EdgeId a, EdgeId b) { segments.push_back({a, b}); };

      switch (mask) {
        case 1: case 14: emit(left, bottom); break;
        case 2: case 13: emit(bottom, right); break;
        case 3: case 12: emit(left, right); break;
        case 4: case 11: emit(right, top); break;
        case 6: case 9: emit(bottom, top); break;
        case 7: case 8: emit(left, top); break;
        case 5:
        case 10: {
          double center = 0.25 * (v0 + v1 + v2 + v3);
          bool center_inside = center >= level;
          bool split_like_5 = (mask == 5) == center_inside;
          if (split_like_5) {
            emit(bottom, right);
            emit(left, top);
          } else {
            emit(left, bottom);
            emit(right, top);
          }
          break;
        }
        default: break;
      }
    }
  }

  // chain segments that share edge crossings into polylines
  std::map<EdgeId, std::vector<std::size_t>> incident;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    incident[segments[i].a].push_back(i);
    incident[segments[i].b].push_back(i);
  }

  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> polylines;

  auto walk = [&](std::size_t start, bool from_a) {
    std::vector<EdgeId> chain;
    std::size_t seg = start;
    EdgeId cur = from_a ? segments[start].a : segments[start].b;
    chain.push_back(cur);
    while (true) {
      used[seg] = true;
      EdgeId nxt = segments[seg].a == cur ? segments[seg].b : segments[seg].a;
      chain.push_back(nxt);
      cur = nxt;
      const auto& inc = incident[cur];
      std::size_t follow = segments.size();
      for (std::size_t j : inc)
        if (!used[j]) { follow = j; break; }
      if (follow == segments.size()) break;
      seg = follow;
    }
    Polyline line;
    line.reserve(chain.size());
    for (const auto& e : chain) line.push_back(edge_point(e));
    polylines.push_back(std::move(line));
  };

  // open chains first, seeded at degree-1 edges
  for (const auto& [edge, inc] : incident) {
    if (inc.size() != 1 || used[inc.front()]) continue;
    std::size_t seg = inc.front();
    walk(seg, segments[seg].a == edge);
  }
  // remaining segments belong to closed loops
  for (std::size_t i = 0; i < segments.size(); ++i)
    if (!used[i]) walk(i, true);

  return polylines;
}

}  // namespace granslope
