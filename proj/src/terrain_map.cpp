#include "terrain_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace granslope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.41421356237309504880;

}  // namespace

void TerrainMap::validate() const {
  if (width < 2 || height < 2)
    throw std::invalid_argument("TerrainMap: need at least 2x2 cells");
  if (!(cell_size > 0.0))
    throw std::invalid_argument("TerrainMap: cell_size must be positive");
  if (elevations.size() !=
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw std::invalid_argument("TerrainMap: elevation grid shape mismatch");
  for (double z : elevations)
    if (!std::isfinite(z))
      throw std::invalid_argument("TerrainMap: elevations must be finite");
}

std::vector<double> slope_map(const TerrainMap& map) {
  map.validate();
  std::vector<double> slope(map.elevations.size());
  auto z = [&](int c, int r) { return map.elevations[map.index(c, r)]; };
  for (int r = 0; r < map.height; ++r) {
    for (int c = 0; c < map.width; ++c) {
      double dzdx, dzdy;
      if (c == 0)
        dzdx = (z(1, r) - z(0, r)) / map.cell_size;
      else if (c == map.width - 1)
        dzdx = (z(c, r) - z(c - 1, r)) / map.cell_size;
      else
        dzdx = (z(c + 1, r) - z(c - 1, r)) / (2.0 * map.cell_size);
      if (r == 0)
        dzdy = (z(c, 1) - z(c, 0)) / map.cell_size;
      else if (r == map.height - 1)
        dzdy = (z(c, r) - z(c, r - 1)) / map.cell_size;
      else
        dzdy = (z(c, r + 1) - z(c, r - 1)) / (2.0 * map.cell_size);
      slope[map.index(c, r)] = std::atan(std::hypot(dzdx, dzdy));
    }
  }
  return slope;
}

RiskMap build_risk_map(const TerrainMap& map, const RobotConfig& robot,
                       const TerrainStrength& terrain, double lambda) {
  if (!(lambda >= 0.0))
    throw std::invalid_argument("build_risk_map: lambda must be >= 0");
  auto slopes = slope_map(map);

  RiskMap risk;
  risk.width = map.width;
  risk.height = map.height;
  risk.cell_size = map.cell_size;
  std::size_t n = map.elevations.size();
  risk.slope_deg.resize(n);
  risk.step.resize(n);
  risk.regime.resize(n);
  risk.cost.resize(n);
  risk.impassable.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    double theta = slopes[i];
    StrideOutcome o = net_step(robot, terrain, theta);
    risk.slope_deg[i] = theta * 180.0 / kPi;
    risk.step[i] = o.geometric_feasible ? o.step
                                        : std::numeric_limits<double>::quiet_NaN();
    risk.regime[i] = o.regime;
    if (o.regime == Regime::SlippageFailure || o.regime == Regime::SinkageFailure) {
      risk.impassable[i] = 1;
      risk.cost[i] = kInf;
    } else {
      double r = o.regime == Regime::Metastable
                     ? (robot.leg_radius - o.step) / robot.leg_radius
                     : 0.0;
      risk.impassable[i] = 0;
      risk.cost[i] = map.cell_size * (1.0 + lambda * r);
    }
  }
  return risk;
}

std::optional<PathResult> plan_path(const RiskMap& risk, Cell start, Cell goal) {
  auto in_bounds = [&](const Cell& c) {
    return c.col >= 0 && c.col < risk.width && c.row >= 0 && c.row < risk.height;
  };
  if (!in_bounds(start) || !in_bounds(goal))
    throw std::invalid_argument("plan_path: start/goal out of bounds");
  if (!risk.passable(start.col, start.row) || !risk.passable(goal.col, goal.row))
    throw std::invalid_argument("plan_path: start/goal impassable");

  std::size_t n = risk.cost.size();
  std::size_t start_i = risk.index(start.col, start.row);
  std::size_t goal_i = risk.index(goal.col, goal.row);

  std::vector<double> dist(n, kInf);
  std::vector<std::size_t> prev(n, n);
  // min-heap keyed by (distance, cell index); the index in the key makes the
  // pop order deterministic under cost ties
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[start_i] = 0.0;
  queue.push({0.0, start_i});

  constexpr int dc[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
  constexpr int dr[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    if (u == goal_i) break;
    int uc = static_cast<int>(u % static_cast<std::size_t>(risk.width));
    int ur = static_cast<int>(u / static_cast<std::size_t>(risk.width));
    for (int k = 0; k < 8; ++k) {
      int vc = uc + dc[k];
      int vr = ur + dr[k];
      if (vc < 0 || vc >= risk.width || vr < 0 || vr >= risk.height) continue;
      if (!risk.passable(vc, vr)) continue;
      std::size_t v = risk.index(vc, vr);
      double factor = (dc[k] != 0 && dr[k] != 0) ? kSqrt2 : 1.0;
      double w = factor * 0.5 * (risk.cost[u] + risk.cost[v]);
      double nd = dist[u] + w;
      if (nd < dist[v] || (nd == dist[v] && u < prev[v])) {
        dist[v] = nd;
        prev[v] = u;
        queue.push({nd, v});
      }
    }
  }

  if (!std::isfinite(dist[goal_i])) return std::nullopt;

  PathResult result;
  result.total_cost = dist[goal_i];
  std::vector<std::size_t> chain;
  for (std::size_t i = goal_i; i != n; i = prev[i]) {
    chain.push_back(i);
    if (i == start_i) break;
  }
  std::reverse(chain.begin(), chain.end());
  result.waypoints.reserve(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    int c = static_cast<int>(chain[i] % static_cast<std::size_t>(risk.width));
    int r = static_cast<int>(chain[i] / static_cast<std::size_t>(risk.width));
    result.waypoints.push_back({c, r});
    result.regime_counts[static_cast<int>(risk.regime[chain[i]])] += 1;
    if (i > 0) {
      const Cell& p = result.waypoints[i - 1];
      bool diag = p.col != c && p.row != r;
      result.total_length += (diag ? kSqrt2 : 1.0) * risk.cell_size;
    }
  }
  return result;
}

}  // namespace granslope
