#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "model.hpp"

namespace granslope {

/// Row-major elevation grid; row 0 is the north edge.
struct TerrainMap {
  int width = 0;         // columns
  int height = 0;        // rows
  double cell_size = 0.0;  // m
  std::vector<double> elevations;  // m, width*height

  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(col);
  }
  void validate() const;
};

// per-cell gradient magnitude slope, radians; central differences in the
// interior, one-sided at the borders
std::vector<double> slope_map(const TerrainMap& map);

struct RiskMap {
  int width = 0;
  int height = 0;
  double cell_size = 0.0;
  std::vector<double> slope_deg;
  std::vector<double> step;      // net step length per cell, NaN when infeasible
  std::vector<Regime> regime;
  std::vector<double> cost;      // cell traversal cost, infinity when impassable
  std::vector<std::uint8_t> impassable;

  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(col);
  }
  bool passable(int col, int row) const { return impassable[index(col, row)] == 0; }
};

// cost = cell_size * (1 + lambda * risk); risk is 0 for Success and
// (R - s)/R for Metastable; failure regimes are impassable
RiskMap build_risk_map(const TerrainMap& map, const RobotConfig& robot,
                       const TerrainStrength& terrain, double lambda);

struct Cell {
  int col = 0;
  int row = 0;
  bool operator==(const Cell&) const = default;
};

struct PathResult {
  std::vector<Cell> waypoints;
  double total_cost = 0.0;
  double total_length = 0.0;             // m
  std::array<int, 4> regime_counts{};    // indexed by Regime code
};

// minimum-cost 8-connected path via Dijkstra; edge cost is the endpoint cell
// cost average scaled by sqrt(2) on diagonals; ties broken by lexicographic
// cell index. Returns nullopt when the goal is unreachable.
std::optional<PathResult> plan_path(const RiskMap& risk, Cell start, Cell goal);

}  // namespace granslope
