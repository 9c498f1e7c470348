#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "vlp/exponent.hpp"
#include "vlp/grid.hpp"

namespace vlp {

/// Cube Q(center, radius) of side 2r. An empty basis means axis-aligned;
/// otherwise the rows of `basis` are the orthonormal edge directions.
struct Cube {
  std::vector<double> center;
  double radius = 1.0;
  std::vector<std::vector<double>> basis;

  std::size_t dimension() const { return center.size(); }
  double side() const { return 2.0 * radius; }
  double volume() const;
  bool axis_aligned() const { return basis.empty(); }
  double lower(std::size_t axis) const { return center[axis] - radius; }
  double upper(std::size_t axis) const { return center[axis] + radius; }
  /// Lower corner lc(Q); axis-aligned cubes only.
  std::vector<double> lower_corner() const;
  bool contains(std::span<const double> x) const;
  /// Containment of another axis-aligned cube, with absolute slack `tol`.
  bool contains(const Cube& other, double tol = 1e-12) const;
  Box box() const;
  void validate() const;
};

Cube interval_cube(double lo, double hi);

/// cube ∩ {x : p(x) < threshold}.
struct Sublevel {
  Cube cube;
  std::shared_ptr<const ExponentFunction> p;
  double threshold = 1.0;
};

/// Explicit subset of the cells of one grid.
struct CellMask {
  std::vector<bool> mask;
};

using MeasurableSet = std::variant<Cube, Sublevel, CellMask>;

struct CellWeight {
  std::size_t index;
  double weight;  // fraction of the cell inside the set, in (0, 1]
};

/// Cells meeting the set with positive weight. Axis-aligned cubes get exact
/// overlap fractions; oriented cubes and sublevel sets use midpoint membership
/// (a sublevel set keeps the cube's overlap fraction when the midpoint qualifies).
std::vector<CellWeight> cell_weights(const MeasurableSet& set, const GridDomain& grid);

/// Measure of the set as seen by the grid.
double grid_measure(const MeasurableSet& set, const GridDomain& grid);

/// Cube carried by a set, if any (the witness cube for the cube property).
const Cube* enclosing_cube(const MeasurableSet& set);

}  // namespace vlp
