#include "vlp/sets.hpp"

#include <algorithm>
#include <cmath>

#include "vlp/error.hpp"

namespace vlp {

double Cube::volume() const { return std::pow(side(), static_cast<double>(dimension())); }

std::vector<double> Cube::lower_corner() const {
  std::vector<double> lc = center;
  for (double& c : lc) c -= radius;
  return lc;
}

bool Cube::contains(std::span<const double> x) const {
  if (x.size() != dimension()) return false;
  if (basis.empty()) {
    for (std::size_t a = 0; a < x.size(); ++a) {
      if (std::abs(x[a] - center[a]) > radius) return false;
    }
    return true;
  }
  for (const auto& u : basis) {
    double s = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) s += (x[a] - center[a]) * u[a];
    if (std::abs(s) > radius) return false;
  }
  return true;
}

bool Cube::contains(const Cube& other, double tol) const {
  if (!axis_aligned() || !other.axis_aligned()) throw PreconditionError("cube containment needs axis-aligned cubes");
  for (std::size_t a = 0; a < dimension(); ++a) {
    if (other.lower(a) < lower(a) - tol || other.upper(a) > upper(a) + tol) return false;
  }
  return true;
}

Box Cube::box() const {
  if (!axis_aligned()) throw PreconditionError("box() needs an axis-aligned cube");
  Box b{center, center};
  for (std::size_t a = 0; a < dimension(); ++a) {
    b.lower[a] -= radius;
    b.upper[a] += radius;
  }
  return b;
}

void Cube::validate() const {
  if (center.empty()) throw PreconditionError("cube needs a center");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw PreconditionError("cube radius must be finite and > 0");
  if (basis.empty()) return;
  if (basis.size() != dimension()) throw PreconditionError("cube basis must have n vectors");
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != dimension()) throw PreconditionError("cube basis vector has wrong dimension");
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t a = 0; a < dimension(); ++a) s += basis[i][a] * basis[j][a];
      if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-10) throw PreconditionError("cube basis is not orthonormal");
    }
  }
}

Cube interval_cube(double lo, double hi) {
  if (!(hi > lo)) throw PreconditionError("interval needs hi > lo");
  return Cube{{0.5 * (lo + hi)}, 0.5 * (hi - lo), {}};
}

namespace {

struct AxisOverlap {
  std::size_t first = 0;
  std::vector<double> fraction;
};

// Per-axis overlap fractions of [lo, hi] with the grid cells.
AxisOverlap axis_overlap(const GridDomain& grid, std::size_t axis, double lo, double hi) {
  AxisOverlap out;
  const double h = grid.spacing();
  const double count = static_cast<double>(grid.counts()[axis]);
  const double t0 = std::clamp((lo - grid.lower(axis)) / h, 0.0, count);
  const double t1 = std::clamp((hi - grid.lower(axis)) / h, 0.0, count);
  if (!(t1 > t0)) return out;
  const std::size_t i0 = static_cast<std::size_t>(std::floor(t0));
  const std::size_t i1 = std::min(static_cast<std::size_t>(std::ceil(t1)), grid.counts()[axis]);
  out.first = i0;
  for (std::size_t i = i0; i < i1; ++i) {
    const double a = std::max(t0, static_cast<double>(i));
    const double b = std::min(t1, static_cast<double>(i + 1));
    out.fraction.push_back(std::max(0.0, b - a));
  }
  return out;
}

std::vector<CellWeight> aligned_cube_weights(const Cube& cube, const GridDomain& grid) {
  const std::size_t n = grid.dimension();
  std::vector<AxisOverlap> axes;
  for (std::size_t a = 0; a < n; ++a) {
    axes.push_back(axis_overlap(grid, a, cube.lower(a), cube.upper(a)));
    if (axes.back().fraction.empty()) return {};
  }
  std::vector<CellWeight> out;
  std::vector<std::size_t> k(n, 0), multi(n);
  while (true) {
    double w = 1.0;
    for (std::size_t a = 0; a < n; ++a) {
      w *= axes[a].fraction[k[a]];
      multi[a] = axes[a].first + k[a];
    }
    if (w > 0.0) out.push_back({grid.ravel(multi), w});
    std::size_t a = 0;
    while (a < n && ++k[a] == axes[a].fraction.size()) k[a++] = 0;
    if (a == n) break;
  }
  return out;
}

std::vector<CellWeight> midpoint_weights(const GridDomain& grid, const auto& member) {
  std::vector<CellWeight> out;
  std::vector<double> x(grid.dimension());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.midpoint(i, x);
    if (member(x)) out.push_back({i, 1.0});
  }
  return out;
}

void check_dimension(const Cube& cube, const GridDomain& grid) {
  cube.validate();
  if (cube.dimension() != grid.dimension()) throw PreconditionError("set dimension differs from grid dimension");
}

}  // namespace

std::vector<CellWeight> cell_weights(const MeasurableSet& set, const GridDomain& grid) {
  if (const auto* cube = std::get_if<Cube>(&set)) {
    check_dimension(*cube, grid);
    if (cube->axis_aligned()) return aligned_cube_weights(*cube, grid);
    return midpoint_weights(grid, [&](std::span<const double> x) { return cube->contains(x); });
  }
  if (const auto* sub = std::get_if<Sublevel>(&set)) {
    check_dimension(sub->cube, grid);
    if (!sub->p) throw PreconditionError("sublevel set without an exponent");
    std::vector<CellWeight> base;
    if (sub->cube.axis_aligned()) {
      base = aligned_cube_weights(sub->cube, grid);
    } else {
      base = midpoint_weights(grid, [&](std::span<const double> x) { return sub->cube.contains(x); });
    }
    std::vector<CellWeight> out;
    std::vector<double> x(grid.dimension());
    for (const CellWeight& cw : base) {
      grid.midpoint(cw.index, x);
      if (!sub->p->domain().contains(x)) continue;
      if (sub->p->eval(x) < ExtendedReal(sub->threshold)) out.push_back(cw);
    }
    return out;
  }
  const auto& mask = std::get<CellMask>(set).mask;
  if (mask.size() != grid.size()) throw PreconditionError("cell mask size differs from grid size");
  std::vector<CellWeight> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back({i, 1.0});
  }
  return out;
}

double grid_measure(const MeasurableSet& set, const GridDomain& grid) {
  double total = 0.0;
  for (const CellWeight& cw : cell_weights(set, grid)) total += cw.weight;
  return total * grid.cell_volume();
}

const Cube* enclosing_cube(const MeasurableSet& set) {
  if (const auto* cube = std::get_if<Cube>(&set)) return cube;
  if (const auto* sub = std::get_if<Sublevel>(&set)) return &sub->cube;
  return nullptr;
}

}  // namespace vlp
