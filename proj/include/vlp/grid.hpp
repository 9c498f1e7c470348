#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vlp/exponent.hpp"

namespace vlp {

/// Uniform cell grid on a box: common spacing h, counts[a] cells along axis a.
/// Cells are stored row-major with axis 0 varying fastest.
class GridDomain {
 public:
  GridDomain(std::vector<double> lower, double spacing, std::vector<std::size_t> counts);

  /// Grid on `box` with `cells_per_axis` cells along axis 0; the other axes must
  /// be integer multiples of the resulting spacing.
  static GridDomain over_box(const Box& box, std::size_t cells_per_axis);
  static GridDomain with_spacing(const Box& box, double spacing);

  std::size_t dimension() const { return lower_.size(); }
  double spacing() const { return h_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  std::size_t size() const { return size_; }
  double cell_volume() const { return cell_volume_; }

  double lower(std::size_t axis) const { return lower_[axis]; }
  double upper(std::size_t axis) const { return lower_[axis] + static_cast<double>(counts_[axis]) * h_; }
  Box box() const;
  double volume() const;

  /// Midpoint coordinate of cell `i` along `axis`.
  double coordinate(std::size_t axis, std::size_t i) const { return lower_[axis] + (static_cast<double>(i) + 0.5) * h_; }
  void unravel(std::size_t index, std::span<std::size_t> multi) const;
  std::size_t ravel(std::span<const std::size_t> multi) const;
  void midpoint(std::size_t index, std::span<double> x) const;
  std::vector<double> midpoint(std::size_t index) const;

 private:
  std::vector<double> lower_;
  double h_;
  std::vector<std::size_t> counts_;
  std::size_t size_;
  double cell_volume_;
};

/// Non-negative function sampled at cell midpoints. Immutable.
class GridFunction {
 public:
  GridFunction(GridDomain domain, std::vector<double> values);

  static GridFunction zero(const GridDomain& domain);
  static GridFunction sample(const GridDomain& domain, const std::function<double(std::span<const double>)>& f);
  /// Midpoint indicator of the closed box.
  static GridFunction indicator(const GridDomain& domain, const Box& box);

  const GridDomain& domain() const { return domain_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  GridFunction scaled(double c) const;
  double integral() const;
  double max() const;
  bool is_zero() const;

 private:
  GridDomain domain_;
  std::vector<double> values_;
};

/// Exact integrals of the piecewise-constant extension of a GridFunction over
/// arbitrary axis-aligned boxes. The function is taken to vanish outside the grid.
class BoxIntegrator {
 public:
  static constexpr std::size_t kMaxDimension = 3;

  explicit BoxIntegrator(const GridFunction& f);

  const GridDomain& domain() const { return domain_; }
  double integral(std::span<const double> lower, std::span<const double> upper) const;
  /// Integral over the cube of the given center and radius.
  double cube_integral(std::span<const double> center, double radius) const;

 private:
  double cumulative(std::span<const double> x) const;

  GridDomain domain_;
  std::vector<std::size_t> node_counts_;
  std::vector<double> prefix_;
};

/// Deterministic pairwise summation; the result does not depend on thread count.
double pairwise_sum(std::span<const double> values);

}  // namespace vlp
