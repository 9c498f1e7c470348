#include "vlp/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "vlp/error.hpp"

namespace vlp {

GridDomain::GridDomain(std::vector<double> lower, double spacing, std::vector<std::size_t> counts)
    : lower_(std::move(lower)), h_(spacing), counts_(std::move(counts)) {
  if (lower_.empty() || lower_.size() != counts_.size()) throw PreconditionError("grid dimension mismatch");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw PreconditionError("grid spacing must be finite and > 0");
  size_ = 1;
  for (std::size_t c : counts_) {
    if (c == 0) throw PreconditionError("grid needs at least one cell per axis");
    size_ *= c;
  }
  cell_volume_ = std::pow(h_, static_cast<double>(lower_.size()));
}

GridDomain GridDomain::over_box(const Box& box, std::size_t cells_per_axis) {
  if (cells_per_axis == 0) throw PreconditionError("cells_per_axis must be positive");
  return with_spacing(box, box.extent(0) / static_cast<double>(cells_per_axis));
}

GridDomain GridDomain::with_spacing(const Box& box, double spacing) {
  std::vector<std::size_t> counts;
  for (std::size_t a = 0; a < box.dimension(); ++a) {
    const double ratio = box.extent(a) / spacing;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
      throw PreconditionError("box extents must be integer multiples of the grid spacing");
    }
    counts.push_back(static_cast<std::size_t>(rounded));
  }
  return GridDomain(box.lower, spacing, std::move(counts));
}

Box GridDomain::box() const {
  Box b{lower_, lower_};
  for (std::size_t a = 0; a < dimension(); ++a) b.upper[a] = upper(a);
  return b;
}

double GridDomain::volume() const { return cell_volume_ * static_cast<double>(size_); }

void GridDomain::unravel(std::size_t index, std::span<std::size_t> multi) const {
  for (std::size_t a = 0; a < dimension(); ++a) {
    multi[a] = index % counts_[a];
    index /= counts_[a];
  }
}

std::size_t GridDomain::ravel(std::span<const std::size_t> multi) const {
  std::size_t index = 0;
  for (std::size_t a = dimension(); a-- > 0;) index = index * counts_[a] + multi[a];
  return index;
}

void GridDomain::midpoint(std::size_t index, std::span<double> x) const {
  for (std::size_t a = 0; a < dimension(); ++a) {
    x[a] = coordinate(a, index % counts_[a]);
    index /= counts_[a];
  }
}

std::vector<double> GridDomain::midpoint(std::size_t index) const {
  std::vector<double> x(dimension());
  midpoint(index, x);
  return x;
}

GridFunction::GridFunction(GridDomain domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (values_.size() != domain_.size()) throw PreconditionError("grid function size differs from its domain");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw PreconditionError("grid function values must be finite and >= 0");
  }
}

GridFunction GridFunction::zero(const GridDomain& domain) {
  return GridFunction(domain, std::vector<double>(domain.size(), 0.0));
}

GridFunction GridFunction::sample(const GridDomain& domain, const std::function<double(std::span<const double>)>& f) {
  std::vector<double> values(domain.size());
  std::vector<double> x(domain.dimension());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    domain.midpoint(i, x);
    values[i] = f(x);
  }
  return GridFunction(domain, std::move(values));
}

GridFunction GridFunction::indicator(const GridDomain& domain, const Box& box) {
  return sample(domain, [&](std::span<const double> x) { return box.contains(x) ? 1.0 : 0.0; });
}

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> v = values_;
  for (double& x : v) x *= c;
  return GridFunction(domain_, std::move(v));
}

double GridFunction::integral() const { return pairwise_sum(values_) * domain_.cell_volume(); }

double GridFunction::max() const { return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end()); }

bool GridFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

BoxIntegrator::BoxIntegrator(const GridFunction& f) : domain_(f.domain()) {
  const std::size_t n = domain_.dimension();
  if (n > kMaxDimension) throw PreconditionError("box integration supports dimension <= 3");
  std::size_t total = 1;
  for (std::size_t c : domain_.counts()) {
    node_counts_.push_back(c + 1);
    total *= c + 1;
  }
  prefix_.assign(total, 0.0);
  std::vector<std::size_t> cell(n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    domain_.unravel(i, cell);
    std::size_t idx = 0;
    for (std::size_t a = n; a-- > 0;) idx = idx * node_counts_[a] + cell[a] + 1;
    prefix_[idx] = f[i] * domain_.cell_volume();
  }
  // running sums along each axis turn cell masses into cumulative integrals
  std::size_t stride = 1;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t idx = 0; idx < total; ++idx) {
      if ((idx / stride) % node_counts_[a] != 0) prefix_[idx] += prefix_[idx - stride];
    }
    stride *= node_counts_[a];
  }
}

double BoxIntegrator::cumulative(std::span<const double> x) const {
  const std::size_t n = domain_.dimension();
  std::size_t base = 0;
  std::size_t stride = 1;
  std::array<double, kMaxDimension> frac{};
  std::array<std::size_t, kMaxDimension> strides{};
  for (std::size_t a = 0; a < n; ++a) {
    const double count = static_cast<double>(domain_.counts()[a]);
    const double t = std::clamp((x[a] - domain_.lower(a)) / domain_.spacing(), 0.0, count);
    double cell = std::floor(t);
    if (cell >= count) cell = count - 1.0;
    frac[a] = t - cell;
    strides[a] = stride;
    base += static_cast<std::size_t>(cell) * stride;
    stride *= node_counts_[a];
  }
  double value = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << n); ++corner) {
    double w = 1.0;
    std::size_t idx = base;
    for (std::size_t a = 0; a < n; ++a) {
      if (corner & (std::size_t{1} << a)) {
        w *= frac[a];
        idx += strides[a];
      } else {
        w *= 1.0 - frac[a];
      }
    }
    if (w != 0.0) value += w * prefix_[idx];
  }
  return value;
}

double BoxIntegrator::integral(std::span<const double> lower, std::span<const double> upper) const {
  const std::size_t n = domain_.dimension();
  std::array<double, kMaxDimension> corner{};
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    int sign = 1;
    for (std::size_t a = 0; a < n; ++a) {
      if (mask & (std::size_t{1} << a)) {
        corner[a] = upper[a];
      } else {
        corner[a] = lower[a];
        sign = -sign;
      }
    }
    total += sign * cumulative(std::span<const double>(corner.data(), n));
  }
  return std::max(total, 0.0);
}

double BoxIntegrator::cube_integral(std::span<const double> center, double radius) const {
  const std::size_t n = domain_.dimension();
  std::array<double, kMaxDimension> lo{}, hi{};
  for (std::size_t a = 0; a < n; ++a) {
    lo[a] = center[a] - radius;
    hi[a] = center[a] + radius;
  }
  return integral(std::span<const double>(lo.data(), n), std::span<const double>(hi.data(), n));
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace vlp
