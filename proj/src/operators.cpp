#include "vlp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "vlp/error.hpp"

namespace vlp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Gauss = boost::math::quadrature::gauss<double, 20>;

void check_alpha(double alpha, std::size_t n) {
  if (!(alpha >= 0.0 && alpha < static_cast<double>(n))) throw PreconditionError("alpha must lie in [0, n)");
}

double diameter(const GridDomain& grid) {
  double s = 0.0;
  for (std::size_t a = 0; a < grid.dimension(); ++a) {
    const double e = grid.upper(a) - grid.lower(a);
    s += e * e;
  }
  return std::sqrt(s);
}

// Points at the centers of an m^n subdivision of the cube.
std::vector<std::vector<double>> cube_samples(const Cube& c, std::size_t m) {
  const std::size_t n = c.dimension();
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> k(n, 0);
  while (true) {
    std::vector<double> x = c.center;
    for (std::size_t a = 0; a < n; ++a) {
      const double s = -c.radius + (static_cast<double>(k[a]) + 0.5) * c.side() / static_cast<double>(m);
      if (c.axis_aligned()) {
        x[a] += s;
      } else {
        for (std::size_t b = 0; b < n; ++b) x[b] += s * c.basis[a][b];
      }
    }
    out.push_back(std::move(x));
    std::size_t a = 0;
    while (a < n && ++k[a] == m) k[a++] = 0;
    if (a == n) break;
  }
  return out;
}

double average_over(const BoxIntegrator& integrator, const Cube& Q) {
  if (!Q.axis_aligned()) throw PreconditionError("averages need an axis-aligned cube");
  return integrator.cube_integral(Q.center, Q.radius) / Q.volume();
}

}  // namespace

std::vector<double> radius_ladder(const GridDomain& grid, RadiusPolicy policy) {
  const double h = grid.spacing();
  const double diam = diameter(grid);
  std::vector<double> radii;
  if (policy == RadiusPolicy::Exact) {
    const auto m_max = static_cast<std::size_t>(std::ceil(diam / h - 1e-9));
    for (std::size_t m = 1; m <= std::max<std::size_t>(m_max, 1); ++m) radii.push_back(static_cast<double>(m) * h);
  } else {
    double r = h;
    while (true) {
      radii.push_back(r);
      if (r >= diam * (1.0 - 1e-12)) break;
      r *= 2.0;
    }
  }
  return radii;
}

GridFunction averaging_op(const GridFunction& f, const Cube& Q, double alpha) {
  const GridDomain& grid = f.domain();
  check_alpha(alpha, grid.dimension());
  Q.validate();
  if (Q.dimension() != grid.dimension()) throw PreconditionError("cube and grid dimensions differ");
  const std::vector<CellWeight> cells = cell_weights(Q, grid);
  if (cells.empty()) throw DomainError("cube does not meet the grid");
  const BoxIntegrator integrator(f);
  const double n = static_cast<double>(grid.dimension());
  const double value = std::pow(Q.volume(), alpha / n) * average_over(integrator, Q);
  return GridFunction::sample(grid, [&](std::span<const double> x) { return Q.contains(x) ? value : 0.0; });
}

double maximal_at(const BoxIntegrator& integrator, std::span<const double> x, double alpha,
                  std::span<const double> radii) {
  const double n = static_cast<double>(integrator.domain().dimension());
  double best = 0.0;
  for (double r : radii) {
    const double mass = integrator.cube_integral(x, r);
    if (mass > 0.0) best = std::max(best, std::pow(2.0 * r, alpha - n) * mass);
  }
  return best;
}

GridFunction fractional_maximal(const GridFunction& f, double alpha, RadiusPolicy policy) {
  const GridDomain& grid = f.domain();
  check_alpha(alpha, grid.dimension());
  const BoxIntegrator integrator(f);
  const std::vector<double> radii = radius_ladder(grid, policy);
  std::vector<double> out(grid.size());
  std::vector<double> x(grid.dimension());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.midpoint(i, x);
    out[i] = maximal_at(integrator, x, alpha, radii);
  }
  return GridFunction(grid, std::move(out));
}

double containing_maximal_at(const BoxIntegrator& integrator, std::span<const double> y, double alpha) {
  const GridDomain& grid = integrator.domain();
  const std::size_t n = grid.dimension();
  check_alpha(alpha, n);
  const double h = grid.spacing();

  if (n == 1) {
    // the quotient is quasi-convex in each endpoint on every cell, so cell
    // edges and y itself are the only candidates
    std::vector<double> left{y[0]}, right{y[0]};
    for (std::size_t i = 0; i <= grid.counts()[0]; ++i) {
      const double node = grid.lower(0) + static_cast<double>(i) * h;
      if (node <= y[0]) left.push_back(node);
      if (node >= y[0]) right.push_back(node);
    }
    const double lo = grid.lower(0);
    auto cumulative = [&](double s) {
      const double a[1] = {lo};
      const double b[1] = {s};
      return integrator.integral(a, b);
    };
    std::vector<double> fl, fr;
    for (double a : left) fl.push_back(cumulative(a));
    for (double b : right) fr.push_back(cumulative(b));
    double best = 0.0;
    for (std::size_t i = 0; i < left.size(); ++i) {
      for (std::size_t j = 0; j < right.size(); ++j) {
        const double len = right[j] - left[i];
        const double mass = fr[j] - fl[i];
        if (len > 0.0 && mass > 0.0) best = std::max(best, std::pow(len, alpha - 1.0) * mass);
      }
    }
    return best;
  }

  const std::vector<double> radii = radius_ladder(grid, RadiusPolicy::Exact);
  double best = maximal_at(integrator, y, alpha, radii);
  std::vector<double> lo(n), hi(n);
  const double dn = static_cast<double>(n);
  for (double r : radii) {
    const double side = 2.0 * r;
    for (std::size_t orth = 0; orth < (std::size_t{1} << n); ++orth) {
      for (std::size_t a = 0; a < n; ++a) {
        if (orth & (std::size_t{1} << a)) {
          lo[a] = y[a];
          hi[a] = y[a] + side;
        } else {
          lo[a] = y[a] - side;
          hi[a] = y[a];
        }
      }
      const double mass = integrator.integral(lo, hi);
      if (mass > 0.0) best = std::max(best, std::pow(side, alpha - dn) * mass);
    }
  }
  return best;
}

GridFunction containing_maximal(const GridFunction& f, double alpha) {
  const GridDomain& grid = f.domain();
  const BoxIntegrator integrator(f);
  std::vector<double> out(grid.size());
  std::vector<double> x(grid.dimension());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.midpoint(i, x);
    out[i] = containing_maximal_at(integrator, x, alpha);
  }
  return GridFunction(grid, std::move(out));
}

double riesz_constant(double alpha, std::size_t n) {
  const double dn = static_cast<double>(n);
  if (!(alpha > 0.0 && alpha < dn)) throw PreconditionError("riesz_constant needs 0 < alpha < n");
  return std::tgamma(0.5 * (dn - alpha)) /
         (std::pow(std::numbers::pi, 0.5 * dn) * std::pow(2.0, alpha) * std::tgamma(0.5 * alpha));
}

double riesz_domination_constant(double alpha, std::size_t n) {
  const double dn = static_cast<double>(n);
  return std::pow(dn, 0.5 * (dn - alpha)) / (riesz_constant(alpha, n) * std::pow(2.0, dn - alpha));
}

namespace {

// int over [-h/2, h/2]^{m} of (d^2 + |w|^2)^{e/2} dw, tensor Gauss-Legendre.
double face_integral(std::size_t m, double h, double d, double e) {
  const auto& xs = Gauss::abscissa();
  const auto& ws = Gauss::weights();
  std::vector<std::pair<double, double>> nodes;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    nodes.push_back({0.5 * h * xs[i], 0.5 * h * ws[i]});
    if (xs[i] != 0.0) nodes.push_back({-0.5 * h * xs[i], 0.5 * h * ws[i]});
  }
  if (m == 0) return std::pow(d, e);
  double total = 0.0;
  if (m == 1) {
    for (auto [w, wt] : nodes) total += wt * std::pow(d * d + w * w, 0.5 * e);
    return total;
  }
  for (auto [w1, wt1] : nodes) {
    for (auto [w2, wt2] : nodes) total += wt1 * wt2 * std::pow(d * d + w1 * w1 + w2 * w2, 0.5 * e);
  }
  return total;
}

}  // namespace

GridFunction riesz_potential(const GridFunction& f, double alpha) {
  const GridDomain& grid = f.domain();
  const std::size_t n = grid.dimension();
  const double dn = static_cast<double>(n);
  if (!(alpha > 0.0 && alpha < dn)) throw PreconditionError("riesz_potential needs 0 < alpha < n");
  if (n > 3) throw PreconditionError("riesz_potential supports n <= 3");
  const double gamma = riesz_constant(alpha, n);
  const double h = grid.spacing();
  std::vector<double> out(grid.size(), 0.0);

  if (n == 1) {
    auto antiderivative = [&](double s) { return std::copysign(std::pow(std::abs(s), alpha), s) / alpha; };
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid.coordinate(0, i);
      double total = 0.0;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        if (f[j] == 0.0) continue;
        const double u = grid.lower(0) + static_cast<double>(j) * h - x;
        const double v = u + h;
        const double w = (u < 0.0 && v > 0.0) ? (std::pow(-u, alpha) + std::pow(v, alpha)) / alpha
                                              : std::abs(antiderivative(v) - antiderivative(u));
        total += f[j] * w;
      }
      out[i] = gamma * total;
    }
    return GridFunction(grid, std::move(out));
  }

  const double self = 2.0 * dn * (h / (2.0 * alpha)) * face_integral(n - 1, h, 0.5 * h, alpha - dn);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.midpoint(i, x);
    double total = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (f[j] == 0.0) continue;
      if (i == j) {
        total += f[j] * self;
        continue;
      }
      grid.midpoint(j, y);
      double d2 = 0.0;
      for (std::size_t a = 0; a < n; ++a) d2 += (x[a] - y[a]) * (x[a] - y[a]);
      total += f[j] * grid.cell_volume() * std::pow(d2, 0.5 * (alpha - dn));
    }
    out[i] = gamma * total;
  }
  return GridFunction(grid, std::move(out));
}

TUPair make_tu_pair(const Cube& Q, double t, std::vector<double> u) {
  Q.validate();
  if (u.size() != Q.dimension()) throw PreconditionError("direction has the wrong dimension");
  double norm2 = 0.0;
  for (double c : u) norm2 += c * c;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10) throw PreconditionError("direction u must be a unit vector");
  Cube P = Q;
  const double shift = t * Q.radius * std::sqrt(static_cast<double>(Q.dimension()));
  for (std::size_t a = 0; a < u.size(); ++a) P.center[a] += shift * u[a];
  return TUPair{Q, std::move(P), t, std::move(u)};
}

PairReport maximal_pair_lower_bound(const GridFunction& f, const TUPair& pair, double alpha) {
  if (pair.t < 4.0) throw PreconditionError("maximal_pair_lower_bound needs t >= 4");
  const GridDomain& grid = f.domain();
  const std::size_t n = grid.dimension();
  check_alpha(alpha, n);
  const double dn = static_cast<double>(n);
  const BoxIntegrator integrator(f);

  PairReport r;
  r.rhs = std::pow(0.5 * (pair.t + 2.0) * std::sqrt(dn), alpha - dn) * std::pow(pair.Q.volume(), alpha / dn) *
          average_over(integrator, pair.Q);
  r.lhs_min_over_P = kInf;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.midpoint(i, y);
    if (!pair.P.contains(y)) continue;
    r.lhs_min_over_P = std::min(r.lhs_min_over_P, containing_maximal_at(integrator, y, alpha));
  }
  if (r.lhs_min_over_P == kInf) throw PreconditionError("no grid cell midpoint lies in P");
  r.holds = r.lhs_min_over_P >= r.rhs * (1.0 - 1e-9);
  return r;
}

FractionalKernel FractionalKernel::riesz(std::size_t n, double alpha) {
  FractionalKernel kernel;
  kernel.dimension = n;
  kernel.alpha = alpha;
  kernel.direction.assign(n, 0.0);
  kernel.direction[0] = 1.0;
  const double e = alpha - static_cast<double>(n);
  // mean value theorem on |y - y'| <= |x - y|/2
  kernel.c0 = -e * std::pow(2.0, 1.0 - e);
  kernel.delta = 1.0;
  kernel.a = 1.0;
  kernel.k = [e](std::span<const double> x, std::span<const double> y) {
    double d2 = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) d2 += (x[a] - y[a]) * (x[a] - y[a]);
    return std::pow(d2, 0.5 * e);
  };
  return kernel;
}

FractionalKernel FractionalKernel::signed_line(double alpha) {
  FractionalKernel kernel;
  kernel.dimension = 1;
  kernel.alpha = alpha;
  kernel.direction = {1.0};
  kernel.c0 = (1.0 - alpha) * std::pow(2.0, 2.0 - alpha);
  kernel.delta = 1.0;
  kernel.a = 1.0;
  kernel.k = [alpha](std::span<const double> x, std::span<const double> y) {
    const double d = x[0] - y[0];
    return std::copysign(std::pow(std::abs(d), alpha - 1.0), d);
  };
  return kernel;
}

double czo_threshold(const FractionalKernel& kernel) {
  if (!(kernel.a > 0.0)) return kInf;
  const double n = static_cast<double>(kernel.dimension);
  const double base = 2.0 * kernel.c0 * (1.0 + std::pow(2.0, n - kernel.alpha + kernel.delta)) / kernel.a;
  return std::max(4.0, std::pow(base, 1.0 / kernel.delta));
}

CzoPairReport czo_pair_lower_bound(const FractionalKernel& kernel, const GridFunction& f, const TUPair& pair,
                                   std::size_t samples_per_axis) {
  const GridDomain& grid = f.domain();
  const std::size_t n = grid.dimension();
  if (kernel.dimension != n) throw PreconditionError("kernel and grid dimensions differ");
  check_alpha(kernel.alpha, n);
  if (!kernel.direction.empty()) {
    double dot = 0.0;
    for (std::size_t a = 0; a < n; ++a) dot += kernel.direction[a] * pair.u[a];
    if (std::abs(std::abs(dot) - 1.0) > 1e-10) throw PreconditionError("pair direction must be the kernel's direction");
  }
  const double dn = static_cast<double>(n);
  const double alpha = kernel.alpha;

  CzoPairReport r{};
  r.t0 = czo_threshold(kernel);
  r.applicable = std::abs(pair.t) >= r.t0;
  const BoxIntegrator integrator(f);
  r.rhs = std::pow(2.0, dn - alpha - 1.0) * kernel.a / std::pow(std::abs(pair.t) * std::sqrt(dn), dn - alpha) *
          std::pow(pair.Q.volume(), alpha / dn) * average_over(integrator, pair.Q);
  if (!r.applicable) {
    r.lhs_min_over_P = 0.0;
    r.holds = false;
    return r;
  }

  std::vector<std::pair<std::vector<double>, double>> sources;
  for (const CellWeight& cw : cell_weights(pair.Q, grid)) {
    if (f[cw.index] == 0.0) continue;
    sources.push_back({grid.midpoint(cw.index), f[cw.index] * cw.weight * grid.cell_volume()});
  }
  r.lhs_min_over_P = kInf;
  for (const auto& y : cube_samples(pair.P, samples_per_axis)) {
    double total = 0.0;
    for (const auto& [x, mass] : sources) total += kernel.k(x, y) * mass;
    r.lhs_min_over_P = std::min(r.lhs_min_over_P, std::abs(total));
  }
  r.holds = r.lhs_min_over_P >= r.rhs * (1.0 - 1e-9);
  return r;
}

bool kernel_sign_coherent(const FractionalKernel& kernel, const TUPair& pair, std::size_t samples_per_axis) {
  int sign = 0;
  const auto xs = cube_samples(pair.Q, samples_per_axis);
  for (const auto& y : cube_samples(pair.P, samples_per_axis)) {
    for (const auto& x : xs) {
      const double v = kernel.k(x, y);
      const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
      if (s == 0) return false;
      if (sign == 0) sign = s;
      if (s != sign) return false;
    }
  }
  return true;
}

}  // namespace vlp
