#include "vlp/k0.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlp/error.hpp"
#include "vlp/vnorm.hpp"

namespace vlp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> ladder(double lo, double hi, std::size_t count, bool log_spaced) {
  if (count == 1) return {lo};
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(log_spaced ? lo * std::pow(hi / lo, s) : lo + s * (hi - lo));
  }
  return out;
}

double set_measure(const ExponentDistribution& d) {
  if (!(d.measure() > 0.0)) throw DegenerateSetError("family member has zero measure");
  return d.measure();
}

}  // namespace

SetFamily cube_lattice_family(const Box& centers, std::size_t centers_per_axis, double r_min, double r_max,
                              std::size_t radii, bool log_spaced) {
  if (centers_per_axis == 0 || radii == 0) throw PreconditionError("family needs centers and radii");
  if (!(r_min > 0.0 && r_max >= r_min)) throw PreconditionError("radius ladder needs 0 < r_min <= r_max");
  const std::size_t n = centers.dimension();
  std::vector<std::vector<double>> axes(n);
  for (std::size_t a = 0; a < n; ++a) axes[a] = ladder(centers.lower[a], centers.upper[a], centers_per_axis, false);
  SetFamily family;
  for (double r : ladder(r_min, r_max, radii, log_spaced)) {
    std::vector<std::size_t> k(n, 0);
    while (true) {
      Cube c{std::vector<double>(n), r, {}};
      for (std::size_t a = 0; a < n; ++a) c.center[a] = axes[a][k[a]];
      family.emplace_back(std::move(c));
      std::size_t a = 0;
      while (a < n && ++k[a] == centers_per_axis) k[a++] = 0;
      if (a == n) break;
    }
  }
  return family;
}

SetFamily interval_family(std::span<const std::pair<double, double>> intervals) {
  SetFamily family;
  for (const auto& [lo, hi] : intervals) family.emplace_back(interval_cube(lo, hi));
  return family;
}

K0Report k0alpha_constant(const ExponentFunction& p, double alpha, const SetFamily& family,
                          const Quadrature& quadrature) {
  const ExponentFunction p_conj = conjugate(p);
  const ExponentFunction q = sobolev_dual(p, alpha);
  const double n = static_cast<double>(p.dimension());
  K0Report report;
  report.samples.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    const ExponentDistribution base = quadrature.base_distribution(p, family[i]);
    const double measure = set_measure(base);
    const double value = std::pow(measure, alpha / n - 1.0) * base.mapped(p_conj).indicator_norm() *
                         base.mapped(q).indicator_norm();
    report.samples.push_back(value);
    if (i == 0 || value > report.best_value) {
      report.best_value = value;
      report.argmax = i;
    }
  }
  return report;
}

K0Report k0_constant(const ExponentFunction& p, const SetFamily& family, const Quadrature& quadrature) {
  return k0alpha_constant(p, 0.0, family, quadrature);
}

GridFunction dual_witness(const ExponentFunction& p, const MeasurableSet& set, const GridQuadrature& quadrature) {
  const GridDomain& grid = quadrature.grid();
  const ExponentFunction p_conj = conjugate(p);
  const double lambda = quadrature.distribution(p_conj, set).indicator_norm();
  std::vector<double> values(grid.size(), 0.0);
  std::vector<double> x(grid.dimension());
  for (const CellWeight& cw : cell_weights(set, grid)) {
    grid.midpoint(cw.index, x);
    const ExtendedReal e = p_conj.eval(x);
    values[cw.index] = e.is_infinite() ? 0.0 : std::pow(lambda, 1.0 - e.finite());
  }
  return GridFunction(grid, std::move(values));
}

AveragingReport averaging_uniform_bound(const ExponentFunction& p, double alpha, const SetFamily& family,
                                        std::span<const GridFunction> witnesses, const GridQuadrature& quadrature) {
  const GridDomain& grid = quadrature.grid();
  const ExponentFunction q = sobolev_dual(p, alpha);
  const double n = static_cast<double>(p.dimension());
  AveragingReport report;
  report.k0alpha = k0alpha_constant(p, alpha, family, quadrature).best_value;
  report.holder = holder_constant(p);
  report.duality = duality_constant(p);

  std::vector<double> witness_norms;
  for (const GridFunction& f : witnesses) {
    if (f.domain().size() != grid.size()) throw PreconditionError("witness lives on a different grid");
    if (f.is_zero()) throw PreconditionError("witnesses must be nonzero");
    witness_norms.push_back(luxemburg_norm(f, p));
  }
  for (const MeasurableSet& set : family) {
    const double measure = grid_measure(set, grid);
    if (!(measure > 0.0)) throw DegenerateSetError("family member has zero measure");
    const double chi_q = quadrature.distribution(q, set).indicator_norm();
    const std::vector<CellWeight> cells = cell_weights(set, grid);
    for (std::size_t w = 0; w < witnesses.size(); ++w) {
      double mass = 0.0;
      for (const CellWeight& cw : cells) mass += witnesses[w][cw.index] * cw.weight;
      mass *= grid.cell_volume();
      const double average_norm = std::pow(measure, alpha / n) * (mass / measure) * chi_q;
      report.sup_ratio = std::max(report.sup_ratio, average_norm / witness_norms[w]);
    }
  }
  report.upper_holds = report.sup_ratio <= report.holder * report.k0alpha * (1.0 + 1e-6);
  report.lower_holds = report.k0alpha <= report.sup_ratio / report.duality * (1.0 + 1e-6);
  return report;
}

SandwichReport norm_harmonic_sandwich(const ExponentFunction& p, const SetFamily& family,
                                      const Quadrature& quadrature, double k0) {
  SandwichReport report;
  report.k0 = k0 > 0.0 ? k0 : k0_constant(p, family, quadrature).best_value;
  report.holder = holder_constant(p);
  report.duality = duality_constant(p);
  const double K = report.holder;
  for (const MeasurableSet& set : family) {
    const ExponentDistribution d = quadrature.distribution(p, set);
    SandwichEntry e;
    e.measure = set_measure(d);
    const double scale = std::pow(e.measure, d.reciprocal_mean());
    e.lower = scale / (2.0 * K);
    e.upper = 2.0 * K * K * report.k0 / report.duality * scale;
    e.norm = d.indicator_norm();
    e.holds = e.lower <= e.norm * (1.0 + 1e-9) && e.norm <= e.upper * (1.0 + 1e-9);
    report.holds = report.holds && e.holds;
    report.entries.push_back(e);
  }
  return report;
}

IffReport k0alpha_iff_k0_check(const ExponentFunction& p, double alpha, const SetFamily& family,
                               const Quadrature& quadrature) {
  const ExponentFunction q = sobolev_dual(p, alpha);
  IffReport report;
  report.k0alpha = k0alpha_constant(p, alpha, family, quadrature);
  report.k0_p = k0_constant(p, family, quadrature);
  report.k0_q = k0_constant(q, family, quadrature);
  const ExponentFunction p_conj = conjugate(p);
  const double cp = 2.0 * std::pow(holder_constant(p_conj), 2) / duality_constant(p_conj);
  const double cq = 2.0 * std::pow(holder_constant(q), 2) / duality_constant(q);
  const double tol = 1.0 + 1e-6;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double a = report.k0alpha.samples[i];
    const double sp = report.k0_p.samples[i];
    const double sq = report.k0_q.samples[i];
    if (sp > report.holder_bound * a * tol || sq > report.holder_bound * a * tol) report.lower_holds = false;
    if (a > cp * sp * cq * sq * tol) report.upper_holds = false;
  }
  return report;
}

namespace {

// Box integrals of the E weights and of E weights / p on one grid.
struct HarmonicField {
  BoxIntegrator weight;
  BoxIntegrator weight_over_p;

  double mean(std::span<const double> center, double radius) const {
    const double w = weight.cube_integral(center, radius);
    if (!(w > 0.0)) return kInf;
    return w / weight_over_p.cube_integral(center, radius);
  }
};

HarmonicField harmonic_field(const ExponentFunction& p, const MeasurableSet& E, const GridDomain& grid,
                             const Cube* restrict_to) {
  std::vector<double> w(grid.size(), 0.0), wp(grid.size(), 0.0);
  std::vector<double> x(grid.dimension());
  for (const CellWeight& cw : cell_weights(E, grid)) {
    grid.midpoint(cw.index, x);
    const ExtendedReal v = p.eval(x);
    if (v.is_infinite() && (restrict_to == nullptr || restrict_to->contains(x))) {
      throw PreconditionError("minimal harmonic mean search needs p_+(D ∩ E) < inf");
    }
    w[cw.index] = cw.weight;
    wp[cw.index] = cw.weight * v.reciprocal();
  }
  return HarmonicField{BoxIntegrator(GridFunction(grid, std::move(w))),
                       BoxIntegrator(GridFunction(grid, std::move(wp)))};
}

// Centers of the lattice of spacing h inside Q(center, extent).
template <typename F>
void for_each_center(const Cube& D, double extent, double h, F&& visit) {
  const std::size_t n = D.dimension();
  const auto steps = static_cast<std::size_t>(std::floor(2.0 * extent / h + 1e-9));
  std::vector<std::size_t> k(n, 0);
  std::vector<double> c(n);
  while (true) {
    for (std::size_t a = 0; a < n; ++a) c[a] = D.center[a] - extent + static_cast<double>(k[a]) * h;
    visit(std::span<const double>(c));
    std::size_t a = 0;
    while (a < n && ++k[a] == steps + 1) k[a++] = 0;
    if (a == n) break;
  }
}

}  // namespace

double harmonic_mean_on(const ExponentFunction& p, const Cube& Q, const MeasurableSet& E, const GridDomain& grid) {
  const HarmonicField field = harmonic_field(p, E, grid, nullptr);
  const double v = field.mean(Q.center, Q.radius);
  if (v == kInf) throw DegenerateSetError("Q ∩ E is a null set");
  return v;
}

HarmonicCubeReport minimal_harmonic_mean_cube(const ExponentFunction& p, const Cube& D, double r,
                                              const MeasurableSet& E, const GridDomain& grid) {
  D.validate();
  if (!D.axis_aligned()) throw PreconditionError("D must be axis-aligned");
  if (D.dimension() != grid.dimension()) throw PreconditionError("cube and grid dimensions differ");
  const double R = D.radius;
  if (!(r > 0.0 && r <= R * (1.0 + 1e-12))) throw PreconditionError("need 0 < r <= R(D)");
  const double n = static_cast<double>(D.dimension());

  const HarmonicField field = harmonic_field(p, E, grid, &D);
  const double inside = field.weight.cube_integral(D.center, D.radius);
  if (!(D.volume() - inside < std::pow(2.0 * r, n))) throw PreconditionError("need |D \\ E| < (2r)^n");

  const double h = grid.spacing();
  HarmonicCubeReport report;
  report.value = kInf;
  report.cube = Cube{D.center, r, {}};
  for_each_center(D, R - r, h, [&](std::span<const double> c) {
    ++report.candidates;
    const double v = field.mean(c, r);
    if (v < report.value) {
      report.value = v;
      report.cube.center.assign(c.begin(), c.end());
    }
  });
  if (report.value == kInf) throw DegenerateSetError("every candidate cube misses E");

  report.worst_margin = kInf;
  for (double m = 2.0; m * r <= R * (1.0 + 1e-12); m += 1.0) {
    for_each_center(D, std::max(0.0, R - m * r), h, [&](std::span<const double> c) {
      const double v = field.mean(c, m * r);
      if (v == kInf) return;
      ++report.scaled_checked;
      const double margin = v - report.value;
      report.worst_margin = std::min(report.worst_margin, margin);
      if (margin < -1e-9) report.integer_scaling_holds = false;
    });
  }
  return report;
}

}  // namespace vlp
