#include "vlp/vnorm.hpp"

#include <cmath>

#include "vlp/error.hpp"

namespace vlp {

namespace {

void check_grid(const GridFunction& f, const ExponentFunction& p) {
  if (f.domain().dimension() != p.dimension()) throw PreconditionError("function and exponent dimensions differ");
}

std::vector<ModularTerm> grid_terms(const GridFunction& f, const ExponentFunction& p) {
  check_grid(f, p);
  const GridDomain& grid = f.domain();
  std::vector<ModularTerm> terms;
  terms.reserve(grid.size());
  std::vector<double> x(grid.dimension());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (f[i] == 0.0) continue;
    grid.midpoint(i, x);
    terms.push_back({f[i], p.eval(x), grid.cell_volume()});
  }
  return terms;
}

std::vector<ModularTerm> region_terms(const GridFunction& f, const ExponentFunction& p, const MeasurableSet& region) {
  check_grid(f, p);
  const GridDomain& grid = f.domain();
  const std::vector<CellWeight> cells = cell_weights(region, grid);
  if (cells.empty()) throw DomainError("region does not meet the grid");
  std::vector<ModularTerm> terms;
  terms.reserve(cells.size());
  std::vector<double> x(grid.dimension());
  for (const CellWeight& cw : cells) {
    if (f[cw.index] == 0.0) continue;
    grid.midpoint(cw.index, x);
    terms.push_back({f[cw.index], p.eval(x), cw.weight * grid.cell_volume()});
  }
  return terms;
}

}  // namespace

std::vector<ExtendedReal> sample_exponent(const ExponentFunction& p, const GridDomain& grid) {
  if (grid.dimension() != p.dimension()) throw PreconditionError("exponent and grid dimensions differ");
  std::vector<ExtendedReal> out(grid.size());
  std::vector<double> x(grid.dimension());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.midpoint(i, x);
    out[i] = p.eval(x);
  }
  return out;
}

double modular(const GridFunction& f, const ExponentFunction& p, double lambda) {
  return modular_of_terms(grid_terms(f, p), lambda);
}

double modular(const GridFunction& f, const ExponentFunction& p, const MeasurableSet& region, double lambda) {
  return modular_of_terms(region_terms(f, p, region), lambda);
}

double luxemburg_norm(const GridFunction& f, const ExponentFunction& p, const LuxemburgOptions& options) {
  return luxemburg_of_terms(grid_terms(f, p), options);
}

double luxemburg_norm(const GridFunction& f, const ExponentFunction& p, const MeasurableSet& region,
                      const LuxemburgOptions& options) {
  return luxemburg_of_terms(region_terms(f, p, region), options);
}

double indicator_norm(const ExponentFunction& p, const MeasurableSet& set, const Quadrature& quadrature) {
  return quadrature.distribution(p, set).indicator_norm();
}

double holder_constant(const ExponentFunction& p) {
  const Strata s = p.strata();
  double k = 0.0;
  if (s.interior) k += 1.0 / p.p_minus().to_double() - p.p_plus().reciprocal() + 1.0;
  if (s.infinite) k += 1.0;
  if (s.one) k += 1.0;
  return k;
}

double duality_constant(const ExponentFunction& p) {
  const int strata = p.strata().count();
  return strata == 0 ? 1.0 : 1.0 / strata;
}

HolderReport holder_pairing_check(const GridFunction& f, const GridFunction& g, const ExponentFunction& p) {
  if (f.domain().size() != g.domain().size() || f.domain().spacing() != g.domain().spacing()) {
    throw PreconditionError("holder_pairing_check needs functions on one grid");
  }
  std::vector<double> products(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) products[i] = f[i] * g[i];
  HolderReport r;
  r.lhs = pairwise_sum(products) * f.domain().cell_volume();
  r.constant = holder_constant(p);
  r.rhs = r.constant * luxemburg_norm(f, p) * luxemburg_norm(g, conjugate(p));
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-6);
  return r;
}

ExtendedReal harmonic_mean(const ExponentFunction& p, const MeasurableSet& set, const Quadrature& quadrature) {
  const ExponentDistribution d = quadrature.distribution(p, set);
  if (!(d.measure() > 0.0)) throw DegenerateSetError("harmonic mean over a null set");
  return d.harmonic_mean();
}

}  // namespace vlp
