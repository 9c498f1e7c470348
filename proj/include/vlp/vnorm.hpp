#pragma once

#include <vector>

#include "vlp/distribution.hpp"
#include "vlp/exponent.hpp"
#include "vlp/grid.hpp"
#include "vlp/sets.hpp"

namespace vlp {

/// p at every cell midpoint of the grid.
std::vector<ExtendedReal> sample_exponent(const ExponentFunction& p, const GridDomain& grid);

/// rho_p(f / lambda) over the whole grid, midpoint rule.
double modular(const GridFunction& f, const ExponentFunction& p, double lambda = 1.0);
/// rho_p(f / lambda) restricted to a region, cells weighted by their overlap.
double modular(const GridFunction& f, const ExponentFunction& p, const MeasurableSet& region, double lambda = 1.0);

double luxemburg_norm(const GridFunction& f, const ExponentFunction& p, const LuxemburgOptions& options = {});
double luxemburg_norm(const GridFunction& f, const ExponentFunction& p, const MeasurableSet& region,
                      const LuxemburgOptions& options = {});

/// ||chi_E||_p under the given quadrature.
double indicator_norm(const ExponentFunction& p, const MeasurableSet& set, const Quadrature& quadrature);

/// Holder constant K_p = (1/p_- - 1/p_+ + 1)[Omega_*] + [Omega_inf] + [Omega_1].
double holder_constant(const ExponentFunction& p);
/// Duality constant k_p = 1 / (number of strata of positive measure).
double duality_constant(const ExponentFunction& p);

struct HolderReport {
  double lhs;
  double rhs;
  double constant;
  bool holds;
};

/// int |fg| <= K_p ||f||_p ||g||_p'.
HolderReport holder_pairing_check(const GridFunction& f, const GridFunction& g, const ExponentFunction& p);

/// Harmonic mean p_E, with 1/inf = 0.
ExtendedReal harmonic_mean(const ExponentFunction& p, const MeasurableSet& set, const Quadrature& quadrature);

}  // namespace vlp
