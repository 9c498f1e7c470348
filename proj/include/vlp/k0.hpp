#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "vlp/distribution.hpp"
#include "vlp/exponent.hpp"
#include "vlp/grid.hpp"
#include "vlp/sets.hpp"

namespace vlp {

using SetFamily = std::vector<MeasurableSet>;

/// Cubes with centers on a lattice over `centers` (per-axis count) and radii on
/// a ladder from r_min to r_max. Radii are log spaced unless `log_spaced` is false.
SetFamily cube_lattice_family(const Box& centers, std::size_t centers_per_axis, double r_min, double r_max,
                              std::size_t radii, bool log_spaced = true);

/// One interval per (lo, hi) pair.
SetFamily interval_family(std::span<const std::pair<double, double>> intervals);

struct K0Report {
  double best_value = 0.0;
  std::size_t argmax = 0;  // first maximizer in family order
  std::vector<double> samples;
};

/// Samples |E|^{alpha/n - 1} ||chi_E||_{p'} ||chi_E||_q over the family.
K0Report k0alpha_constant(const ExponentFunction& p, double alpha, const SetFamily& family,
                          const Quadrature& quadrature);

/// Samples |E|^{-1} ||chi_E||_p ||chi_E||_{p'}; identical to alpha = 0 above.
K0Report k0_constant(const ExponentFunction& p, const SetFamily& family, const Quadrature& quadrature);

struct AveragingReport {
  double sup_ratio = 0.0;
  double k0alpha = 0.0;
  double holder = 0.0;
  double duality = 0.0;
  bool upper_holds = false;  // sup_ratio <= K_p K0^alpha
  bool lower_holds = false;  // K0^alpha <= sup_ratio / k_p
};

/// sup over (E, f) of ||A_E^alpha f||_q / ||f||_p for the given witnesses,
/// compared with K_p K0^alpha(family) from above and k_p^{-1} from below.
AveragingReport averaging_uniform_bound(const ExponentFunction& p, double alpha, const SetFamily& family,
                                        std::span<const GridFunction> witnesses, const GridQuadrature& quadrature);

/// g = lambda^{1 - p'} on E with lambda = ||chi_E||_{p'}: the function attaining
/// the duality for chi_E when p > 1 on E and E is a union of whole cells.
GridFunction dual_witness(const ExponentFunction& p, const MeasurableSet& set, const GridQuadrature& quadrature);

struct SandwichEntry {
  double measure;
  double lower;
  double norm;
  double upper;
  bool holds;
};

struct SandwichReport {
  double k0 = 0.0;
  double holder = 0.0;
  double duality = 0.0;
  std::vector<SandwichEntry> entries;
  bool holds = true;
};

/// |E|^{1/p_E} / (2K) <= ||chi_E||_p <= 2K^2 K0 / k |E|^{1/p_E} for every set.
/// K0 is the family maximum of k0_constant unless `k0` is positive.
SandwichReport norm_harmonic_sandwich(const ExponentFunction& p, const SetFamily& family,
                                      const Quadrature& quadrature, double k0 = 0.0);

struct IffReport {
  K0Report k0alpha;
  K0Report k0_p;
  K0Report k0_q;
  double holder_bound = 5.0;  // generalized Holder constant
  bool lower_holds = true;    // K0(p)(E), K0(q)(E) <= 5 K0^alpha(E)
  bool upper_holds = true;    // K0^alpha(E) <= (2K_p'^2 K0(p)(E)/k_p')(2K_q^2 K0(q)(E)/k_q)
  bool holds() const { return lower_holds && upper_holds; }
};

IffReport k0alpha_iff_k0_check(const ExponentFunction& p, double alpha, const SetFamily& family,
                               const Quadrature& quadrature);

struct HarmonicCubeReport {
  Cube cube;
  double value = 0.0;              // p_{Q* ∩ E}
  std::size_t candidates = 0;      // radius-r cubes searched
  std::size_t scaled_checked = 0;  // radius-mr cubes compared, m >= 2
  double worst_margin = 0.0;       // min of p_{K∩E} - p_{Q*∩E} over those
  bool integer_scaling_holds = true;
};

/// Harmonic mean of p over Q ∩ E on the grid.
double harmonic_mean_on(const ExponentFunction& p, const Cube& Q, const MeasurableSet& E, const GridDomain& grid);

/// Grid search for the radius-r cube in D minimizing p_{Q∩E}, centers on the
/// lattice of spacing h inside Q(center(D), R - r). Then checks every lattice
/// cube of radius m r in D, m >= 2, against it.
HarmonicCubeReport minimal_harmonic_mean_cube(const ExponentFunction& p, const Cube& D, double r,
                                              const MeasurableSet& E, const GridDomain& grid);

}  // namespace vlp
