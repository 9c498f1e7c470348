#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vlp/grid.hpp"
#include "vlp/sets.hpp"

namespace vlp {

/// Radii of the centered cubes searched by the maximal operator.
/// Exact: every multiple of h up to the domain diameter.
/// Dyadic: h 2^j up to the first radius reaching the diameter.
enum class RadiusPolicy { Exact, Dyadic };

std::vector<double> radius_ladder(const GridDomain& grid, RadiusPolicy policy);

/// A_Q^alpha f = |Q|^{alpha/n} (avg_Q f) chi_Q, with f extended by zero.
GridFunction averaging_op(const GridFunction& f, const Cube& Q, double alpha);

/// max over r in radii of (2r)^{alpha-n} int_{Q(x,r)} f.
double maximal_at(const BoxIntegrator& integrator, std::span<const double> x, double alpha,
                  std::span<const double> radii);

/// Centered fractional maximal function at every cell midpoint.
GridFunction fractional_maximal(const GridFunction& f, double alpha, RadiusPolicy policy);

/// Supremum over cubes containing y of |Q|^{alpha/n - 1} int_Q f. Exact over all
/// intervals in one dimension; in higher dimensions a lower estimate built from
/// centered cubes and cubes with a corner at y.
double containing_maximal_at(const BoxIntegrator& integrator, std::span<const double> y, double alpha);
GridFunction containing_maximal(const GridFunction& f, double alpha);

/// gamma(alpha, n) = Gamma(n/2 - alpha/2) / (pi^{n/2} 2^alpha Gamma(alpha/2)).
double riesz_constant(double alpha, std::size_t n);

/// c with M_alpha f <= c I_alpha f pointwise: n^{(n-alpha)/2} / (gamma 2^{n-alpha}).
double riesz_domination_constant(double alpha, std::size_t n);

/// I_alpha f at every cell midpoint. One dimension integrates |x-y|^{alpha-1}
/// exactly over each cell; higher dimensions use the midpoint rule away from
/// the singular cell and an exact pyramid decomposition on it.
GridFunction riesz_potential(const GridFunction& f, double alpha);

struct TUPair {
  Cube Q;
  Cube P;
  double t;
  std::vector<double> u;
};

/// P = Q shifted by t r sqrt(n) u.
TUPair make_tu_pair(const Cube& Q, double t, std::vector<double> u);

struct PairReport {
  double lhs_min_over_P;
  double rhs;
  bool holds;
};

/// min_{y in P} M_alpha f(y) >= ((t+2) sqrt(n) / 2)^{alpha-n} |Q|^{alpha/n} avg_Q f,
/// with M_alpha the containing-cube operator sampled at the cell midpoints in P.
PairReport maximal_pair_lower_bound(const GridFunction& f, const TUPair& pair, double alpha);

/// Kernel of a fractional singular integral with size constant C0, smoothness
/// delta and non-degeneracy constant a along `direction`.
struct FractionalKernel {
  std::function<double(std::span<const double>, std::span<const double>)> k;
  std::size_t dimension = 1;
  double alpha = 0.0;
  double c0 = 1.0;
  double delta = 1.0;
  double a = 1.0;
  std::vector<double> direction;

  /// |x - y|^{alpha - n}.
  static FractionalKernel riesz(std::size_t n, double alpha);
  /// sign(x - y) |x - y|^{alpha - 1} on the line.
  static FractionalKernel signed_line(double alpha);
};

/// t0 = max(4, (2 C0 (1 + 2^{n-alpha+delta}) / a)^{1/delta}); +inf when a = 0.
double czo_threshold(const FractionalKernel& kernel);

struct CzoPairReport {
  double t0;
  bool applicable;  // |t| >= t0; when false nothing is claimed and holds is false
  double lhs_min_over_P;
  double rhs;
  bool holds;
};

/// min_{y in P} |int_Q K(x,y) f(x) dx| >= 2^{n-alpha-1} a / (t sqrt(n))^{n-alpha} |Q|^{alpha/n} avg_Q f.
/// P is sampled at samples_per_axis^n points; the x integral uses the grid cells.
CzoPairReport czo_pair_lower_bound(const FractionalKernel& kernel, const GridFunction& f, const TUPair& pair,
                                   std::size_t samples_per_axis = 16);

/// True when K(x, y) has one sign over sampled x in Q and y in P.
bool kernel_sign_coherent(const FractionalKernel& kernel, const TUPair& pair, std::size_t samples_per_axis = 8);

}  // namespace vlp
