#pragma once

#include <span>
#include <vector>

#include "vlp/exponent.hpp"
#include "vlp/grid.hpp"
#include "vlp/sets.hpp"

namespace vlp {

struct LuxemburgOptions {
  double relative_tolerance = 1e-12;
  int max_iterations = 200;
};

/// One quadrature term of a modular: |f| = value on a set of the given
/// measure where the exponent equals `exponent`.
struct ModularTerm {
  double value;
  ExtendedReal exponent;
  double measure;
};

/// rho(f / lambda): sum of measure * (value/lambda)^p over finite exponents
/// plus max(value/lambda) over infinite ones. Overflow yields +inf.
double modular_of_terms(std::span<const ModularTerm> terms, double lambda);

/// inf{lambda > 0 : rho(f/lambda) <= 1} by bisection in log(lambda).
double luxemburg_of_terms(std::span<const ModularTerm> terms, const LuxemburgOptions& options = {});

struct ExponentAtom {
  ExtendedReal exponent;
  double measure;
};

/// Distribution of an exponent over a set: finitely many (value, measure)
/// atoms, sorted by value with equal values merged. Everything about chi_E
/// that a Luxemburg norm or a harmonic mean can see.
class ExponentDistribution {
 public:
  ExponentDistribution() = default;
  explicit ExponentDistribution(std::vector<ExponentAtom> atoms);

  const std::vector<ExponentAtom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  double measure() const { return measure_; }

  /// Atoms pushed through the reciprocal transform of `target`; the atoms are
  /// taken to be base values of target's pieces.
  ExponentDistribution mapped(const ExponentFunction& target) const;

  /// rho(chi_E / lambda).
  double modular(double lambda) const;
  double indicator_norm(const LuxemburgOptions& options = {}) const;
  /// Average of 1/p over the set, so that |E|^{1/p_E} = |E|^{reciprocal_mean}.
  double reciprocal_mean() const;
  /// Harmonic mean p_E; infinite when p = inf almost everywhere on E.
  ExtendedReal harmonic_mean() const;
  ExtendedReal ess_inf() const;
  ExtendedReal ess_sup() const;

 private:
  std::vector<ExponentAtom> atoms_;
  double measure_ = 0.0;
};

/// Rule turning (exponent, set) into an exponent distribution in base values.
class Quadrature {
 public:
  virtual ~Quadrature() = default;
  virtual ExponentDistribution base_distribution(const ExponentFunction& p, const MeasurableSet& set) const = 0;

  ExponentDistribution distribution(const ExponentFunction& p, const MeasurableSet& set) const {
    return base_distribution(p, set).mapped(p);
  }
};

/// Cell-midpoint samples of p weighted by the cells' overlap with the set.
class GridQuadrature final : public Quadrature {
 public:
  explicit GridQuadrature(GridDomain grid) : grid_(std::move(grid)) {}

  const GridDomain& grid() const { return grid_; }
  ExponentDistribution base_distribution(const ExponentFunction& p, const MeasurableSet& set) const override;

 private:
  GridDomain grid_;
};

/// Exact piece walk for 1-D intervals. Whole bumps are counted in bulk, so
/// intervals holding up to 2^53 bumps cost O(1); shoulders use Gauss-Legendre.
/// Needs disjoint bump supports and axis-aligned cube sets.
class StructuredQuadrature final : public Quadrature {
 public:
  ExponentDistribution base_distribution(const ExponentFunction& p, const MeasurableSet& set) const override;
  ExponentDistribution base_distribution(const ExponentFunction& p, double lo, double hi) const;
};

}  // namespace vlp
