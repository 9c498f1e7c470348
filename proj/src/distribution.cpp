#include "vlp/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "vlp/error.hpp"

namespace vlp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Gauss = boost::math::quadrature::gauss<double, 20>;

}  // namespace

double modular_of_terms(std::span<const ModularTerm> terms, double lambda) {
  const double log_lambda = std::log(lambda);
  std::vector<double> parts;
  parts.reserve(terms.size());
  double sup = 0.0;
  for (const ModularTerm& t : terms) {
    if (t.value == 0.0 || !(t.measure > 0.0)) continue;
    if (t.exponent.is_infinite()) {
      sup = std::max(sup, t.value / lambda);
      continue;
    }
    const double e = std::log(t.measure) + t.exponent.finite() * (std::log(t.value) - log_lambda);
    const double term = std::exp(e);
    if (!std::isfinite(term)) return kInf;
    parts.push_back(term);
  }
  return pairwise_sum(parts) + sup;
}

double luxemburg_of_terms(std::span<const ModularTerm> terms, const LuxemburgOptions& options) {
  double vmax = 0.0;
  double total = 0.0;
  double m_min = kInf;
  for (const ModularTerm& t : terms) {
    if (t.value == 0.0 || !(t.measure > 0.0)) continue;
    vmax = std::max(vmax, t.value);
    total += t.measure;
    m_min = std::min(m_min, t.measure);
  }
  if (vmax == 0.0) return 0.0;

  double lo = std::log(m_min / (1.0 + total) * vmax);
  double hi = std::log(vmax * std::max(1.0, total));
  while (modular_of_terms(terms, std::exp(lo)) <= 1.0) lo -= std::log(2.0);
  while (modular_of_terms(terms, std::exp(hi)) > 1.0) hi += std::log(2.0);

  for (int it = 0; it < options.max_iterations && hi - lo > options.relative_tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (modular_of_terms(terms, std::exp(mid)) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

ExponentDistribution::ExponentDistribution(std::vector<ExponentAtom> atoms) {
  std::erase_if(atoms, [](const ExponentAtom& a) { return !(a.measure > 0.0); });
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const ExponentAtom& a, const ExponentAtom& b) { return a.exponent < b.exponent; });
  for (const ExponentAtom& a : atoms) {
    if (!atoms_.empty() && atoms_.back().exponent == a.exponent) {
      atoms_.back().measure += a.measure;
    } else {
      atoms_.push_back(a);
    }
  }
  for (const ExponentAtom& a : atoms_) measure_ += a.measure;
}

ExponentDistribution ExponentDistribution::mapped(const ExponentFunction& target) const {
  if (target.transform().is_identity()) return *this;
  std::vector<ExponentAtom> out;
  out.reserve(atoms_.size());
  for (const ExponentAtom& a : atoms_) out.push_back({target.apply_transform(a.exponent), a.measure});
  return ExponentDistribution(std::move(out));
}

namespace {

std::vector<ModularTerm> indicator_terms(const std::vector<ExponentAtom>& atoms) {
  std::vector<ModularTerm> terms;
  terms.reserve(atoms.size());
  for (const ExponentAtom& a : atoms) terms.push_back({1.0, a.exponent, a.measure});
  return terms;
}

}  // namespace

double ExponentDistribution::modular(double lambda) const { return modular_of_terms(indicator_terms(atoms_), lambda); }

double ExponentDistribution::indicator_norm(const LuxemburgOptions& options) const {
  return luxemburg_of_terms(indicator_terms(atoms_), options);
}

double ExponentDistribution::reciprocal_mean() const {
  if (!(measure_ > 0.0)) throw DegenerateSetError("harmonic mean over a null set");
  double s = 0.0;
  for (const ExponentAtom& a : atoms_) s += a.measure * a.exponent.reciprocal();
  return s / measure_;
}

ExtendedReal ExponentDistribution::harmonic_mean() const {
  return ExtendedReal::from_reciprocal(reciprocal_mean());
}

ExtendedReal ExponentDistribution::ess_inf() const {
  if (atoms_.empty()) throw DegenerateSetError("essential infimum over a null set");
  return atoms_.front().exponent;
}

ExtendedReal ExponentDistribution::ess_sup() const {
  if (atoms_.empty()) throw DegenerateSetError("essential supremum over a null set");
  return atoms_.back().exponent;
}

ExponentDistribution GridQuadrature::base_distribution(const ExponentFunction& p, const MeasurableSet& set) const {
  if (p.dimension() != grid_.dimension()) throw PreconditionError("exponent and grid dimensions differ");
  std::vector<ExponentAtom> atoms;
  std::vector<double> x(grid_.dimension());
  for (const CellWeight& cw : cell_weights(set, grid_)) {
    grid_.midpoint(cw.index, x);
    atoms.push_back({p.base_eval(x), cw.weight * grid_.cell_volume()});
  }
  return ExponentDistribution(std::move(atoms));
}

namespace {

// Atoms of base + sign * bump(s) for s in [s0, s1], a subinterval of one shoulder.
void shoulder_atoms(const BumpSum& b, double s0, double s1, double multiplicity, std::vector<ExponentAtom>& out) {
  if (!(s1 > s0)) return;
  const double mid = 0.5 * (s0 + s1);
  const double half = 0.5 * (s1 - s0);
  const auto& xs = Gauss::abscissa();
  const auto& ws = Gauss::weights();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (double sgn : {-1.0, 1.0}) {
      const double s = mid + sgn * half * xs[i];
      out.push_back({ExtendedReal(b.base + b.sign * b.bump(s)), multiplicity * half * ws[i]});
    }
  }
}

// Atoms for the part of one bump, centered at c, lying in [a, b]. Returns the
// measure covered.
double partial_bump_atoms(const BumpSum& bs, double c, double a, double b, std::vector<ExponentAtom>& out) {
  const double S = bs.bump.support_halfwidth;
  const double P = bs.bump.plateau_halfwidth;
  const double lo = std::max(a - c, -S);
  const double hi = std::min(b - c, S);
  if (!(hi > lo)) return 0.0;
  shoulder_atoms(bs, std::max(lo, -S), std::min(hi, -P), 1.0, out);
  const double p0 = std::max(lo, -P);
  const double p1 = std::min(hi, P);
  if (p1 > p0) out.push_back({ExtendedReal(bs.plateau_value()), p1 - p0});
  shoulder_atoms(bs, std::max(lo, P), std::min(hi, S), 1.0, out);
  return hi - lo;
}

void bump_segment_atoms(const BumpSum& bs, double a, double b, std::vector<ExponentAtom>& out) {
  if (!bs.has_bumps()) {
    out.push_back({ExtendedReal(bs.base), b - a});
    return;
  }
  const double S = bs.bump.support_halfwidth;
  const double P = bs.bump.plateau_halfwidth;
  if (bs.centers.min_gap() < 2.0 * S) {
    throw PreconditionError("structured quadrature needs disjoint bump supports");
  }
  const CenterSequence& cs = bs.centers;
  const double k1 = cs.first_at_least(a - S);
  const double k2 = cs.last_at_most(b + S);
  const double kf1 = cs.first_at_least(a + S);
  const double kf2 = cs.last_at_most(b - S);
  const double full = kf2 >= kf1 ? kf2 - kf1 + 1.0 : 0.0;

  double covered = 0.0;
  if (full > 0.0) {
    out.push_back({ExtendedReal(bs.plateau_value()), full * 2.0 * P});
    shoulder_atoms(bs, -S, -P, full, out);
    shoulder_atoms(bs, P, S, full, out);
    covered += full * 2.0 * S;
    for (double k = k1; k < kf1 && k <= k2; k += 1.0) covered += partial_bump_atoms(bs, cs.at(k), a, b, out);
    for (double k = std::max(kf2 + 1.0, k1); k <= k2; k += 1.0) covered += partial_bump_atoms(bs, cs.at(k), a, b, out);
  } else {
    for (double k = k1; k <= k2; k += 1.0) covered += partial_bump_atoms(bs, cs.at(k), a, b, out);
  }
  out.push_back({ExtendedReal(bs.base), std::max(0.0, (b - a) - covered)});
}

}  // namespace

ExponentDistribution StructuredQuadrature::base_distribution(const ExponentFunction& p, double lo, double hi) const {
  if (p.dimension() != 1) throw PreconditionError("structured quadrature is one-dimensional");
  if (!(hi > lo)) throw DegenerateSetError("structured quadrature over an empty interval");
  const Box& dom = p.domain();
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  if (lo < dom.lower[0] - slack || hi > dom.upper[0] + slack) throw DomainError("interval leaves the exponent domain");
  lo = std::max(lo, dom.lower[0]);
  hi = std::min(hi, dom.upper[0]);

  struct Segment {
    double lo, hi;
  };
  std::vector<Segment> uncovered{{lo, hi}};
  std::vector<ExponentAtom> atoms;
  for (const Piece& piece : p.pieces()) {
    std::vector<Segment> rest;
    for (const Segment& s : uncovered) {
      const double a = std::max(s.lo, piece.box.lower[0]);
      const double b = std::min(s.hi, piece.box.upper[0]);
      if (!(b > a)) {
        rest.push_back(s);
        continue;
      }
      if (a > s.lo) rest.push_back({s.lo, a});
      if (b < s.hi) rest.push_back({b, s.hi});
      if (const auto* c = std::get_if<ExtendedReal>(&piece.value)) {
        atoms.push_back({*c, b - a});
      } else {
        bump_segment_atoms(std::get<BumpSum>(piece.value), a, b, atoms);
      }
    }
    uncovered = std::move(rest);
    if (uncovered.empty()) break;
  }
  for (const Segment& s : uncovered) {
    if (s.hi - s.lo > slack) throw DomainError("interval not covered by any exponent piece");
  }
  return ExponentDistribution(std::move(atoms));
}

ExponentDistribution StructuredQuadrature::base_distribution(const ExponentFunction& p, const MeasurableSet& set) const {
  const auto* cube = std::get_if<Cube>(&set);
  if (cube == nullptr || !cube->axis_aligned()) throw PreconditionError("structured quadrature needs an interval");
  cube->validate();
  return base_distribution(p, cube->lower(0), cube->upper(0));
}

}  // namespace vlp
