#include "vlp/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vlp/error.hpp"

namespace vlp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_integer_valued(double x) { return x >= 0.0 && std::floor(x) == x; }

}  // namespace

bool Box::contains(std::span<const double> x) const {
  if (x.size() != lower.size()) return false;
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a] < lower[a] || x[a] > upper[a]) return false;
  }
  return true;
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t a = 0; a < lower.size(); ++a) v *= upper[a] - lower[a];
  return v;
}

double PlateauBump::operator()(double s) const {
  const double a = std::abs(s);
  if (a <= plateau_halfwidth) return height;
  if (a >= support_halfwidth) return 0.0;
  const double u = (support_halfwidth - a) / (support_halfwidth - plateau_halfwidth);
  return height * u * u * (3.0 - 2.0 * u);
}

void PlateauBump::validate() const {
  if (!(support_halfwidth > 0.0)) throw PreconditionError("bump support_halfwidth must be > 0");
  if (!(plateau_halfwidth > 0.0 && plateau_halfwidth < support_halfwidth)) {
    throw PreconditionError("bump plateau_halfwidth must lie in (0, support_halfwidth)");
  }
  if (!(height >= 0.0) || !std::isfinite(height)) throw PreconditionError("bump height must be finite and >= 0");
}

double CenterSequence::at(double k) const {
  switch (kind) {
    case Kind::Exp:
      return offset + std::exp(rate * k);
    case Kind::Power:
      return offset + std::pow(k, rate);
    case Kind::List:
      return values.at(static_cast<std::size_t>(k) - 1);
  }
  return 0.0;
}

double CenterSequence::first_at_least(double x) const {
  if (count < 1.0) return 1.0;
  if (kind == Kind::List) {
    auto it = std::lower_bound(values.begin(), values.end(), x);
    return static_cast<double>(it - values.begin()) + 1.0;
  }
  double k = 1.0;
  const double shifted = x - offset;
  if (shifted > 0.0) {
    const double guess = kind == Kind::Exp ? std::log(shifted) / rate : std::pow(shifted, 1.0 / rate);
    k = std::clamp(std::ceil(guess), 1.0, count + 1.0);
  }
  // the inverse is only approximate in floating point; settle on the exact index
  while (k > 1.0 && at(k - 1.0) >= x) k -= 1.0;
  while (k <= count && at(k) < x) k += 1.0;
  return k;
}

double CenterSequence::last_at_most(double x) const {
  const double k = first_at_least(x);
  if (k <= count && at(k) == x) return k;
  return k - 1.0;
}

double CenterSequence::min_gap() const {
  if (count < 2.0) return kInf;
  switch (kind) {
    case Kind::Exp:
      return at(2.0) - at(1.0);
    case Kind::Power:
      return rate >= 1.0 ? at(2.0) - at(1.0) : at(count) - at(count - 1.0);
    case Kind::List: {
      double g = kInf;
      for (std::size_t i = 1; i < values.size(); ++i) g = std::min(g, values[i] - values[i - 1]);
      return g;
    }
  }
  return kInf;
}

void CenterSequence::validate() const {
  if (!is_integer_valued(count) || count > 9007199254740992.0) {
    throw PreconditionError("center count must be a non-negative integer below 2^53");
  }
  if (kind == Kind::List) {
    if (static_cast<double>(values.size()) != count) throw PreconditionError("center list length must equal count");
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (!(values[i] > values[i - 1])) throw PreconditionError("center list must be strictly increasing");
    }
  } else if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw PreconditionError("center rate must be finite and > 0");
  }
}

double BumpSum::value(double x0) const {
  if (!has_bumps()) return base;
  const double s = bump.support_halfwidth;
  const double first = centers.first_at_least(x0 - s);
  double total = 0.0;
  for (double k = first; k <= centers.count; k += 1.0) {
    const double c = centers.at(k);
    if (c > x0 + s) break;
    total += bump(x0 - c);
  }
  return base + sign * total;
}

void BumpSum::validate() const {
  bump.validate();
  centers.validate();
  if (!(base >= 1.0) || !std::isfinite(base)) throw PreconditionError("bump base must be finite and >= 1");
  if (sign != 1.0 && sign != -1.0) throw PreconditionError("bump sign must be +1 or -1");
  if (has_bumps()) {
    const double lowest = sign > 0 ? base : plateau_value();
    // overlapping bumps would stack beyond the plateau value
    if (centers.min_gap() < 2.0 * bump.support_halfwidth && sign < 0) {
      throw PreconditionError("lowering bumps must not overlap");
    }
    if (lowest < 1.0) throw PreconditionError("bump sum drops below 1");
  }
}

ExponentFunction::ExponentFunction(Box domain, std::vector<Piece> pieces, ReciprocalMap transform)
    : domain_(std::move(domain)), pieces_(std::move(pieces)), transform_(transform) {
  const std::size_t n = domain_.dimension();
  if (n == 0) throw PreconditionError("exponent domain must have dimension >= 1");
  if (domain_.upper.size() != n) throw PreconditionError("domain lower/upper dimension mismatch");
  for (std::size_t a = 0; a < n; ++a) {
    if (!(domain_.upper[a] > domain_.lower[a])) throw PreconditionError("domain box must have positive extent");
  }
  if (pieces_.empty()) throw PreconditionError("exponent needs at least one piece");
  for (const Piece& piece : pieces_) {
    if (piece.box.dimension() != n || piece.box.upper.size() != n) {
      throw PreconditionError("piece box dimension differs from domain");
    }
    if (const auto* c = std::get_if<ExtendedReal>(&piece.value)) {
      if (c->is_finite() && !(c->finite() >= 1.0)) throw PreconditionError("constant exponent must lie in [1, inf]");
    } else {
      std::get<BumpSum>(piece.value).validate();
    }
  }
  if (transform_.sign != 1 && transform_.sign != -1) throw PreconditionError("transform sign must be +-1");
  compute_bounds();
}

ExponentFunction ExponentFunction::constant(Box domain, ExtendedReal value) {
  Box box = domain;
  return ExponentFunction(std::move(domain), {Piece{std::move(box), value}});
}

void ExponentFunction::compute_bounds() {
  ExtendedReal lo = ExtendedReal::infinity();
  ExtendedReal hi(1.0);
  bool first = true;
  for (const Piece& piece : pieces_) {
    ExtendedReal a, b;
    if (const auto* c = std::get_if<ExtendedReal>(&piece.value)) {
      a = b = *c;
    } else {
      const auto& bumps = std::get<BumpSum>(piece.value);
      const double x = bumps.base;
      const double y = bumps.has_bumps() ? bumps.plateau_value() : x;
      a = ExtendedReal(std::min(x, y));
      b = ExtendedReal(std::max(x, y));
    }
    if (first || a < lo) lo = a;
    if (first || b > hi) hi = b;
    first = false;
  }
  if (transform_.is_identity()) {
    p_minus_ = lo;
    p_plus_ = hi;
    return;
  }
  const double r_from_hi = transform_.apply(hi.reciprocal());
  const double r_from_lo = transform_.apply(lo.reciprocal());
  const double r_max = std::max(r_from_hi, r_from_lo);
  const double r_min = std::min(r_from_hi, r_from_lo);
  if (r_min < -ExtendedReal::kZeroReciprocal) throw PreconditionError("transformed exponent is negative");
  p_minus_ = ExtendedReal::from_reciprocal(r_max);
  p_plus_ = ExtendedReal::from_reciprocal(r_min);
}

const Piece* ExponentFunction::find_piece(std::span<const double> x) const {
  for (const Piece& piece : pieces_) {
    if (piece.box.contains(x)) return &piece;
  }
  return nullptr;
}

ExtendedReal ExponentFunction::base_eval(std::span<const double> x) const {
  if (x.size() != dimension()) throw DomainError("point dimension differs from exponent dimension");
  if (!domain_.contains(x)) throw DomainError("point outside exponent domain");
  const Piece* piece = find_piece(x);
  if (piece == nullptr) throw DomainError("point not covered by any exponent piece");
  if (const auto* c = std::get_if<ExtendedReal>(&piece->value)) return *c;
  return ExtendedReal(std::get<BumpSum>(piece->value).value(x[0]));
}

ExtendedReal ExponentFunction::apply_transform(ExtendedReal base) const {
  if (transform_.is_identity()) return base;
  return ExtendedReal::from_reciprocal(transform_.apply(base.reciprocal()));
}

ExtendedReal ExponentFunction::eval(std::span<const double> x) const { return apply_transform(base_eval(x)); }

ExtendedReal ExponentFunction::eval(double x) const { return eval(std::span<const double>(&x, 1)); }

Strata ExponentFunction::strata() const {
  Strata s;
  auto classify = [&](ExtendedReal base) {
    const ExtendedReal v = apply_transform(base);
    if (v.is_infinite()) {
      s.infinite = true;
    } else if (std::abs(v.finite() - 1.0) <= 1e-12) {
      s.one = true;
    } else {
      s.interior = true;
    }
  };
  for (const Piece& piece : pieces_) {
    if (const auto* c = std::get_if<ExtendedReal>(&piece.value)) {
      classify(*c);
      continue;
    }
    const auto& bumps = std::get<BumpSum>(piece.value);
    classify(ExtendedReal(bumps.base));
    if (bumps.has_bumps()) {
      classify(ExtendedReal(bumps.plateau_value()));
      // shoulders sweep an open interval of values, which always meets (1, inf)
      s.interior = true;
    }
  }
  return s;
}

bool ExponentFunction::piecewise_constant() const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const Piece& piece) { return std::holds_alternative<ExtendedReal>(piece.value); });
}

ExtendedReal eval(const ExponentFunction& p, std::span<const double> x) { return p.eval(x); }

ExponentFunction conjugate(const ExponentFunction& p) {
  return ExponentFunction(p.domain(), p.pieces(), ReciprocalMap{1.0, -1}.after(p.transform()));
}

ExponentFunction sobolev_dual(const ExponentFunction& p, double alpha) {
  const double n = static_cast<double>(p.dimension());
  if (!(alpha >= 0.0 && alpha < n)) throw PreconditionError("sobolev_dual requires 0 <= alpha < n");
  if (alpha == 0.0) return p;
  const double critical = n / alpha;
  if (p.p_plus().is_infinite() || p.p_plus().finite() > critical * (1.0 + 1e-12)) {
    throw PreconditionError("sobolev_dual requires p_+ <= n/alpha (p_+ = " + std::to_string(p.p_plus().to_double()) +
                            ", n/alpha = " + std::to_string(critical) + ")");
  }
  return ExponentFunction(p.domain(), p.pieces(), ReciprocalMap{-alpha / n, 1}.after(p.transform()));
}

double lh0_modulus(const ExponentFunction& p, int sample_pairs, const Lh0Options& options) {
  if (p.p_plus().is_infinite()) throw PreconditionError("lh0_modulus requires p_+ < inf");
  if (sample_pairs < 1) throw PreconditionError("lh0_modulus needs at least one sample pair");
  const Box& dom = p.domain();
  const std::size_t n = p.dimension();

  std::vector<double> distances;
  const int levels = std::max(options.distance_levels, 2);
  for (int j = 0; j < levels; ++j) {
    const double s = static_cast<double>(j) / (levels - 1);
    distances.push_back(options.max_distance * std::pow(options.min_distance / options.max_distance, s));
  }

  std::vector<double> center(n);
  for (std::size_t a = 0; a < n; ++a) center[a] = 0.5 * (dom.lower[a] + dom.upper[a]);

  double best = 0.0;
  for (std::size_t axis = 0; axis < n; ++axis) {
    std::vector<double> x = center;
    std::vector<double> y = center;
    auto probe = [&](double s, double t) {
      if (s > t) std::swap(s, t);
      if (s < dom.lower[axis] || t > dom.upper[axis]) return;
      const double d = t - s;
      if (!(d > 0.0) || d >= 0.5) return;
      x[axis] = s;
      y[axis] = t;
      const ExtendedReal px = p.eval(x);
      const ExtendedReal py = p.eval(y);
      if (px.is_infinite() || py.is_infinite()) return;
      best = std::max(best, std::abs(px.finite() - py.finite()) * -std::log(d));
    };

    const double length = dom.extent(axis);
    for (int i = 0; i < sample_pairs; ++i) {
      const double s = dom.lower[axis] + (i + 0.5) * length / sample_pairs;
      for (double d : distances) probe(s, s + d);
    }

    std::vector<double> breakpoints;
    for (const Piece& piece : p.pieces()) {
      breakpoints.push_back(piece.box.lower[axis]);
      breakpoints.push_back(piece.box.upper[axis]);
      const auto* bumps = std::get_if<BumpSum>(&piece.value);
      if (bumps == nullptr || axis != 0 || !bumps->has_bumps()) continue;
      const double last = std::min(bumps->centers.count, static_cast<double>(options.breakpoint_limit));
      for (double k = 1.0; k <= last; k += 1.0) {
        const double c = bumps->centers.at(k);
        for (double w : {bumps->bump.support_halfwidth, bumps->bump.plateau_halfwidth}) {
          breakpoints.push_back(c - w);
          breakpoints.push_back(c + w);
        }
      }
    }
    for (double b : breakpoints) {
      for (double d : distances) {
        probe(b - 0.5 * d, b + 0.5 * d);
        probe(b, b + d);
        probe(b - d, b);
      }
    }
  }
  return best;
}

}  // namespace vlp
