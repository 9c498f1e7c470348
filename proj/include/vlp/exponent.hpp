#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "vlp/extended_real.hpp"

namespace vlp {

/// Axis-aligned closed box [lower, upper] in R^n.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box interval(double lo, double hi) { return Box{{lo}, {hi}}; }

  std::size_t dimension() const { return lower.size(); }
  bool contains(std::span<const double> x) const;
  double volume() const;
  double extent(std::size_t axis) const { return upper[axis] - lower[axis]; }
};

/// Continuous plateau bump: equal to height on |s| <= plateau_halfwidth,
/// zero for |s| >= support_halfwidth, cubic smoothstep shoulders in between.
struct PlateauBump {
  double support_halfwidth = 0.5;
  double plateau_halfwidth = 0.25;
  double height = 0.0;

  double operator()(double s) const;
  void validate() const;
};

/// Centers c_k, k = 1..count, of a bump sum. Centers are strictly increasing.
struct CenterSequence {
  enum class Kind { Exp, Power, List };

  Kind kind = Kind::Power;
  double rate = 1.0;    // Exp: c_k = offset + e^{rate k};  Power: c_k = offset + k^rate
  double count = 0.0;   // integer valued; double so that counts up to 2^53 are exact
  double offset = 0.0;
  std::vector<double> values;  // List only

  double at(double k) const;
  /// Smallest k in [1, count] with c_k >= x, or count + 1 if none.
  double first_at_least(double x) const;
  /// Largest k in [1, count] with c_k <= x, or 0 if none.
  double last_at_most(double x) const;
  /// Minimum of c_{k+1} - c_k over the sequence, +inf when count < 2.
  double min_gap() const;
  void validate() const;
};

/// p(x) = base + sign * sum_k bump(x_0 - c_k). Bumps vary along the first axis.
struct BumpSum {
  double base = 1.0;
  double sign = 1.0;  // +1 raises the exponent on each bump, -1 lowers it
  PlateauBump bump;
  CenterSequence centers;

  double value(double x0) const;
  double plateau_value() const { return base + sign * bump.height; }
  bool has_bumps() const { return centers.count >= 1.0 && bump.height > 0.0; }
  void validate() const;
};

using ValueSpec = std::variant<ExtendedReal, BumpSum>;

struct Piece {
  Box box;
  ValueSpec value;
};

/// Pointwise map on reciprocals, 1/p -> offset + sign / p. Conjugation and the
/// Sobolev dual are both of this form, so transforms compose exactly.
struct ReciprocalMap {
  double offset = 0.0;
  int sign = 1;

  bool is_identity() const { return offset == 0.0 && sign == 1; }
  double apply(double reciprocal) const { return offset + sign * reciprocal; }
  /// (this o inner)(r) = this(inner(r)).
  ReciprocalMap after(const ReciprocalMap& inner) const {
    return ReciprocalMap{offset + sign * inner.offset, sign * inner.sign};
  }
};

/// Which of Omega_1 = {p = 1}, Omega_inf = {p = inf} and Omega_* = {1 < p < inf}
/// carry positive measure.
struct Strata {
  bool one = false;
  bool infinite = false;
  bool interior = false;

  int count() const { return int(one) + int(infinite) + int(interior); }
};

/// Exponent function p(.) on a box domain, built from an ordered list of pieces
/// (first match wins) followed by a reciprocal transform. Immutable.
class ExponentFunction {
 public:
  ExponentFunction(Box domain, std::vector<Piece> pieces, ReciprocalMap transform = {});

  static ExponentFunction constant(Box domain, ExtendedReal value);

  std::size_t dimension() const { return domain_.dimension(); }
  const Box& domain() const { return domain_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const ReciprocalMap& transform() const { return transform_; }

  ExtendedReal eval(std::span<const double> x) const;
  ExtendedReal eval(double x) const;

  /// Value of the piece spec before the reciprocal transform.
  ExtendedReal base_eval(std::span<const double> x) const;
  ExtendedReal apply_transform(ExtendedReal base) const;

  ExtendedReal p_minus() const { return p_minus_; }
  ExtendedReal p_plus() const { return p_plus_; }

  /// Strata read off the piece specs (a shadowed piece still counts).
  Strata strata() const;

  /// True when every piece is constant.
  bool piecewise_constant() const;

 private:
  const Piece* find_piece(std::span<const double> x) const;
  void compute_bounds();

  Box domain_;
  std::vector<Piece> pieces_;
  ReciprocalMap transform_;
  ExtendedReal p_minus_;
  ExtendedReal p_plus_;
};

ExtendedReal eval(const ExponentFunction& p, std::span<const double> x);

/// p'(x) with 1/p + 1/p' = 1.
ExponentFunction conjugate(const ExponentFunction& p);

/// q(x) with 1/p(x) - 1/q(x) = alpha/n. Requires p_+ <= n/alpha.
ExponentFunction sobolev_dual(const ExponentFunction& p, double alpha);

struct Lh0Options {
  double min_distance = 1e-9;
  double max_distance = 0.49;
  int distance_levels = 40;
  int breakpoint_limit = 256;  // bump breakpoints examined per piece
};

/// Lower estimate of the best LH_0 constant, the maximum of
/// |p(x) - p(y)| * (-log|x - y|) over sampled pairs with |x - y| < 1/2.
/// Pairs lie on axis-parallel lines through the domain center and straddle
/// every piece boundary. Requires p_+ < inf.
double lh0_modulus(const ExponentFunction& p, int sample_pairs, const Lh0Options& options = {});

}  // namespace vlp
