#include <doctest.h>

#include <cmath>
#include <vector>

#include "vlp/error.hpp"
#include "vlp/exponent.hpp"

using namespace vlp;

namespace {

ExponentFunction two_piece() {
  return ExponentFunction(Box::interval(0.0, 2.0),
                          {Piece{Box::interval(0.0, 1.0), ExtendedReal(1.5)}, Piece{Box::interval(0.0, 2.0), ExtendedReal(3.0)}});
}

BumpSum unit_bumps(double base, double sign, double height) {
  BumpSum b;
  b.base = base;
  b.sign = sign;
  b.bump = PlateauBump{0.5, 0.25, height};
  b.centers.kind = CenterSequence::Kind::Power;
  b.centers.rate = 2.0;
  b.centers.count = 10.0;
  return b;
}

}  // namespace

TEST_CASE("extended reals order infinity last and invert exactly") {
  const ExtendedReal two(2.0);
  const ExtendedReal inf = ExtendedReal::infinity();
  CHECK(two < inf);
  CHECK_FALSE(inf < inf);
  CHECK(inf == ExtendedReal::infinity());
  CHECK(inf.reciprocal() == 0.0);
  CHECK(ExtendedReal::from_reciprocal(0.0).is_infinite());
  CHECK(ExtendedReal::from_reciprocal(0.25).finite() == doctest::Approx(4.0));
}

TEST_CASE("first matching piece wins") {
  const ExponentFunction p = two_piece();
  CHECK(p.eval(0.5).finite() == 1.5);
  CHECK(p.eval(1.0).finite() == 1.5);
  CHECK(p.eval(1.5).finite() == 3.0);
  CHECK(p.p_minus().finite() == 1.5);
  CHECK(p.p_plus().finite() == 3.0);
  CHECK(p.piecewise_constant());
}

TEST_CASE("evaluation outside the domain throws") {
  const ExponentFunction p = two_piece();
  CHECK_THROWS_AS(p.eval(2.5), DomainError);
  const std::vector<double> x2{0.5, 0.5};
  CHECK_THROWS_AS(p.eval(x2), DomainError);
}

TEST_CASE("invalid exponents are rejected") {
  CHECK_THROWS_AS(ExponentFunction::constant(Box::interval(0.0, 1.0), ExtendedReal(0.5)), PreconditionError);
  CHECK_THROWS_AS(ExponentFunction(Box::interval(0.0, 1.0), {}), PreconditionError);
  CHECK_THROWS_AS(ExponentFunction(Box::interval(1.0, 1.0), {Piece{Box::interval(0.0, 1.0), ExtendedReal(2.0)}}),
                  PreconditionError);
  CHECK_THROWS_AS(ExponentFunction(Box::interval(0.0, 200.0), {Piece{Box::interval(0.0, 200.0), unit_bumps(1.2, -1.0, 0.5)}}),
                  PreconditionError);
}

TEST_CASE("conjugate of 1, 2 and inf") {
  const ExponentFunction p(Box::interval(0.0, 3.0), {Piece{Box::interval(0.0, 1.0), ExtendedReal(1.0)},
                                                     Piece{Box::interval(1.0, 2.0), ExtendedReal(2.0)},
                                                     Piece{Box::interval(2.0, 3.0), ExtendedReal::infinity()}});
  const ExponentFunction pc = conjugate(p);
  CHECK(pc.eval(0.5).is_infinite());
  CHECK(pc.eval(1.5).finite() == doctest::Approx(2.0));
  CHECK(pc.eval(2.5).finite() == doctest::Approx(1.0));
  const ExponentFunction back = conjugate(pc);
  CHECK(back.eval(0.5).finite() == doctest::Approx(1.0));
  CHECK(back.eval(2.5).is_infinite());
  CHECK(back.transform().is_identity());
}

TEST_CASE("sobolev dual satisfies 1/p - 1/q = alpha/n") {
  const ExponentFunction p = two_piece();
  const double alpha = 0.25;
  const ExponentFunction q = sobolev_dual(p, alpha);
  for (double x : {0.25, 0.75, 1.25, 1.75}) {
    CHECK(1.0 / p.eval(x).finite() - 1.0 / q.eval(x).finite() == doctest::Approx(alpha).epsilon(1e-14));
  }
  CHECK_THROWS_AS(sobolev_dual(p, 0.5), PreconditionError);
  CHECK(sobolev_dual(p, 1.0 / 3.0).eval(1.5).is_infinite());
}

TEST_CASE("plateau bump shape") {
  const PlateauBump b{0.5, 0.25, 2.0};
  CHECK(b(0.0) == 2.0);
  CHECK(b(0.25) == 2.0);
  CHECK(b(-0.25) == 2.0);
  CHECK(b(0.375) == doctest::Approx(1.0));
  CHECK(b(0.5) == 0.0);
  CHECK(b(0.7) == 0.0);
  double prev = b(0.25);
  for (int i = 1; i <= 100; ++i) {
    const double v = b(0.25 + 0.0025 * i);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("center sequences match brute force lookups") {
  CenterSequence c;
  c.kind = CenterSequence::Kind::Power;
  c.rate = 1.5;
  c.count = 40.0;
  c.offset = 0.5;
  for (double x = -1.0; x < 300.0; x += 0.37) {
    double first = c.count + 1.0;
    double last = 0.0;
    for (double k = 1.0; k <= c.count; k += 1.0) {
      if (c.at(k) >= x && first > c.count) first = k;
      if (c.at(k) <= x) last = k;
    }
    CHECK(c.first_at_least(x) == first);
    CHECK(c.last_at_most(x) == last);
  }
  CHECK(c.min_gap() == doctest::Approx(std::pow(2.0, 1.5) - 1.0));

  CenterSequence e;
  e.kind = CenterSequence::Kind::Exp;
  e.rate = 1.0;
  e.count = 5.0;
  CHECK(e.at(3.0) == doctest::Approx(std::exp(3.0)));

  CenterSequence l;
  l.kind = CenterSequence::Kind::List;
  l.values = {1.0, 3.0, 2.0};
  l.count = 3.0;
  CHECK_THROWS_AS(l.validate(), PreconditionError);
}

TEST_CASE("bump sums raise or lower the base") {
  const BumpSum up = unit_bumps(1.2, 1.0, 0.8);
  CHECK(up.value(4.0) == doctest::Approx(2.0));
  CHECK(up.value(6.5) == doctest::Approx(1.2));
  CHECK(up.plateau_value() == doctest::Approx(2.0));
  const BumpSum down = unit_bumps(2.0, -1.0, 0.8);
  CHECK(down.value(9.1) == doctest::Approx(1.2));
  CHECK(down.value(12.0) == doctest::Approx(2.0));
  const ExponentFunction p(Box::interval(0.0, 120.0), {Piece{Box::interval(0.0, 120.0), down}});
  CHECK(p.p_minus().finite() == doctest::Approx(1.2));
  CHECK(p.p_plus().finite() == doctest::Approx(2.0));
  CHECK_FALSE(p.piecewise_constant());
}

TEST_CASE("strata read off the pieces") {
  const ExponentFunction p(Box::interval(0.0, 3.0), {Piece{Box::interval(0.0, 1.0), ExtendedReal(1.0)},
                                                     Piece{Box::interval(0.0, 3.0), ExtendedReal::infinity()}});
  const Strata s = p.strata();
  CHECK(s.one);
  CHECK(s.infinite);
  CHECK_FALSE(s.interior);
  CHECK(s.count() == 2);
}

TEST_CASE("lh0 modulus vanishes for a constant and sees a jump") {
  const ExponentFunction c = ExponentFunction::constant(Box::interval(0.0, 1.0), ExtendedReal(2.0));
  CHECK(lh0_modulus(c, 64) == 0.0);
  const ExponentFunction jump(Box::interval(0.0, 1.0), {Piece{Box::interval(0.0, 0.5), ExtendedReal(1.5)},
                                                        Piece{Box::interval(0.0, 1.0), ExtendedReal(2.5)}});
  // |p(x) - p(y)| = 1 across the jump, so the modulus grows like -log of the smallest distance
  CHECK(lh0_modulus(jump, 64) >= -std::log(1e-8));
}
