#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "vlp/distribution.hpp"
#include "vlp/error.hpp"
#include "vlp/vnorm.hpp"

using namespace vlp;

namespace {

// p = 1 on [0, 1), 2 on [1, 2), inf on [2, 3]
ExponentFunction three_strata() {
  return ExponentFunction(Box::interval(0.0, 3.0), {Piece{Box::interval(0.0, 1.0), ExtendedReal(1.0)},
                                                    Piece{Box::interval(1.0, 2.0), ExtendedReal(2.0)},
                                                    Piece{Box::interval(2.0, 3.0), ExtendedReal::infinity()}});
}

}  // namespace

TEST_CASE("modular of terms") {
  const std::vector<ModularTerm> terms{{2.0, ExtendedReal(1.0), 0.5}, {2.0, ExtendedReal(3.0), 0.25},
                                       {3.0, ExtendedReal::infinity(), 1.0}};
  CHECK(modular_of_terms(terms, 2.0) == doctest::Approx(0.5 + 0.25 + 1.5));
  CHECK(std::isinf(modular_of_terms(std::vector<ModularTerm>{{1e300, ExtendedReal(50.0), 1.0}}, 1e-10)));
}

TEST_CASE("luxemburg norm of mixed exponents solves the modular equation") {
  // 0.5/lambda + 0.5/lambda^2 = 1 has root lambda = 1
  const std::vector<ModularTerm> a{{1.0, ExtendedReal(1.0), 0.5}, {1.0, ExtendedReal(2.0), 0.5}};
  CHECK(luxemburg_of_terms(a) == doctest::Approx(1.0).epsilon(1e-12));
  // 0.5/lambda + 1/lambda = 1
  const std::vector<ModularTerm> b{{1.0, ExtendedReal(1.0), 0.5}, {1.0, ExtendedReal::infinity(), 0.5}};
  CHECK(luxemburg_of_terms(b) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(luxemburg_of_terms(std::vector<ModularTerm>{}) == 0.0);
}

TEST_CASE("constant exponent norms are L^p norms") {
  const GridDomain grid = GridDomain::over_box(Box::interval(0.0, 4.0), 512);
  const GridFunction f = GridFunction::sample(grid, [](std::span<const double> x) { return 1.0 + x[0]; });
  for (double p0 : {1.0, 1.5, 2.0, 5.0}) {
    const ExponentFunction p = ExponentFunction::constant(Box::interval(0.0, 4.0), ExtendedReal(p0));
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sum += std::pow(f[i], p0) * grid.cell_volume();
    CHECK(luxemburg_norm(f, p) == doctest::Approx(std::pow(sum, 1.0 / p0)).epsilon(1e-10));
  }
  const ExponentFunction inf = ExponentFunction::constant(Box::interval(0.0, 4.0), ExtendedReal::infinity());
  CHECK(luxemburg_norm(f, inf) == doctest::Approx(f.max()).epsilon(1e-10));
}

TEST_CASE("norm is homogeneous and the modular is at most one at the norm") {
  const ExponentFunction p = three_strata();
  const GridDomain grid = GridDomain::over_box(Box::interval(0.0, 3.0), 300);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  const GridFunction f = GridFunction::sample(grid, [&](std::span<const double>) { return u(rng); });
  const double n = luxemburg_norm(f, p);
  CHECK(luxemburg_norm(f.scaled(3.5), p) == doctest::Approx(3.5 * n).epsilon(1e-10));
  CHECK(modular(f, p, n) <= 1.0 + 1e-9);
  CHECK(modular(f, p, n * (1.0 - 1e-6)) > 1.0);
}

TEST_CASE("regional modular restricts to the region") {
  const ExponentFunction p = three_strata();
  const GridDomain grid = GridDomain::over_box(Box::interval(0.0, 3.0), 300);
  const GridFunction one = GridFunction::sample(grid, [](std::span<const double>) { return 2.0; });
  CHECK(modular(one, p, MeasurableSet{interval_cube(0.0, 1.0)}) == doctest::Approx(2.0));
  CHECK(modular(one, p, MeasurableSet{interval_cube(1.0, 1.5)}) == doctest::Approx(2.0));
  CHECK(luxemburg_norm(one, p, MeasurableSet{interval_cube(2.0, 3.0)}) == doctest::Approx(2.0));
}

TEST_CASE("holder and duality constants") {
  const Box d = Box::interval(0.0, 3.0);
  CHECK(holder_constant(ExponentFunction::constant(d, ExtendedReal(2.0))) == doctest::Approx(1.0));
  CHECK(holder_constant(ExponentFunction::constant(d, ExtendedReal(1.0))) == doctest::Approx(1.0));
  CHECK(holder_constant(three_strata()) == doctest::Approx(4.0));
  CHECK(duality_constant(three_strata()) == doctest::Approx(1.0 / 3.0));
  const ExponentFunction two(d, {Piece{Box::interval(0.0, 1.0), ExtendedReal(1.5)}, Piece{d, ExtendedReal(3.0)}});
  CHECK(holder_constant(two) == doctest::Approx(1.0 / 1.5 - 1.0 / 3.0 + 1.0));
  CHECK(duality_constant(two) == doctest::Approx(1.0));
}

TEST_CASE("holder pairing check on random pairs") {
  const ExponentFunction p = three_strata();
  const GridDomain grid = GridDomain::over_box(Box::interval(0.0, 3.0), 96);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const GridFunction f = GridFunction::sample(grid, [&](std::span<const double>) { return u(rng); });
    const GridFunction g = GridFunction::sample(grid, [&](std::span<const double>) { return u(rng); });
    const HolderReport r = holder_pairing_check(f, g, p);
    CHECK(r.holds);
    CHECK(r.lhs <= r.rhs);
    CHECK(r.constant == doctest::Approx(4.0));
  }
}

TEST_CASE("harmonic mean of two halves") {
  const ExponentFunction p(Box::interval(0.0, 2.0), {Piece{Box::interval(0.0, 1.0), ExtendedReal(1.0)},
                                                     Piece{Box::interval(0.0, 2.0), ExtendedReal(2.0)}});
  const GridQuadrature quad(GridDomain::over_box(Box::interval(0.0, 2.0), 64));
  CHECK(harmonic_mean(p, interval_cube(0.0, 2.0), quad).finite() == doctest::Approx(4.0 / 3.0));
  const ExponentFunction inf = ExponentFunction::constant(Box::interval(0.0, 2.0), ExtendedReal::infinity());
  CHECK(harmonic_mean(inf, interval_cube(0.0, 1.0), quad).is_infinite());
}

TEST_CASE("indicator norm of a constant exponent is a power of the measure") {
  const ExponentFunction p = ExponentFunction::constant(Box::interval(0.0, 10.0), ExtendedReal(2.5));
  const StructuredQuadrature sq;
  for (double len : {0.01, 0.5, 3.0, 9.0}) {
    CHECK(indicator_norm(p, interval_cube(0.5, 0.5 + len), sq) == doctest::Approx(std::pow(len, 0.4)).epsilon(1e-10));
  }
}

TEST_CASE("structured and grid quadrature agree on bump exponents") {
  BumpSum b;
  b.base = 1.3;
  b.bump = PlateauBump{0.5, 0.2, 1.1};
  b.centers.kind = CenterSequence::Kind::Power;
  b.centers.rate = 1.0;
  b.centers.count = 6.0;
  b.centers.offset = 0.5;
  const Box d = Box::interval(0.0, 8.0);
  const ExponentFunction p(d, {Piece{d, b}});
  const StructuredQuadrature sq;
  const GridQuadrature gq(GridDomain::over_box(d, 1 << 15));
  for (auto [lo, hi] : {std::pair{0.1, 7.9}, std::pair{1.3, 1.9}, std::pair{2.05, 4.4}}) {
    const Cube c = interval_cube(lo, hi);
    CHECK(indicator_norm(p, c, sq) == doctest::Approx(indicator_norm(p, c, gq)).epsilon(1e-5));
    CHECK(harmonic_mean(p, c, sq).finite() == doctest::Approx(harmonic_mean(p, c, gq).finite()).epsilon(1e-5));
  }
}

TEST_CASE("distributions merge equal atoms and map through transforms") {
  const ExponentDistribution d({{ExtendedReal(2.0), 0.5}, {ExtendedReal(1.0), 0.25}, {ExtendedReal(2.0), 0.25}});
  REQUIRE(d.atoms().size() == 2);
  CHECK(d.measure() == doctest::Approx(1.0));
  CHECK(d.ess_inf().finite() == 1.0);
  CHECK(d.ess_sup().finite() == 2.0);
  CHECK(d.reciprocal_mean() == doctest::Approx(0.25 + 0.75 / 2.0));
  const ExponentFunction p = ExponentFunction::constant(Box::interval(0.0, 1.0), ExtendedReal(2.0));
  const ExponentDistribution dc = d.mapped(conjugate(p));
  CHECK(dc.ess_sup().is_infinite());
}
