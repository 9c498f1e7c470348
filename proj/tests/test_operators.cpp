#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "vlp/error.hpp"
#include "vlp/operators.hpp"

using namespace vlp;

namespace {

GridDomain line(double half, std::size_t cells) { return GridDomain::over_box(Box::interval(-half, half), cells); }

GridFunction random_function(const GridDomain& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return GridFunction::sample(grid, [&](std::span<const double>) { return u(rng) < 0.3 ? 0.0 : u(rng); });
}

}  // namespace

TEST_CASE("radius ladders") {
  const GridDomain g = line(2.0, 16);
  const auto exact = radius_ladder(g, RadiusPolicy::Exact);
  REQUIRE(exact.size() == 16);
  CHECK(exact.front() == doctest::Approx(0.25));
  CHECK(exact.back() == doctest::Approx(4.0));
  const auto dyadic = radius_ladder(g, RadiusPolicy::Dyadic);
  CHECK(dyadic == std::vector<double>{0.25, 0.5, 1.0, 2.0, 4.0});
}

TEST_CASE("averaging operator") {
  const GridDomain g = line(2.0, 64);
  const GridFunction f = GridFunction::sample(g, [](std::span<const double> x) { return x[0] > 0.0 ? 2.0 : 0.0; });
  const GridFunction a = averaging_op(f, interval_cube(-1.0, 1.0), 0.5);
  // |Q|^{1/2} * avg = sqrt(2) * 1 on Q, zero off Q
  CHECK(a[32] == doctest::Approx(std::sqrt(2.0)));
  CHECK(a[0] == 0.0);
  CHECK(a[63] == 0.0);
}

TEST_CASE("centered maximal function of an indicator") {
  const GridDomain g = line(8.0, 256);
  const GridFunction chi = GridFunction::indicator(g, Box::interval(-0.5, 0.5));
  for (double alpha : {0.0, 0.5}) {
    const GridFunction m = fractional_maximal(chi, alpha, RadiusPolicy::Exact);
    const double h = g.spacing();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.coordinate(0, i);
      if (x <= 0.5 || x > 7.0) continue;
      const double closed = std::pow(2.0 * x + 1.0, alpha - 1.0);
      // radii are multiples of h, so x + 1/2 is missed by at most h
      const double slack = std::pow(2.0 * (x + 0.5 + h), alpha - 1.0);
      CHECK(m[i] <= closed * (1.0 + 1e-12));
      CHECK(m[i] >= slack * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("dyadic maximal function brackets the exact one") {
  std::mt19937_64 rng(3);
  const GridDomain g = line(4.0, 128);
  for (double alpha : {0.0, 0.3}) {
    const GridFunction f = random_function(g, rng);
    const GridFunction exact = fractional_maximal(f, alpha, RadiusPolicy::Exact);
    const GridFunction dyadic = fractional_maximal(f, alpha, RadiusPolicy::Dyadic);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(dyadic[i] <= exact[i] * (1.0 + 1e-12));
      CHECK(exact[i] <= std::pow(2.0, 1.0 - alpha) * dyadic[i] * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("containing maximal function of an indicator") {
  const GridDomain g = line(4.0, 128);
  const GridFunction chi = GridFunction::indicator(g, Box::interval(-0.5, 0.5));
  const double alpha = 0.25;
  const GridFunction m = containing_maximal(chi, alpha);
  const GridFunction centered = fractional_maximal(chi, alpha, RadiusPolicy::Exact);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = g.coordinate(0, i);
    CHECK(m[i] >= centered[i] * (1.0 - 1e-12));
    if (y > 0.5) CHECK(m[i] == doctest::Approx(std::pow(y + 0.5, alpha - 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("riesz constant closed forms") {
  CHECK(riesz_constant(2.0, 3) == doctest::Approx(1.0 / (4.0 * std::numbers::pi)));
  CHECK(riesz_constant(1.0, 2) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
  CHECK(riesz_constant(0.5, 1) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
  CHECK_THROWS_AS(riesz_constant(1.0, 1), PreconditionError);
}

TEST_CASE("riesz potential of an indicator on the line") {
  const GridDomain g = line(4.0, 128);
  const GridFunction chi = GridFunction::indicator(g, Box::interval(-0.5, 0.5));
  const double alpha = 0.5;
  const GridFunction I = riesz_potential(chi, alpha);
  const double gamma = riesz_constant(alpha, 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(0, i);
    if (x <= 0.5) continue;
    const double closed = gamma / alpha * (std::pow(x + 0.5, alpha) - std::pow(x - 0.5, alpha));
    CHECK(I[i] == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("riesz potential dominates the maximal function") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {1u, 2u}) {
    const double alpha = 0.5;
    const GridDomain g = n == 1 ? line(2.0, 64) : GridDomain::over_box(Box{{-2.0, -2.0}, {2.0, 2.0}}, 16);
    const GridFunction f = random_function(g, rng);
    const GridFunction m = fractional_maximal(f, alpha, RadiusPolicy::Exact);
    const GridFunction I = riesz_potential(f, alpha);
    const double c = riesz_domination_constant(alpha, n);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(m[i] <= c * I[i] * (1.0 + 1e-6));
  }
}

TEST_CASE("tu pairs") {
  const Cube Q{{0.0, 0.0}, 0.5, {}};
  const TUPair pair = make_tu_pair(Q, 4.0, {0.0, -1.0});
  CHECK(pair.P.center[0] == doctest::Approx(0.0));
  CHECK(pair.P.center[1] == doctest::Approx(-4.0 * 0.5 * std::sqrt(2.0)));
  CHECK(pair.P.radius == 0.5);
  CHECK_THROWS_AS(make_tu_pair(Q, 4.0, {1.0, 1.0}), PreconditionError);
}

TEST_CASE("maximal pair lower bound on random functions") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ut(4.0, 10.0);
  const GridDomain g = line(16.0, 256);
  for (int trial = 0; trial < 10; ++trial) {
    const GridFunction f = random_function(g, rng);
    const double t = ut(rng);
    const TUPair pair = make_tu_pair(interval_cube(-1.0, 0.0), t, {trial % 2 == 0 ? 1.0 : -1.0});
    const PairReport r = maximal_pair_lower_bound(f, pair, 0.25 * (trial % 4));
    CHECK(r.holds);
    CHECK(r.lhs_min_over_P >= r.rhs);
  }
  CHECK_THROWS_AS(maximal_pair_lower_bound(GridFunction::zero(g), make_tu_pair(interval_cube(0.0, 1.0), 3.0, {1.0}), 0.0),
                  PreconditionError);
}

TEST_CASE("czo threshold and riesz pair bound") {
  const FractionalKernel k = FractionalKernel::riesz(1, 0.5);
  const double t0 = czo_threshold(k);
  CHECK(t0 == doctest::Approx(2.0 * 0.5 * std::pow(2.0, 1.5) * (1.0 + std::pow(2.0, 1.5))));
  const GridDomain g = line(32.0, 512);
  const GridFunction f = GridFunction::indicator(g, Box::interval(-1.0, 1.0));
  const TUPair far = make_tu_pair(interval_cube(-1.0, 1.0), std::ceil(t0), {1.0});
  CHECK(kernel_sign_coherent(k, far));
  const CzoPairReport r = czo_pair_lower_bound(k, f, far);
  CHECK(r.applicable);
  CHECK(r.holds);
  const CzoPairReport near = czo_pair_lower_bound(k, f, make_tu_pair(interval_cube(-1.0, 1.0), 4.0, {1.0}));
  CHECK_FALSE(near.applicable);
  CHECK_FALSE(near.holds);
  FractionalKernel flat = k;
  flat.a = 0.0;
  CHECK(std::isinf(czo_threshold(flat)));
}

TEST_CASE("signed line kernel changes sign across the diagonal") {
  const FractionalKernel k = FractionalKernel::signed_line(0.5);
  const std::vector<double> x{0.0}, y{1.0};
  CHECK(k.k(x, y) == doctest::Approx(-1.0));
  CHECK(k.k(y, x) == doctest::Approx(1.0));
}
