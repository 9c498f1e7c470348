#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "vlp/error.hpp"
#include "vlp/k0.hpp"
#include "vlp/vnorm.hpp"

using namespace vlp;

namespace {

ExponentFunction steps() {
  const Box d = Box::interval(0.0, 4.0);
  return ExponentFunction(d, {Piece{Box::interval(0.0, 1.0), ExtendedReal(1.2)},
                              Piece{Box::interval(1.0, 2.5), ExtendedReal(1.8)}, Piece{d, ExtendedReal(1.5)}});
}

}  // namespace

TEST_CASE("lattice family layout") {
  const SetFamily fam = cube_lattice_family(Box{{0.0, 0.0}, {1.0, 1.0}}, 3, 0.1, 0.4, 4);
  REQUIRE(fam.size() == 36);
  const Cube& first = std::get<Cube>(fam.front());
  const Cube& last = std::get<Cube>(fam.back());
  CHECK(first.radius == doctest::Approx(0.1));
  CHECK(last.radius == doctest::Approx(0.4));
  CHECK(last.center == std::vector<double>{1.0, 1.0});
  CHECK_THROWS_AS(cube_lattice_family(Box::interval(0.0, 1.0), 0, 0.1, 0.2, 2), PreconditionError);
}

TEST_CASE("constant exponents have K0 and K0 alpha equal to one") {
  const Box d = Box::interval(0.0, 8.0);
  const ExponentFunction p = ExponentFunction::constant(d, ExtendedReal(1.6));
  const StructuredQuadrature sq;
  const std::vector<std::pair<double, double>> iv{{0.0, 0.01}, {1.0, 3.0}, {0.5, 7.5}};
  const SetFamily fam = interval_family(iv);
  const K0Report k0 = k0_constant(p, fam, sq);
  const K0Report k0a = k0alpha_constant(p, 0.3, fam, sq);
  for (double v : k0.samples) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  for (double v : k0a.samples) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("K0 on a step exponent is at least one") {
  const ExponentFunction p = steps();
  const SetFamily fam = cube_lattice_family(Box::interval(0.5, 3.5), 7, 0.05, 0.5, 6);
  const K0Report r = k0_constant(p, fam, StructuredQuadrature{});
  REQUIRE(r.samples.size() == fam.size());
  for (double v : r.samples) CHECK(v >= 1.0 - 1e-12);
  CHECK(r.best_value == doctest::Approx(r.samples[r.argmax]));
}

TEST_CASE("k0 alpha at alpha zero is k0") {
  const ExponentFunction p = steps();
  const SetFamily fam = cube_lattice_family(Box::interval(0.5, 3.5), 5, 0.1, 0.5, 4);
  const StructuredQuadrature sq;
  const K0Report a = k0alpha_constant(p, 0.0, fam, sq);
  const K0Report b = k0_constant(p, fam, sq);
  for (std::size_t i = 0; i < fam.size(); ++i) CHECK(a.samples[i] == doctest::Approx(b.samples[i]).epsilon(1e-12));
}

TEST_CASE("dual witness attains the duality for an indicator") {
  const ExponentFunction p = steps();
  const GridQuadrature gq(GridDomain::over_box(Box::interval(0.0, 4.0), 64));
  const Cube E = interval_cube(0.5, 3.0);
  const GridFunction g = dual_witness(p, E, gq);
  const double lambda = indicator_norm(conjugate(p), E, gq);
  // int chi_E g = ||chi_E||_{p'} while ||g||_p = 1
  CHECK(g.integral() == doctest::Approx(lambda).epsilon(1e-9));
  CHECK(luxemburg_norm(g, p) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("averaging operators are uniformly bounded on a step exponent") {
  const ExponentFunction p = steps();
  const GridQuadrature gq(GridDomain::over_box(Box::interval(0.0, 4.0), 128));
  const SetFamily fam = cube_lattice_family(Box::interval(0.5, 3.5), 5, 0.1, 0.5, 4);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<GridFunction> witnesses;
  for (int i = 0; i < 4; ++i) {
    witnesses.push_back(GridFunction::sample(gq.grid(), [&](std::span<const double>) { return u(rng); }));
  }
  const AveragingReport r = averaging_uniform_bound(p, 0.2, fam, witnesses, gq);
  CHECK(r.upper_holds);
  CHECK(r.sup_ratio <= r.holder * r.k0alpha * (1.0 + 1e-9));
}

TEST_CASE("norm harmonic mean sandwich") {
  const ExponentFunction p = steps();
  const SetFamily fam = cube_lattice_family(Box::interval(0.5, 3.5), 9, 0.02, 0.5, 8);
  const SandwichReport r = norm_harmonic_sandwich(p, fam, StructuredQuadrature{});
  CHECK(r.holds);
  REQUIRE(r.entries.size() == fam.size());
  for (const SandwichEntry& e : r.entries) {
    CHECK(e.lower <= e.norm);
    CHECK(e.norm <= e.upper);
  }
}

TEST_CASE("k0 alpha and k0 of p' and q bound each other") {
  const ExponentFunction p = steps();
  const SetFamily fam = cube_lattice_family(Box::interval(0.5, 3.5), 7, 0.02, 0.5, 6);
  const IffReport r = k0alpha_iff_k0_check(p, 0.25, fam, StructuredQuadrature{});
  CHECK(r.holds());
}

TEST_CASE("harmonic mean on a cube and its minimizer") {
  // p = 1 on [-1, 0), 2 on [0, 1]
  const Box d = Box::interval(-1.0, 1.0);
  const auto p = std::make_shared<const ExponentFunction>(
      ExponentFunction(d, {Piece{Box::interval(-1.0, 0.0), ExtendedReal(1.0)}, Piece{d, ExtendedReal(2.0)}}));
  const GridDomain grid = GridDomain::over_box(d, 64);
  const Cube D{{0.0}, 1.0, {}};
  const CellMask all{std::vector<bool>(grid.size(), true)};
  CHECK(harmonic_mean_on(*p, D, all, grid) == doctest::Approx(4.0 / 3.0));
  const HarmonicCubeReport r = minimal_harmonic_mean_cube(*p, D, 0.25, all, grid);
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.cube.center[0] + r.cube.radius <= 1e-12);
  CHECK(r.integer_scaling_holds);
  CHECK(r.scaled_checked > 0);
}
