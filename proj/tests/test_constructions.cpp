#include <doctest.h>

#include <cmath>
#include <vector>

#include "vlp/constructions.hpp"
#include "vlp/error.hpp"

using namespace vlp;

TEST_CASE("example names round trip") {
  for (ExampleName e : {ExampleName::L1Failure, ExampleName::Ex61, ExampleName::Ex62, ExampleName::Ex63, ExampleName::Ex64,
                        ExampleName::HmCounter}) {
    CHECK(example_from_string(to_string(e)) == e);
  }
  CHECK_THROWS_AS(example_from_string("EX65"), ParseError);
}

TEST_CASE("beta solves the blow-up identity") {
  for (std::size_t n : {1u, 2u, 3u}) {
    for (double alpha : {0.0, 0.5, 0.9 * static_cast<double>(n)}) {
      for (double k : {1.0, 7.0, 1000.0}) {
        const double dn = static_cast<double>(n);
        const double b = blowup_beta(n, k, alpha);
        CHECK(b > 1.0);
        // n^2 k (b - 1) = n - alpha b
        CHECK(dn * dn * k * (b - 1.0) == doctest::Approx(dn - alpha * b).epsilon(1e-12));
        CHECK(blowup_beta_identity(n, k, alpha) == doctest::Approx(-1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("harmonic mean counterexample") {
  const HmCounterReport r = hm_counter(0.75, 64);
  CHECK(r.p_Q == doctest::Approx(8.0 / 7.0).epsilon(1e-9));
  CHECK(r.p_min == doctest::Approx(9.0 / 7.0).epsilon(1e-9));
  CHECK(r.p_max == doctest::Approx(9.0 / 7.0).epsilon(1e-9));
  CHECK(r.expected_p_Q == doctest::Approx(8.0 / 7.0));
  CHECK(r.expected_p_min == doctest::Approx(9.0 / 7.0));
  CHECK(r.p_Q < r.p_min);
}

TEST_CASE("l1 failure partials grow like log R") {
  CHECK(l1_failure_closed_form(1.0) == doctest::Approx(0.0));
  CHECK(l1_failure_closed_form(100.0) == doctest::Approx(std::log(67.0)));
  const L1FailureReport r = build_l1_failure(0.0, 1, 100.0, 12, 0.25);
  CHECK(r.analytic_slope == 1.0);
  CHECK(std::abs(r.fitted_slope - 1.0) <= 0.2);
  REQUIRE(r.partials.size() == r.radii.size());
  for (std::size_t i = 1; i < r.partials.size(); ++i) CHECK(r.partials[i] >= r.partials[i - 1]);
}

TEST_CASE("ex61 parameters") {
  const double alpha = 0.25;
  const Ex61Params prm = ex61_params(alpha);
  CHECK(prm.base == doctest::Approx(1.25 / (2.0 * 0.25 * 1.75)));
  CHECK(prm.base + prm.height == doctest::Approx(prm.plateau));
  const ExampleSpec s = build_ex61(alpha, 10);
  // base and plateau map to the sobolev dual exponents
  CHECK(1.0 / prm.base - 1.0 / s.constant("q_base") == doctest::Approx(alpha));
  CHECK(1.0 / prm.base + 1.0 / s.constant("p_conj_base") == doctest::Approx(1.0));
  CHECK(s.p->p_minus().finite() == doctest::Approx(prm.base));
  CHECK(s.p->p_plus().finite() == doctest::Approx(prm.plateau));
  CHECK_THROWS_AS(s.constant("missing"), PreconditionError);
}

TEST_CASE("ex61 divergence partials") {
  const ExampleSpec s = build_ex61(0.25, 10);
  const Ex61Divergence d = ex61_divergence_check(s, 10);
  REQUIRE(d.rho_p.size() == 10);
  for (std::size_t k = 0; k < d.rho_p.size(); ++k) {
    CHECK(d.rho_p[k] == doctest::Approx(d.rho_p_oracle[k]).epsilon(1e-6));
    CHECK(d.rho_q[k] >= 0.5 * d.lower_constant * d.harmonic[k]);
  }
  double h = 0.0;
  for (int k = 1; k <= 10; ++k) h += 1.0 / k;
  CHECK(d.harmonic.back() == doctest::Approx(h));
}

TEST_CASE("ex62 witnesses grow past j") {
  const ExampleSpec s = build_ex62(6);
  CHECK(s.p->p_minus().finite() == doctest::Approx(1.2));
  CHECK(s.p->p_plus().finite() == doctest::Approx(2.0));
  const WitnessReport r = witness_growth(s);
  REQUIRE(r.points.size() == 5);
  for (const WitnessPoint& w : r.points) {
    CHECK(w.holds);
    CHECK(w.ratio >= w.j);
  }
  CHECK(r.first_holding_j == 2.0);
}

TEST_CASE("ex63 and ex64 derived exponents") {
  const double alpha = 0.5, pm = 1.2, pp = 1.8;
  const ExampleSpec s3 = build_ex63(alpha, pm, pp, 6);
  CHECK(s3.constant("q_minus") == doctest::Approx(1.0 / (1.0 / pm - alpha)));
  CHECK(s3.constant("q_plus") == doctest::Approx(1.0 / (1.0 / pp - alpha)));
  CHECK(s3.constant("beta_p") == doctest::Approx(pp / pm));
  for (const WitnessPoint& w : witness_growth(s3).points) CHECK(w.holds);

  const ExampleSpec s4 = build_ex64(alpha, pm, pp, 6);
  CHECK(s4.constant("p_conj_minus") == doctest::Approx(pp / (pp - 1.0)));
  for (const WitnessPoint& w : witness_growth(s4).points) CHECK(w.holds);
  CHECK_THROWS(build_ex63(alpha, 1.8, 1.2, 6));
}

TEST_CASE("blow-up family levels") {
  const auto p = blowup_exponent(1);
  CHECK(p->p_minus().finite() == doctest::Approx(1.0));
  CHECK(p->p_plus().finite() == doctest::Approx(2.0));
  BlowupOptions opt;
  opt.k_max = 3;
  const BlowupFamily fam = build_blowup(p, 0.0, opt);
  REQUIRE(fam.levels.size() == 3);
  for (const BlowupLevel& L : fam.levels) {
    for (const Check& c : L.checks) {
      INFO(c.name << " at k = " << L.k);
      CHECK(c.holds);
    }
    CHECK(L.Q.size() == static_cast<std::size_t>(L.k));
  }
  const std::vector<GrowthPoint> g = blowup_modular_growth(fam, 10.0);
  REQUIRE(g.size() == 3);
  for (const GrowthPoint& pt : g) {
    CHECK(pt.modular > 0.0);
    CHECK(pt.modular >= pt.theory_bound);
  }
  // each pair contributes about 2 / ((t + 2) C) once the level lies in p = 1
  CHECK(g.back().modular / 3.0 == doctest::Approx(2.0 / (7.0 * 10.0)).epsilon(0.1));
}
