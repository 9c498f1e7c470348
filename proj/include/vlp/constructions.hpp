#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "vlp/distribution.hpp"
#include "vlp/exponent.hpp"
#include "vlp/grid.hpp"
#include "vlp/k0.hpp"
#include "vlp/sets.hpp"

namespace vlp {

/// Named pass/fail assertion with the measured quantity behind it.
struct Check {
  std::string name;
  bool holds;
  double value;
};

bool all_hold(const std::vector<Check>& checks);

// ---------------------------------------------------------------------------
// f = chi_{Q(0,1/2)}, for which M_alpha f ~ (2|x|)^{alpha-n} is not in L^{n/(n-alpha)}.

struct L1FailureReport {
  double alpha = 0.0;
  std::size_t n = 1;
  double h = 0.25;
  std::vector<double> radii;     // R ladder
  std::vector<double> partials;  // int_{sqrt(n) <= |x| <= R} (M_alpha f)^{n/(n-alpha)}
  double fitted_slope = 0.0;     // least squares slope of partials against log R
  double analytic_slope = 1.0;   // n: the shell integral grows like n log R
};

/// Centered EXACT maximal operator at cell midpoints of a grid of spacing h over
/// [-R_max-1, R_max+1]^n. `points` radii are log spaced on (sqrt(n), R_max].
L1FailureReport build_l1_failure(double alpha, std::size_t n, double r_max, std::size_t points = 24, double h = 0.25);

/// log((2R+1)/3): both sides of 1 <= |x| <= R of (2|x|+1)^{-1}, n = 1.
double l1_failure_closed_form(double r);

// ---------------------------------------------------------------------------
// Blow-up family for p_- = 1.

struct BlowupOptions {
  double t = 5.0;
  int k_max = 6;
  double cells_per_r = 4.0;  // grid resolution on D_k, in cells per r_k
  double radius = 0.0;       // R_k; 0 selects 1/(4 sqrt(n))
};

double blowup_beta(std::size_t n, double k, double alpha);
/// -n k (1 - 1/beta_k) n beta_k / (n - alpha beta_k); equals -1.
double blowup_beta_identity(std::size_t n, double k, double alpha);

struct BlowupLevel {
  int k = 0;
  double beta = 1.0;
  Cube D;
  double R = 0.0;
  double r = 0.0;
  std::vector<std::vector<double>> basis;  // u_1..u_n, signed axis vectors
  std::vector<Cube> Q;                     // Q_j^k, j = 1..k
  std::vector<Cube> P;                     // P_j^k
  GridDomain grid;
  CellMask E;  // cells with p(midpoint) < beta_k
  GridFunction f;
  double density = 0.0;  // |D ∩ E| / |D|
  std::vector<Check> checks;
};

struct BlowupFamily {
  std::size_t n = 1;
  double alpha = 0.0;
  double t = 5.0;
  std::shared_ptr<const ExponentFunction> p;
  std::vector<BlowupLevel> levels;
};

/// p = 1 on |x_0| <= 1, rising smoothly to 2 for |x_0| >= 2, on [-4, 4]^n.
std::shared_ptr<const ExponentFunction> blowup_exponent(std::size_t n);

/// Levels k = 1..k_max. D_k is the first cube on a coarse center lattice meeting
/// the density bound |D ∩ E_k| / |D| > 1 - 2^{-nk} (t sqrt(n) + 2)^{-n}.
BlowupFamily build_blowup(std::shared_ptr<const ExponentFunction> p, double alpha, const BlowupOptions& options = {});

struct GrowthPoint {
  int k;
  double modular;      // sum_j int_{P_j ∩ E} (|Q_B|^{alpha/n-1} int_{Q_B} f_k / C)^{q}
  double theory_bound;  // k (2^{-alpha-n-5} ((t+2) sqrt(n))^{alpha-n} k_p / (C K_p^3 K0))^{(n+1)/(n-alpha)}
};

/// Lower estimate of rho_q(M_alpha f_k / C) from the covering cube Q_B of each
/// (Q_j, P_j) pair. K0 is the family maximum over the Q_j ∩ E and P_j ∩ E.
std::vector<GrowthPoint> blowup_modular_growth(const BlowupFamily& family, double C);

// ---------------------------------------------------------------------------
// Exponent constructions on the line.

enum class ExampleName { L1Failure, Ex61, Ex62, Ex63, Ex64, HmCounter };

std::string to_string(ExampleName name);
ExampleName example_from_string(const std::string& name);

struct WitnessInterval {
  double j;
  double lo;
  double hi;
};

struct NamedConstant {
  std::string name;
  double value;
};

struct ExampleSpec {
  ExampleName name = ExampleName::Ex62;
  double alpha = 0.0;
  double p_minus = 0.0;
  double p_plus = 0.0;
  std::shared_ptr<const ExponentFunction> p;
  /// Exponent whose indicator norms the witnesses blow up (p' or q).
  std::shared_ptr<const ExponentFunction> witness_exponent;
  std::string witness_label;
  std::vector<WitnessInterval> witnesses;  // Q_j
  std::vector<NamedConstant> constants;

  double constant(const std::string& key) const;
};

struct Ex61Params {
  double base;     // (1+alpha) / (2 alpha (2-alpha))
  double height;   // (5 - 8 alpha + 5 alpha^2) / (6 alpha (1-alpha) (2-alpha))
  double plateau;  // (2-alpha) / (3 alpha (1-alpha))
  double decay;    // 3 alpha (1-alpha) / (1+alpha)
};

Ex61Params ex61_params(double alpha);

/// p = base + sum_{k <= K+2} phi(x - e^k) on [-2e^{K+1}, 2e^{K+1}].
ExampleSpec build_ex61(double alpha, int K = 50);
/// p = 6/5 + sum phi(x - k^2), supp phi = [0, 1]; Q_j = [1, j^30 + 1].
ExampleSpec build_ex62(int j_max = 10);
/// p = p_+ - sum phi(x - k^{beta_p}); Q_j = [1, j^{beta_p gamma} + 1].
ExampleSpec build_ex63(double alpha, double p_minus, double p_plus, int j_max = 10);
/// p = p_- + sum phi(x - k^{beta_q'}); Q_j = [1, j^{beta_q' gamma'} + 1].
ExampleSpec build_ex64(double alpha, double p_minus, double p_plus, int j_max = 10);

struct WitnessPoint {
  double j;
  double measure;
  double norm;   // ||chi_{Q_j}||
  double scale;  // |Q_j|^{1/r_{Q_j}} for the witness exponent r
  double ratio;  // norm / scale
  bool holds;    // ratio >= j
};

struct WitnessReport {
  std::vector<WitnessPoint> points;
  double first_holding_j = 0.0;  // smallest J with holds for every j >= J; 0 if none
};

WitnessReport witness_growth(const ExampleSpec& spec);

/// Local window around one bump of EX61, in coordinates s = x - e^k.
struct Ex61Window {
  std::shared_ptr<const ExponentFunction> p;  // on [-3/2, 3/2]
  GridDomain grid;                            // h = 1/64
  Box A, B, C_left, C_right;
};

Ex61Window ex61_window(double alpha);

struct Ex61Divergence {
  std::vector<double> rho_p;        // partial sums over k <= K of rho_p(f) on B_k
  std::vector<double> rho_q;        // partial sums of int_{C_k} (M_alpha f)^q
  std::vector<double> rho_p_oracle; // 1/2 sum k^{-(2-alpha)/(1+alpha)}
  std::vector<double> harmonic;     // H_K
  double lower_constant;            // (3^{alpha-1}/2)^{q}, q = (1+alpha)/(3 alpha (1-alpha))
};

/// rho_p(f) and rho_q(M_alpha f) on the windows A_k ∪ C_k, with M_alpha the
/// containing-interval operator on each window.
Ex61Divergence ex61_divergence_check(const ExampleSpec& spec, int K);

struct Ex61ScanOptions {
  double lengths_per_decade = 4.0;  // |Q| ladder density on [1e-3, e^K]
  std::size_t shifts = 17;          // interval centers e^m + s, s evenly spaced on [-1, 1]
  int local_anchors = 12;           // m used for every length
};

/// Intervals of length in [1e-3, e^K] anchored at the bump centers. Anchors
/// beyond local_anchors are paired with a length L only when L >= 1e-6 e^m, so
/// that both endpoints stay resolvable in double precision.
SetFamily ex61_scan_family(int K, const Ex61ScanOptions& options = {});

struct Ex61Coexistence {
  double k0alpha_coarse;
  double k0alpha_refined;
  double relative_change;
  Ex61Divergence divergence;
  double rho_q_target;  // 0.5 (3^{alpha-1}/2)^{q} H_K
};

Ex61Coexistence ex61_coexistence(const ExampleSpec& spec, int K, const Ex61ScanOptions& options = {});

// ---------------------------------------------------------------------------
// Integer scalings only: a counterexample for the minimal harmonic mean cube.

struct HmCounterReport {
  double r;
  double p_Q;        // harmonic mean over Q(0, 1)
  double p_min;      // min over radius-r cubes in Q(0, 1)
  double p_max;      // max over the same cubes
  double expected_p_Q;    // 2 / (4r - 4r^2 + 1)
  double expected_p_min;  // 2r^2 / (4r - 2r^2 - 1)
};

/// p = 2 on Q(0, 2r-1), 1 elsewhere in Q(0, 1) in the plane; grid of N x N cells
/// with r a multiple of the spacing.
HmCounterReport hm_counter(double r = 0.75, std::size_t cells = 64);

}  // namespace vlp
