#include "vlp/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "vlp/error.hpp"
#include "vlp/operators.hpp"
#include "vlp/vnorm.hpp"

namespace vlp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxCount = 9007199254740992.0;  // 2^53

Box cube_box(std::size_t n, double half) {
  return Box{std::vector<double>(n, -half), std::vector<double>(n, half)};
}

double box_distance(const Cube& a, const Cube& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    const double gap = std::max({0.0, b.lower(i) - a.upper(i), a.lower(i) - b.upper(i)});
    s += gap * gap;
  }
  return std::sqrt(s);
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Line exponent base + sign * sum_k phi(x - c_k) with supp phi = [0, 1] and
// plateau [1/4, 3/4], c_k = k^rate, covering [0, hi].
std::shared_ptr<const ExponentFunction> unit_bump_exponent(double base, double sign, double height, double rate,
                                                           double hi) {
  const double count = std::floor(std::pow(hi, 1.0 / rate)) + 1.0;
  if (!(count < kMaxCount) || !std::isfinite(hi)) {
    throw ConstructionError("witness range needs more than 2^53 bumps; lower j_max");
  }
  BumpSum b;
  b.base = base;
  b.sign = sign;
  b.bump = PlateauBump{0.5, 0.25, height};
  b.centers.kind = CenterSequence::Kind::Power;
  b.centers.rate = rate;
  b.centers.count = count;
  b.centers.offset = 0.5;
  const Box domain = Box::interval(0.0, std::pow(count + 1.0, rate) + 2.0);
  return std::make_shared<const ExponentFunction>(domain, std::vector<Piece>{Piece{domain, b}});
}

std::vector<WitnessInterval> power_witnesses(double exponent, int j_from, int j_max) {
  std::vector<WitnessInterval> out;
  for (int j = j_from; j <= j_max; ++j) {
    const double dj = static_cast<double>(j);
    out.push_back({dj, 1.0, std::pow(dj, exponent) + 1.0});
  }
  return out;
}

void check_line_window(double alpha, double p_minus, double p_plus) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("need 0 < alpha < 1");
  if (!(1.0 < p_minus && p_minus < p_plus && p_plus < 1.0 / alpha)) {
    throw PreconditionError("need 1 < p_- < p_+ < 1/alpha");
  }
}

}  // namespace

bool all_hold(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.holds; });
}

// ---------------------------------------------------------------------------

double l1_failure_closed_form(double r) { return std::log((2.0 * r + 1.0) / 3.0); }

L1FailureReport build_l1_failure(double alpha, std::size_t n, double r_max, std::size_t points, double h) {
  const double dn = static_cast<double>(n);
  if (n < 1 || n > BoxIntegrator::kMaxDimension) throw PreconditionError("dimension must be 1, 2 or 3");
  if (!(alpha >= 0.0 && alpha < dn)) throw PreconditionError("alpha must lie in [0, n)");
  if (!(h > 0.0) || std::abs(0.5 / h - std::round(0.5 / h)) > 1e-9) throw PreconditionError("h must divide 1/2");
  if (points < 2) throw PreconditionError("need at least two radii");
  const double inner = std::sqrt(dn);
  if (!(r_max > inner)) throw PreconditionError("R_max must exceed sqrt(n)");

  L1FailureReport report;
  report.alpha = alpha;
  report.n = n;
  report.h = h;
  report.analytic_slope = dn;

  // f lives on Q(0, 1/2); the integrator extends it by zero
  const GridDomain inner_grid = GridDomain::with_spacing(cube_box(n, 0.5), h);
  const BoxIntegrator integrator(GridFunction::indicator(inner_grid, cube_box(n, 0.5)));

  const double half = std::ceil((r_max + 1.0) / h) * h;
  const GridDomain outer = GridDomain::with_spacing(cube_box(n, half), h);
  const std::vector<double> radii = radius_ladder(outer, RadiusPolicy::Exact);
  const double power = dn / (dn - alpha);

  struct Sample {
    double norm;
    double value;
  };
  std::vector<Sample> samples;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < outer.size(); ++i) {
    outer.midpoint(i, x);
    double s = 0.0;
    for (double v : x) s += v * v;
    s = std::sqrt(s);
    if (s < inner || s > r_max) continue;
    samples.push_back({s, std::pow(maximal_at(integrator, x, alpha, radii), power) * outer.cell_volume()});
  }
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.norm < b.norm; });

  std::vector<double> log_r;
  std::size_t next = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double s = static_cast<double>(i + 1) / static_cast<double>(points);
    const double R = inner * std::pow(r_max / inner, s);
    while (next < samples.size() && samples[next].norm <= R) total += samples[next++].value;
    report.radii.push_back(R);
    report.partials.push_back(total);
    log_r.push_back(std::log(R));
  }
  report.fitted_slope = least_squares_slope(log_r, report.partials);
  return report;
}

// ---------------------------------------------------------------------------

double blowup_beta(std::size_t n, double k, double alpha) {
  const double dn = static_cast<double>(n);
  return (dn * dn * k + dn) / (dn * dn * k + alpha);
}

double blowup_beta_identity(std::size_t n, double k, double alpha) {
  const double dn = static_cast<double>(n);
  const double b = blowup_beta(n, k, alpha);
  // beta - 1 in closed form; 1 - 1/beta loses digits as beta -> 1
  const double bm1 = (dn - alpha) / (dn * dn * k + alpha);
  return -dn * k * (bm1 / b) * (dn * b / (dn - alpha - alpha * bm1));
}

std::shared_ptr<const ExponentFunction> blowup_exponent(std::size_t n) {
  if (n < 1 || n > BoxIntegrator::kMaxDimension) throw PreconditionError("dimension must be 1, 2 or 3");
  BumpSum b;
  b.base = 2.0;
  b.sign = -1.0;
  b.bump = PlateauBump{2.0, 1.0, 1.0};
  b.centers.kind = CenterSequence::Kind::List;
  b.centers.count = 1.0;
  b.centers.values = {0.0};
  const Box domain = cube_box(n, 4.0);
  return std::make_shared<const ExponentFunction>(domain, std::vector<Piece>{Piece{domain, b}});
}

namespace {

CellMask sublevel_mask(const ExponentFunction& p, const GridDomain& grid, double threshold) {
  CellMask mask{std::vector<bool>(grid.size(), false)};
  std::vector<double> x(grid.dimension());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.midpoint(i, x);
    mask.mask[i] = p.eval(x) < ExtendedReal(threshold);
  }
  return mask;
}

GridFunction mask_function(const GridDomain& grid, const CellMask& mask) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = mask.mask[i] ? 1.0 : 0.0;
  return GridFunction(grid, std::move(v));
}

// Grid over the cube with about `cells` cells per axis, spacing dividing the side.
GridDomain cube_grid(const Cube& D, double cells) {
  const auto m = static_cast<std::size_t>(std::ceil(cells - 1e-9));
  return GridDomain(std::vector<double>(D.lower_corner()), D.side() / static_cast<double>(m),
                    std::vector<std::size_t>(D.dimension(), m));
}

double mask_density(const GridDomain& grid, const CellMask& mask) {
  std::size_t in = 0;
  for (bool b : mask.mask) in += b ? 1 : 0;
  return static_cast<double>(in) / static_cast<double>(grid.size());
}

}  // namespace

BlowupFamily build_blowup(std::shared_ptr<const ExponentFunction> p, double alpha, const BlowupOptions& options) {
  if (!p) throw PreconditionError("blow-up needs an exponent");
  const std::size_t n = p->dimension();
  const double dn = static_cast<double>(n);
  if (!(alpha >= 0.0 && alpha < dn)) throw PreconditionError("alpha must lie in [0, n)");
  if (!(options.t > 4.0)) throw PreconditionError("blow-up needs t > 4");
  if (options.k_max < 1) throw PreconditionError("k_max must be at least 1");
  if (!(options.cells_per_r >= 1.0)) throw PreconditionError("need at least one cell per r_k");
  const double sqn = std::sqrt(dn);
  const double R = options.radius > 0.0 ? options.radius : 0.25 / sqn;
  if (!(R < 0.5 / sqn)) throw PreconditionError("R_k must be below 1/(2 sqrt(n))");

  BlowupFamily family;
  family.n = n;
  family.alpha = alpha;
  family.t = options.t;
  family.p = p;
  const double t = options.t;
  const double chain = t * sqn + 2.0;
  const ExponentFunction q = sobolev_dual(*p, alpha);
  const Box& dom = p->domain();

  struct Found {
    Cube D;
    GridDomain grid;
    CellMask E;
    double density;
  };

  for (int k = 1; k <= options.k_max; ++k) {
    const double dk = static_cast<double>(k);
    const double beta = blowup_beta(n, dk, alpha);
    const double r = R / (std::pow(2.0, dk - 1.0) * chain);
    const double need = 1.0 - std::pow(2.0, -dn * dk) * std::pow(chain, -dn);

    // first lattice center whose cube is dense enough in E_k
    std::vector<std::size_t> steps(n);
    for (std::size_t a = 0; a < n; ++a) {
      steps[a] = static_cast<std::size_t>(std::floor((dom.extent(a) - 2.0 * R) / R + 1e-9));
    }
    std::optional<Found> found;
    std::vector<std::size_t> idx(n, 0);
    while (!found) {
      Cube D{std::vector<double>(n), R, {}};
      for (std::size_t a = 0; a < n; ++a) D.center[a] = dom.lower[a] + R + static_cast<double>(idx[a]) * R;
      if (p->eval(D.center) < ExtendedReal(beta)) {
        const GridDomain coarse = cube_grid(D, 64.0);
        if (mask_density(coarse, sublevel_mask(*p, coarse, beta)) > need) {
          GridDomain fine = cube_grid(D, 2.0 * R * options.cells_per_r / r);
          CellMask E = sublevel_mask(*p, fine, beta);
          const double density = mask_density(fine, E);
          if (density > need) found = Found{D, std::move(fine), std::move(E), density};
        }
      }
      std::size_t a = 0;
      while (a < n && ++idx[a] > steps[a]) idx[a++] = 0;
      if (a == n) break;
    }
    if (!found) {
      throw ConstructionError("no cube of radius R_k meets the density bound for k = " + std::to_string(k) +
                              "; the exponent needs a region where p < beta_k of positive measure");
    }
    BlowupLevel L{k, beta, found->D, R, r, {}, {}, {}, found->grid, found->E, GridFunction::zero(found->grid),
                  found->density, {}};

    const HarmonicCubeReport hm = minimal_harmonic_mean_cube(*p, L.D, L.r, L.E, L.grid);
    const Cube& Q1 = hm.cube;

    L.basis.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a) L.basis[a][a] = L.D.center[a] >= Q1.center[a] ? 1.0 : -1.0;
    std::vector<double> lc(n);
    for (std::size_t a = 0; a < n; ++a) lc[a] = Q1.center[a] - L.r * L.basis[a][a];
    for (int j = 1; j <= k; ++j) {
      const double rj = std::ldexp(L.r, j - 1);
      Cube Qj{std::vector<double>(n), rj, {}};
      for (std::size_t a = 0; a < n; ++a) Qj.center[a] = lc[a] + rj * L.basis[a][a];
      const TUPair pair = make_tu_pair(Qj, t, L.basis[0]);
      L.Q.push_back(Qj);
      L.P.push_back(pair.P);
    }

    std::vector<double> fv(L.grid.size(), 0.0);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < L.grid.size(); ++i) {
      L.grid.midpoint(i, x);
      if (L.E.mask[i] && Q1.contains(x)) fv[i] = 1.0;
    }
    const GridFunction chi(L.grid, std::move(fv));
    if (chi.is_zero()) throw ConstructionError("Q_1 ∩ E_k holds no grid cell");
    L.f = chi.scaled(1.0 / luxemburg_norm(chi, *p));

    // geometric and analytic invariants, measured on the built objects
    const double tol = 1e-12 * (1.0 + R);
    const BoxIntegrator e_int(mask_function(L.grid, L.E));
    auto inside_D = [&](const Cube& c) { return L.D.contains(c, tol); };
    const double id = blowup_beta_identity(n, dk, alpha);
    L.checks.push_back({"beta_identity", std::abs(id + 1.0) <= 1e-12, id});
    L.checks.push_back({"density_bound", L.density > need, L.density});
    L.checks.push_back({"Q_inside_D", std::all_of(L.Q.begin(), L.Q.end(), inside_D), 0.0});
    L.checks.push_back({"P_inside_D", std::all_of(L.P.begin(), L.P.end(), inside_D), 0.0});
    bool nested = true;
    for (int j = 1; j < k; ++j) nested = nested && L.Q[j].contains(L.Q[j - 1], tol);
    L.checks.push_back({"Q_nested", nested, 0.0});
    double pair_err = 0.0;
    for (int j = 0; j < k; ++j) {
      for (std::size_t a = 0; a < n; ++a) {
        const double want = L.Q[j].center[a] + t * L.Q[j].radius * sqn * L.basis[0][a];
        pair_err = std::max(pair_err, std::abs(L.P[j].center[a] - want));
      }
    }
    L.checks.push_back({"tu_pair", pair_err <= tol, pair_err});
    double worst_gap = kInf;
    for (int j1 = 1; j1 < k; ++j1) {
      for (int j2 = 0; j2 < j1; ++j2) {
        const double bound = 0.5 * (t - 4.0) * L.P[j1].radius;
        worst_gap = std::min(worst_gap, box_distance(L.P[j1], L.P[j2]) / bound);
      }
    }
    L.checks.push_back({"P_disjoint", worst_gap >= 1.0 - 1e-12, worst_gap});
    double worst_q = kInf, worst_p = kInf;
    for (int j = 0; j < k; ++j) {
      worst_q = std::min(worst_q, e_int.cube_integral(L.Q[j].center, L.Q[j].radius) / L.Q[j].volume());
      worst_p = std::min(worst_p, e_int.cube_integral(L.P[j].center, L.P[j].radius) / L.P[j].volume());
    }
    L.checks.push_back({"Q_half_in_E", worst_q > 0.5, worst_q});
    L.checks.push_back({"P_half_in_E", worst_p > 0.5, worst_p});
    const double norm = luxemburg_norm(L.f, *p);
    L.checks.push_back({"f_unit_norm", std::abs(norm - 1.0) <= 1e-6, norm});
    double q_plus = 0.0;
    for (std::size_t i = 0; i < L.grid.size(); ++i) {
      if (!L.E.mask[i]) continue;
      L.grid.midpoint(i, x);
      q_plus = std::max(q_plus, q.eval(x).to_double());
    }
    L.checks.push_back({"q_plus_bound", q_plus <= (dn + 1.0) / (dn - alpha) * (1.0 + 1e-12), q_plus});
    L.checks.push_back({"integer_scaling", hm.integer_scaling_holds, hm.worst_margin});
    family.levels.push_back(std::move(L));
  }
  return family;
}

std::vector<GrowthPoint> blowup_modular_growth(const BlowupFamily& family, double C) {
  if (!(C > 0.0)) throw PreconditionError("C must be positive");
  const ExponentFunction& p = *family.p;
  const ExponentFunction q = sobolev_dual(p, family.alpha);
  const std::size_t n = family.n;
  const double dn = static_cast<double>(n);
  const double sqn = std::sqrt(dn);
  const double alpha = family.alpha;
  const double t = family.t;
  const double Kp = holder_constant(p);
  const double kp = duality_constant(p);

  std::vector<GrowthPoint> out;
  std::vector<double> x(n);
  for (const BlowupLevel& L : family.levels) {
    const BoxIntegrator f_int(L.f);
    std::vector<double> terms;
    SetFamily sets;
    for (std::size_t j = 0; j < L.Q.size(); ++j) {
      const Cube& Qj = L.Q[j];
      const Cube& Pj = L.P[j];
      Cube QB{std::vector<double>(n), 0.5 * (t + 2.0) * Qj.radius * sqn, {}};
      for (std::size_t a = 0; a < n; ++a) QB.center[a] = 0.5 * (Qj.center[a] + Pj.center[a]);
      const double value = std::pow(QB.volume(), alpha / dn - 1.0) * f_int.cube_integral(QB.center, QB.radius) / C;
      for (const CellWeight& cw : cell_weights(MeasurableSet{Pj}, L.grid)) {
        if (!L.E.mask[cw.index]) continue;
        L.grid.midpoint(cw.index, x);
        const ExtendedReal e = q.eval(x);
        if (e.is_infinite()) continue;
        terms.push_back(cw.weight * L.grid.cell_volume() * std::pow(value, e.finite()));
      }
      sets.emplace_back(Sublevel{Qj, family.p, L.beta});
      sets.emplace_back(Sublevel{Pj, family.p, L.beta});
    }
    const double k0 = k0_constant(p, sets, GridQuadrature(L.grid)).best_value;
    const double base = std::pow(2.0, -alpha - dn - 5.0) * std::pow((t + 2.0) * sqn, alpha - dn) * kp /
                        (C * Kp * Kp * Kp * k0);
    out.push_back({L.k, pairwise_sum(terms), static_cast<double>(L.k) * std::pow(base, (dn + 1.0) / (dn - alpha))});
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(ExampleName name) {
  switch (name) {
    case ExampleName::L1Failure: return "L1_FAILURE";
    case ExampleName::Ex61: return "EX61";
    case ExampleName::Ex62: return "EX62";
    case ExampleName::Ex63: return "EX63";
    case ExampleName::Ex64: return "EX64";
    case ExampleName::HmCounter: return "HM_COUNTER";
  }
  return "?";
}

ExampleName example_from_string(const std::string& name) {
  for (ExampleName e : {ExampleName::L1Failure, ExampleName::Ex61, ExampleName::Ex62, ExampleName::Ex63,
                        ExampleName::Ex64, ExampleName::HmCounter}) {
    if (to_string(e) == name) return e;
  }
  throw ParseError("unknown example '" + name + "'");
}

double ExampleSpec::constant(const std::string& key) const {
  for (const NamedConstant& c : constants) {
    if (c.name == key) return c.value;
  }
  throw PreconditionError("example has no constant '" + key + "'");
}

Ex61Params ex61_params(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw PreconditionError("EX61 needs 0 < alpha < 1/2");
  const double a = alpha;
  return Ex61Params{(1.0 + a) / (2.0 * a * (2.0 - a)), (5.0 - 8.0 * a + 5.0 * a * a) / (6.0 * a * (1.0 - a) * (2.0 - a)),
                    (2.0 - a) / (3.0 * a * (1.0 - a)), 3.0 * a * (1.0 - a) / (1.0 + a)};
}

ExampleSpec build_ex61(double alpha, int K) {
  const Ex61Params prm = ex61_params(alpha);
  if (K < 1 || K > 600) throw PreconditionError("EX61 needs 1 <= K <= 600");
  BumpSum b;
  b.base = prm.base;
  b.sign = 1.0;
  b.bump = PlateauBump{0.5, 0.25, prm.height};
  b.centers.kind = CenterSequence::Kind::Exp;
  b.centers.rate = 1.0;
  b.centers.count = static_cast<double>(K + 2);
  const double edge = 2.0 * std::exp(static_cast<double>(K + 1));
  const Box domain = Box::interval(-edge, edge);

  ExampleSpec spec;
  spec.name = ExampleName::Ex61;
  spec.alpha = alpha;
  spec.p = std::make_shared<const ExponentFunction>(domain, std::vector<Piece>{Piece{domain, b}});
  spec.p_minus = prm.base;
  spec.p_plus = prm.plateau;
  spec.witness_exponent = std::make_shared<const ExponentFunction>(sobolev_dual(*spec.p, alpha));
  spec.witness_label = "q";
  spec.constants = {{"base", prm.base},
                    {"height", prm.height},
                    {"plateau", prm.plateau},
                    {"decay", prm.decay},
                    {"q_base", (1.0 + alpha) / (3.0 * alpha * (1.0 - alpha))},
                    {"p_conj_base", (1.0 + alpha) / (2.0 * alpha * alpha - 3.0 * alpha + 1.0)}};
  return spec;
}

ExampleSpec build_ex62(int j_max) {
  if (j_max < 2) throw PreconditionError("EX62 needs j_max >= 2");
  ExampleSpec spec;
  spec.name = ExampleName::Ex62;
  spec.p_minus = 1.2;
  spec.p_plus = 2.0;
  spec.witnesses = power_witnesses(30.0, 2, j_max);
  spec.p = unit_bump_exponent(1.2, 1.0, 0.8, 2.0, spec.witnesses.back().hi);
  spec.witness_exponent = std::make_shared<const ExponentFunction>(conjugate(*spec.p));
  spec.witness_label = "p'";
  spec.constants = {{"p_minus", 1.2}, {"p_plus", 2.0}, {"p_conj_minus", 2.0}, {"p_conj_plus", 6.0}};
  return spec;
}

ExampleSpec build_ex63(double alpha, double p_minus, double p_plus, int j_max) {
  check_line_window(alpha, p_minus, p_plus);
  if (j_max < 2) throw PreconditionError("EX63 needs j_max >= 2");
  const double q_minus = 1.0 / (1.0 / p_minus - alpha);
  const double q_plus = 1.0 / (1.0 / p_plus - alpha);
  const double beta_p = p_plus / p_minus;
  const double beta_q = q_plus / q_minus;
  const double delta = beta_q / beta_p;
  const double gamma = (1.0 + q_minus) / (1.0 - 2.0 / (delta + 1.0));

  ExampleSpec spec;
  spec.name = ExampleName::Ex63;
  spec.alpha = alpha;
  spec.p_minus = p_minus;
  spec.p_plus = p_plus;
  spec.witnesses = power_witnesses(beta_p * gamma, 2, j_max);
  spec.p = unit_bump_exponent(p_plus, -1.0, p_plus - p_minus, beta_p, spec.witnesses.back().hi);
  spec.witness_exponent = std::make_shared<const ExponentFunction>(sobolev_dual(*spec.p, alpha));
  spec.witness_label = "q";
  spec.constants = {{"q_minus", q_minus}, {"q_plus", q_plus}, {"beta_p", beta_p}, {"beta_q", beta_q},
                    {"delta", delta},     {"gamma", gamma},   {"witness_power", beta_p * gamma}};
  return spec;
}

ExampleSpec build_ex64(double alpha, double p_minus, double p_plus, int j_max) {
  check_line_window(alpha, p_minus, p_plus);
  if (j_max < 2) throw PreconditionError("EX64 needs j_max >= 2");
  const double beta_pc = p_minus * (p_plus - 1.0) / (p_plus * (p_minus - 1.0));
  const double beta_qc = p_minus * (p_plus - 1.0 + alpha * p_plus) / (p_plus * (p_minus - 1.0 + alpha * p_minus));
  const double delta = beta_pc / beta_qc;
  const double pc_minus = p_plus / (p_plus - 1.0);
  const double gamma = (1.0 + pc_minus) / (1.0 - 2.0 / (delta + 1.0));

  ExampleSpec spec;
  spec.name = ExampleName::Ex64;
  spec.alpha = alpha;
  spec.p_minus = p_minus;
  spec.p_plus = p_plus;
  spec.witnesses = power_witnesses(beta_qc * gamma, 2, j_max);
  spec.p = unit_bump_exponent(p_minus, 1.0, p_plus - p_minus, beta_qc, spec.witnesses.back().hi);
  spec.witness_exponent = std::make_shared<const ExponentFunction>(conjugate(*spec.p));
  spec.witness_label = "p'";
  spec.constants = {{"beta_p_conj", beta_pc}, {"beta_q_conj", beta_qc}, {"delta", delta},
                    {"p_conj_minus", pc_minus}, {"gamma", gamma},      {"witness_power", beta_qc * gamma}};
  return spec;
}

WitnessReport witness_growth(const ExampleSpec& spec) {
  if (!spec.p || !spec.witness_exponent) throw PreconditionError("example has no witness exponent");
  if (spec.witnesses.empty()) throw PreconditionError("example has no witness intervals");
  const StructuredQuadrature quad;
  WitnessReport report;
  for (const WitnessInterval& w : spec.witnesses) {
    const ExponentDistribution d = quad.base_distribution(*spec.p, w.lo, w.hi).mapped(*spec.witness_exponent);
    WitnessPoint pt;
    pt.j = w.j;
    pt.measure = d.measure();
    pt.norm = d.indicator_norm();
    pt.scale = std::exp(std::log(pt.measure) * d.reciprocal_mean());
    pt.ratio = pt.norm / pt.scale;
    pt.holds = pt.ratio >= w.j;
    report.points.push_back(pt);
  }
  for (auto it = report.points.rbegin(); it != report.points.rend() && it->holds; ++it) report.first_holding_j = it->j;
  return report;
}

Ex61Window ex61_window(double alpha) {
  const Ex61Params prm = ex61_params(alpha);
  BumpSum b;
  b.base = prm.base;
  b.sign = 1.0;
  b.bump = PlateauBump{0.5, 0.25, prm.height};
  b.centers.kind = CenterSequence::Kind::List;
  b.centers.count = 1.0;
  b.centers.values = {0.0};
  const Box domain = Box::interval(-1.5, 1.5);
  return Ex61Window{std::make_shared<const ExponentFunction>(domain, std::vector<Piece>{Piece{domain, b}}),
                    GridDomain::with_spacing(domain, 1.0 / 64.0),
                    Box::interval(-0.5, 0.5),
                    Box::interval(-0.25, 0.25),
                    Box::interval(-1.5, -0.5),
                    Box::interval(0.5, 1.5)};
}

Ex61Divergence ex61_divergence_check(const ExampleSpec& spec, int K) {
  if (spec.name != ExampleName::Ex61) throw PreconditionError("divergence check needs an EX61 spec");
  if (K < 1) throw PreconditionError("K must be at least 1");
  const double alpha = spec.alpha;
  const Ex61Params prm = ex61_params(alpha);
  const Ex61Window w = ex61_window(alpha);
  const ExponentFunction q = sobolev_dual(*w.p, alpha);
  const GridFunction chi_b = GridFunction::indicator(w.grid, w.B);
  // M_alpha is positively homogeneous, so one window serves every k
  const GridFunction m_chi = containing_maximal(chi_b, alpha);
  const MeasurableSet left = interval_cube(w.C_left.lower[0], w.C_left.upper[0]);
  const MeasurableSet right = interval_cube(w.C_right.lower[0], w.C_right.upper[0]);

  Ex61Divergence out;
  const double q_base = spec.constant("q_base");
  out.lower_constant = std::pow(std::pow(3.0, alpha - 1.0) / 2.0, q_base);
  double rp = 0.0, rq = 0.0, oracle = 0.0, h = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double dk = static_cast<double>(k);
    const double c = std::pow(dk, -prm.decay);
    rp += modular(chi_b.scaled(c), *w.p);
    const GridFunction mf = m_chi.scaled(c);
    rq += modular(mf, q, left) + modular(mf, q, right);
    oracle += 0.5 * std::pow(dk, -(2.0 - alpha) / (1.0 + alpha));
    h += 1.0 / dk;
    out.rho_p.push_back(rp);
    out.rho_q.push_back(rq);
    out.rho_p_oracle.push_back(oracle);
    out.harmonic.push_back(h);
  }
  return out;
}

SetFamily ex61_scan_family(int K, const Ex61ScanOptions& options) {
  if (K < 1) throw PreconditionError("K must be at least 1");
  if (!(options.lengths_per_decade > 0.0) || options.shifts < 1) {
    throw PreconditionError("scan needs a positive length density and at least one shift");
  }
  const double l_min = 1e-3;
  const double l_max = std::exp(static_cast<double>(K));
  const auto lengths = static_cast<std::size_t>(std::ceil(std::log10(l_max / l_min) * options.lengths_per_decade)) + 1;
  SetFamily family;
  for (std::size_t i = 0; i < lengths; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(lengths - 1);
    const double L = l_min * std::pow(l_max / l_min, s);
    for (int m = 1; m <= K; ++m) {
      const double anchor = std::exp(static_cast<double>(m));
      if (m > options.local_anchors && L < 1e-6 * anchor) continue;
      for (std::size_t a = 0; a < options.shifts; ++a) {
        const double shift =
            options.shifts == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(a) / static_cast<double>(options.shifts - 1);
        const double c = anchor + shift;
        family.emplace_back(interval_cube(c - 0.5 * L, c + 0.5 * L));
      }
    }
  }
  return family;
}

Ex61Coexistence ex61_coexistence(const ExampleSpec& spec, int K, const Ex61ScanOptions& options) {
  const StructuredQuadrature quad;
  Ex61ScanOptions refined = options;
  refined.lengths_per_decade = 2.0 * options.lengths_per_decade;
  refined.shifts = 2 * options.shifts - 1;
  Ex61Coexistence out;
  out.k0alpha_coarse = k0alpha_constant(*spec.p, spec.alpha, ex61_scan_family(K, options), quad).best_value;
  out.k0alpha_refined = k0alpha_constant(*spec.p, spec.alpha, ex61_scan_family(K, refined), quad).best_value;
  out.relative_change = std::abs(out.k0alpha_refined / out.k0alpha_coarse - 1.0);
  out.divergence = ex61_divergence_check(spec, K);
  out.rho_q_target = 0.5 * out.divergence.lower_constant * out.divergence.harmonic.back();
  return out;
}

// ---------------------------------------------------------------------------

HmCounterReport hm_counter(double r, std::size_t cells) {
  if (!(r > 0.5 && r < 1.0)) throw PreconditionError("need 1/2 < r < 1");
  if (cells < 2 || cells % 2 != 0) throw PreconditionError("cell count must be even");
  const double h = 2.0 / static_cast<double>(cells);
  if (std::abs(r / h - std::round(r / h)) > 1e-9) throw PreconditionError("r must be a multiple of the grid spacing");
  const double inner = 2.0 * r - 1.0;
  const Box outer = cube_box(2, 1.0);
  const auto p = std::make_shared<const ExponentFunction>(
      outer, std::vector<Piece>{Piece{cube_box(2, inner), ExtendedReal(2.0)}, Piece{outer, ExtendedReal(1.0)}});
  const GridDomain grid = GridDomain::over_box(outer, cells);
  const Cube Q{{0.0, 0.0}, 1.0, {}};

  HmCounterReport out;
  out.r = r;
  out.p_Q = harmonic_mean(*p, Q, GridQuadrature(grid)).finite();
  out.p_min = minimal_harmonic_mean_cube(*p, Q, r, Q, grid).value;
  const BoxIntegrator inv(GridFunction::sample(grid, [&](std::span<const double> x) { return p->eval(x).reciprocal(); }));
  out.p_max = 0.0;
  const auto steps = static_cast<std::size_t>(std::round(2.0 * (1.0 - r) / h));
  for (std::size_t i = 0; i <= steps; ++i) {
    for (std::size_t j = 0; j <= steps; ++j) {
      const double c[2] = {-(1.0 - r) + static_cast<double>(i) * h, -(1.0 - r) + static_cast<double>(j) * h};
      out.p_max = std::max(out.p_max, 4.0 * r * r / inv.cube_integral(c, r));
    }
  }
  out.expected_p_Q = 2.0 / (4.0 * r - 4.0 * r * r + 1.0);
  out.expected_p_min = 2.0 * r * r / (4.0 * r - 2.0 * r * r - 1.0);
  return out;
}

}  // namespace vlp
