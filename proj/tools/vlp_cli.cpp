#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vlp/constructions.hpp"
#include "vlp/distribution.hpp"
#include "vlp/error.hpp"
#include "vlp/k0.hpp"
#include "vlp/operators.hpp"
#include "vlp/spec_io.hpp"
#include "vlp/vnorm.hpp"

namespace {

using namespace vlp;

constexpr double kLuxemburgTolerance = 1e-12;

struct Options {
  std::string spec;
  std::string input;
  std::string out = "vlp_out";
  double alpha = 0.0;
  bool alpha_given = false;
  bool k_given = false;
  std::size_t cells = 256;
  std::uint64_t seed = 0;
  std::vector<double> box;
  double lambda = 1.0;
  std::string policy = "exact";
  // k0scan
  std::size_t centers = 8;
  double r_min = 0.05;
  double r_max = 1.0;
  std::size_t radii = 8;
  bool linear = false;
  bool structured = false;
  // paircheck
  double t = 5.0;
  double radius = 0.0;
  std::vector<double> center;
  // example / blowup
  std::string name;
  int k = 6;
  int j_max = 10;
  double p_minus = 1.2;
  double p_plus = 1.8;
  double C = 10.0;
  std::size_t n = 1;
  double r_limit = 1000.0;
};

// Text summary, CSV body and config echo of one run.
class Report {
 public:
  Report(std::string command, const Options& o) : command_(std::move(command)) {
    config("command", command_);
    config("seed", std::to_string(o.seed));
  }

  void config(const std::string& key, const std::string& value) { config_.push_back(key + " = " + value); }
  void config(const std::string& key, double value) { config(key, format_number(value)); }
  void line(const std::string& text) { summary_.push_back(text); }
  void value(const std::string& key, double v) { line(key + " = " + format_number(v)); }
  void check(const std::string& key, bool holds, double v) {
    line(fmt::format("[{}] {} ({})", holds ? "PASS" : "FAIL", key, format_number(v)));
  }
  std::ostringstream& csv() { return csv_; }

  void write(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    std::ofstream(std::filesystem::path(dir) / (command_ + ".csv")) << csv_.str();
    std::ofstream txt(std::filesystem::path(dir) / (command_ + "_summary.txt"));
    txt << text();
    std::cout << text();
  }

  std::string text() const {
    std::string s = "# config\n";
    for (const auto& c : config_) s += c + "\n";
    s += "# results\n";
    for (const auto& l : summary_) s += l + "\n";
    return s;
  }

 private:
  std::string command_;
  std::vector<std::string> config_;
  std::vector<std::string> summary_;
  std::ostringstream csv_;
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

ExponentFunction require_spec(const Options& o) {
  if (o.spec.empty()) throw ParseError("--spec is required");
  return load_exponent_spec(o.spec);
}

Box box_from(const std::vector<double>& v, std::size_t n) {
  if (v.size() != 2 * n) throw ParseError(fmt::format("--box needs {} numbers lo0,hi0,...", 2 * n));
  Box b{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t a = 0; a < n; ++a) {
    b.lower[a] = v[2 * a];
    b.upper[a] = v[2 * a + 1];
  }
  return b;
}

// f from --input, else the indicator of --box on a grid over the spec domain.
GridFunction input_function(const Options& o, const ExponentFunction& p) {
  if (!o.input.empty()) return load_grid_csv(o.input);
  if (o.cells < 16) throw PreconditionError("--cells must be at least 16");
  const GridDomain grid = GridDomain::over_box(p.domain(), o.cells);
  if (o.box.empty()) return GridFunction::sample(grid, [](std::span<const double>) { return 1.0; });
  return GridFunction::indicator(grid, box_from(o.box, p.dimension()));
}

GridFunction random_function(const Options& o, std::size_t n) {
  if (o.cells < 16) throw PreconditionError("--cells must be at least 16");
  const GridDomain grid = GridDomain::over_box(Box{std::vector<double>(n, -1.0), std::vector<double>(n, 1.0)}, o.cells);
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(grid.size());
  for (double& x : v) x = u(rng);
  return GridFunction(grid, std::move(v));
}

void exponent_constants(Report& r, const ExponentFunction& p) {
  r.value("p_minus", p.p_minus().to_double());
  r.value("p_plus", p.p_plus().to_double());
  r.value("K_p", holder_constant(p));
  r.value("k_p", duality_constant(p));
  r.value("luxemburg_tolerance", kLuxemburgTolerance);
}

void write_function(Report& r, const GridFunction& f) { write_grid_csv(r.csv(), f); }

int cmd_norm(const Options& o) {
  const ExponentFunction p = require_spec(o);
  const GridFunction f = input_function(o, p);
  Report r("norm", o);
  r.config("spec", o.spec);
  r.config("cells", static_cast<double>(f.size()));
  const double norm = luxemburg_norm(f, p);
  std::cout << fmt::format("{:.7f}\n", norm);
  r.value("norm", norm);
  exponent_constants(r, p);
  r.csv() << "norm\n" << format_number(norm) << "\n";
  r.write(o.out);
  return 0;
}

int cmd_modular(const Options& o) {
  const ExponentFunction p = require_spec(o);
  const GridFunction f = input_function(o, p);
  Report r("modular", o);
  r.config("spec", o.spec);
  r.config("lambda", o.lambda);
  const double rho = modular(f, p, o.lambda);
  r.value("modular", rho);
  exponent_constants(r, p);
  r.csv() << "lambda,modular\n" << format_number(o.lambda) << ',' << format_number(rho) << "\n";
  r.write(o.out);
  return 0;
}

int cmd_maximal(const Options& o) {
  if (o.input.empty()) throw ParseError("--input is required");
  const GridFunction f = load_grid_csv(o.input);
  Report r("maximal", o);
  r.config("input", o.input);
  r.config("alpha", o.alpha);
  r.config("policy", o.policy);
  GridFunction m = GridFunction::zero(f.domain());
  if (o.policy == "exact") {
    m = fractional_maximal(f, o.alpha, RadiusPolicy::Exact);
  } else if (o.policy == "dyadic") {
    m = fractional_maximal(f, o.alpha, RadiusPolicy::Dyadic);
  } else if (o.policy == "containing") {
    m = containing_maximal(f, o.alpha);
  } else {
    throw ParseError("--policy must be exact, dyadic or containing");
  }
  r.value("max", m.max());
  r.value("spacing", f.domain().spacing());
  write_function(r, m);
  r.write(o.out);
  return 0;
}

int cmd_riesz(const Options& o) {
  if (o.input.empty()) throw ParseError("--input is required");
  const GridFunction f = load_grid_csv(o.input);
  Report r("riesz", o);
  r.config("input", o.input);
  r.config("alpha", o.alpha);
  const std::size_t n = f.domain().dimension();
  const GridFunction g = riesz_potential(f, o.alpha);
  r.value("gamma", riesz_constant(o.alpha, n));
  r.value("domination_constant", riesz_domination_constant(o.alpha, n));
  r.value("max", g.max());
  write_function(r, g);
  r.write(o.out);
  return 0;
}

int cmd_k0scan(const Options& o) {
  const ExponentFunction p = require_spec(o);
  const std::size_t n = p.dimension();
  Report r("k0scan", o);
  r.config("spec", o.spec);
  r.config("alpha", o.alpha);
  r.config("centers_per_axis", static_cast<double>(o.centers));
  r.config("r_min", o.r_min);
  r.config("r_max", o.r_max);
  r.config("radii", static_cast<double>(o.radii));
  r.config("spacing", o.linear ? "linear" : "log");
  r.config("quadrature", o.structured ? "structured" : "grid");
  // default centers keep every cube inside the domain
  Box centers = p.domain();
  if (o.box.empty()) {
    for (std::size_t a = 0; a < n; ++a) {
      centers.lower[a] += o.r_max;
      centers.upper[a] -= o.r_max;
      if (centers.lower[a] > centers.upper[a]) throw PreconditionError("--r-max exceeds half the domain width");
    }
  } else {
    centers = box_from(o.box, n);
  }
  r.config("center_box", join([&] {
             std::vector<double> v;
             for (std::size_t a = 0; a < n; ++a) v.insert(v.end(), {centers.lower[a], centers.upper[a]});
             return v;
           }()));
  const SetFamily family = cube_lattice_family(centers, o.centers, o.r_min, o.r_max, o.radii, !o.linear);
  K0Report rep;
  if (o.structured) {
    rep = k0alpha_constant(p, o.alpha, family, StructuredQuadrature());
  } else {
    if (o.cells < 16) throw PreconditionError("--cells must be at least 16");
    r.config("cells", static_cast<double>(o.cells));
    rep = k0alpha_constant(p, o.alpha, family, GridQuadrature(GridDomain::over_box(p.domain(), o.cells)));
  }
  for (std::size_t a = 0; a < n; ++a) r.csv() << "center" << (n > 1 ? std::to_string(a) : "") << ',';
  r.csv() << "radius,sample_value\n";
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Cube& c = std::get<Cube>(family[i]);
    for (double x : c.center) r.csv() << format_number(x) << ',';
    r.csv() << format_number(c.radius) << ',' << format_number(rep.samples[i]) << '\n';
  }
  r.value("family_size", static_cast<double>(family.size()));
  r.value("best_value", rep.best_value);
  r.value("argmax", static_cast<double>(rep.argmax));
  exponent_constants(r, p);
  r.write(o.out);
  return 0;
}

int cmd_paircheck(const Options& o) {
  const GridFunction f = o.input.empty() ? random_function(o, o.n) : load_grid_csv(o.input);
  const std::size_t n = f.domain().dimension();
  Report r("paircheck", o);
  r.config("input", o.input.empty() ? "random" : o.input);
  r.config("alpha", o.alpha);
  r.config("t", o.t);
  const double h = f.domain().spacing();
  const double radius = o.radius > 0.0 ? o.radius : 2.0 * h;
  std::vector<double> center = o.center;
  if (center.empty()) {
    for (std::size_t a = 0; a < n; ++a) center.push_back(f.domain().lower(a) + radius);
  }
  if (center.size() != n) throw ParseError("--center has the wrong dimension");
  std::vector<double> u(n, 0.0);
  u[0] = 1.0;
  const TUPair pair = make_tu_pair(Cube{center, radius, {}}, o.t, u);
  r.config("center", join(center));
  r.config("radius", radius);

  const PairReport m = maximal_pair_lower_bound(f, pair, o.alpha);
  r.value("maximal_lhs_min_over_P", m.lhs_min_over_P);
  r.value("maximal_rhs", m.rhs);
  r.check("maximal_pair_bound", m.holds, m.lhs_min_over_P / m.rhs);
  r.csv() << "bound,lhs,rhs,holds\n";
  r.csv() << "maximal," << format_number(m.lhs_min_over_P) << ',' << format_number(m.rhs) << ',' << m.holds << '\n';
  if (o.alpha > 0.0) {
    const FractionalKernel kernel = FractionalKernel::riesz(n, o.alpha);
    const CzoPairReport c = czo_pair_lower_bound(kernel, f, pair);
    r.value("czo_t0", c.t0);
    r.value("czo_applicable", c.applicable ? 1.0 : 0.0);
    r.value("czo_lhs_min_over_P", c.lhs_min_over_P);
    r.value("czo_rhs", c.rhs);
    if (c.applicable) r.check("czo_pair_bound", c.holds, c.lhs_min_over_P / c.rhs);
    r.csv() << "czo," << format_number(c.lhs_min_over_P) << ',' << format_number(c.rhs) << ',' << c.holds << '\n';
  }
  r.write(o.out);
  return 0;
}

void witness_table(Report& r, const ExampleSpec& spec) {
  for (const NamedConstant& c : spec.constants) r.value(c.name, c.value);
  const WitnessReport w = witness_growth(spec);
  r.csv() << "j,measure,norm,scale,ratio,holds\n";
  for (const WitnessPoint& pt : w.points) {
    r.csv() << format_number(pt.j) << ',' << format_number(pt.measure) << ',' << format_number(pt.norm) << ','
            << format_number(pt.scale) << ',' << format_number(pt.ratio) << ',' << pt.holds << '\n';
  }
  r.value("first_holding_j", w.first_holding_j);
  r.check(fmt::format("norm_{}_exceeds_j_scale", spec.witness_label), w.first_holding_j > 0.0, w.first_holding_j);
}

int cmd_example(Options o) {
  const ExampleName name = example_from_string(o.name);
  if (!o.alpha_given && name == ExampleName::Ex61) o.alpha = 0.25;
  if (!o.k_given && name == ExampleName::Ex61) o.k = 50;
  if (!o.alpha_given && (name == ExampleName::Ex63 || name == ExampleName::Ex64)) o.alpha = 0.5;
  Report r("example_" + to_string(name), o);
  r.config("name", to_string(name));
  switch (name) {
    case ExampleName::L1Failure: {
      r.config("alpha", o.alpha);
      r.config("n", static_cast<double>(o.n));
      r.config("R_max", o.r_limit);
      const L1FailureReport rep = build_l1_failure(o.alpha, o.n, o.r_limit);
      r.csv() << "R,partial\n";
      for (std::size_t i = 0; i < rep.radii.size(); ++i) {
        r.csv() << format_number(rep.radii[i]) << ',' << format_number(rep.partials[i]) << '\n';
      }
      r.value("fitted_slope", rep.fitted_slope);
      r.value("analytic_slope", rep.analytic_slope);
      r.value("h", rep.h);
      break;
    }
    case ExampleName::Ex61: {
      r.config("alpha", o.alpha);
      r.config("K", static_cast<double>(o.k));
      const ExampleSpec spec = build_ex61(o.alpha, o.k);
      const Ex61Coexistence c = ex61_coexistence(spec, o.k);
      for (const NamedConstant& nc : spec.constants) r.value(nc.name, nc.value);
      r.csv() << "k,rho_p,rho_p_oracle,rho_q,harmonic\n";
      for (std::size_t i = 0; i < c.divergence.rho_p.size(); ++i) {
        r.csv() << i + 1 << ',' << format_number(c.divergence.rho_p[i]) << ','
                << format_number(c.divergence.rho_p_oracle[i]) << ',' << format_number(c.divergence.rho_q[i]) << ','
                << format_number(c.divergence.harmonic[i]) << '\n';
      }
      r.value("k0alpha_coarse", c.k0alpha_coarse);
      r.value("k0alpha_refined", c.k0alpha_refined);
      r.check("k0alpha_stable_5pct", c.relative_change <= 0.05, c.relative_change);
      r.check("rho_q_tracks_harmonic", c.divergence.rho_q.back() >= c.rho_q_target, c.divergence.rho_q.back());
      r.value("rho_q_target", c.rho_q_target);
      r.line("grid: local windows [e^k - 3/2, e^k + 3/2], h = 1/64; M_alpha over each window");
      break;
    }
    case ExampleName::Ex62: {
      r.config("j_max", static_cast<double>(o.j_max));
      witness_table(r, build_ex62(o.j_max));
      break;
    }
    case ExampleName::Ex63:
    case ExampleName::Ex64: {
      r.config("alpha", o.alpha);
      r.config("p_minus", o.p_minus);
      r.config("p_plus", o.p_plus);
      r.config("j_max", static_cast<double>(o.j_max));
      witness_table(r, name == ExampleName::Ex63 ? build_ex63(o.alpha, o.p_minus, o.p_plus, o.j_max)
                                                 : build_ex64(o.alpha, o.p_minus, o.p_plus, o.j_max));
      break;
    }
    case ExampleName::HmCounter: {
      r.config("cells", static_cast<double>(o.cells));
      const HmCounterReport h = hm_counter(0.75, o.cells);
      r.csv() << "r,p_Q,p_min,p_max,expected_p_Q,expected_p_min\n";
      r.csv() << format_number(h.r) << ',' << format_number(h.p_Q) << ',' << format_number(h.p_min) << ','
              << format_number(h.p_max) << ',' << format_number(h.expected_p_Q) << ','
              << format_number(h.expected_p_min) << '\n';
      r.check("p_Q_below_p_min", h.p_Q < h.p_min, h.p_min - h.p_Q);
      break;
    }
  }
  r.write(o.out);
  return 0;
}

int cmd_blowup(const Options& o) {
  Report r("blowup", o);
  r.config("alpha", o.alpha);
  r.config("t", o.t);
  r.config("k", static_cast<double>(o.k));
  r.config("C", o.C);
  r.config("n", static_cast<double>(o.n));
  BlowupOptions opt;
  opt.t = o.t;
  opt.k_max = o.k;
  const auto p = o.spec.empty() ? blowup_exponent(o.n) : std::make_shared<const ExponentFunction>(require_spec(o));
  r.config("spec", o.spec.empty() ? "built-in" : o.spec);
  const BlowupFamily fam = build_blowup(p, o.alpha, opt);
  for (const BlowupLevel& L : fam.levels) {
    for (const Check& c : L.checks) r.check(fmt::format("k={} {}", L.k, c.name), c.holds, c.value);
  }
  const std::vector<GrowthPoint> g = blowup_modular_growth(fam, o.C);
  r.csv() << "k,beta_k,modular,modular_over_k,theory_bound\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    r.csv() << g[i].k << ',' << format_number(fam.levels[i].beta) << ',' << format_number(g[i].modular) << ','
            << format_number(g[i].modular / g[i].k) << ',' << format_number(g[i].theory_bound) << '\n';
  }
  exponent_constants(r, *p);
  r.write(o.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable Lebesgue space computations"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* s) {
    s->add_option("--spec", o.spec, "exponent spec (JSON)");
    s->add_option("--alpha", o.alpha, "fractional order");
    s->add_option("--cells", o.cells, "grid cells per axis");
    s->add_option("--out", o.out, "output directory");
    s->add_option("--seed", o.seed, "seed for randomized witnesses");
    s->add_option("--input", o.input, "grid function CSV");
  };
  auto* norm = app.add_subcommand("norm", "Luxemburg norm of f");
  auto* mod = app.add_subcommand("modular", "modular of f / lambda");
  auto* maximal = app.add_subcommand("maximal", "fractional maximal function");
  auto* riesz = app.add_subcommand("riesz", "Riesz potential");
  auto* k0 = app.add_subcommand("k0scan", "K0^alpha samples over a cube lattice");
  auto* pair = app.add_subcommand("paircheck", "(t,u) pair lower bounds");
  auto* example = app.add_subcommand("example", "explicit constructions");
  auto* blowup = app.add_subcommand("blowup", "blow-up family for p_- = 1");
  for (auto* s : {norm, mod, maximal, riesz, k0, pair, example, blowup}) common(s);
  for (auto* s : {norm, mod, k0}) s->add_option("--box", o.box, "box lo0,hi0,...")->delimiter(',');
  mod->add_option("--lambda", o.lambda);
  maximal->add_option("--policy", o.policy, "exact, dyadic or containing");
  k0->add_option("--centers-per-axis", o.centers);
  k0->add_option("--r-min", o.r_min);
  k0->add_option("--r-max", o.r_max);
  k0->add_option("--radii", o.radii);
  k0->add_flag("--linear", o.linear, "linear radius ladder");
  k0->add_flag("--structured", o.structured, "exact interval quadrature (1-D)");
  pair->add_option("--t", o.t);
  pair->add_option("--radius", o.radius);
  pair->add_option("--center", o.center)->delimiter(',');
  pair->add_option("--n", o.n, "dimension of the random witness");
  example->add_option("name", o.name, "L1_FAILURE, EX61, EX62, EX63, EX64 or HM_COUNTER")->required();
  example->add_option("--k", o.k, "EX61 series length (default 50)");
  example->add_option("--j-max", o.j_max);
  example->add_option("--p-minus", o.p_minus);
  example->add_option("--p-plus", o.p_plus);
  example->add_option("--n", o.n);
  example->add_option("--r-max", o.r_limit);
  blowup->add_option("--t", o.t);
  blowup->add_option("--k", o.k);
  blowup->add_option("--C", o.C);
  blowup->add_option("--n", o.n);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*norm) return cmd_norm(o);
    if (*mod) return cmd_modular(o);
    if (*maximal) return cmd_maximal(o);
    if (*riesz) return cmd_riesz(o);
    if (*k0) return cmd_k0scan(o);
    if (*pair) return cmd_paircheck(o);
    if (*example) {
      o.alpha_given = example->count("--alpha") > 0;
      o.k_given = example->count("--k") > 0;
      return cmd_example(o);
    }
    if (*blowup) return cmd_blowup(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
