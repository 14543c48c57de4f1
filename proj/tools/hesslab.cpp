// Command-line front end: solves, capacity and stability sweeps, and the
// acceptance suites.
//
// Exit status: 0 every asserted check passed, 1 a check failed, 2 usage
// error, 3 numerical failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hesslab/error.hpp"
#include "hesslab/experiments.hpp"
#include "hesslab/field_io.hpp"
#include "hesslab/fieldfn.hpp"
#include "hesslab/parallel.hpp"
#include "hesslab/potential.hpp"
#include "hesslab/radial_ode.hpp"
#include "hesslab/solver.hpp"

using namespace hesslab;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kNumerical = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int n = 2;
  int m = 2;
  int grid = 17;
  double spacing = 0.0;
  std::string domain = "ball";
  std::string f = "const:1";
  std::string phi = "quad:1";
  std::uint64_t seed = 7;
  std::string out;
  std::string csv;
  int threads = 0;
  long samples = 100000;
  long instances = 10000;
  std::string suite = "all";
  std::string q_sweep = "2.0:6.5:0.5";
  double q = 4.0;
  std::vector<double> deltas{1e-1, 3.1622776601683794e-2, 1e-2, 3.1622776601683794e-3, 1e-3};
  std::vector<double> radii{0.5, 0.4, 0.3, 0.2};
  double eps = 2.0;  // in grid steps
  double tol = 1e-8;
  int max_iter = 60;
};

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void validate(const RunConfig& c) {
  if (!(1 <= c.m && c.m <= c.n && c.n <= 3)) throw UsageError("need 1 <= m <= n <= 3");
  if (c.spacing < 0.0) throw UsageError("spacing must be positive");
  if (c.grid < 5) throw UsageError("grid needs at least 5 points per axis");
  if (c.domain != "ball" && c.domain != "box") throw UsageError("domain must be ball or box");
  if (!(c.tol > 0.0)) throw UsageError("tol must be positive");
}

int points_of(const RunConfig& c) {
  if (c.spacing > 0.0) return static_cast<int>(std::lround(2.0 / c.spacing)) + 1;
  return c.grid;
}

DomainPtr make_domain(const RunConfig& c) {
  const int p = points_of(c);
  return share(c.domain == "ball" ? GridDomain::ball(c.n, p, 1.0) : GridDomain::box(c.n, p, -1.0, 1.0));
}

SolveConfig solve_config(const RunConfig& c) {
  SolveConfig s;
  s.tol_residual = c.tol;
  s.max_iter = c.max_iter;
  return s;
}

FieldFunction function_of(const std::string& spec, const RunConfig& c) {
  try {
    return parse_function(spec, c.n, c.m);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

GridField boundary_of(const DomainPtr& d, const RunConfig& c) {
  const FieldFunction fp = function_of(c.phi, c);
  if (fp.singular_at_origin) throw UsageError("boundary data must be finite at the origin");
  GridField phi = GridField::sample(d, fp.eval);
  for (std::size_t i : d->interior()) phi[i] = std::numeric_limits<double>::quiet_NaN();
  return phi;
}

std::vector<double> parse_sweep(const std::string& s) {
  std::vector<double> v;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ':')) {
    try {
      v.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw UsageError("sweep must look like start:stop:step");
    }
  }
  if (v.size() != 3 || !(v[2] > 0.0) || v[1] < v[0]) throw UsageError("sweep must look like start:stop:step");
  std::vector<double> out;
  const int count = static_cast<int>(std::floor((v[1] - v[0]) / v[2] + 1e-9));
  for (int k = 0; k <= count; ++k) out.push_back(v[0] + k * v[2]);
  return out;
}

void emit_csv(const RunConfig& c, const CsvTable& t) {
  if (c.csv.empty()) {
    std::cout << t.str();
    return;
  }
  std::ofstream os(c.csv, std::ios::binary);
  if (!os) throw UsageError("cannot write " + c.csv);
  os << t.str();
}

// ---------------------------------------------------------------------------

int cmd_verify(const RunConfig& c) {
  SuiteOptions o;
  o.seed = c.seed;
  o.samples = c.samples;
  o.instances = c.instances;
  std::vector<int> ids;
  try {
    ids = suite_ids(c.suite);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const std::vector<CriterionResult> results = run_criteria(ids, o);
  bool all = true;
  for (const auto& r : results) {
    std::cout << summary_line(r) << '\n';
    if (!r.note.empty()) std::cerr << fmt::format("  C{} {}: {}\n", r.id, r.name, r.note);
    all = all && r.pass;
  }
  if (!c.out.empty()) write_reports(c.out, results);
  return all ? kPass : kFail;
}

int cmd_solve(const RunConfig& c) {
  const DomainPtr d = make_domain(c);
  const GridField f = density_field(d, function_of(c.f, c));
  const SolveReport rep = solve_dirichlet(f, boundary_of(d, c), c.m, solve_config(c));
  std::cout << fmt::format("residual {:.6g} tol {:.6g} iterations {} stages {} violations {} converged {}\n",
                           rep.final_residual, c.tol, rep.wall_iterations, rep.stages, rep.final_violations,
                           rep.converged ? "yes" : "no");
  write_field(c.out.empty() ? std::string("solution.hsf") : c.out, rep.solution);
  if (!c.csv.empty()) {
    std::ofstream os(c.csv, std::ios::binary);
    write_iteration_csv(os, rep);
  }
  return rep.converged ? kPass : kFail;
}

int cmd_torus(const RunConfig& c) {
  const DomainPtr d = share(GridDomain::torus(c.n, c.grid));
  const GridField f = density_field(d, function_of(c.f, c));
  const SolveReport rep = solve_torus(f, c.m, solve_config(c));
  std::cout << fmt::format("residual {:.6g} tol {:.6g} kappa {:.17g} max {:.17g} converged {}\n", rep.final_residual,
                           c.tol, rep.kappa, rep.solution.max(), rep.converged ? "yes" : "no");
  write_field(c.out.empty() ? std::string("torus.hsf") : c.out, rep.solution);
  return rep.converged ? kPass : kFail;
}

int cmd_capacity(const RunConfig& c) {
  RunConfig bc = c;
  bc.domain = "ball";
  const DomainPtr d = make_domain(bc);
  const double h = d->h();
  CsvTable tab({"radius", "volume", "extremal", "lower", "radial"});
  bool ok = true;
  for (double r : c.radii) {
    if (!(r > 0.0 && r < 1.0)) throw UsageError("radii must lie in (0,1)");
    GridDomain::Mask K(d->size(), 0);
    for (std::size_t i : d->interior()) K[i] = norm2(d->position(i)) <= r * r * (1.0 + 1e-12);
    const CapacityEstimate est = capacity(K, d, c.m, solve_config(c));
    tab.add({r, mask_volume(*d, K), est.extremal, est.lower, radial_ball_capacity(c.n, c.m, r, 1.0)});
    ok = ok && est.lower <= est.extremal * (1.0 + 5.0 * h);
  }
  emit_csv(c, tab);
  return ok ? kPass : kFail;
}

int cmd_stability(const RunConfig& c) {
  const DomainPtr d = make_domain(c);
  const FieldFunction ff = function_of(c.f, c);
  const GridField f = density_field(d, ff);
  const GridField phi = boundary_of(d, c);
  const SolveConfig sc = solve_config(c);
  const SolveReport base = solve_dirichlet(f, phi, c.m, sc);
  CsvTable tab({"delta", "sup_difference", "bound", "ratio"});
  std::vector<double> sups;
  for (double delta : c.deltas) {
    GridField g = f;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!d->is_inside(i)) continue;
      const double s = 1.0 - norm2(d->position(i)) / 0.36;
      g[i] = f[i] * (1.0 - delta * (s > 0.0 ? s * s * s : 0.0));
    }
    const SolveReport rg = solve_dirichlet(g, phi, c.m, sc);
    const StabilityMeasure sm = stability_density(base.solution, rg.solution, f, g, c.m, c.q);
    sups.push_back(sm.sup_difference);
    tab.add({delta, sm.sup_difference, sm.bound, sm.ratio});
  }
  emit_csv(c, tab);
  const ExponentFit fit = fit_loglog(c.deltas, sups);
  CriterionResult r;
  r.id = 8;
  r.measured = fit.slope;
  r.bound = 1.0 / c.m - 0.15;
  r.pass = fit.slope >= r.bound;
  std::cout << summary_line(r) << '\n';
  return r.pass ? kPass : kFail;
}

int cmd_integrability(const RunConfig& c) {
  const std::vector<double> qs = parse_sweep(c.q_sweep);
  const std::vector<ShellGrowth> rows = integrability_sweep(c.n, c.m, qs, c.seed);
  CsvTable tab({"q", "expected", "slope", "r2"});
  long mismatches = 0;
  for (const auto& s : rows) {
    tab.add({s.q, s.expected, s.fit.slope, s.fit.r2});
    if (std::abs(s.expected) >= 0.25 && (s.fit.slope > 0.0) != (s.expected > 0.0)) ++mismatches;
  }
  emit_csv(c, tab);
  if (c.m < c.n)
    std::cerr << fmt::format("threshold q = {:.6g}\n", static_cast<double>(c.m) * c.n / (c.n - c.m));
  CriterionResult r;
  r.id = 5;
  r.measured = static_cast<double>(mismatches);
  r.bound = 0.0;
  r.pass = mismatches == 0;
  std::cout << summary_line(r) << '\n';
  return r.pass ? kPass : kFail;
}

int cmd_regularity(const RunConfig& c) {
  const DomainPtr d = make_domain(c);
  const FieldFunction ff = function_of(c.f, c);
  const GridField f = density_field(d, ff);
  const GridField phi = boundary_of(d, c);
  std::vector<GridField> family;
  for (int k = 1; k <= 4; ++k) {
    GridField fk = f;
    for (std::size_t i = 0; i < fk.size(); ++i)
      if (d->is_inside(i)) fk[i] += std::sin(k * d->position(i)[0]) / k;
    family.push_back(std::move(fk));
  }
  const ModulusTable mt = equicontinuity_probe(family, phi, c.m, solve_config(c));
  CsvTable tab({"steps", "shared_modulus"});
  for (std::size_t k = 0; k < mt.steps.size(); ++k) tab.add({static_cast<long long>(mt.steps[k]), mt.shared[k]});
  emit_csv(c, tab);

  const SolveReport rep = solve_dirichlet(f, phi, c.m, solve_config(c));
  GridDomain::Mask sub(d->size(), 0);
  for (std::size_t i : d->interior()) sub[i] = norm2(d->position(i)) <= 0.25;
  const double h = d->h(), eps = c.eps * h;
  const InteriorBound b = interior_laplacian_bound(rep.solution, f, c.m, eps, sub);
  const double slack = h * h + h * h / (eps * eps);
  std::cerr << fmt::format("sup T_eps {:.6g} defect {:.6g} c1 {:.6g} points {} modulus decays {}\n", b.sup_t,
                           b.defect, b.c1, b.points, mt.decays ? "yes" : "no");
  CriterionResult r;
  r.id = 11;
  r.measured = b.defect;
  r.bound = -b.c1 - slack;
  r.pass = rep.converged && b.defect >= r.bound && mt.decays;
  std::cout << summary_line(r) << '\n';
  return r.pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hesslab: numerical laboratory for the complex m-Hessian equation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value file; flags given on the command line win");
  RunConfig c;
  app.add_option("--n", c.n, "complex dimension");
  app.add_option("--m", c.m, "Hessian index");
  app.add_option("--grid", c.grid, "points per axis (torus: points per period)");
  app.add_option("--spacing", c.spacing, "grid spacing; overrides --grid on [-1,1]");
  app.add_option("--domain", c.domain, "ball or box");
  app.add_option("--f", c.f, "density, e.g. const:4, bump:1,0.5, sing:1");
  app.add_option("--phi", c.phi, "boundary data, e.g. quad:1");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--out", c.out, "field file, or report directory for verify");
  app.add_option("--csv", c.csv, "CSV output (default: stdout for tables)");
  app.add_option("--threads", c.threads, "worker threads; HESSLAB_THREADS takes precedence");
  app.add_option("--samples", c.samples, "cone samples per (n,m)");
  app.add_option("--instances", c.instances, "brute-force instances");
  app.add_option("--suite", c.suite, "cones, brute, solver, radial, integrability, sublevel, comparison, "
                                     "stability, torus, garding, tepsilon, determinism or all");
  app.add_option("--q-sweep", c.q_sweep, "start:stop:step");
  app.add_option("--q", c.q, "integrability exponent for stability");
  app.add_option("--deltas", c.deltas, "perturbation sizes")->delimiter(',');
  app.add_option("--radii", c.radii, "ball radii for capacity")->delimiter(',');
  app.add_option("--eps", c.eps, "averaging radius in grid steps");
  app.add_option("--tol", c.tol, "Newton residual tolerance");
  app.add_option("--max-iter", c.max_iter, "Newton iterations");

  int (*handler)(const RunConfig&) = nullptr;
  const std::vector<std::pair<std::string, int (*)(const RunConfig&)>> commands{
      {"verify", cmd_verify},       {"solve", cmd_solve},         {"torus", cmd_torus},
      {"capacity", cmd_capacity},   {"stability", cmd_stability}, {"integrability", cmd_integrability},
      {"regularity", cmd_regularity}};
  const std::vector<std::string> help{"run acceptance suites",      "Dirichlet solve",
                                      "periodic solve",             "capacities of centered balls",
                                      "density stability sweep",    "integrability of G across q",
                                      "equicontinuity and interior bound"};
  for (std::size_t k = 0; k < commands.size(); ++k) {
    auto fn = commands[k].second;
    app.add_subcommand(commands[k].first, help[k])->callback([&handler, fn] { handler = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    validate(c);
    if (c.threads > 0 && !std::getenv("HESSLAB_THREADS")) par::set_threads(c.threads);
    return handler(c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}
