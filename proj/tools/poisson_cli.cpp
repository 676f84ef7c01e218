// poisson: command-line front end.
//
//   poisson jacobi --algebra data/sl2.json
//   poisson cohomology --algebra data/sl2.json --d-max 10 --method both --format csv
//   poisson verify sl2 --format json
//   poisson flow trace --point 1,0,1 --t-max 10 --steps 100
//   poisson flow homotopy-check --form a0 --points data/homotopy_points.csv --T 50
//   poisson estimates sample --p 1 --q 1 --grid 10x25x40
//
// Exit codes: 0 success, 1 verification failure, 2 input or configuration error.

#include "poisson/cohomology.hpp"
#include "poisson/flow_lab.hpp"
#include "poisson/lie_algebra.hpp"
#include "poisson/sl2_suite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace poisson;

constexpr int kOk = 0;
constexpr int kVerificationFailure = 1;
constexpr int kInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string algebra;
  int q_max = -1;  // -1: dimension of the algebra
  int d_max = 10;
  std::string method = "both";
  std::string elimination = "content";
  std::string format = "text";
  std::string out;
  int jobs = 1;
  std::uint64_t seed = 20260301ULL;
  bool strict = false;
  bool representatives = false;
  bool flip_sign_ledger = false;
  std::string suite = "sl2";
  // flow
  std::string point;
  double t_max = 10;
  int steps = 100;
  std::string form = "all";
  std::string points;
  double T = 50;
  int panels_per_unit = 1;
  // estimates
  int p = 1;
  int q = 1;
  std::string grid = "10x25x40";
  std::string multi_index = "1,0,0";
  std::vector<std::string> tolerance_overrides;
};

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& operator()() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void check_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (c.format == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw InputError("format '" + c.format + "' not supported here (use " + list + ")");
}

flow::Tolerances tolerances(const RunConfig& c) {
  flow::Tolerances t;
  const std::map<std::string, double*> keys{{"homotopy", &t.homotopy},
                                            {"closed", &t.closed},
                                            {"tail", &t.tail},
                                            {"estimate_identity", &t.estimate_identity},
                                            {"estimate_inequality", &t.estimate_inequality},
                                            {"min_abs_f", &t.min_abs_f},
                                            {"max_radius", &t.max_radius}};
  for (const auto& kv : c.tolerance_overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError("tolerance override must be KEY=VALUE, got '" + kv + "'");
    const auto it = keys.find(kv.substr(0, eq));
    if (it == keys.end()) throw InputError("unknown tolerance '" + kv.substr(0, eq) + "'");
    try {
      *it->second = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw InputError("tolerance value is not a number: '" + kv + "'");
    }
  }
  return t;
}

std::vector<double> parse_numbers(const std::string& s, std::size_t expected, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(what + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != expected) throw InputError(what + ": expected " + std::to_string(expected) + " comma-separated values");
  return out;
}

std::vector<flow::Point3> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open points file '" + path + "'");
  std::vector<flow::Point3> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.find_first_of("xyz") != std::string::npos) continue;
    try {
      const auto v = parse_numbers(line, 3, "point");
      pts.push_back({v[0], v[1], v[2]});
    } catch (const InputError& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return pts;
}

// ------------------------------------------------------------------ jacobi

int cmd_jacobi(const RunConfig& c) {
  check_format(c, {"text", "json"});
  const LieAlgebra g = load_lie_algebra(c.algebra);
  const auto bracket = jacobi_check(g);
  const bool ok = bracket.is_zero();
  const std::string witness = first_component(bracket, g.names);
  Output out(c.out);
  if (c.format == "json") {
    out() << nlohmann::json{{"algebra", c.algebra}, {"jacobi", ok}, {"witness", ok ? "" : witness}}.dump(2) << "\n";
  } else if (ok) {
    out() << "[pi,pi] = 0: the Jacobi identity holds\n";
  } else {
    out() << "[pi,pi] != 0: the Jacobi identity fails; component " << witness << "\n";
  }
  return ok ? kOk : kVerificationFailure;
}

// ------------------------------------------------------------------ cohomology

std::vector<Method> methods_of(const std::string& m) {
  if (m == "lichnerowicz") return {Method::lichnerowicz};
  if (m == "ce") return {Method::chevalley_eilenberg};
  if (m == "both") return {Method::lichnerowicz, Method::chevalley_eilenberg};
  throw InputError("method must be lichnerowicz, ce or both");
}

int cmd_cohomology(const RunConfig& c) {
  check_format(c, {"text", "csv", "json"});
  const LieAlgebra g = load_lie_algebra(c.algebra);
  const auto methods = methods_of(c.method);
  if (c.d_max < 0) throw InputError("--d-max must be >= 0");
  const int q_max = c.q_max < 0 ? g.dim : c.q_max;
  const Elimination elim = c.elimination == "bareiss" ? Elimination::bareiss : Elimination::content_removal;
  if (c.elimination != "bareiss" && c.elimination != "content") throw InputError("--elimination must be bareiss or content");

  try {
    require_jacobi(g);
  } catch (const JacobiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  const CohomologyTable t = cohomology_table(g, q_max, c.d_max, methods, c.jobs, elim);

  const bool both = methods.size() == 2;
  auto agrees = [&](const CohomologyEntry& e) {
    return t.dim_h(Method::lichnerowicz, e.q, e.d) == t.dim_h(Method::chevalley_eilenberg, e.q, e.d);
  };
  bool all_agree = true;
  if (both)
    for (const auto& e : t.entries) all_agree = all_agree && agrees(e);

  Output out(c.out);
  std::ostream& os = out();
  if (c.format == "csv") {
    os << "method,q,d,dim_chain,rank_in,rank_out,dim_H" << (both ? ",agreement" : "") << "\n";
    for (const auto& e : t.entries) {
      os << to_string(e.method) << ',' << e.q << ',' << e.d << ',' << e.dim_chain << ',' << e.rank_in << ',' << e.rank_out
         << ',' << e.dim_h;
      if (both) os << ',' << (agrees(e) ? "true" : "false");
      os << '\n';
    }
  } else if (c.format == "json") {
    nlohmann::json doc = to_json(t);
    doc["algebra"] = c.algebra;
    if (both) {
      for (auto& e : doc["entries"])
        e["agreement"] = t.dim_h(Method::lichnerowicz, e["q"], e["d"]) == t.dim_h(Method::chevalley_eilenberg, e["q"], e["d"]);
      doc["all_agree"] = all_agree;
    }
    if (c.representatives) {
      doc["representatives"] = nlohmann::json::array();
      for (int d = 0; d <= c.d_max; ++d)
        for (int q = 0; q <= std::min(q_max, g.dim); ++q) {
          const auto reps = representatives(g, q, d, elim);
          if (reps.empty()) continue;
          nlohmann::json list = nlohmann::json::array();
          for (const auto& r : reps) list.push_back(multivector_to_json(r));
          doc["representatives"].push_back({{"q", q}, {"d", d}, {"multivectors", list}});
        }
    }
    os << doc.dump(2) << "\n";
  } else {
    for (Method m : methods) {
      os << "dim H^q_d (" << to_string(m) << ")\n      ";
      for (int d = 0; d <= c.d_max; ++d) os << std::setw(6) << ("d=" + std::to_string(d));
      os << "\n";
      for (int q = 0; q <= q_max; ++q) {
        os << "q=" << std::left << std::setw(4) << q << std::right;
        for (int d = 0; d <= c.d_max; ++d) os << std::setw(6) << t.dim_h(m, q, d);
        os << "\n";
      }
    }
    if (both) os << (all_agree ? "both methods agree on every slice\n" : "methods DISAGREE on some slice\n");
  }
  return all_agree ? kOk : kVerificationFailure;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const RunConfig& c) {
  check_format(c, {"text", "json"});
  if (c.suite != "sl2") throw InputError("unknown suite '" + c.suite + "' (available: sl2)");
  const sl2::SignLedger ledger{.flip_omega = c.flip_sign_ledger};
  const sl2::Report r = sl2::run_suite(ledger);
  Output out(c.out);
  if (c.format == "json") out() << sl2::to_json(r, ledger).dump(2) << "\n";
  else out() << sl2::to_text(r);
  return r.all_pass() ? kOk : kVerificationFailure;
}

// ------------------------------------------------------------------ flow

int cmd_flow_trace(const RunConfig& c) {
  check_format(c, {"text", "csv"});
  const auto v = parse_numbers(c.point, 3, "--point");
  const flow::Point3 p{v[0], v[1], v[2]};
  if (!(c.t_max >= 0)) throw InputError("--t-max must be >= 0");
  if (c.steps < 1) throw InputError("--steps must be >= 1");
  const flow::Point3 limit = flow::retraction(p);
  Output out(c.out);
  std::ostream& os = out();
  os << "t,x,y,z,f,R,distance_to_limit\n";
  for (int k = 0; k <= c.steps; ++k) {
    const double t = c.t_max * k / c.steps;
    const flow::Point3 q = flow::flow_closed(p, t);
    os << fmt17(t) << ',' << fmt17(q[0]) << ',' << fmt17(q[1]) << ',' << fmt17(q[2]) << ',' << fmt17(flow::f_of(q)) << ','
       << fmt17(std::sqrt(flow::R2(q))) << ',' << fmt17(flow::norm_l1(q, limit)) << '\n';
  }
  return kOk;
}

int cmd_flow_homotopy(const RunConfig& c) {
  check_format(c, {"text", "csv"});
  const flow::Tolerances tol = tolerances(c);
  std::vector<flow::Form> forms;
  if (c.form == "all") forms = {flow::Form::a0, flow::Form::a1, flow::Form::a2};
  else {
    try {
      forms = {flow::parse_form(c.form)};
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  if (!(c.T > 0) || c.panels_per_unit < 1) throw InputError("--T must be > 0 and --panels >= 1");
  const flow::QuadratureSpec quad{c.T, c.panels_per_unit};
  const std::vector<flow::Point3> pts =
      c.points.empty() ? flow::sample_points(c.seed, 20, tol.max_radius,
                                             [&](const flow::Point3& q) { return std::abs(flow::f_of(q)) >= tol.min_abs_f; })
                       : read_points(c.points);

  struct Job {
    flow::Form form;
    flow::Point3 p;
    std::optional<std::string> issue;
    flow::HomotopyResidual r;
  };
  std::vector<Job> jobs;
  for (flow::Form a : forms)
    for (const auto& p : pts) jobs.push_back({a, p, flow::homotopy_domain_issue(a, p, tol), {}});
  int skipped = 0;
  for (const auto& j : jobs)
    if (j.issue) {
      ++skipped;
      std::cerr << "warning: skipping " << flow::to_string(j.form) << " at (" << j.p[0] << "," << j.p[1] << "," << j.p[2]
                << "): " << *j.issue << "\n";
    }
  if (skipped && c.strict) {
    std::cerr << "error: " << skipped << " point(s) violate the evaluation domain (--strict)\n";
    return kInputError;
  }
  parallel_for(static_cast<int>(jobs.size()), c.jobs, [&](int i) {
    auto& j = jobs[static_cast<std::size_t>(i)];
    if (!j.issue) j.r = flow::homotopy_residual(j.form, j.p, quad, tol);
  });

  bool ok = true;
  Output out(c.out);
  std::ostream& os = out();
  os << "form,x,y,z,f,identity_residual,closed_residual,tail,status\n";
  for (const auto& j : jobs) {
    std::string status = "skipped";
    if (!j.issue) {
      const bool pass = j.r.identity < tol.homotopy && j.r.closed < tol.closed && j.r.tail_ok;
      ok = ok && pass;
      status = pass ? "pass" : (j.r.tail_ok ? "fail" : "fail-tail");
    }
    os << flow::to_string(j.form) << ',' << fmt17(j.p[0]) << ',' << fmt17(j.p[1]) << ',' << fmt17(j.p[2]) << ','
       << fmt17(flow::f_of(j.p)) << ',' << (j.issue ? "" : fmt17(j.r.identity)) << ',' << (j.issue ? "" : fmt17(j.r.closed))
       << ',' << (j.issue ? "" : fmt17(j.r.tail)) << ',' << status << '\n';
  }
  return ok ? kOk : kVerificationFailure;
}

// ------------------------------------------------------------------ estimates

flow::GridSpec grid_of(const RunConfig& c) {
  try {
    return flow::parse_grid(c.grid);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

int cmd_estimates_sample(const RunConfig& c) {
  check_format(c, {"text", "csv"});
  if (c.p < 1 || c.q < 1) throw InputError("--p and --q must be >= 1");
  const flow::Tolerances tol = tolerances(c);
  const flow::GridSpec grid = grid_of(c);
  const auto rep = flow::estimate_sampler(c.p, c.q, grid, c.jobs, tol);
  const auto fine = flow::estimate_sampler(c.p, c.q, grid.refined(), c.jobs, tol);
  const double drift = std::abs(fine.empirical_C - rep.empirical_C) / fine.empirical_C;
  Output out(c.out);
  std::ostream& os = out();
  os << "R,psi,t,x,z,f,g,gbar,identity_rel_err,identity_ok,inequality_ok,bounds_ok,scaled\n";
  for (const auto& r : rep.rows) {
    os << fmt17(r.node.R) << ',' << fmt17(r.node.psi) << ',' << fmt17(r.node.t) << ',' << fmt17(r.node.p[0]) << ','
       << fmt17(r.node.p[2]) << ',' << fmt17(r.f) << ',' << fmt17(r.g) << ',' << fmt17(r.gbar) << ','
       << fmt17(r.identity_rel_err) << ',' << (r.identity_ok ? "true" : "false") << ','
       << (r.inequality_ok ? "true" : "false") << ',' << (r.bounds_ok ? "true" : "false") << ',' << fmt17(r.scaled) << '\n';
  }
  std::cerr << "nodes " << rep.rows.size() << ", identity failures " << rep.identity_failures << ", inequality failures "
            << rep.inequality_failures << ", bound failures " << rep.bounds_failures << ", max identity rel err "
            << rep.max_identity_rel_err << "\nempirical C(" << c.p << "," << c.q << ") = " << fmt17(rep.empirical_C)
            << " (refined grid " << fmt17(fine.empirical_C) << ", drift " << drift << ")\n";
  return rep.all_ok() && drift < tol.refinement ? kOk : kVerificationFailure;
}

int cmd_estimates_probe(const RunConfig& c) {
  check_format(c, {"text", "csv"});
  const auto v = parse_numbers(c.multi_index, 3, "--a");
  const std::array<int, 3> a{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])};
  if (a[0] < 0 || a[1] < 0 || a[2] < 0 || a[0] + a[1] + a[2] > 2) throw InputError("--a must be a multi-index with |a| <= 2");
  flow::GridSpec grid = grid_of(c);
  grid.R_min = 0.2;
  grid.t_max = 50;
  Output out(c.out);
  std::ostream& os = out();
  os << "grid,nodes,sup_ratio,argmax_R,argmax_psi,argmax_t\n";
  for (int level = 0; level < 3; ++level) {
    const auto r = flow::derivative_bound_probe(a, grid, c.jobs);
    os << grid.nR << 'x' << grid.nPsi << 'x' << grid.nT << ',' << grid.size() << ',' << fmt17(r.sup_ratio) << ','
       << fmt17(r.argmax.R) << ',' << fmt17(r.argmax.psi) << ',' << fmt17(r.argmax.t) << '\n';
    if (!std::isfinite(r.sup_ratio)) return kVerificationFailure;
    grid = grid.refined();
  }
  return kOk;
}

int run(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Exact Poisson cohomology and flow verification toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", c.format, "text | csv | json")->envname("POISSON_FORMAT");
  app.add_option("--out", c.out, "output file (default stdout)")->envname("POISSON_OUT");
  app.add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber)->envname("POISSON_JOBS");
  app.add_option("--seed", c.seed, "seed for generated point sets")->envname("POISSON_SEED");
  app.add_flag("--strict", c.strict, "treat skipped points as an error")->envname("POISSON_STRICT");
  app.add_option("--tolerance", c.tolerance_overrides, "KEY=VALUE tolerance override (repeatable)");

  auto* jac = app.add_subcommand("jacobi", "check [pi,pi] = 0 for a Lie algebra file");
  jac->add_option("--algebra", c.algebra, "Lie algebra JSON")->required()->envname("POISSON_ALGEBRA");

  auto* coh = app.add_subcommand("cohomology", "dimensions of H^q_d of the linear Poisson structure");
  coh->add_option("--algebra", c.algebra, "Lie algebra JSON")->required()->envname("POISSON_ALGEBRA");
  coh->add_option("--q-max", c.q_max, "largest q (default: dimension)")->envname("POISSON_Q_MAX");
  coh->add_option("--d-max", c.d_max, "largest polynomial degree")->envname("POISSON_D_MAX");
  coh->add_option("--method", c.method, "lichnerowicz | ce | both")->envname("POISSON_METHOD");
  coh->add_option("--elimination", c.elimination, "content | bareiss")->envname("POISSON_ELIMINATION");
  coh->add_flag("--representatives", c.representatives, "include representatives in JSON output");

  auto* ver = app.add_subcommand("verify", "run an exact identity suite");
  ver->add_option("suite", c.suite, "suite name (sl2)")->required();
  ver->add_flag("--flip-sign-ledger", c.flip_sign_ledger, "debug: negate the symplectic form on O");

  auto* flw = app.add_subcommand("flow", "closed-form flow of W and homotopy checks");
  flw->require_subcommand(1);
  auto* trace = flw->add_subcommand("trace", "sample the flow line through a point");
  trace->add_option("--point", c.point, "x,y,z")->required()->envname("POISSON_POINT");
  trace->add_option("--t-max", c.t_max, "final time")->envname("POISSON_T_MAX");
  trace->add_option("--steps", c.steps, "number of time steps")->envname("POISSON_STEPS");
  auto* hom = flw->add_subcommand("homotopy-check", "residual of p_X^* a - a = d h a + h d a");
  hom->add_option("--form", c.form, "a0 | a1 | a2 | all")->envname("POISSON_FORM");
  hom->add_option("--points", c.points, "CSV of points x,y,z (default: seeded sample)")->envname("POISSON_POINTS");
  hom->add_option("--T", c.T, "truncation time")->envname("POISSON_T");
  hom->add_option("--panels", c.panels_per_unit, "Gauss-Legendre panels per unit time")->envname("POISSON_PANELS");

  auto* est = app.add_subcommand("estimates", "sampling checks of the g_t estimates");
  est->require_subcommand(1);
  auto* sample = est->add_subcommand("sample", "g_t^p gbar_t^q identities, inequality and empirical constant");
  sample->add_option("--p", c.p)->envname("POISSON_P");
  sample->add_option("--q", c.q)->envname("POISSON_Q");
  sample->add_option("--grid", c.grid, "nRxnPsixnT")->envname("POISSON_GRID");
  auto* probe = est->add_subcommand("probe", "sup |D^a g_t| / (sigma g_t) under grid refinement");
  probe->add_option("--a", c.multi_index, "multi-index a1,a2,a3 with |a| <= 2");
  probe->add_option("--grid", c.grid, "nRxnPsixnT")->envname("POISSON_GRID");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*jac) return cmd_jacobi(c);
    if (*coh) return cmd_cohomology(c);
    if (*ver) return cmd_verify(c);
    if (*trace) return cmd_flow_trace(c);
    if (*hom) return cmd_flow_homotopy(c);
    if (*sample) return cmd_estimates_sample(c);
    if (*probe) return cmd_estimates_probe(c);
  } catch (const LieAlgebraFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
