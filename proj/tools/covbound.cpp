#include "covbound/oracle.hpp"
#include "covbound/pipeline.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <set>

using namespace covbound;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// "4", "4..8" or "2,3,5".
std::vector<int> parse_range(const std::string& text) {
  std::vector<int> out;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    const auto dots = item.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dots));
        const int hi = std::stoi(item.substr(dots + 2));
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::exception&) {
      throw UsageError("bad range '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError("empty range '" + text + "'");
  return out;
}

struct SolverFlags {
  std::string command;
  std::string paramFile;
  double timeout = 3600.0;
  double gapTolerance = kDefaultGapTolerance;

  void attach(CLI::App* app) {
    app->add_option("--solver", command, "solver command; default $" + std::string(kSolverEnv) + " or sdpa_gmp");
    app->add_option("--param", paramFile, "solver parameter file");
    app->add_option("--timeout", timeout, "solver timeout in seconds")->check(CLI::NonNegativeNumber);
    app->add_option("--gap-tol", gapTolerance, "relative gap accepted as optimal")->check(CLI::PositiveNumber);
  }

  SolverOptions options() const {
    SolverOptions o;
    o.command = command;
    o.paramFile = paramFile;
    o.timeoutSeconds = timeout;
    o.gapTolerance = gapTolerance;
    return o;
  }
};

struct BoundArgs {
  int q = 2, n = 1, r = 1;
  std::string ineq = "default";
  std::string objective = "triple";
  std::string method = "sdp";
  std::string out;
  int digits = kDefaultDecimalDigits;
  double margin = kDefaultSafetyMargin;
  bool noSolve = false;
  SolverFlags solver;
};

int cmd_bound(const BoundArgs& a) {
  const auto ineqs = parse_inequality_list(a.q, a.n, a.r, a.ineq);
  const ObjectiveKind kind = parse_objective_kind(a.objective);
  if (parse_method(a.method) == Method::lp) {
    BoundResult b = lp_bound(a.q, a.n, a.r, ineqs);
    if (b.status != SolverStatus::optimal) {
      std::cerr << "linear program is " << to_string(b.status) << '\n';
      return kExitSolver;
    }
    auto j = to_json(b);
    j["method"] = "lp";
    j.erase("objectiveKind");
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }

  const SdpProblem problem = build_sdp(a.q, a.n, a.r, ineqs, kind);
  const std::string stem = "covbound_q" + std::to_string(a.q) + "_n" + std::to_string(a.n) + "_r" +
                           std::to_string(a.r) + "_" + a.objective;
  const std::filesystem::path problemPath =
      a.out.empty() ? (a.noSolve ? std::filesystem::path(stem + ".dat-s")
                                 : std::filesystem::temp_directory_path() / (stem + ".dat-s"))
                    : std::filesystem::path(a.out);
  write_sdpa_sparse(problem, problemPath, a.digits);

  if (a.noSolve) {
    std::size_t blocks = problem.psdBlocks.size();
    nlohmann::json j;
    j["schemaVersion"] = kSchemaVersion;
    j["q"] = a.q;
    j["n"] = a.n;
    j["r"] = a.r;
    j["inequalities"] = problem.inequalityNames;
    j["objectiveKind"] = std::string(to_string(kind));
    j["problemFile"] = problemPath.string();
    j["numVariables"] = problem.num_variables();
    j["psdBlocks"] = blocks;
    j["linearConstraints"] = problem.linearConstraints.size();
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }

  std::filesystem::path resultPath = problemPath;
  resultPath.replace_extension(".out");
  const SolverReport report = invoke_solver(problemPath, resultPath, a.solver.options());
  if (report.status != SolverStatus::optimal && report.status != SolverStatus::nearOptimal) {
    std::cerr << "solver status " << to_string(report.status) << ": " << report.message
              << " (log " << report.rawLogPath.string() << ")\n";
    return kExitSolver;
  }
  const BoundResult b = finalize_bound(report, problem, a.margin);
  std::cout << to_json(b).dump(2) << '\n';
  return kExitOk;
}

struct TableArgs {
  std::string qs = "2", ns, rs = "1";
  std::string fixtures = COVBOUND_FIXTURES;
  bool fixturesOnly = false;
  std::string method = "sdp";
  std::string objective = "triple";
  std::string ineq = "default";
  int jobs = 1;
  std::string workdir;
  std::string out;
  double margin = kDefaultSafetyMargin;
  SolverFlags solver;
};

int cmd_table(const TableArgs& a) {
  const KnownBoundsTable known = a.fixtures.empty() ? KnownBoundsTable{} : KnownBoundsTable::load(a.fixtures);
  const Method method = parse_method(a.method);
  const ObjectiveKind kind = parse_objective_kind(a.objective);
  std::vector<InstanceRequest> requests;
  for (int q : parse_range(a.qs))
    for (int n : parse_range(a.ns))
      for (int r : parse_range(a.rs)) {
        if (q < 2 || n < 1 || r < 0 || r >= n) continue;
        if (a.fixturesOnly && !known.find(q, n, r)) continue;
        requests.push_back({q, n, r, method, kind, parse_inequality_list(q, n, r, a.ineq)});
      }
  if (requests.empty()) throw UsageError("no instances in the requested ranges");

  RunConfig config;
  config.solver = a.solver.options();
  config.safetyMargin = a.margin;
  if (!a.workdir.empty()) {
    std::filesystem::create_directories(a.workdir);
    config.workDir = a.workdir;
  }
  const auto outcomes = run_batch(requests, config, a.jobs);

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot write " + a.out);
  }
  std::ostream& os = a.out.empty() ? std::cout : file;
  os << "# schemaVersion=" << kSchemaVersion << '\n' << table_header() << '\n';
  bool failed = false;
  bool unsound = false;
  for (std::size_t k = 0; k < requests.size(); ++k) {
    const auto& req = requests[k];
    const KnownBound* row = known.find(req.q, req.n, req.r);
    os << table_row(req, outcomes[k], row) << '\n';
    if (!outcomes[k].result) {
      failed = true;
      std::cerr << "q=" << req.q << " n=" << req.n << " r=" << req.r << ": "
                << to_string(outcomes[k].status) << " " << outcomes[k].message << '\n';
    } else if (flag_row(*outcomes[k].result, row) == "UNSOUND") {
      unsound = true;
    }
  }
  if (unsound) return kExitVerify;
  return failed ? kExitSolver : kExitOk;
}

struct VerifyArgs {
  std::string suite = "all";
  int qmax = 4, nmax = 5, nmaxBinary = 0;
  int q = 0, n = 0;
  int trials = 20;
  double tolerance = 1e-8;
  std::string code;
  int r = -1;
};

bool report(bool ok, const std::string& what) {
  std::cout << (ok ? "PASS " : "FAIL ") << what << '\n';
  return ok;
}

bool verify_coefficient_grid(const VerifyArgs& a) {
  bool ok = true;
  for (int q = 2; q <= a.qmax; ++q) {
    const int top = q == 2 && a.nmaxBinary ? a.nmaxBinary : a.nmax;
    for (int n = 1; n <= top; ++n) {
      const SuiteReport rep = verify_coefficients(q, n);
      ok = report(rep.passed, "coefficients q=" + std::to_string(q) + " n=" + std::to_string(n) + " (" +
                                  std::to_string(rep.checks) + " checks)" +
                                  (rep.passed ? "" : ": " + rep.firstFailure)) && ok;
    }
  }
  return ok;
}

bool verify_blockmap(const VerifyArgs& a) {
  std::vector<std::pair<int, int>> grid;
  if (a.q && a.n) grid.push_back({a.q, a.n});
  else grid = {{2, 4}, {2, 6}, {3, 3}, {3, 4}, {4, 3}};
  bool ok = true;
  for (auto [q, n] : grid) {
    const BlockMapReport rep = verify_block_map(q, n, a.trials, a.tolerance);
    std::ostringstream os;
    os << "blockmap q=" << q << " n=" << n << " homomorphism " << rep.homomorphismError << " spectrum "
       << rep.spectrumError << " border " << rep.borderError << " identity " << rep.identityError;
    ok = report(rep.passed, rep.passed ? os.str() : rep.message) && ok;
  }
  return ok;
}

bool verify_witness(const CodeWitness& code, int r, const std::string& label) {
  const int radius = covering_radius(code);
  if (r < 0) r = radius;
  if (radius > r) {
    return report(false, "witness " + label + ": covering radius " + std::to_string(radius) + " exceeds r=" +
                              std::to_string(r));
  }
  const auto ineqs = default_inequalities(code.q, code.n, r);
  const SdpProblem problem = build_sdp(code.q, code.n, r, ineqs, ObjectiveKind::triple);
  const auto x = witness_x(code);
  const FeasibilityReport feas = certify_feasibility(problem, x);
  const Rational emitted = problem.objective.evaluate(std::span<const Rational>(x));
  const BigInt qn = ipow(code.q, static_cast<unsigned long>(code.n));
  const BigInt cube = BigInt(static_cast<long>(code.size())) * static_cast<long>(code.size()) *
                      static_cast<long>(code.size());
  const bool objectiveOk = emitted * qn == Rational(cube);
  std::ostringstream os;
  os << "witness " << label << " r=" << r << " |C|=" << code.size() << " worst slack "
     << to_decimal(feas.worstSlack, 6) << " (" << feas.worstConstraint << ") min eigenvalue "
     << static_cast<double>(feas.minEigenvalue) << " (" << feas.worstBlock << ") objective*q^n "
     << Rational(emitted * qn).get_str() << (feas.feasible && objectiveOk ? " feasible" : " infeasible");
  return report(feas.feasible && objectiveOk, os.str());
}

int cmd_verify(const VerifyArgs& a) {
  const std::set<std::string> suites = {"coefficients", "blockmap", "witness", "all"};
  if (!suites.count(a.suite)) throw UsageError("unknown suite '" + a.suite + "'");
  bool ok = true;
  if (a.suite == "coefficients" || a.suite == "all") ok = verify_coefficient_grid(a) && ok;
  if (a.suite == "blockmap" || a.suite == "all") ok = verify_blockmap(a) && ok;
  if (a.suite == "witness" || a.suite == "all") {
    if (!a.code.empty()) {
      ok = verify_witness(read_code_file(a.code), a.r, a.code) && ok;
    } else {
      ok = verify_witness(whole_space(2, 3), a.r, "[2]^3") && ok;
      ok = verify_witness(make_code(2, 3, {{0, 0, 0}, {1, 1, 1}}), a.r, "{000,111}") && ok;
    }
  }
  return ok ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower bounds on covering codes from semidefinite and linear programs"};
  app.require_subcommand(1);

  BoundArgs bound;
  auto* b = app.add_subcommand("bound", "build, solve and finalize one bound");
  b->add_option("--q", bound.q, "alphabet size")->required()->check(CLI::Range(2, 64));
  b->add_option("--n", bound.n, "word length")->required()->check(CLI::Range(1, 256));
  b->add_option("--r", bound.r, "covering radius")->required()->check(CLI::NonNegativeNumber);
  b->add_option("--ineq", bound.ineq, "comma list of sphere, vanwee, file:PATH or default");
  b->add_option("--objective", bound.objective, "triple, pair or single")
      ->check(CLI::IsMember({"triple", "pair", "single"}));
  b->add_option("--method", bound.method, "sdp or lp")->check(CLI::IsMember({"sdp", "lp"}));
  b->add_option("--out", bound.out, "problem file path");
  b->add_option("--digits", bound.digits, "significant digits in the problem file")->check(CLI::Range(6, 200));
  b->add_option("--margin", bound.margin, "safety margin subtracted before rounding")
      ->check(CLI::NonNegativeNumber);
  b->add_flag("--no-solve", bound.noSolve, "write the problem file only");
  bound.solver.attach(b);

  TableArgs table;
  auto* t = app.add_subcommand("table", "batch bounds compared with known values, as CSV");
  t->add_option("--q", table.qs, "alphabet sizes, e.g. 2 or 2..4");
  t->add_option("--n", table.ns, "word lengths, e.g. 4..8")->required();
  t->add_option("--r", table.rs, "covering radii, e.g. 1,2");
  t->add_option("--fixtures", table.fixtures, "known bounds CSV; empty to skip");
  t->add_flag("--fixtures-only", table.fixturesOnly, "only instances with a known-bounds row");
  t->add_option("--method", table.method, "sdp or lp")->check(CLI::IsMember({"sdp", "lp"}));
  t->add_option("--objective", table.objective, "triple, pair or single")
      ->check(CLI::IsMember({"triple", "pair", "single"}));
  t->add_option("--ineq", table.ineq, "comma list of sphere, vanwee, file:PATH or default");
  t->add_option("--jobs", table.jobs, "worker threads")->check(CLI::Range(1, 256));
  t->add_option("--workdir", table.workdir, "directory for problem and result files");
  t->add_option("--out", table.out, "CSV output path; default stdout");
  t->add_option("--margin", table.margin, "safety margin subtracted before rounding")
      ->check(CLI::NonNegativeNumber);
  table.solver.attach(t);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "brute-force verification suites");
  v->add_option("--suite", verify.suite, "coefficients, blockmap, witness or all");
  v->add_option("--qmax", verify.qmax, "largest q in the coefficient grid")->check(CLI::Range(2, 8));
  v->add_option("--nmax", verify.nmax, "largest n in the coefficient grid")->check(CLI::Range(1, 12));
  v->add_option("--nmax-binary", verify.nmaxBinary, "largest n for q = 2; default --nmax")->check(CLI::Range(1, 12));
  v->add_option("--q", verify.q, "single blockmap instance q")->check(CLI::Range(2, 8));
  v->add_option("--n", verify.n, "single blockmap instance n")->check(CLI::Range(1, 12));
  v->add_option("--trials", verify.trials, "random blockmap trials")->check(CLI::Range(1, 10000));
  v->add_option("--tol", verify.tolerance, "blockmap tolerance")->check(CLI::PositiveNumber);
  v->add_option("--code", verify.code, "code file for the witness suite");
  v->add_option("--r", verify.r, "covering radius for the witness suite; default the code's")
      ->check(CLI::NonNegativeNumber);

  int dq = 2, dn = 1;
  auto* d = app.add_subcommand("dump-coefficients", "print every nonzero coefficient for (q, n)");
  d->add_option("--q", dq, "alphabet size")->required()->check(CLI::Range(2, 16));
  d->add_option("--n", dn, "word length")->required()->check(CLI::Range(1, 16));

  int lq = 2, ln = 1, lr = 1;
  std::string lineq = "default";
  auto* l = app.add_subcommand("dump-lp", "print the exact linear program in lp-dump format");
  l->add_option("--q", lq, "alphabet size")->required()->check(CLI::Range(2, 64));
  l->add_option("--n", ln, "word length")->required()->check(CLI::Range(1, 256));
  l->add_option("--r", lr, "covering radius")->required()->check(CLI::NonNegativeNumber);
  l->add_option("--ineq", lineq, "comma list of sphere, vanwee, file:PATH or default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*b) return cmd_bound(bound);
    if (*t) return cmd_table(table);
    if (*v) return cmd_verify(verify);
    if (*d) {
      std::cout << dump_coefficients(dq, dn);
      return kExitOk;
    }
    if (*l) {
      const auto ineqs = parse_inequality_list(lq, ln, lr, lineq);
      std::cout << format_lp_dump(build_combined_lp(lq, ln, ineqs));
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitUsage;
}
