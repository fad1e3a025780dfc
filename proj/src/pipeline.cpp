#include "covbound/pipeline.hpp"

#include "covbound/combinatorics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace covbound {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("known bounds: bad " + what + " '" + s + "'");
  }
}

}  // namespace

KnownBoundsTable KnownBoundsTable::parse(const std::string& text) {
  KnownBoundsTable table;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  std::set<std::tuple<int, int, int>> seen;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (header) {
      header = false;
      if (t.rfind("q,", 0) == 0) continue;
    }
    const auto f = split(t, ',');
    if (f.size() != 7) {
      throw std::invalid_argument("known bounds line " + std::to_string(lineNo) + ": expected 7 fields");
    }
    KnownBound row;
    row.q = parse_int(f[0], "q");
    row.n = parse_int(f[1], "n");
    row.r = parse_int(f[2], "r");
    try {
      row.lower = BigInt(f[3]);
      row.upper = BigInt(f[4]);
    } catch (const std::exception&) {
      throw std::invalid_argument("known bounds line " + std::to_string(lineNo) + ": bad bound");
    }
    if (!f[5].empty()) row.tabulatedValue = f[5];
    row.source = f[6];
    if (row.lower > row.upper) {
      throw std::invalid_argument("known bounds line " + std::to_string(lineNo) + ": lower exceeds upper");
    }
    if (!seen.insert({row.q, row.n, row.r}).second) {
      throw std::invalid_argument("known bounds line " + std::to_string(lineNo) + ": duplicate instance");
    }
    table.rows_.push_back(std::move(row));
  }
  return table;
}

KnownBoundsTable KnownBoundsTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open known bounds file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const KnownBound* KnownBoundsTable::find(int q, int n, int r) const {
  for (const auto& row : rows_)
    if (row.q == q && row.n == n && row.r == r) return &row;
  return nullptr;
}

std::vector<InequalitySet> parse_inequality_list(int q, int n, int r, std::string_view list) {
  std::vector<InequalitySet> out;
  for (const auto& item : split(list, ',')) {
    if (item.empty()) continue;
    if (item == "default") {
      for (auto& i : default_inequalities(q, n, r)) out.push_back(std::move(i));
    } else if (item == "sphere") {
      out.push_back(sphere_covering(q, n, r));
    } else if (item == "vanwee") {
      if (q != 2) throw std::invalid_argument("vanwee is only available for q = 2");
      out.push_back(van_wee(n, r));
    } else if (item.rfind("file:", 0) == 0) {
      const std::filesystem::path path = item.substr(5);
      auto file = read_inequality_file(path);
      if (file.q != q || file.n != n) {
        throw std::invalid_argument("inequality file " + path.string() + " is for q=" +
                                    std::to_string(file.q) + " n=" + std::to_string(file.n));
      }
      file.ineq.set_name("custom(" + path.filename().string() + ")");
      out.push_back(std::move(file.ineq));
    } else {
      throw std::invalid_argument("unknown inequality '" + item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("no inequalities selected");
  return out;
}

std::string_view to_string(Method method) { return method == Method::lp ? "lp" : "sdp"; }

Method parse_method(std::string_view text) {
  if (text == "sdp") return Method::sdp;
  if (text == "lp") return Method::lp;
  throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

LpProblem build_combined_lp(int q, int n, std::span<const InequalitySet> ineqs) {
  if (ineqs.empty()) throw std::invalid_argument("no inequalities selected");
  LpProblem lp = build_lp(q, n, ineqs[0]);
  for (std::size_t k = 1; k < ineqs.size(); ++k) {
    for (auto& c : build_lp(q, n, ineqs[k]).constraints) {
      if (c.label.rfind("cover", 0) == 0 || c.label.rfind("complement", 0) == 0) {
        c.label += "[" + ineqs[k].name() + "]";
        lp.constraints.push_back(std::move(c));
      }
    }
  }
  return lp;
}

BoundResult lp_bound(int q, int n, int r, std::span<const InequalitySet> ineqs) {
  const auto start = std::chrono::steady_clock::now();
  const LpResult lp = solve_lp_exact(build_combined_lp(q, n, ineqs));
  BoundResult out;
  out.q = q;
  out.n = n;
  out.r = r;
  for (const auto& i : ineqs) out.inequalities.push_back(i.name());
  if (lp.status != LpStatus::optimal) {
    out.status = lp.status == LpStatus::infeasible ? SolverStatus::infeasible : SolverStatus::unbounded;
    return out;
  }
  out.rawValue = to_high_float(lp.optimum);
  out.rootValue = out.rawValue;
  out.integerBound = ceil(lp.optimum);
  out.safetyMargin = 0;
  out.status = SolverStatus::optimal;
  out.wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

InstanceOutcome run_instance(const InstanceRequest& request, const RunConfig& config) {
  static std::atomic<long> serial{0};
  InstanceOutcome outcome;
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto ineqs = request.ineqs.empty() ? default_inequalities(request.q, request.n, request.r)
                                             : request.ineqs;
    if (request.method == Method::lp) {
      BoundResult b = lp_bound(request.q, request.n, request.r, ineqs);
      outcome.status = b.status;
      if (b.status == SolverStatus::optimal) outcome.result = std::move(b);
      else outcome.message = "linear program is " + std::string(to_string(b.status));
    } else {
      const SdpProblem problem =
          build_sdp(request.q, request.n, request.r, ineqs, request.objective);
      const std::string stem = "covbound_q" + std::to_string(request.q) + "_n" +
                               std::to_string(request.n) + "_r" + std::to_string(request.r) + "_" +
                               std::string(to_string(request.objective)) + "_" +
                               std::to_string(serial.fetch_add(1));
      const auto problemPath = config.workDir / (stem + ".dat-s");
      const auto resultPath = config.workDir / (stem + ".out");
      write_sdpa_sparse(problem, problemPath, config.decimalDigits);
      const SolverReport report = invoke_solver(problemPath, resultPath, config.solver);
      outcome.status = report.status;
      outcome.message = report.message;
      if (report.status == SolverStatus::optimal || report.status == SolverStatus::nearOptimal) {
        outcome.result = finalize_bound(report, problem, config.safetyMargin);
      }
    }
  } catch (const std::exception& e) {
    outcome.status = SolverStatus::solverError;
    outcome.message = e.what();
  }
  outcome.wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (outcome.result) outcome.result->wallTime = outcome.wallTime;
  return outcome;
}

std::vector<InstanceOutcome> run_batch(const std::vector<InstanceRequest>& requests,
                                       const RunConfig& config, int jobs) {
  std::vector<InstanceOutcome> out(requests.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < requests.size(); k = next.fetch_add(1)) {
      out[k] = run_instance(requests[k], config);
    }
  };
  const int count = std::max(1, std::min<int>(jobs, static_cast<int>(requests.size())));
  std::vector<std::jthread> pool;
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  pool.clear();
  return out;
}

std::string flag_row(const BoundResult& result, const KnownBound* known, double tolerance) {
  if (!known) return "";
  if (result.integerBound > known->upper) return "UNSOUND";
  if (known->tabulatedValue) {
    const HighFloat target(*known->tabulatedValue);
    const HighFloat rel = (result.rootValue - target) / target;
    if (abs(rel) <= tolerance) return "match";
    return rel > 0 ? "improve" : "below";
  }
  if (result.integerBound == known->lower) return "match";
  return result.integerBound > known->lower ? "improve" : "below";
}

std::string table_header() {
  return "q,n,r,method,objective,rawValue,rootValue,bound,knownLower,knownUpper,flag,wallTime";
}

std::string table_row(const InstanceRequest& request, const InstanceOutcome& outcome,
                      const KnownBound* known) {
  std::ostringstream os;
  os << request.q << ',' << request.n << ',' << request.r << ',' << to_string(request.method) << ','
     << (request.method == Method::lp ? "distance" : std::string(to_string(request.objective))) << ',';
  if (outcome.result) {
    os << format_high(outcome.result->rawValue, 12) << ',' << format_high(outcome.result->rootValue, 12)
       << ',' << outcome.result->integerBound.get_str() << ',';
  } else {
    os << ",,,";
  }
  if (known) os << known->lower.get_str() << ',' << known->upper.get_str() << ',';
  else os << ",,";
  if (outcome.result) os << flag_row(*outcome.result, known);
  else os << "failed:" << to_string(outcome.status);
  os << ',' << std::fixed;
  os.precision(3);
  os << outcome.wallTime;
  return os.str();
}

std::string dump_coefficients(int q, int n) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  if (n < 1) throw std::invalid_argument("word length n must be at least 1");
  std::ostringstream os;
  auto emit = [&](CoefficientKind kind, std::vector<int> params) {
    CoefficientKey key{kind, std::move(params)};
    const BigInt v = evaluate(key);
    if (v == 0) return;
    os << to_string(kind);
    for (int p : key.parameters) os << ' ' << p;
    os << " = " << v.get_str() << '\n';
  };
  for (int k = 0; k <= n; ++k)
    for (int i = 0; i <= n; ++i) emit(CoefficientKind::krawtchouk, {q, n, k, i});
  for (int k = 0; k <= n; ++k)
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) emit(CoefficientKind::intersection, {q, n, k, i, j});
  for (auto [a, k] : block_labels(q, n)) {
    for (int i = block_first_row(n, a, k); i <= block_last_row(n, a, k); ++i)
      for (int j = block_first_row(n, a, k); j <= block_last_row(n, a, k); ++j)
        for (int t = 0; t <= std::min(i, j); ++t) {
          if (q == 2) emit(CoefficientKind::betaBinary, {n, i, j, k, t});
          else
            for (int p = 0; p <= t; ++p) emit(CoefficientKind::alphaNonbinary, {q, n, i, j, t, p, a, k});
        }
  }
  const auto orbits = index_set(q, n);
  for (const auto& s : orbits)
    for (const auto& term : eta_distribution(q, n, s)) {
      const auto& d = term.dst;
      if (q == 2) emit(CoefficientKind::etaBinary, {n, s.i, s.j, s.t, d.i, d.j, d.t, term.d});
      else emit(CoefficientKind::etaQary, {q, n, s.i, s.j, s.t, s.p, d.i, d.j, d.t, d.p, term.d});
    }
  for (const auto& s : orbits)
    for (const auto& term : alpha4_distribution(q, n, s)) {
      const auto& w = term.w;
      if (q == 2) emit(CoefficientKind::alpha4Binary, {n, s.i, s.j, s.t, w.j, w.t, term.d});
      else emit(CoefficientKind::alpha4Qary, {q, n, s.i, s.j, s.t, s.p, w.j, w.t, w.p, term.d});
    }
  return os.str();
}

}  // namespace covbound
