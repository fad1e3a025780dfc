#include "covbound/solverio.hpp"

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <regex>
#include <signal.h>
#include <spawn.h>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>
#include <thread>
#include <tuple>
#include <wordexp.h>

extern char** environ;

namespace covbound {

namespace {

struct SparseEntry {
  int var;
  int block;
  int row;
  int col;
  std::string value;

  bool operator<(const SparseEntry& o) const {
    return std::tie(var, block, row, col) < std::tie(o.var, o.block, o.row, o.col);
  }
};

void emit_form(std::vector<SparseEntry>& out, const LinearForm& form, int block, int row, int col,
               int digits) {
  if (form.constant() != 0) {
    out.push_back({0, block, row, col, to_decimal(-form.constant(), digits)});
  }
  for (const auto& [id, c] : form.coeffs()) {
    out.push_back({id + 1, block, row, col, to_decimal(c, digits)});
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return {};
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string tail(const std::string& text, std::size_t lines) {
  std::size_t pos = text.size();
  std::size_t seen = 0;
  while (pos > 0) {
    --pos;
    if (text[pos] == '\n' && pos + 1 < text.size() && ++seen > lines) return text.substr(pos + 1);
  }
  return text;
}

std::optional<HighFloat> parse_high(const std::string& token) {
  std::string t = token;
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  try {
    std::size_t used = 0;
    (void)std::stold(t, &used);
    if (used != t.size()) return std::nullopt;
    return HighFloat(t);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::string format_sdpa_sparse(const SdpProblem& problem, int decimalDigits) {
  const int numBlocks = static_cast<int>(problem.psdBlocks.size()) +
                        (problem.linearConstraints.empty() ? 0 : 1);
  std::ostringstream os;
  os << problem.num_variables() << '\n' << numBlocks << '\n';
  for (std::size_t b = 0; b < problem.psdBlocks.size(); ++b) {
    if (b) os << ' ';
    os << problem.psdBlocks[b].dim;
  }
  if (!problem.linearConstraints.empty()) {
    if (!problem.psdBlocks.empty()) os << ' ';
    os << '-' << problem.linearConstraints.size();
  }
  os << '\n';
  for (int v = 0; v < problem.num_variables(); ++v) {
    if (v) os << ' ';
    auto it = problem.objective.coeffs().find(v);
    os << (it == problem.objective.coeffs().end() ? std::string("0")
                                                  : to_decimal(it->second, decimalDigits));
  }
  os << '\n';

  std::vector<SparseEntry> entries;
  for (std::size_t b = 0; b < problem.psdBlocks.size(); ++b) {
    const auto& block = problem.psdBlocks[b];
    for (int r = 0; r < block.dim; ++r)
      for (int c = r; c < block.dim; ++c)
        emit_form(entries, block.at(r, c), static_cast<int>(b) + 1, r + 1, c + 1, decimalDigits);
  }
  const int linearBlock = static_cast<int>(problem.psdBlocks.size()) + 1;
  for (std::size_t k = 0; k < problem.linearConstraints.size(); ++k) {
    const int pos = static_cast<int>(k) + 1;
    emit_form(entries, problem.linearConstraints[k].form, linearBlock, pos, pos, decimalDigits);
  }
  std::sort(entries.begin(), entries.end());
  for (const auto& e : entries) {
    os << e.var << ' ' << e.block << ' ' << e.row << ' ' << e.col << ' ' << e.value << '\n';
  }
  return os.str();
}

void write_sdpa_sparse(const SdpProblem& problem, const std::filesystem::path& path,
                       int decimalDigits) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_sdpa_sparse(problem, decimalDigits);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

SdpaData parse_sdpa_sparse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string body;
  bool started = false;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (!started && (first == std::string::npos || line[first] == '"' || line[first] == '*')) {
      continue;
    }
    started = true;
    for (char& ch : line)
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    body += line;
    body += '\n';
  }
  std::istringstream tokens(body);
  auto next = [&]() {
    std::string tok;
    if (!(tokens >> tok)) throw std::invalid_argument("truncated SDPA data");
    return tok;
  };
  SdpaData data;
  data.numVariables = std::stoi(next());
  const int nblock = std::stoi(next());
  for (int b = 0; b < nblock; ++b) data.blockSizes.push_back(std::stoi(next()));
  for (int v = 0; v < data.numVariables; ++v) data.objective.push_back(std::stold(next()));
  std::string tok;
  while (tokens >> tok) {
    SdpaData::Entry e{};
    e.var = std::stoi(tok);
    e.block = std::stoi(next());
    e.row = std::stoi(next());
    e.col = std::stoi(next());
    e.value = std::stold(next());
    if (e.var < 0 || e.var > data.numVariables || e.block < 1 || e.block > nblock) {
      throw std::invalid_argument("SDPA entry index out of range");
    }
    const int dim = std::abs(data.blockSizes[static_cast<std::size_t>(e.block - 1)]);
    if (e.row < 1 || e.col < 1 || e.row > dim || e.col > dim) {
      throw std::invalid_argument("SDPA entry position out of range");
    }
    data.entries.push_back(e);
  }
  return data;
}

std::vector<long double> SdpaData::evaluate_block(int block, std::span<const long double> x) const {
  if (block < 1 || block > static_cast<int>(blockSizes.size())) {
    throw std::out_of_range("SDPA block index out of range");
  }
  const int dim = std::abs(blockSizes[static_cast<std::size_t>(block - 1)]);
  std::vector<long double> m(static_cast<std::size_t>(dim * dim), 0.0L);
  for (const auto& e : entries) {
    if (e.block != block) continue;
    long double v = e.var == 0 ? -e.value : e.value * x[static_cast<std::size_t>(e.var - 1)];
    m[static_cast<std::size_t>((e.row - 1) * dim + (e.col - 1))] += v;
    if (e.row != e.col) m[static_cast<std::size_t>((e.col - 1) * dim + (e.row - 1))] += v;
  }
  return m;
}

std::string_view to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::optimal: return "optimal";
    case SolverStatus::nearOptimal: return "nearOptimal";
    case SolverStatus::infeasible: return "infeasible";
    case SolverStatus::unbounded: return "unbounded";
    case SolverStatus::solverError: return "solverError";
  }
  return "solverError";
}

SolverReport parse_solver_output(const std::string& logText, double gapTolerance) {
  static const std::regex keyLine(R"(^\s*(objValPrimal|objValDual|phase\.value)\s*=\s*(\S+))");
  SolverReport report;
  std::istringstream in(logText);
  std::string line;
  std::string lastLine;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) lastLine = line;
    std::smatch m;
    if (!std::regex_search(line, m, keyLine)) continue;
    const std::string key = m[1];
    const std::string value = m[2];
    if (key == "phase.value") {
      report.phase = value;
      continue;
    }
    auto parsed = parse_high(value);
    if (!parsed) {
      report.status = SolverStatus::solverError;
      report.message = "unparseable solver output line: '" + line + "'";
      return report;
    }
    (key == "objValPrimal" ? report.primalObjective : report.dualObjective) = *parsed;
  }

  auto fail = [&](const std::string& what) {
    report.status = SolverStatus::solverError;
    report.message = what + " (last line: '" + lastLine + "')";
    return report;
  };
  if (report.phase.empty()) return fail("solver output has no phase.value");

  const std::string& ph = report.phase;
  if (ph == "pdOPT" || ph == "pdFEAS") {
    if (!report.primalObjective || !report.dualObjective) {
      return fail("solver output lacks objValPrimal/objValDual");
    }
    report.status = ph == "pdOPT" ? SolverStatus::optimal : SolverStatus::nearOptimal;
    const HighFloat gap = abs(*report.primalObjective - *report.dualObjective) /
                          std::max(HighFloat(1), HighFloat(abs(*report.primalObjective)));
    if (report.status == SolverStatus::optimal && gap > HighFloat(gapTolerance)) {
      report.status = SolverStatus::nearOptimal;
    }
  } else if (ph == "pINF_dFEAS" || ph == "dUNBD" || ph == "pdINF") {
    report.status = SolverStatus::infeasible;
  } else if (ph == "pFEAS_dINF" || ph == "pUNBD") {
    report.status = SolverStatus::unbounded;
  } else {
    report.status = SolverStatus::solverError;
    report.message = "solver did not converge (phase.value = " + ph + ")";
  }
  return report;
}

std::string default_solver_command() {
  const char* env = std::getenv(kSolverEnv);
  if (env && *env) return env;
  return "sdpa_gmp";
}

SolverReport invoke_solver(const std::filesystem::path& problemPath,
                           const std::filesystem::path& resultPath, const SolverOptions& options) {
  SolverReport report;
  const std::filesystem::path logPath = resultPath.string() + ".log";
  report.rawLogPath = logPath;
  const std::string command = options.command.empty() ? default_solver_command() : options.command;

  wordexp_t words{};
  if (wordexp(command.c_str(), &words, WRDE_NOCMD) != 0 || words.we_wordc == 0) {
    if (words.we_wordv) wordfree(&words);
    report.message = "cannot parse solver command '" + command + "'";
    return report;
  }
  std::vector<std::string> args(words.we_wordv, words.we_wordv + words.we_wordc);
  wordfree(&words);
  args.insert(args.end(), {"-ds", problemPath.string(), "-o", resultPath.string()});
  if (!options.paramFile.empty()) args.insert(args.end(), {"-p", options.paramFile.string()});
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  std::error_code ec;
  std::filesystem::remove(resultPath, ec);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 1, logPath.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, 1, 2);
  const auto start = std::chrono::steady_clock::now();
  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    report.message = "cannot execute solver '" + args[0] + "': " + std::strerror(rc);
    return report;
  }

  const auto deadline = start + std::chrono::duration<double>(std::max(0.0, options.timeoutSeconds));
  int wstatus = 0;
  bool timedOut = false;
  for (;;) {
    const pid_t done = waitpid(pid, &wstatus, WNOHANG);
    if (done == pid) break;
    if (done < 0 && errno != EINTR) {
      report.message = std::string("waitpid failed: ") + std::strerror(errno);
      return report;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &wstatus, 0);
      timedOut = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  report.wallTime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string log = read_text(logPath);
  if (timedOut) {
    report.message = "timeout after " + std::to_string(options.timeoutSeconds) + " s";
    return report;
  }
  if (!WIFEXITED(wstatus) || WEXITSTATUS(wstatus) != 0) {
    report.message = "solver exited abnormally";
    if (WIFEXITED(wstatus)) report.message += " with status " + std::to_string(WEXITSTATUS(wstatus));
    if (WIFSIGNALED(wstatus)) report.message += " on signal " + std::to_string(WTERMSIG(wstatus));
    if (WIFEXITED(wstatus) && WEXITSTATUS(wstatus) == 127) report.message += " (command not found)";
    report.message += "; log tail:\n" + tail(log, 5);
    return report;
  }

  std::string text = read_text(resultPath);
  if (text.empty()) text = log;
  SolverReport parsed = parse_solver_output(text, options.gapTolerance);
  parsed.rawLogPath = logPath;
  parsed.wallTime = report.wallTime;
  return parsed;
}

HighFloat certified_objective(const SolverReport& report) {
  if (report.status == SolverStatus::optimal) {
    if (report.dualObjective) return *report.dualObjective;
    if (report.primalObjective) return *report.primalObjective;
  }
  if (report.status == SolverStatus::nearOptimal && report.dualObjective &&
      report.primalObjective) {
    return *report.dualObjective - abs(*report.primalObjective - *report.dualObjective);
  }
  throw std::invalid_argument("no certified objective for solver status " +
                              std::string(to_string(report.status)));
}

HighFloat root_value(const HighFloat& raw, int e) {
  if (e < 1) throw std::invalid_argument("root exponent must be positive");
  if (raw <= 0) return HighFloat(0);
  if (e == 1) return raw;
  if (e == 2) return sqrt(raw);
  HighFloat x = pow(raw, HighFloat(1) / e);
  // One Newton step to settle the last digits.
  x -= (pow(x, e) - raw) / (e * pow(x, e - 1));
  return x;
}

BigInt integer_bound(const HighFloat& root, const HighFloat& margin) {
  HighFloat c = ceil(root - margin);
  boost::multiprecision::cpp_int ci = static_cast<boost::multiprecision::cpp_int>(c);
  return BigInt(ci.str());
}

BoundResult finalize_value(const HighFloat& objective, const SdpProblem& problem,
                           double safetyMargin) {
  BoundResult out;
  out.q = problem.q;
  out.n = problem.n;
  out.r = problem.r;
  out.objectiveKind = problem.objectiveKind;
  out.inequalities = problem.inequalityNames;
  HighFloat value = objective + to_high_float(problem.objective.constant());
  if (value < 0) value = 0;
  const BigInt scale = ipow(problem.q, static_cast<unsigned long>(problem.scalePower));
  out.rawValue = value * HighFloat(scale.get_str());
  out.rootValue = root_value(out.rawValue, exponent(problem.objectiveKind));
  out.safetyMargin = HighFloat(safetyMargin);
  out.integerBound = integer_bound(out.rootValue, out.safetyMargin);
  return out;
}

BoundResult finalize_bound(const SolverReport& report, const SdpProblem& problem,
                           double safetyMargin) {
  if (report.status != SolverStatus::optimal && report.status != SolverStatus::nearOptimal) {
    throw std::invalid_argument("cannot finalize a bound from solver status " +
                                std::string(to_string(report.status)));
  }
  BoundResult out = finalize_value(certified_objective(report), problem, safetyMargin);
  out.status = report.status;
  out.wallTime = report.wallTime;
  return out;
}

std::string format_high(const HighFloat& v, int digits) { return v.str(digits); }

nlohmann::json to_json(const BoundResult& result) {
  nlohmann::json j;
  j["schemaVersion"] = kSchemaVersion;
  j["q"] = result.q;
  j["n"] = result.n;
  j["r"] = result.r;
  j["inequalities"] = result.inequalities;
  j["objectiveKind"] = std::string(to_string(result.objectiveKind));
  j["rawValue"] = format_high(result.rawValue, 20);
  j["rootValue"] = format_high(result.rootValue, 20);
  if (result.integerBound.fits_slong_p()) {
    j["integerBound"] = result.integerBound.get_si();
  } else {
    j["integerBound"] = result.integerBound.get_str();
  }
  j["safetyMargin"] = format_high(result.safetyMargin, 6);
  j["status"] = std::string(to_string(result.status));
  j["wallTime"] = result.wallTime;
  return j;
}

long double min_eigenvalue(std::span<const long double> matrix, int dim) {
  if (dim == 0) return 0.0L;
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  Mat m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = matrix[static_cast<std::size_t>(r * dim + c)];
  Eigen::SelfAdjointEigenSolver<Mat> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

FeasibilityReport certify_feasibility(const SdpProblem& problem,
                                      std::span<const Rational> assignment,
                                      long double eigenTolerance) {
  if (static_cast<int>(assignment.size()) != problem.num_variables()) {
    throw std::invalid_argument("assignment has " + std::to_string(assignment.size()) +
                                " values, problem has " +
                                std::to_string(problem.num_variables()) + " variables");
  }
  FeasibilityReport rep;
  bool haveSlack = false;
  for (const auto& c : problem.linearConstraints) {
    Rational s = c.form.evaluate(assignment);
    if (!haveSlack || s < rep.worstSlack) {
      rep.worstSlack = s;
      rep.worstConstraint = c.label;
      haveSlack = true;
    }
  }
  std::vector<long double> x;
  x.reserve(assignment.size());
  for (const auto& v : assignment) {
    x.push_back(to_high_float(v).convert_to<long double>());
  }
  bool haveEig = false;
  for (const auto& b : problem.psdBlocks) {
    std::vector<long double> m(b.entries.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = b.entries[k].evaluate(std::span<const long double>(x));
    long double ev = min_eigenvalue(m, b.dim);
    if (!haveEig || ev < rep.minEigenvalue) {
      rep.minEigenvalue = ev;
      rep.worstBlock = b.label;
      haveEig = true;
    }
  }
  rep.feasible = rep.worstSlack >= 0 && rep.minEigenvalue >= -eigenTolerance;
  return rep;
}

}  // namespace covbound
