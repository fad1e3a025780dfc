#pragma once

// SDPA sparse serialization, external solver invocation and conversion of
// solver objectives into integer lower bounds.

#include "covbound/numeric.hpp"
#include "covbound/sdpmodel.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace covbound {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kDefaultDecimalDigits = 40;
inline constexpr double kDefaultSafetyMargin = 1e-4;
inline constexpr double kDefaultGapTolerance = 1e-5;
/// Environment variable naming the default solver command.
inline constexpr const char* kSolverEnv = "COVBOUND_SOLVER";

/// Renders the problem in sparse SDPA format. Linear constraints become one
/// trailing diagonal block of negative size; constants enter as matrix 0 with
/// F_0 = -constant so that every block reads sum_i F_i x_i - F_0.
std::string format_sdpa_sparse(const SdpProblem& problem, int decimalDigits = kDefaultDecimalDigits);
void write_sdpa_sparse(const SdpProblem& problem, const std::filesystem::path& path,
                       int decimalDigits = kDefaultDecimalDigits);

/// Parsed sparse SDPA data, values kept as text-exact doubles.
struct SdpaData {
  struct Entry {
    int var;
    int block;  // 1-based
    int row;    // 1-based
    int col;
    long double value;
  };
  int numVariables = 0;
  std::vector<int> blockSizes;
  std::vector<long double> objective;
  std::vector<Entry> entries;

  /// Block b (1-based) of sum_i F_i x_i - F_0 as a dense row-major matrix.
  std::vector<long double> evaluate_block(int block, std::span<const long double> x) const;
};

SdpaData parse_sdpa_sparse(const std::string& text);

enum class SolverStatus { optimal, nearOptimal, infeasible, unbounded, solverError };

std::string_view to_string(SolverStatus status);

struct SolverReport {
  std::optional<HighFloat> primalObjective;
  std::optional<HighFloat> dualObjective;
  SolverStatus status = SolverStatus::solverError;
  std::string phase;
  std::string message;
  std::filesystem::path rawLogPath;
  double wallTime = 0.0;
};

/// Extracts objValPrimal, objValDual and phase.value. A relative duality gap
/// above gapTolerance demotes pdOPT to nearOptimal.
SolverReport parse_solver_output(const std::string& logText,
                                 double gapTolerance = kDefaultGapTolerance);

struct SolverOptions {
  std::string command;  // split into words; empty selects default_solver_command()
  std::filesystem::path paramFile;
  double timeoutSeconds = 3600.0;
  double gapTolerance = kDefaultGapTolerance;
};

/// $COVBOUND_SOLVER if set, else "sdpa_gmp".
std::string default_solver_command();

/// Runs `command -ds PROBLEM -o RESULT [-p PARAM]`. The child's stdout and
/// stderr go to RESULT.log. Never throws for solver-side failures; those come
/// back as status solverError with a diagnostic message.
SolverReport invoke_solver(const std::filesystem::path& problemPath,
                           const std::filesystem::path& resultPath, const SolverOptions& options);

struct BoundResult {
  int q = 2;
  int n = 1;
  int r = 0;
  ObjectiveKind objectiveKind = ObjectiveKind::triple;
  std::vector<std::string> inequalities;
  HighFloat rawValue = 0;
  HighFloat rootValue = 0;
  BigInt integerBound = 0;
  HighFloat safetyMargin = 0;
  SolverStatus status = SolverStatus::solverError;
  double wallTime = 0.0;
};

/// Lower-bound side of the solver objective: the dual value, less the
/// duality gap when the run is only nearOptimal.
HighFloat certified_objective(const SolverReport& report);

/// rawValue = q^scalePower * max(certified + objective constant, 0),
/// rootValue = rawValue^(1/e), integerBound = ceil(rootValue - margin).
/// Throws std::invalid_argument unless status is optimal or nearOptimal.
BoundResult finalize_bound(const SolverReport& report, const SdpProblem& problem,
                           double safetyMargin = kDefaultSafetyMargin);

/// Same arithmetic from an already-certified objective value.
BoundResult finalize_value(const HighFloat& objective, const SdpProblem& problem,
                           double safetyMargin = kDefaultSafetyMargin);

/// e-th root and ceiling step in isolation.
HighFloat root_value(const HighFloat& raw, int e);
BigInt integer_bound(const HighFloat& root, const HighFloat& margin);

/// Renders a high-precision value with `digits` significant digits.
std::string format_high(const HighFloat& v, int digits = 20);

nlohmann::json to_json(const BoundResult& result);

struct FeasibilityReport {
  Rational worstSlack = 0;
  std::string worstConstraint;
  long double minEigenvalue = 0;
  std::string worstBlock;
  bool feasible = false;
};

/// Exact slacks for the linear constraints, extended-precision eigenvalues for
/// the PSD blocks. Throws std::invalid_argument on a size mismatch.
FeasibilityReport certify_feasibility(const SdpProblem& problem,
                                      std::span<const Rational> assignment,
                                      long double eigenTolerance = 1e-9L);

/// Smallest eigenvalue of a dense symmetric matrix (row-major).
long double min_eigenvalue(std::span<const long double> matrix, int dim);

}  // namespace covbound
