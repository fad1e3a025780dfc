#pragma once

// Orchestration shared by the command-line tool and the acceptance tests:
// known-bound fixtures, single-instance runs, batch runs and table rows.

#include "covbound/inequalities.hpp"
#include "covbound/lpbound.hpp"
#include "covbound/sdpmodel.hpp"
#include "covbound/solverio.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace covbound {

struct KnownBound {
  int q = 2;
  int n = 1;
  int r = 0;
  BigInt lower = 0;
  BigInt upper = 0;
  std::optional<std::string> tabulatedValue;  // reference SDP value, as text
  std::string source;

  bool shaded() const { return source == "shaded"; }
};

/// CSV with header q,n,r,bestKnownLower,bestKnownUpper,sdpValue,source.
/// Rows must satisfy lower <= upper and (q, n, r) must be unique.
class KnownBoundsTable {
 public:
  static KnownBoundsTable parse(const std::string& text);
  static KnownBoundsTable load(const std::filesystem::path& path);

  const std::vector<KnownBound>& rows() const { return rows_; }
  const KnownBound* find(int q, int n, int r) const;

 private:
  std::vector<KnownBound> rows_;
};

/// Comma list of sphere, vanwee, file:PATH, or "default".
std::vector<InequalitySet> parse_inequality_list(int q, int n, int r, std::string_view list);

enum class Method { sdp, lp };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

struct InstanceRequest {
  int q = 2;
  int n = 1;
  int r = 0;
  Method method = Method::sdp;
  ObjectiveKind objective = ObjectiveKind::triple;
  std::vector<InequalitySet> ineqs;  // empty selects default_inequalities
};

struct RunConfig {
  SolverOptions solver;
  std::filesystem::path workDir = std::filesystem::temp_directory_path();
  int decimalDigits = kDefaultDecimalDigits;
  double safetyMargin = kDefaultSafetyMargin;
};

struct InstanceOutcome {
  std::optional<BoundResult> result;
  SolverStatus status = SolverStatus::solverError;
  std::string message;
  double wallTime = 0.0;
};

/// Exact LP over the union of the LP families of every inequality; the bound
/// is ceil(optimum) with no margin.
BoundResult lp_bound(int q, int n, int r, std::span<const InequalitySet> ineqs);
LpProblem build_combined_lp(int q, int n, std::span<const InequalitySet> ineqs);

/// Never throws; failures are reported in the outcome.
InstanceOutcome run_instance(const InstanceRequest& request, const RunConfig& config);

/// Runs requests on a pool of `jobs` threads; outcomes follow request order.
std::vector<InstanceOutcome> run_batch(const std::vector<InstanceRequest>& requests,
                                       const RunConfig& config, int jobs);

inline constexpr double kMatchTolerance = 5e-3;

/// UNSOUND when bound > known upper; otherwise match/improve/below against
/// the tabulated value (relative tolerance) or, without one, against the
/// known lower bound. Empty when no row is known.
std::string flag_row(const BoundResult& result, const KnownBound* known,
                     double tolerance = kMatchTolerance);

std::string table_header();
std::string table_row(const InstanceRequest& request, const InstanceOutcome& outcome,
                      const KnownBound* known);

/// One "kind p1 p2 ... = value" line per nonzero coefficient on (q, n).
std::string dump_coefficients(int q, int n);

}  // namespace covbound
