#pragma once

// Delsarte-style linear program for K_q(n,r) on the distance distribution
// x_0..x_n, solved exactly over the rationals.

#include "covbound/inequalities.hpp"
#include "covbound/linear_form.hpp"

#include <string>
#include <vector>

namespace covbound {

/// lhs >= rhs, lhs without constant term.
struct LpConstraint {
  std::string label;
  LinearForm lhs;
  Rational rhs;
};

struct LpProblem {
  int numVars = 0;
  std::vector<LpConstraint> constraints;
  LinearForm objective;  // minimized
};

/// Families (i)-(iii) for k = 0..n, then x_i >= 0 for every i.
LpProblem build_lp(int q, int n, const InequalitySet& ineq);

enum class LpStatus { optimal, infeasible, unbounded };

std::string_view to_string(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rational optimum = 0;
  std::vector<Rational> solution;
};

/// Two-phase tableau simplex over the rationals. Variables are free unless
/// constrained by a row; rows a*x_i >= 0 are taken as sign restrictions.
LpResult solve_lp_exact(const LpProblem& lp);

/// "min c_0 .. c_{N-1}" followed by one "a_0 .. a_{N-1} >= rhs" line per
/// constraint, all values exact rationals.
std::string format_lp_dump(const LpProblem& lp);

}  // namespace covbound
