#include "covbound/lpbound.hpp"

#include "covbound/combinatorics.hpp"

#include <algorithm>
#include <optional>
#include <type_traits>
#include <sstream>
#include <stdexcept>

namespace covbound {

LpProblem build_lp(int q, int n, const InequalitySet& ineq) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  if (n < 1) throw std::invalid_argument("word length n must be at least 1");
  if (ineq.length() != n) throw std::invalid_argument("inequality length does not match n");
  LpProblem lp;
  lp.numVars = n + 1;
  lp.objective = Rational(ipow(q, static_cast<unsigned long>(n))) * LinearForm::variable(0);

  const auto& lambdas = ineq.lambdas();
  const Rational& beta = ineq.beta();
  std::vector<LpConstraint> fam1, fam2, fam3;
  for (int k = 0; k <= n; ++k) {
    LinearForm f1, f2, f3;
    Rational total = 0;
    for (int i = 0; i <= n; ++i) {
      f1.add_term(i, Rational(krawtchouk(q, n, k, i)));
      Rational w = 0;
      for (int j = 0; j <= n; ++j) {
        if (lambdas[static_cast<std::size_t>(j)] == 0) continue;
        w += lambdas[static_cast<std::size_t>(j)] * Rational(intersection_number(q, n, k, i, j));
      }
      f2.add_term(i, w);
      f3.add_term(i, -w);
      total += w;
    }
    // (ii): sum_i w_i x_i - beta x_0 >= 0
    f2.add_term(0, -beta);
    // (iii): sum_i (x_0 - x_i) w_i >= beta (1 - x_0)  <=>  (total + beta) x_0 - sum_i w_i x_i >= beta
    f3.add_term(0, total + beta);
    const std::string tag = "(k=" + std::to_string(k) + ")";
    fam1.push_back({"krawtchouk" + tag, std::move(f1), Rational(0)});
    fam2.push_back({"cover" + tag, std::move(f2), Rational(0)});
    fam3.push_back({"complement" + tag, std::move(f3), beta});
  }
  for (auto* fam : {&fam1, &fam2, &fam3})
    for (auto& c : *fam) lp.constraints.push_back(std::move(c));
  for (int i = 0; i <= n; ++i) {
    lp.constraints.push_back({"nonneg(x" + std::to_string(i) + ")", LinearForm::variable(i), Rational(0)});
  }
  return lp;
}

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "infeasible";
}

namespace {

// Dense simplex tableau. With T = Rational the tolerance is zero and every
// step is exact; with a floating T it only steers the exact pass.
template <typename T>
class Tableau {
 public:
  Tableau(int rows, int cols, T tol = T(0))
      : a_(static_cast<std::size_t>(rows), std::vector<T>(static_cast<std::size_t>(cols) + 1, T(0))),
        basis_(static_cast<std::size_t>(rows), -1),
        tol_(tol) {}

  int rows() const { return static_cast<int>(a_.size()); }
  int cols() const { return a_.empty() ? 0 : static_cast<int>(a_[0].size()) - 1; }
  T& at(int r, int c) { return a_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]; }
  T& rhs(int r) { return a_[static_cast<std::size_t>(r)].back(); }
  int& basis(int r) { return basis_[static_cast<std::size_t>(r)]; }
  bool zero(const T& v) const { return v <= tol_ && v >= -tol_; }

  void pivot(int r, int c) {
    auto& pr = a_[static_cast<std::size_t>(r)];
    const T p = pr[static_cast<std::size_t>(c)];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < pr.size(); ++j) {
      if (pr[j] == 0) continue;
      pr[j] /= p;
      nz.push_back(j);
    }
    auto eliminate = [&](std::vector<T>& row) {
      const T f = row[static_cast<std::size_t>(c)];
      if (f == 0) return;
      for (std::size_t j : nz) {
        const T delta = f * pr[j];
        row[j] -= delta;
        if (tol_ != 0 && abs(row[j]) <= tol_ * abs(delta)) row[j] = 0;
      }
      row[static_cast<std::size_t>(c)] = 0;
    };
    for (int i = 0; i < rows(); ++i)
      if (i != r) eliminate(a_[static_cast<std::size_t>(i)]);
    if (!reduced_.empty()) eliminate(reduced_);
    basis(r) = c;
  }

  void erase_row(int r) {
    a_.erase(a_.begin() + r);
    basis_.erase(basis_.begin() + r);
  }

  // Pivots basic columns at or above `first` out of the basis where some
  // column below `first` can replace them; rows with no such column are
  // redundant and dropped.
  void drive_out(int first) {
    for (int r = rows() - 1; r >= 0; --r) {
      if (basis(r) < first) continue;
      int col = -1;
      for (int j = 0; j < first && col < 0; ++j)
        if (!zero(at(r, j))) col = j;
      if (col >= 0) pivot(r, col);
      else erase_row(r);
    }
  }

  // Minimizes cost . z over columns [0, activeCols). Dantzig pricing, with
  // Bland's rule while the objective stalls. Returns false when unbounded.
  bool minimize(const std::vector<T>& cost, int activeCols, std::vector<T>* finalReduced = nullptr) {
    reduced_.assign(static_cast<std::size_t>(cols()) + 1, T(0));
    for (int j = 0; j < cols(); ++j) reduced_[static_cast<std::size_t>(j)] = cost[static_cast<std::size_t>(j)];
    for (int i = 0; i < rows(); ++i) {
      const T cb = cost[static_cast<std::size_t>(basis(i))];
      if (cb == 0) continue;
      const auto& row = a_[static_cast<std::size_t>(i)];
      for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j] != 0) reduced_[j] -= cb * row[j];
    }
    bool bland = false;
    int stalled = 0;
    for (;;) {
      int enter = -1;
      for (int j = 0; j < activeCols; ++j) {
        const T& d = reduced_[static_cast<std::size_t>(j)];
        if (d >= -tol_) continue;
        if (enter < 0 || (!bland && d < reduced_[static_cast<std::size_t>(enter)])) enter = j;
        if (bland) break;
      }
      if (enter < 0) {
        if (finalReduced) *finalReduced = reduced_;
        reduced_.clear();
        return true;
      }
      int leave = -1;
      T best(0);
      for (int i = 0; i < rows(); ++i) {
        if (at(i, enter) <= tol_) continue;
        T ratio = rhs(i) / at(i, enter);
        if (leave < 0 || ratio < best || (ratio == best && basis(i) < basis(leave))) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) {
        reduced_.clear();
        return false;
      }
      if (zero(best)) {
        if (++stalled > 20) bland = true;
      } else {
        stalled = 0;
        bland = false;
      }
      pivot(leave, enter);
    }
  }

 private:
  std::vector<std::vector<T>> a_;
  std::vector<int> basis_;
  std::vector<T> reduced_;
  T tol_;
};

bool is_sign_row(const LpConstraint& c) {
  return c.lhs.coeffs().size() == 1 && c.lhs.coeffs().begin()->second > 0 && c.rhs == c.lhs.constant();
}

// Simplex on the rows of min c.x s.t. A x >= b, with x- columns for free
// variables. Used to separate infeasible from unbounded programs.
LpResult solve_primal_form(const LpProblem& lp, const std::vector<bool>& nonneg,
                           const std::vector<const LpConstraint*>& rowsIn) {
  const int nv = lp.numVars;
  std::vector<int> negCol(static_cast<std::size_t>(nv), -1);
  int structuralVars = nv;
  for (int i = 0; i < nv; ++i)
    if (!nonneg[static_cast<std::size_t>(i)]) negCol[static_cast<std::size_t>(i)] = structuralVars++;

  const int m = static_cast<int>(rowsIn.size());
  // Columns: x (nv), x- (free variables), surplus (m), artificial (m).
  const int structural = structuralVars + m;
  const int total = structural + m;
  Tableau<Rational> t(m, total);
  for (int r = 0; r < m; ++r) {
    const auto& c = *rowsIn[static_cast<std::size_t>(r)];
    Rational rhs = c.rhs - c.lhs.constant();
    const bool flip = rhs < 0;
    const Rational sign = flip ? -1 : 1;
    for (const auto& [id, coeff] : c.lhs.coeffs()) {
      t.at(r, id) = sign * coeff;
      if (negCol[static_cast<std::size_t>(id)] >= 0) t.at(r, negCol[static_cast<std::size_t>(id)]) = -sign * coeff;
    }
    t.at(r, structuralVars + r) = -sign;
    t.at(r, structural + r) = 1;
    t.rhs(r) = sign * rhs;
    t.basis(r) = structural + r;
  }

  std::vector<Rational> phase1(static_cast<std::size_t>(total), Rational(0));
  for (int j = structural; j < total; ++j) phase1[static_cast<std::size_t>(j)] = 1;
  t.minimize(phase1, total);
  Rational infeas = 0;
  for (int r = 0; r < t.rows(); ++r) {
    if (t.basis(r) >= structural) infeas += t.rhs(r);
  }
  LpResult result;
  if (infeas != 0) {
    result.status = LpStatus::infeasible;
    return result;
  }
  // Drive zero-level artificials out of the basis; drop redundant rows.
  t.drive_out(structural);

  std::vector<Rational> cost(static_cast<std::size_t>(total), Rational(0));
  for (const auto& [id, coeff] : lp.objective.coeffs()) {
    cost[static_cast<std::size_t>(id)] = coeff;
    if (negCol[static_cast<std::size_t>(id)] >= 0) cost[static_cast<std::size_t>(negCol[static_cast<std::size_t>(id)])] = -coeff;
  }
  if (!t.minimize(cost, structural)) {
    result.status = LpStatus::unbounded;
    return result;
  }
  std::vector<Rational> z(static_cast<std::size_t>(total), Rational(0));
  for (int r = 0; r < t.rows(); ++r) z[static_cast<std::size_t>(t.basis(r))] = t.rhs(r);
  result.solution.assign(static_cast<std::size_t>(nv), Rational(0));
  for (int i = 0; i < nv; ++i) {
    Rational v = z[static_cast<std::size_t>(i)];
    if (negCol[static_cast<std::size_t>(i)] >= 0) v -= z[static_cast<std::size_t>(negCol[static_cast<std::size_t>(i)])];
    result.solution[static_cast<std::size_t>(i)] = v;
  }
  result.optimum = lp.objective.evaluate(std::span<const Rational>(result.solution));
  result.status = LpStatus::optimal;
  return result;
}

// Dual program  max b.y  s.t. A^T y = c on free variables, A^T y <= c on
// sign-restricted ones, y >= 0, as a tableau with one row per variable.
// Columns: y (m), slacks of sign-restricted variables, artificial (nv).
struct DualForm {
  int nv = 0;
  int m = 0;
  int structural = 0;
  int total = 0;
  std::vector<Rational> sign;  // row flips making the right-hand side nonnegative
  std::vector<Rational> cost;  // phase 2: -b on y

  DualForm(const LpProblem& lp, const std::vector<bool>& nonneg, const std::vector<const LpConstraint*>& rowsIn)
      : nv(lp.numVars), m(static_cast<int>(rowsIn.size())), structural(m) {
    for (int i = 0; i < nv; ++i)
      if (nonneg[static_cast<std::size_t>(i)]) ++structural;
    total = structural + nv;
    sign.assign(static_cast<std::size_t>(nv), Rational(1));
    for (const auto& [id, coeff] : lp.objective.coeffs())
      if (coeff < 0) sign[static_cast<std::size_t>(id)] = -1;
    cost.assign(static_cast<std::size_t>(total), Rational(0));
    for (int r = 0; r < m; ++r) {
      const auto& c = *rowsIn[static_cast<std::size_t>(r)];
      cost[static_cast<std::size_t>(r)] = c.lhs.constant() - c.rhs;
    }
  }

  template <typename T>
  Tableau<T> tableau(const LpProblem& lp, const std::vector<bool>& nonneg,
                     const std::vector<const LpConstraint*>& rowsIn, T tol) const {
    auto conv = [](const Rational& v) {
      if constexpr (std::is_same_v<T, Rational>) return v;
      else return to_high_float(v);
    };
    Tableau<T> t(nv, total, tol);
    int slack = m;
    for (int i = 0; i < nv; ++i) {
      auto it = lp.objective.coeffs().find(i);
      if (it != lp.objective.coeffs().end()) t.rhs(i) = conv(sign[static_cast<std::size_t>(i)] * it->second);
      t.at(i, structural + i) = T(1);
      t.basis(i) = structural + i;
      if (nonneg[static_cast<std::size_t>(i)]) {
        t.at(i, slack) = conv(sign[static_cast<std::size_t>(i)]);
        if (sign[static_cast<std::size_t>(i)] > 0) t.basis(i) = slack;
        ++slack;
      }
    }
    for (int r = 0; r < m; ++r)
      for (const auto& [id, coeff] : rowsIn[static_cast<std::size_t>(r)]->lhs.coeffs())
        t.at(id, r) = conv(sign[static_cast<std::size_t>(id)] * coeff);
    return t;
  }
};

// Phase 1 over the artificial columns, skipped when no artificial is basic
// at a nonzero level. False when the dual is infeasible.
template <typename T>
bool run_phase1(Tableau<T>& t, const DualForm& form) {
  auto clean = [&] {
    for (int r = 0; r < t.rows(); ++r)
      if (t.basis(r) >= form.structural && !t.zero(t.rhs(r))) return false;
    return true;
  };
  if (clean()) return true;
  std::vector<T> phase1(static_cast<std::size_t>(form.total), T(0));
  for (int j = form.structural; j < form.total; ++j) phase1[static_cast<std::size_t>(j)] = 1;
  if (!t.minimize(phase1, form.total)) return false;
  return clean();
}

// Optimal basic columns of the dual found in binary floating point on a
// rescaled copy, or nothing if the floating pass gives up.
std::optional<std::vector<int>> float_basis(const DualForm& form, const LpProblem& lp, const std::vector<bool>& nonneg,
                                            const std::vector<const LpConstraint*>& rowsIn) {
  Tableau<HighFloat> t = form.tableau<HighFloat>(lp, nonneg, rowsIn, HighFloat("1e-40"));
  std::vector<HighFloat> cost(static_cast<std::size_t>(form.total), HighFloat(0));
  for (int j = 0; j < form.m; ++j) {
    const HighFloat c = to_high_float(form.cost[static_cast<std::size_t>(j)]);
    HighFloat scale = abs(c);
    for (int i = 0; i < form.nv; ++i) scale = std::max(scale, HighFloat(abs(t.at(i, j))));
    if (scale == 0) continue;
    for (int i = 0; i < form.nv; ++i) t.at(i, j) /= scale;
    cost[static_cast<std::size_t>(j)] = c / scale;
  }
  for (int i = 0; i < form.nv; ++i) {
    HighFloat scale = abs(t.rhs(i));
    for (int j = 0; j < form.structural; ++j) scale = std::max(scale, HighFloat(abs(t.at(i, j))));
    if (scale == 0) continue;
    for (int j = 0; j < form.structural; ++j) t.at(i, j) /= scale;
    t.rhs(i) /= scale;
  }
  if (!run_phase1(t, form)) return std::nullopt;
  t.drive_out(form.structural);
  if (!t.minimize(cost, form.structural)) return std::nullopt;
  std::vector<int> basis;
  for (int r = 0; r < t.rows(); ++r) basis.push_back(t.basis(r));
  return basis;
}

// Exact tableau pivoted into the given basis; nothing if the basis is
// singular or not primal feasible.
std::optional<Tableau<Rational>> crossover(Tableau<Rational> t, const DualForm& form, const std::vector<int>& basis) {
  std::vector<bool> placed(static_cast<std::size_t>(t.rows()), false);
  for (int col : basis) {
    int row = -1;
    for (int r = 0; r < t.rows() && row < 0; ++r)
      if (!placed[static_cast<std::size_t>(r)] && t.basis(r) == col) row = r;
    for (int r = 0; r < t.rows() && row < 0; ++r)
      if (!placed[static_cast<std::size_t>(r)] && t.at(r, col) != 0) row = r;
    if (row < 0) return std::nullopt;
    if (t.basis(row) != col) t.pivot(row, col);
    placed[static_cast<std::size_t>(row)] = true;
  }
  for (int r = 0; r < t.rows(); ++r) {
    if (t.rhs(r) < 0) return std::nullopt;
    if (t.basis(r) >= form.structural && t.rhs(r) != 0) return std::nullopt;
  }
  return t;
}

// Solves the dual exactly and reads the primal solution off the reduced
// costs of the artificial columns. Nothing when the dual is infeasible.
std::optional<LpResult> solve_dual_form(const LpProblem& lp, const std::vector<bool>& nonneg,
                                        const std::vector<const LpConstraint*>& rowsIn) {
  const DualForm form(lp, nonneg, rowsIn);
  const Tableau<Rational> fresh = form.tableau<Rational>(lp, nonneg, rowsIn, Rational(0));
  std::optional<Tableau<Rational>> warm;
  if (auto basis = float_basis(form, lp, nonneg, rowsIn)) warm = crossover(fresh, form, *basis);
  Tableau<Rational> t = warm ? std::move(*warm) : fresh;
  if (!warm && !run_phase1(t, form)) return std::nullopt;
  t.drive_out(form.structural);

  LpResult result;
  std::vector<Rational> reduced;
  if (!t.minimize(form.cost, form.structural, &reduced)) {
    result.status = LpStatus::infeasible;
    return result;
  }
  result.solution.assign(static_cast<std::size_t>(form.nv), Rational(0));
  for (int i = 0; i < form.nv; ++i)
    result.solution[static_cast<std::size_t>(i)] =
        form.sign[static_cast<std::size_t>(i)] * reduced[static_cast<std::size_t>(form.structural + i)];
  result.optimum = lp.objective.evaluate(std::span<const Rational>(result.solution));
  result.status = LpStatus::optimal;
  return result;
}

}  // namespace

LpResult solve_lp_exact(const LpProblem& lp) {
  const int nv = lp.numVars;
  if (lp.objective.max_variable() >= nv) throw std::invalid_argument("objective references unknown variable");
  // Rows of the form a x_i >= 0 become sign restrictions.
  std::vector<bool> nonneg(static_cast<std::size_t>(nv), false);
  std::vector<const LpConstraint*> rowsIn;
  for (const auto& c : lp.constraints) {
    if (c.lhs.max_variable() >= nv) throw std::invalid_argument("constraint references unknown variable");
    if (is_sign_row(c)) nonneg[static_cast<std::size_t>(c.lhs.coeffs().begin()->first)] = true;
    else rowsIn.push_back(&c);
  }
  if (auto res = solve_dual_form(lp, nonneg, rowsIn)) return *res;
  return solve_primal_form(lp, nonneg, rowsIn);
}

std::string format_lp_dump(const LpProblem& lp) {
  std::ostringstream os;
  auto coeff_list = [&](const LinearForm& f) {
    for (int i = 0; i < lp.numVars; ++i) {
      auto it = f.coeffs().find(i);
      if (i) os << ' ';
      os << (it == f.coeffs().end() ? std::string("0") : it->second.get_str());
    }
  };
  os << "min ";
  coeff_list(lp.objective);
  os << '\n';
  for (const auto& c : lp.constraints) {
    coeff_list(c.lhs);
    Rational rhs = c.rhs - c.lhs.constant();
    os << " >= " << rhs.get_str() << '\n';
  }
  return os.str();
}

}  // namespace covbound
