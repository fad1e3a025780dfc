#pragma once

// Assembly of the symmetry-reduced covering-code SDP over variables
// x_{i,j}^{t[,p]}, one per symmetry class of I(q,n). All data is exact; the
// irrational block normalizations are removed by positive diagonal
// congruences, so PSD-ness of every emitted block is equivalent to PSD-ness
// of the normalized one.

#include "covbound/combinatorics.hpp"
#include "covbound/inequalities.hpp"
#include "covbound/linear_form.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace covbound {

class VariableTable {
 public:
  VariableTable(int q, int n);

  int q() const { return q_; }
  int n() const { return n_; }
  int size() const { return static_cast<int>(representatives_.size()); }

  /// Canonical representative (lexicographic minimum of its class) of id.
  const OrbitIndex& representative(int id) const {
    return representatives_.at(static_cast<std::size_t>(id));
  }
  const std::vector<OrbitIndex>& representatives() const { return representatives_; }
  /// All members of I(q,n) sharing this id, in lexicographic order.
  const std::vector<OrbitIndex>& members(int id) const {
    return members_.at(static_cast<std::size_t>(id));
  }
  /// Every element of I(q,n), lexicographic.
  const std::vector<OrbitIndex>& orbits() const { return orbits_; }

  /// Throws std::invalid_argument when idx is not in I(q,n).
  int id(const OrbitIndex& idx) const;

  LinearForm x(const OrbitIndex& idx) const { return LinearForm::variable(id(idx)); }
  /// x_{D,0}^{0[,0]}: the pair variable for Hamming distance D.
  LinearForm x_pair(int distance) const { return x(OrbitIndex{distance, 0, 0, 0}); }
  /// x_{i,i}^{i[,i]}: the diagonal variable of weight i.
  LinearForm x_diag(int i) const { return x(OrbitIndex{i, i, i, i}); }

  std::string name(int id) const;

 private:
  int q_;
  int n_;
  std::vector<OrbitIndex> orbits_;
  std::vector<int> orbit_ids_;  // parallel to orbits_
  std::vector<OrbitIndex> representatives_;
  std::vector<std::vector<OrbitIndex>> members_;
};

/// Variable id of idx in the canonical table for (q, n).
int canonicalize(int q, int n, const OrbitIndex& idx);

struct PsdBlock {
  std::string label;
  int dim = 0;
  std::vector<LinearForm> entries;  // row-major, dim * dim

  const LinearForm& at(int r, int c) const {
    return entries[static_cast<std::size_t>(r * dim + c)];
  }
  LinearForm& at(int r, int c) { return entries[static_cast<std::size_t>(r * dim + c)]; }
  bool is_symmetric() const;
};

/// form >= 0
struct LinearConstraint {
  std::string label;
  LinearForm form;
};

enum class ObjectiveKind { triple, pair, single };

std::string_view to_string(ObjectiveKind kind);
ObjectiveKind parse_objective_kind(std::string_view text);
/// 3, 2 and 1: the power of |C| the objective bounds.
int exponent(ObjectiveKind kind);

struct SdpProblem {
  int q = 2;
  int n = 1;
  int r = 0;
  VariableTable variables{2, 1};
  std::vector<PsdBlock> psdBlocks;
  std::vector<LinearConstraint> linearConstraints;
  LinearForm objective;  // minimized
  ObjectiveKind objectiveKind = ObjectiveKind::triple;
  int scalePower = 1;  // true objective = q^scalePower * emitted objective
  std::vector<std::string> inequalityNames;

  int num_variables() const { return variables.size(); }
  /// Throws std::logic_error if a block is asymmetric or a form references an
  /// unknown variable.
  void validate() const;
};

/// Orbit-scope of the linear constraint families. `allOrbits` states each
/// inequality for every element of I(q,n) (duplicates removed), which is the
/// literal statement; `representatives` states it for the class
/// representative only.
enum class ConstraintScope { allOrbits, representatives };

struct SdpOptions {
  ConstraintScope scope = ConstraintScope::allOrbits;
};

std::vector<LinearConstraint> basic_linear_constraints(const VariableTable& vars,
                                                       const SdpOptions& options = {});

std::vector<PsdBlock> psd_blocks(const VariableTable& vars);

std::vector<PsdBlock> lasserre_blocks(const VariableTable& vars, const InequalitySet& ineq);

std::vector<LinearConstraint> matrix_cut_constraints(const VariableTable& vars,
                                                     const InequalitySet& ineq,
                                                     const SdpOptions& options = {});

LinearForm objective_form(const VariableTable& vars, ObjectiveKind kind);

/// Every ineq must be valid for all codes of covering radius r.
SdpProblem build_sdp(int q, int n, int r, std::span<const InequalitySet> ineqs,
                     ObjectiveKind kind, const SdpOptions& options = {});

/// Default families: sphere covering plus van Wee for q == 2 (r < n), sphere
/// covering alone for q >= 3.
std::vector<InequalitySet> default_inequalities(int q, int n, int r);

}  // namespace covbound
