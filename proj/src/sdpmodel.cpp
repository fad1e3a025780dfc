#include "covbound/sdpmodel.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace covbound {

namespace {

// Class key of an orbit: sorted (i, j, D) and t - p.
using ClassKey = std::tuple<int, int, int, int>;

ClassKey class_key(const OrbitIndex& idx) {
  std::array<int, 3> triple{idx.i, idx.j, idx.distance()};
  std::sort(triple.begin(), triple.end());
  return {triple[0], triple[1], triple[2], idx.t - idx.p};
}

// Collects forms, dropping vacuous ones (constant >= 0) and exact duplicates
// while keeping first-emission order.
class ConstraintSink {
 public:
  explicit ConstraintSink(std::vector<LinearConstraint>& out) : out_(out) {}

  void add(std::string label, LinearForm form) {
    if (form.is_constant() && form.constant() >= 0) return;
    if (!seen_.insert(form).second) return;
    out_.push_back(LinearConstraint{std::move(label), std::move(form)});
  }

 private:
  std::vector<LinearConstraint>& out_;
  std::set<LinearForm> seen_;
};

std::vector<OrbitIndex> constraint_sources(const VariableTable& vars, const SdpOptions& options) {
  return options.scope == ConstraintScope::allOrbits ? vars.orbits() : vars.representatives();
}

std::string block_suffix(int q, int a, int k) {
  if (q == 2) return "(k=" + std::to_string(k) + ")";
  return "(a=" + std::to_string(a) + ",k=" + std::to_string(k) + ")";
}

// Block (a, k) with entry (i, j) = sum_{t,p} coefficient * f(i, j, t, p).
// When corner is given the block is bordered by [corner, y^T; y, .] with
// y_i = |S(0,i)| * f(i, i, i, i).
template <typename Fn>
PsdBlock assemble_block(const VariableTable& vars, int a, int k, std::string label, Fn&& f,
                        const LinearForm* corner) {
  const int q = vars.q();
  const int n = vars.n();
  const int first = block_first_row(n, a, k);
  const int last = block_last_row(n, a, k);
  const int offset = corner ? 1 : 0;
  PsdBlock block;
  block.label = std::move(label);
  block.dim = last - first + 1 + offset;
  block.entries.assign(static_cast<std::size_t>(block.dim * block.dim), LinearForm{});
  for (int i = first; i <= last; ++i) {
    for (int j = i; j <= last; ++j) {
      LinearForm entry;
      for (int t = std::max(0, i + j - n); t <= std::min(i, j); ++t) {
        for (int p = q == 2 ? t : 0; p <= t; ++p) {
          OrbitIndex idx{i, j, t, p};
          BigInt c = block_coefficient(q, n, a, k, idx);
          if (c == 0) continue;
          entry.add(f(idx), Rational(c));
        }
      }
      block.at(i - first + offset, j - first + offset) = entry;
      block.at(j - first + offset, i - first + offset) = entry;
    }
  }
  if (corner) {
    block.at(0, 0) = *corner;
    for (int i = first; i <= last; ++i) {
      LinearForm y = Rational(sphere_size(q, n, i)) * f(OrbitIndex{i, i, i, i});
      block.at(0, i - first + 1) = y;
      block.at(i - first + 1, 0) = y;
    }
  }
  return block;
}

}  // namespace

VariableTable::VariableTable(int q, int n) : q_(q), n_(n), orbits_(index_set(q, n)) {
  std::map<ClassKey, int> ids;
  orbit_ids_.reserve(orbits_.size());
  for (const auto& idx : orbits_) {
    auto [it, inserted] = ids.try_emplace(class_key(idx), static_cast<int>(representatives_.size()));
    if (inserted) {
      representatives_.push_back(idx);
      members_.emplace_back();
    }
    members_[static_cast<std::size_t>(it->second)].push_back(idx);
    orbit_ids_.push_back(it->second);
  }
}

int VariableTable::id(const OrbitIndex& idx) const {
  auto it = std::lower_bound(orbits_.begin(), orbits_.end(), idx);
  if (it == orbits_.end() || *it != idx) {
    throw std::invalid_argument("orbit index " + to_string(idx, q_) + " is not in I(" +
                                std::to_string(q_) + "," + std::to_string(n_) + ")");
  }
  return orbit_ids_[static_cast<std::size_t>(it - orbits_.begin())];
}

std::string VariableTable::name(int id) const { return "x" + to_string(representative(id), q_); }

int canonicalize(int q, int n, const OrbitIndex& idx) {
  if (!in_index_set(q, n, idx)) {
    throw std::invalid_argument("orbit index " + to_string(idx, q) + " is not in I(" +
                                std::to_string(q) + "," + std::to_string(n) + ")");
  }
  return VariableTable(q, n).id(idx);
}

bool PsdBlock::is_symmetric() const {
  if (entries.size() != static_cast<std::size_t>(dim * dim)) return false;
  for (int r = 0; r < dim; ++r)
    for (int c = r + 1; c < dim; ++c)
      if (!(at(r, c) == at(c, r))) return false;
  return true;
}

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::triple: return "triple";
    case ObjectiveKind::pair: return "pair";
    case ObjectiveKind::single: return "single";
  }
  return "triple";
}

ObjectiveKind parse_objective_kind(std::string_view text) {
  if (text == "triple") return ObjectiveKind::triple;
  if (text == "pair") return ObjectiveKind::pair;
  if (text == "single") return ObjectiveKind::single;
  throw std::invalid_argument("unknown objective kind '" + std::string(text) + "'");
}

int exponent(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::triple: return 3;
    case ObjectiveKind::pair: return 2;
    case ObjectiveKind::single: return 1;
  }
  return 3;
}

void SdpProblem::validate() const {
  const int nv = num_variables();
  auto check = [&](const LinearForm& f, const std::string& where) {
    if (f.max_variable() >= nv) throw std::logic_error(where + " references an unknown variable");
  };
  for (const auto& b : psdBlocks) {
    if (!b.is_symmetric()) throw std::logic_error("block " + b.label + " is not symmetric");
    for (const auto& e : b.entries) check(e, "block " + b.label);
  }
  for (const auto& c : linearConstraints) check(c.form, "constraint " + c.label);
  check(objective, "objective");
}

std::vector<LinearConstraint> basic_linear_constraints(const VariableTable& vars,
                                                       const SdpOptions& options) {
  std::vector<LinearConstraint> out;
  ConstraintSink sink(out);
  const LinearForm x00 = vars.x_pair(0);
  for (const auto& idx : constraint_sources(vars, options)) {
    const std::string tag = to_string(idx, vars.q());
    const LinearForm x = vars.x(idx);
    const LinearForm xd = vars.x_pair(idx.distance());
    sink.add("nonneg" + tag, x);
    sink.add("diag" + tag, vars.x_diag(idx.i) - x);
    sink.add("pairlow" + tag, x - vars.x_pair(idx.i) - xd + x00);
    sink.add("pairhigh" + tag, xd - x);
  }
  return out;
}

std::vector<PsdBlock> psd_blocks(const VariableTable& vars) {
  std::vector<PsdBlock> out;
  const int q = vars.q();
  const LinearForm corner = LinearForm(Rational(1)) - vars.x_pair(0);
  auto f1 = [&](const OrbitIndex& idx) { return vars.x(idx); };
  auto f2 = [&](const OrbitIndex& idx) { return vars.x_pair(idx.distance()) - vars.x(idx); };
  for (auto [a, k] : block_labels(q, vars.n())) {
    const std::string suffix = block_suffix(q, a, k);
    out.push_back(assemble_block(vars, a, k, "moment" + suffix, f1, nullptr));
    out.push_back(assemble_block(vars, a, k, "complement" + suffix, f2,
                                 k == 0 ? &corner : nullptr));
  }
  return out;
}

std::vector<PsdBlock> lasserre_blocks(const VariableTable& vars, const InequalitySet& ineq) {
  const int q = vars.q();
  const int n = vars.n();
  if (ineq.length() != n) throw std::invalid_argument("inequality length does not match n");
  const auto& lambdas = ineq.lambdas();

  std::map<OrbitIndex, LinearForm> cache;
  auto f = [&](const OrbitIndex& idx) -> LinearForm {
    auto it = cache.find(idx);
    if (it != cache.end()) return it->second;
    LinearForm form = (-ineq.beta()) * vars.x_pair(idx.distance());
    for (const auto& term : eta_distribution(q, n, idx)) {
      const Rational& l = lambdas[static_cast<std::size_t>(term.d)];
      if (l == 0) continue;
      form.add_term(vars.id(term.dst), l * Rational(term.count));
    }
    cache.emplace(idx, form);
    return form;
  };

  Rational weight = 0;
  for (int i = 0; i <= n; ++i) {
    weight += Rational(sphere_size(q, n, i)) * lambdas[static_cast<std::size_t>(i)];
  }
  LinearForm corner = weight * vars.x_pair(0);
  corner.add_constant(-ineq.beta());

  std::vector<PsdBlock> out;
  for (auto [a, k] : block_labels(q, n)) {
    out.push_back(assemble_block(vars, a, k, "lasserre[" + ineq.name() + "]" + block_suffix(q, a, k),
                                 f, k == 0 ? &corner : nullptr));
  }
  return out;
}

std::vector<LinearConstraint> matrix_cut_constraints(const VariableTable& vars,
                                                     const InequalitySet& ineq,
                                                     const SdpOptions& options) {
  const int q = vars.q();
  const int n = vars.n();
  if (ineq.length() != n) throw std::invalid_argument("inequality length does not match n");
  const auto& lambdas = ineq.lambdas();
  const Rational& beta = ineq.beta();
  const LinearForm x00 = vars.x_pair(0);
  const LinearForm one(Rational(1));

  std::vector<LinearConstraint> out;
  ConstraintSink sink(out);
  for (const auto& src : constraint_sources(vars, options)) {
    std::map<OrbitIndex, Rational> weights;
    for (const auto& term : alpha4_distribution(q, n, src)) {
      const Rational& l = lambdas[static_cast<std::size_t>(term.d)];
      if (l == 0) continue;
      weights[term.w] += l * Rational(term.count);
    }
    const LinearForm xi0 = vars.x_pair(src.i);
    LinearForm f1 = (-beta) * xi0;
    LinearForm f2 = (-beta) * (x00 - xi0);
    LinearForm f3 = f2;
    LinearForm f4 = (-beta) * (one - Rational(2) * x00 + xi0);
    for (const auto& [w, lw] : weights) {
      if (lw == 0) continue;
      const LinearForm xw = vars.x(w);
      const LinearForm xj = vars.x_pair(w.j);
      const LinearForm xd = vars.x_pair(w.distance());
      f1.add(xw, lw);
      f2.add(xj - xw, lw);
      f3.add(xd - xw, lw);
      f4.add(x00 - xj - xd + xw, lw);
    }
    const std::string tag = "[" + ineq.name() + "]" + to_string(src, q);
    sink.add("cut1" + tag, std::move(f1));
    sink.add("cut2" + tag, std::move(f2));
    sink.add("cut3" + tag, std::move(f3));
    sink.add("cut4" + tag, std::move(f4));
  }
  return out;
}

LinearForm objective_form(const VariableTable& vars, ObjectiveKind kind) {
  const int q = vars.q();
  const int n = vars.n();
  LinearForm obj;
  switch (kind) {
    case ObjectiveKind::triple:
      for (const auto& idx : vars.orbits()) obj.add_term(vars.id(idx), Rational(orbit_size(q, n, idx)));
      break;
    case ObjectiveKind::pair:
      for (int i = 0; i <= n; ++i) obj.add(vars.x_diag(i), Rational(sphere_size(q, n, i)));
      break;
    case ObjectiveKind::single:
      obj = vars.x_pair(0);
      break;
  }
  return obj;
}

SdpProblem build_sdp(int q, int n, int r, std::span<const InequalitySet> ineqs,
                     ObjectiveKind kind, const SdpOptions& options) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  if (n < 1) throw std::invalid_argument("word length n must be at least 1");
  if (r < 0 || r > n) throw std::invalid_argument("covering radius must satisfy 0 <= r <= n");
  for (const auto& ineq : ineqs) {
    if (ineq.length() != n) {
      throw std::invalid_argument("inequality " + ineq.name() + " has length " +
                                  std::to_string(ineq.length()) + ", expected " + std::to_string(n));
    }
  }

  SdpProblem prob;
  prob.q = q;
  prob.n = n;
  prob.r = r;
  prob.variables = VariableTable(q, n);
  const VariableTable& vars = prob.variables;
  prob.linearConstraints = basic_linear_constraints(vars, options);
  prob.psdBlocks = psd_blocks(vars);
  for (const auto& ineq : ineqs) {
    auto blocks = lasserre_blocks(vars, ineq);
    std::move(blocks.begin(), blocks.end(), std::back_inserter(prob.psdBlocks));
    auto cuts = matrix_cut_constraints(vars, ineq, options);
    std::move(cuts.begin(), cuts.end(), std::back_inserter(prob.linearConstraints));
    prob.inequalityNames.push_back(ineq.name());
  }
  prob.objective = objective_form(vars, kind);
  prob.objectiveKind = kind;
  prob.scalePower = n;
  return prob;
}

std::vector<InequalitySet> default_inequalities(int q, int n, int r) {
  std::vector<InequalitySet> out;
  out.push_back(sphere_covering(q, n, r));
  if (q == 2 && r < n) out.push_back(van_wee(n, r));
  return out;
}

}  // namespace covbound
