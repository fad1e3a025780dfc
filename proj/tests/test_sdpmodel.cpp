#include "covbound/oracle.hpp"
#include "covbound/sdpmodel.hpp"
#include "covbound/solverio.hpp"

#include <doctest.h>

#include <algorithm>

using namespace covbound;

namespace {

bool has_form(const std::vector<LinearConstraint>& cs, const LinearForm& f) {
  return std::any_of(cs.begin(), cs.end(), [&](const LinearConstraint& c) { return c.form == f; });
}

const PsdBlock& find_block(const SdpProblem& p, const std::string& prefix, const std::string& suffix) {
  for (const auto& b : p.psdBlocks)
    if (b.label.rfind(prefix, 0) == 0 && b.label.size() >= suffix.size() &&
        b.label.compare(b.label.size() - suffix.size(), suffix.size(), suffix) == 0)
      return b;
  throw std::runtime_error("no block " + prefix + "..." + suffix);
}

std::vector<int> block_dims(const std::vector<PsdBlock>& blocks, const std::string& prefix) {
  std::vector<int> out;
  for (const auto& b : blocks)
    if (b.label.rfind(prefix, 0) == 0) out.push_back(b.dim);
  return out;
}

}  // namespace

TEST_SUITE("sdpmodel") {

TEST_CASE("canonical classes") {
  const int a = canonicalize(2, 3, binary_index(1, 0, 0));
  CHECK(canonicalize(2, 3, binary_index(0, 1, 0)) == a);
  CHECK(canonicalize(2, 3, binary_index(1, 1, 1)) == a);
  const VariableTable vars(2, 3);
  const int zero = vars.id(binary_index(0, 0, 0));
  CHECK(vars.members(zero).size() == 1);
  CHECK(canonicalize(3, 2, OrbitIndex{1, 1, 1, 1}) == canonicalize(3, 2, OrbitIndex{1, 0, 0, 0}));
  CHECK(canonicalize(3, 2, OrbitIndex{1, 1, 1, 0}) != canonicalize(3, 2, OrbitIndex{1, 0, 0, 0}));
  CHECK_THROWS_AS(vars.id(binary_index(2, 2, 0)), std::invalid_argument);
  for (int id = 0; id < vars.size(); ++id) {
    const auto& members = vars.members(id);
    CHECK(vars.representative(id) == *std::min_element(members.begin(), members.end()));
  }
}

TEST_CASE("basic linear constraints") {
  const VariableTable vars(2, 2);
  const auto cs = basic_linear_constraints(vars);
  const LinearForm x110 = vars.x(binary_index(1, 1, 0));
  CHECK(has_form(cs, vars.x(binary_index(2, 0, 0)) - x110));
  CHECK(has_form(cs, x110 - Rational(2) * vars.x(binary_index(1, 0, 0)) + vars.x(binary_index(0, 0, 0))));
  for (const auto& c : cs) CHECK_FALSE(c.form.is_constant());

  SdpOptions reps;
  reps.scope = ConstraintScope::representatives;
  for (int q = 2; q <= 3; ++q)
    for (int n = 1; n <= 5; ++n) {
      const VariableTable t(q, n);
      CHECK(basic_linear_constraints(t, reps).size() <= 4 * static_cast<std::size_t>(t.size()));
    }
}

TEST_CASE("pure block sizes") {
  const VariableTable b4(2, 4);
  const auto blocks = psd_blocks(b4);
  CHECK(block_dims(blocks, "moment") == std::vector<int>{5, 3, 1});
  CHECK(block_dims(blocks, "complement") == std::vector<int>{6, 3, 1});

  const int n = 2;
  std::vector<int> expected;
  for (int k = 0; k <= 2 * n; ++k)
    for (int a = 0; a <= k; ++a)
      if (k <= n + a - k) expected.push_back(n + a - 2 * k + 1 + (k == 0 ? 1 : 0));
  std::sort(expected.begin(), expected.end());
  auto got = block_dims(psd_blocks(VariableTable(3, n)), "complement");
  std::sort(got.begin(), got.end());
  CHECK(got == expected);
}

TEST_CASE("trivial moment block at a constant assignment") {
  for (int q = 2; q <= 3; ++q)
    for (int n = 1; n <= 4; ++n) {
      const VariableTable vars(q, n);
      const auto blocks = psd_blocks(vars);
      const PsdBlock& m = blocks.front();
      REQUIRE(m.dim == n + 1);
      const std::vector<Rational> x(static_cast<std::size_t>(vars.size()), Rational(5, 7));
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
          const Rational expected = Rational(5, 7) * Rational(binomial(n, i) * binomial(n, j) * ipow(q - 1, i + j));
          CHECK(m.at(i, j).evaluate(std::span<const Rational>(x)) == expected);
        }
    }
}

TEST_CASE("Lasserre corners") {
  const auto p2 = build_sdp(2, 3, 1, std::vector<InequalitySet>{sphere_covering(2, 3, 1)}, ObjectiveKind::triple);
  const LinearForm x00 = p2.variables.x_pair(0);
  CHECK(find_block(p2, "lasserre", "(k=0)").at(0, 0) == Rational(4) * x00 - LinearForm(Rational(1)));
  const auto p3 = build_sdp(3, 4, 1, std::vector<InequalitySet>{sphere_covering(3, 4, 1)}, ObjectiveKind::triple);
  CHECK(find_block(p3, "lasserre", "(a=0,k=0)").at(0, 0) ==
        Rational(9) * p3.variables.x_pair(0) - LinearForm(Rational(1)));
}

TEST_CASE("one Lasserre family per inequality") {
  const auto p = build_sdp(2, 4, 1, default_inequalities(2, 4, 1), ObjectiveKind::triple);
  long pure = 0, lasserre = 0;
  for (const auto& b : p.psdBlocks) {
    if (b.label.rfind("lasserre", 0) == 0) ++lasserre;
    else ++pure;
  }
  CHECK(pure == 6);
  CHECK(lasserre == 6);
  CHECK(p.inequalityNames.size() == 2);
}

TEST_CASE("matrix cuts") {
  const VariableTable vars(2, 4);
  const auto ineq = sphere_covering(2, 4, 1);
  SdpOptions reps;
  reps.scope = ConstraintScope::representatives;
  CHECK(matrix_cut_constraints(vars, ineq, reps).size() <= 4 * static_cast<std::size_t>(vars.size()));
  std::set<int> pairIds;
  for (int d = 0; d <= 4; ++d) pairIds.insert(vars.id(binary_index(d, 0, 0)));
  bool seen = false;
  for (const auto& c : matrix_cut_constraints(vars, ineq)) {
    if (c.label.rfind("cut1", 0) != 0 || c.label.find("(0,0,0)") == std::string::npos) continue;
    seen = true;
    for (const auto& [id, coeff] : c.form.coeffs()) CHECK(pairIds.count(id) == 1);
  }
  CHECK(seen);
}

TEST_CASE("objective coefficients") {
  const VariableTable vars(2, 1);
  const LinearForm f = objective_form(vars, ObjectiveKind::triple);
  CHECK(f.coeffs().at(vars.id(binary_index(0, 0, 0))) == 1);
  CHECK(f.coeffs().at(vars.id(binary_index(1, 0, 0))) == 3);
  CHECK(f.coeffs().size() == 2);
  CHECK(exponent(ObjectiveKind::triple) == 3);
  CHECK(exponent(ObjectiveKind::pair) == 2);
  CHECK(exponent(ObjectiveKind::single) == 1);
  CHECK(parse_objective_kind("pair") == ObjectiveKind::pair);
  CHECK_THROWS_AS(parse_objective_kind("quad"), std::invalid_argument);
}

TEST_CASE("whole-space witness gives |C| for every objective") {
  for (int q = 2; q <= 3; ++q)
    for (int n = 1; n <= 3; ++n) {
      const auto x = witness_x(whole_space(q, n));
      for (auto kind : {ObjectiveKind::triple, ObjectiveKind::pair, ObjectiveKind::single}) {
        const auto p = build_sdp(q, n, 0, std::vector<InequalitySet>{sphere_covering(q, n, 0)}, kind);
        const Rational v = p.objective.evaluate(std::span<const Rational>(x));
        const BoundResult b = finalize_value(to_high_float(v), p, 1e-9);
        CHECK(b.integerBound == ipow(q, n));
        CHECK(abs(b.rootValue - HighFloat(ipow(q, n).get_str())) < HighFloat("1e-30"));
      }
    }
}

TEST_CASE("witness assignments are feasible") {
  for (int q = 2; q <= 3; ++q)
    for (int n = 1; n <= (q == 2 ? 4 : 3); ++n) {
      const auto x = witness_x(whole_space(q, n));
      for (int r = 0; r <= std::min(n, 2); ++r) {
        const auto p = build_sdp(q, n, r, default_inequalities(q, n, r), ObjectiveKind::triple);
        const auto rep = certify_feasibility(p, x);
        CHECK_MESSAGE(rep.feasible, "q=" << q << " n=" << n << " r=" << r << " " << rep.worstConstraint
                                         << " " << rep.worstBlock);
      }
    }
}

TEST_CASE("blocks are symmetric and reference known variables") {
  for (int q = 2; q <= 4; ++q)
    for (int n = 1; n <= 4; ++n) {
      const int r = std::min(1, n - 1);
      const auto p = build_sdp(q, n, r, default_inequalities(q, n, r), ObjectiveKind::triple);
      CHECK_NOTHROW(p.validate());
      for (const auto& b : p.psdBlocks) CHECK(b.is_symmetric());
      CHECK(p.scalePower == n);
    }
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(build_sdp(2, 3, 4, std::vector<InequalitySet>{}, ObjectiveKind::triple), std::invalid_argument);
  CHECK_THROWS_AS(build_sdp(1, 3, 1, std::vector<InequalitySet>{}, ObjectiveKind::triple), std::invalid_argument);
  CHECK_THROWS_AS(build_sdp(2, 3, 1, std::vector<InequalitySet>{sphere_covering(2, 4, 1)}, ObjectiveKind::triple),
                  std::invalid_argument);
}

}  // TEST_SUITE
