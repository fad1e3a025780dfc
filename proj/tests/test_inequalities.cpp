#include "covbound/combinatorics.hpp"
#include "covbound/inequalities.hpp"
#include "covbound/oracle.hpp"

#include <doctest.h>

#include <random>

using namespace covbound;

namespace {

std::vector<Rational> ints(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

CodeWitness random_code(int q, int n, int size, std::mt19937& rng) {
  HammingSpace space(q, n);
  std::vector<int> all(static_cast<std::size_t>(space.size()));
  for (int w = 0; w < space.size(); ++w) all[static_cast<std::size_t>(w)] = w;
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<std::vector<int>> words;
  for (int k = 0; k < size; ++k) {
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) d[static_cast<std::size_t>(l)] = space.digit(all[static_cast<std::size_t>(k)], l);
    words.push_back(std::move(d));
  }
  return make_code(q, n, std::move(words));
}

}  // namespace

TEST_SUITE("inequalities") {

TEST_CASE("sphere covering families") {
  CHECK(sphere_covering(2, 3, 1).lambdas() == ints({1, 1, 0, 0}));
  CHECK(sphere_covering(2, 3, 1).beta() == 1);
  CHECK(sphere_covering(3, 6, 2).lambdas() == ints({1, 1, 1, 0, 0, 0, 0}));
  CHECK(sphere_covering(2, 4, 4).lambdas() == ints({1, 1, 1, 1, 1}));
  CHECK(sphere_covering(2, 4, 4).provenance() == InequalityProvenance::sphereCovering);
  CHECK_THROWS_AS(sphere_covering(2, 3, 4), std::invalid_argument);
}

TEST_CASE("van Wee families") {
  auto a = van_wee(12, 3);
  CHECK(a.lambdas() == ints({4, 4, 4, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0}));
  CHECK(a.beta() == 4);
  auto b = van_wee(5, 1);
  CHECK(b.lambdas() == ints({3, 1, 1, 0, 0, 0}));
  CHECK(b.beta() == 3);
  auto c = van_wee(7, 1);
  CHECK(c.lambdas() == ints({4, 1, 1, 0, 0, 0, 0, 0}));
  CHECK(c.beta() == 4);
  CHECK_THROWS_AS(van_wee(4, 4), std::invalid_argument);
}

TEST_CASE("ceiling strengthening") {
  InequalitySet half({Rational(1, 2), Rational(1), Rational(0)}, Rational(3, 2));
  auto s = ceil_strengthen(half);
  CHECK(s.lambdas() == ints({1, 1, 0}));
  CHECK(s.beta() == 2);
  CHECK(s.provenance() == InequalityProvenance::ceilStrengthened);
  auto fixed = sphere_covering(2, 3, 1);
  CHECK(ceil_strengthen(fixed) == fixed);
  InequalitySet third({Rational(0), Rational(7, 3)}, Rational(1));
  auto t = ceil_strengthen(third);
  CHECK(t.lambdas() == ints({0, 3}));
  CHECK(t.beta() == 1);
}

TEST_CASE("invariants are enforced") {
  CHECK_THROWS_AS(InequalitySet({Rational(-1), Rational(1)}, Rational(1)), std::invalid_argument);
  CHECK_THROWS_AS(InequalitySet({Rational(1), Rational(1)}, Rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(InequalitySet({}, Rational(1)), std::invalid_argument);
}

TEST_CASE("plain lower bounds") {
  CHECK(plain_lower_bound(2, 5, sphere_covering(2, 5, 1)) == Rational(16, 3));
  CHECK(ceil(plain_lower_bound(2, 5, sphere_covering(2, 5, 1))) == 6);
  CHECK(plain_lower_bound(3, 4, sphere_covering(3, 4, 1)) == 9);
  CHECK(plain_lower_bound(2, 5, van_wee(5, 1)) == Rational(16, 3));
  CHECK(ceil(plain_lower_bound(2, 5, van_wee(5, 1))) == 6);
  CHECK_THROWS_AS(plain_lower_bound(2, 1, InequalitySet({Rational(0), Rational(0)}, Rational(1))),
                  std::domain_error);
}

TEST_CASE("sphere bound matches the volume formula") {
  for (int q = 2; q <= 5; ++q)
    for (int n = 1; n <= 10; ++n)
      for (int r = 0; r <= n; ++r) {
        BigInt volume = 0;
        for (int i = 0; i <= r; ++i) volume += binomial(n, i) * ipow(q - 1, i);
        Rational expected(ipow(q, n), volume);
        expected.canonicalize();
        REQUIRE(plain_lower_bound(q, n, sphere_covering(q, n, r)) == expected);
      }
}

TEST_CASE("families hold on codes of the right covering radius") {
  std::mt19937 rng(7);
  for (int q = 2; q <= 3; ++q)
    for (int n = 1; n <= (q == 2 ? 6 : 4); ++n) {
      const long total = ipow(q, n).get_si();
      for (int trial = 0; trial < 6; ++trial) {
        const int size = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min<long>(total, 12)));
        const CodeWitness code = random_code(q, n, size, rng);
        const int r = covering_radius(code);
        CHECK(verify_inequality_on_code(code, sphere_covering(q, n, r)) >= 0);
        if (q == 2 && r < n) CHECK(verify_inequality_on_code(code, van_wee(n, r)) >= 0);
      }
    }
  const auto hamming = read_code_file(COVBOUND_DATA_DIR "/hamming7.code");
  CHECK(verify_inequality_on_code(hamming, van_wee(7, 1)) >= 0);
  CHECK(verify_inequality_on_code(whole_space(2, 4), sphere_covering(2, 4, 0)) >= 0);
  const auto rep = make_code(2, 3, {{0, 0, 0}, {1, 1, 1}});
  CHECK(verify_inequality_on_code(rep, sphere_covering(2, 3, 1)) == 0);
}

TEST_CASE("inequality file round trip") {
  const auto v = van_wee(7, 1);
  const std::string text = format_inequality_text(2, v);
  const auto parsed = parse_inequality_text(text);
  CHECK(parsed.q == 2);
  CHECK(parsed.n == 7);
  CHECK(parsed.ineq == v);
  CHECK(parse_inequality_text("3 2\n1/2\n1 1/3 0\n").ineq.beta() == Rational(1, 2));
  CHECK_THROWS_AS(parse_inequality_text("2 2\n1\n1 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_inequality_text("2 2\n"), std::invalid_argument);
}

}  // TEST_SUITE
