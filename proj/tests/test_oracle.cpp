#include "covbound/combinatorics.hpp"
#include "covbound/oracle.hpp"

#include <doctest.h>

using namespace covbound;

TEST_SUITE("oracle") {

TEST_CASE("Hamming space arithmetic") {
  const HammingSpace s(3, 4);
  CHECK(s.size() == 81);
  const int u = s.encode({1, 2, 0, 0});
  const int v = s.encode({1, 0, 2, 0});
  CHECK(s.weight(u) == 2);
  CHECK(s.distance(u, v) == 2);
  CHECK(s.subtract(u, u) == 0);
  CHECK(s.orbit(u, v) == OrbitIndex{2, 2, 1, 1});
  for (const auto& idx : index_set(3, 4)) {
    auto [a, b] = s.representative(idx);
    CHECK(s.orbit(a, b) == idx);
  }
  CHECK_THROWS_AS(HammingSpace(2, 13), std::invalid_argument);
}

TEST_CASE("covering radius") {
  CHECK(covering_radius(make_code(2, 3, {{0, 0, 0}, {1, 1, 1}})) == 1);
  CHECK(covering_radius(whole_space(3, 3)) == 0);
  CHECK(covering_radius(make_code(2, 4, {{0, 0, 0, 0}})) == 4);
  CHECK(covering_radius(read_code_file(COVBOUND_DATA_DIR "/hamming7.code")) == 1);
}

TEST_CASE("code parsing") {
  const auto c = parse_code_text("3 2\n00\n12\n21\n");
  CHECK(c.size() == 3);
  CHECK(c.words[1] == std::vector<int>{1, 2});
  CHECK_THROWS_AS(parse_code_text(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_code_text("2 2\n02\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_code_text("2 2\n011\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_code_text("2 2\n01\n01\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_code_text("2 2\n"), std::invalid_argument);
  CHECK_THROWS(read_code_file("/nonexistent/code"));
}

TEST_CASE("brute-force counts") {
  CHECK(krawtchouk_bruteforce(2, 4, 1, 1) == 2);
  CHECK(krawtchouk_bruteforce(3, 2, 1, 0) == 4);
  CHECK(intersection_number_bruteforce(2, 3, 0, 2, 2) == 3);
  const auto sizes = orbit_sizes_bruteforce(2, 3);
  BigInt total = 0;
  for (const auto& [idx, count] : sizes) total += count;
  CHECK(total == 64);
  CHECK(count_eta_bruteforce(2, 2, binary_index(0, 0, 0), binary_index(1, 1, 1), 1) == 2);
}

TEST_CASE("witness of the repetition code") {
  const auto code = make_code(2, 3, {{0, 0, 0}, {1, 1, 1}});
  const auto x = witness_x(code);
  const VariableTable vars(2, 3);
  REQUIRE(x.size() == static_cast<std::size_t>(vars.size()));
  CHECK(x[static_cast<std::size_t>(vars.id(binary_index(0, 0, 0)))] == Rational(1, 4));
  CHECK(x[static_cast<std::size_t>(vars.id(binary_index(1, 0, 0)))] == 0);
}

TEST_CASE("inequality slack on explicit codes") {
  const auto rep = make_code(2, 3, {{0, 0, 0}, {1, 1, 1}});
  CHECK(verify_inequality_on_code(rep, sphere_covering(2, 3, 1)) == 0);
  CHECK(verify_inequality_on_code(rep, sphere_covering(2, 3, 0)) < 0);
  CHECK(verify_inequality_on_code(whole_space(2, 3), sphere_covering(2, 3, 1)) == 3);
  CHECK_THROWS_AS(verify_inequality_on_code(rep, sphere_covering(2, 4, 1)), std::invalid_argument);
}

TEST_CASE("block diagonalization maps") {
  for (auto [q, n] : {std::pair{2, 4}, std::pair{3, 3}}) {
    const BlockMapReport rep = verify_block_map(q, n, 20, 1e-8);
    CHECK_MESSAGE(rep.passed, "q=" << q << " n=" << n << " " << rep.message);
    CHECK(rep.homomorphismError < 1e-8);
    CHECK(rep.spectrumError < 1e-8);
    CHECK(rep.signMismatches == 0);
  }
}

}  // TEST_SUITE
