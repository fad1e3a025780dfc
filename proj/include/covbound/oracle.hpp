#pragma once

// Brute-force ground truth on small Hamming spaces. Everything here
// enumerates words explicitly and is capped at desk scale: q^n <= 4096 for
// counting and q^n <= 1024 for eigenvalue checks. Exceeding a cap throws
// std::invalid_argument.

#include "covbound/combinatorics.hpp"
#include "covbound/inequalities.hpp"
#include "covbound/sdpmodel.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace covbound {

inline constexpr long kCountingCap = 4096;
inline constexpr long kEigenCap = 1024;

/// Words of [q]^n encoded base q, position l carrying weight q^l.
class HammingSpace {
 public:
  HammingSpace(int q, int n, long cap = kCountingCap);

  int q() const { return q_; }
  int n() const { return n_; }
  int size() const { return size_; }

  int digit(int word, int pos) const {
    return digits_[static_cast<std::size_t>(word) * static_cast<std::size_t>(n_) +
                   static_cast<std::size_t>(pos)];
  }
  int weight(int word) const { return weights_[static_cast<std::size_t>(word)]; }
  int distance(int a, int b) const;
  /// Coordinatewise a - b mod q.
  int subtract(int a, int b) const;
  int encode(const std::vector<int>& digits) const;

  /// (wt u, wt v, |supp u ∩ supp v|, #{l : u_l = v_l != 0}).
  OrbitIndex orbit(int u, int v) const;

  /// Positional representative of an orbit: u = 1^i 0^(n-i); v equals u on
  /// its first p positions, takes value 2 on the next t - p, and has j - t
  /// further ones right after supp u.
  std::pair<int, int> representative(const OrbitIndex& idx) const;

 private:
  int q_;
  int n_;
  int size_;
  std::vector<std::uint8_t> digits_;
  std::vector<int> weights_;
};

struct CodeWitness {
  int q = 2;
  int n = 1;
  std::vector<std::vector<int>> words;

  std::size_t size() const { return words.size(); }
};

/// Validates nonempty, distinct words of length n over [q].
CodeWitness make_code(int q, int n, std::vector<std::vector<int>> words);
CodeWitness parse_code_text(const std::string& text);
CodeWitness read_code_file(const std::filesystem::path& path);
CodeWitness whole_space(int q, int n);

int covering_radius(const CodeWitness& code);

BigInt count_eta_bruteforce(int q, int n, const OrbitIndex& src, const OrbitIndex& dst, int d);
BigInt count_alpha4_bruteforce(int q, int n, const OrbitIndex& src, const OrbitIndex& w, int d);

/// Full brute-force distributions, comparable with eta_distribution and
/// alpha4_distribution.
std::vector<EtaTerm> eta_distribution_bruteforce(int q, int n, const OrbitIndex& src);
std::vector<Alpha4Term> alpha4_distribution_bruteforce(int q, int n, const OrbitIndex& src);

BigInt intersection_number_bruteforce(int q, int n, int k, int i, int j);
/// Character sum over words of weight k; rounded to the nearest integer.
BigInt krawtchouk_bruteforce(int q, int n, int k, int i);
/// Number of pairs in every orbit, by enumeration of all pairs.
std::map<OrbitIndex, BigInt> orbit_sizes_bruteforce(int q, int n);

/// Triple-count assignment x = lambda / (q^n gamma), indexed by the variable
/// ids of VariableTable(q, n). Throws std::logic_error if two members of one
/// class receive different values.
std::vector<Rational> witness_x(const CodeWitness& code);

/// min over u of sum_i lambda_i A_i(u) - beta.
Rational verify_inequality_on_code(const CodeWitness& code, const InequalitySet& ineq);

struct BlockMapReport {
  bool passed = false;
  double homomorphismError = 0;  // max |phi(A)phi(B) - phi(AB)|
  double spectrumError = 0;      // max |lambda_min(full) - lambda_min(blocks)|
  int signMismatches = 0;        // emitted-scale blocks vs full matrix
  double borderError = 0;
  double identityError = 0;
  std::string message;
};

BlockMapReport verify_block_map(int q, int n, int trials, double tolerance,
                                std::uint64_t seed = 20240601);

struct SuiteReport {
  bool passed = true;
  long checks = 0;
  std::string firstFailure;

  void fail(const std::string& what) {
    if (passed) firstFailure = what;
    passed = false;
  }
};

/// Oracle equality of eta, alpha4, intersection numbers, Krawtchouk values and
/// orbit sizes on one (q, n), plus the eta/alpha4 correspondence for q == 2.
SuiteReport verify_coefficients(int q, int n);

}  // namespace covbound
