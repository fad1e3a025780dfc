#pragma once

// Exact coefficients for the symmetry-reduced covering-code programs. Every
// function here is pure; results are GMP integers/rationals and never touch
// floating point.

#include "covbound/inequalities.hpp"
#include "covbound/numeric.hpp"

#include <compare>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace covbound {

/// Orbit of a word pair (u, v) under the stabilizer of the zero word:
/// i = wt(u), j = wt(v), t = |supp u ∩ supp v|, p = #{l : u_l = v_l != 0}.
/// Binary indices carry p == t.
struct OrbitIndex {
  int i = 0;
  int j = 0;
  int t = 0;
  int p = 0;

  /// Hamming distance between the two words of the pair.
  int distance() const { return i + j - t - p; }

  auto operator<=>(const OrbitIndex&) const = default;
  bool operator==(const OrbitIndex&) const = default;
};

OrbitIndex binary_index(int i, int j, int t);

/// "(i,j,t)" for q == 2 and "(i,j,t,p)" otherwise.
std::string to_string(const OrbitIndex& idx, int q);

/// Membership in I(q,n). For q == 2 this additionally requires p == t.
bool in_index_set(int q, int n, const OrbitIndex& idx);

/// All of I(q,n) in lexicographic order of (i,j,t,p). This ordering is the
/// variable numbering contract of the SDP emitter.
std::vector<OrbitIndex> index_set(int q, int n);

enum class CoefficientKind {
  krawtchouk,
  intersection,
  betaBinary,
  alphaNonbinary,
  etaBinary,
  alpha4Binary,
  etaQary,
  alpha4Qary,
};

std::string_view to_string(CoefficientKind kind);

struct CoefficientKey {
  CoefficientKind kind;
  std::vector<int> parameters;

  auto operator<=>(const CoefficientKey&) const = default;
  bool operator==(const CoefficientKey&) const = default;
};

/// C(n,k) with C(n,k) = 0 when k < 0, k > n or n < 0.
BigInt binomial(long n, long k);

/// n! / (prod parts! * (n - sum parts)!), or 0 when a part is negative or the
/// parts exceed n.
BigInt multinomial(long n, std::span<const long> parts);
BigInt multinomial(long n, std::initializer_list<long> parts);

BigInt krawtchouk(int q, int n, int k, int i);

/// alpha_{i,j}^k: number of v with wt(v) = i and d(u,v) = j for a fixed u of
/// weight k.
BigInt intersection_number(int q, int n, int k, int i, int j);

/// Schrijver's beta_{i,j,k}^t for the binary Hamming cube of length n.
BigInt beta_binary(int n, int i, int j, int k, int t);

/// alpha(i,j,t,p,a,k) multiplied by (q-1)^{(i+j)/2}, which makes it an integer.
BigInt alpha_nonbinary_scaled(int q, int n, int i, int j, int t, int p, int a, int k);

/// Number of words w of weight d with orbit(u - w, v - w) == dst, where
/// orbit(u, v) == src. Zero when dst does not preserve the pair distance.
BigInt eta_binary(int n, const OrbitIndex& src, const OrbitIndex& dst, int d);
BigInt eta_qary(int q, int n, const OrbitIndex& src, const OrbitIndex& dst, int d);

/// Number of words w with orbit(u, w) == (i, jw, tw, pw) and d(v, w) == d,
/// where orbit(u, v) == src. Binary callers pass pw == tw.
BigInt alpha4_binary(int n, const OrbitIndex& src, int jw, int tw, int d);
BigInt alpha4_qary(int q, int n, const OrbitIndex& src, int jw, int tw, int pw, int d);

/// Dispatch on q to the binary or nonbinary formula.
BigInt eta(int q, int n, const OrbitIndex& src, const OrbitIndex& dst, int d);
BigInt alpha4(int q, int n, const OrbitIndex& src, const OrbitIndex& wIdx, int d);

struct EtaTerm {
  OrbitIndex dst;
  int d;
  BigInt count;
};

struct Alpha4Term {
  OrbitIndex w;  // orbit of (u, w); w.i == src.i
  int d;
  BigInt count;
};

/// Every nonzero eta / alpha4 value for a fixed source orbit, sorted by
/// (dst, d). Cached; the returned reference stays valid for the process.
const std::vector<EtaTerm>& eta_distribution(int q, int n, const OrbitIndex& src);
const std::vector<Alpha4Term>& alpha4_distribution(int q, int n, const OrbitIndex& src);

/// sum_d lambda_d * alpha4(q, n, src, w, d).
Rational lambda_weighted(int q, int n, const InequalitySet& ineq, const OrbitIndex& src,
                         const OrbitIndex& w);

/// Number of pairs (u, v) in the orbit idx (nonzero entries of M_{i,j}^{t,p}).
BigInt orbit_size(int q, int n, const OrbitIndex& idx);

/// Labels (a, k) of the diagonal blocks of the Terwilliger algebra, in
/// emission order. Binary blocks have a == 0 and k = 0..floor(n/2).
std::vector<std::pair<int, int>> block_labels(int q, int n);

/// Row range [k, n + a - k] of block (a, k).
inline int block_first_row(int /*n*/, int /*a*/, int k) { return k; }
inline int block_last_row(int n, int a, int k) { return n + a - k; }

/// Unnormalized block coefficient of x_idx in block (a, k) at row idx.i,
/// column idx.j: beta_{i,j,k}^t for q == 2, alpha_nonbinary_scaled otherwise.
BigInt block_coefficient(int q, int n, int a, int k, const OrbitIndex& idx);

/// |S_i(0)| = C(n,i) (q-1)^i, the squared border weight of row i.
BigInt sphere_size(int q, int n, int i);

/// Evaluates one coefficient by key; used by the dump format.
BigInt evaluate(const CoefficientKey& key);

}  // namespace covbound
