#include "covbound/combinatorics.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace covbound {

namespace {

// Thread-safe insert-once memo table. Values are never erased, so references
// handed out stay valid.
template <class Key, class Value>
class MemoTable {
 public:
  template <class Compute>
  const Value& get(const Key& key, Compute&& compute) {
    {
      std::shared_lock lock(mutex_);
      auto it = table_.find(key);
      if (it != table_.end()) return *it->second;
    }
    auto value = std::make_unique<Value>(compute());
    std::unique_lock lock(mutex_);
    auto [it, inserted] = table_.try_emplace(key, std::move(value));
    return *it->second;
  }

 private:
  std::shared_mutex mutex_;
  std::map<Key, std::unique_ptr<Value>> table_;
};

MemoTable<CoefficientKey, BigInt>& scalar_cache() {
  static MemoTable<CoefficientKey, BigInt> cache;
  return cache;
}

using DistKey = std::tuple<int, int, OrbitIndex>;

MemoTable<DistKey, std::vector<EtaTerm>>& eta_cache() {
  static MemoTable<DistKey, std::vector<EtaTerm>> cache;
  return cache;
}

MemoTable<DistKey, std::vector<Alpha4Term>>& alpha4_cache() {
  static MemoTable<DistKey, std::vector<Alpha4Term>> cache;
  return cache;
}

void require_q(int q) {
  if (q < 2) throw std::invalid_argument("alphabet size q must be at least 2");
}

// Schrijver's beta with an explicit length parameter; arguments outside the
// natural ranges simply produce zero through the binomial convention.
BigInt beta_general(int n, int i, int j, int k, int t) {
  BigInt sum = 0;
  for (int u = 0; u <= std::max(n, 0); ++u) {
    BigInt term = binomial(u, t);
    if (term == 0) continue;
    term *= binomial(n - 2 * k, u - k);
    if (term == 0) continue;
    term *= binomial(n - k - u, i - u);
    if (term == 0) continue;
    term *= binomial(n - k - u, j - u);
    if (((t - u) & 1) != 0) sum -= term;
    else sum += term;
  }
  return sum;
}

// Enumerates the support split of w relative to a binary pair (u, v):
// a00 positions outside both supports, a01 only in v, a10 only in u, a11 in
// both. The callback receives the split and its multiplicity.
template <class Fn>
void for_each_binary_split(int n, const OrbitIndex& src, Fn&& fn) {
  const int only_u = src.i - src.t;
  const int only_v = src.j - src.t;
  const int both = src.t;
  const int neither = n + src.t - src.i - src.j;
  for (int a10 = 0; a10 <= only_u; ++a10) {
    BigInt w10 = binomial(only_u, a10);
    for (int a01 = 0; a01 <= only_v; ++a01) {
      BigInt w01 = w10 * binomial(only_v, a01);
      for (int a11 = 0; a11 <= both; ++a11) {
        BigInt w11 = w01 * binomial(both, a11);
        for (int a00 = 0; a00 <= neither; ++a00) {
          fn(a00, a01, a10, a11, w11 * binomial(neither, a00));
        }
      }
    }
  }
}

struct QarySplit {
  int a1, a2, b1, b2, c1, c2, d1, d2, d3, e;
};

// Nonbinary analogue: the support of w is split into the ten classes
// A1,A2 (u != 0 = v), B1,B2 (u = 0 != v), C1,C2 (u = v != 0),
// D1,D2,D3 (u, v nonzero and distinct) and E (u = v = 0).
template <class Fn>
void for_each_qary_split(int q, int n, const OrbitIndex& src, Fn&& fn) {
  const int only_u = src.i - src.t;
  const int only_v = src.j - src.t;
  const int equal = src.p;
  const int differ = src.t - src.p;
  const int neither = n + src.t - src.i - src.j;
  const BigInt q1 = q - 1;
  const BigInt q2 = q - 2;
  const BigInt q3 = q - 3;
  auto power = [](const BigInt& base, int e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
  };

  QarySplit s{};
  for (s.a1 = 0; s.a1 <= only_u; ++s.a1)
    for (s.a2 = 0; s.a1 + s.a2 <= only_u; ++s.a2) {
      BigInt wa = multinomial(only_u, {s.a1, s.a2});
      for (s.b1 = 0; s.b1 <= only_v; ++s.b1)
        for (s.b2 = 0; s.b1 + s.b2 <= only_v; ++s.b2) {
          BigInt wb = wa * multinomial(only_v, {s.b1, s.b2});
          for (s.c1 = 0; s.c1 <= equal; ++s.c1)
            for (s.c2 = 0; s.c1 + s.c2 <= equal; ++s.c2) {
              BigInt wc = wb * multinomial(equal, {s.c1, s.c2});
              for (s.d1 = 0; s.d1 <= differ; ++s.d1)
                for (s.d2 = 0; s.d1 + s.d2 <= differ; ++s.d2)
                  for (s.d3 = 0; s.d1 + s.d2 + s.d3 <= differ; ++s.d3) {
                    if (s.d3 > 0 && q < 4) continue;
                    BigInt wd = wc * multinomial(differ, {s.d1, s.d2, s.d3});
                    const int e2 = s.a2 + s.b2 + s.c2;
                    if (e2 > 0 && q < 3) continue;
                    wd *= power(q2, e2) * power(q3, s.d3);
                    for (s.e = 0; s.e <= neither; ++s.e) {
                      fn(s, wd * binomial(neither, s.e) * power(q1, s.e));
                    }
                  }
            }
        }
    }
}

std::vector<EtaTerm> compute_eta_distribution(int q, int n, const OrbitIndex& src) {
  std::map<std::pair<OrbitIndex, int>, BigInt> acc;
  const int dist = src.distance();
  if (q == 2) {
    for_each_binary_split(n, src, [&](int a00, int a01, int a10, int a11, const BigInt& w) {
      const int i2 = src.i + a00 - a11 - a10 + a01;
      const int j2 = src.j + a00 - a11 + a10 - a01;
      const int t2 = (i2 + j2 - dist) / 2;
      acc[{binary_index(i2, j2, t2), a00 + a01 + a10 + a11}] += w;
    });
  } else {
    for_each_qary_split(q, n, src, [&](const QarySplit& s, const BigInt& w) {
      const int d = s.a1 + s.a2 + s.b1 + s.b2 + s.c1 + s.c2 + s.d1 + s.d2 + s.d3 + s.e;
      const int i2 = src.i - s.a1 + s.b1 + s.b2 - s.c1 - s.d1 + s.e;
      const int j2 = src.j + s.a1 + s.a2 - s.b1 - s.c1 - s.d2 + s.e;
      const int t2 = src.t + s.a2 + s.b2 - s.c1 - s.d1 - s.d2 + s.e;
      const int p2 = i2 + j2 - t2 - dist;
      acc[{OrbitIndex{i2, j2, t2, p2}, d}] += w;
    });
  }
  std::vector<EtaTerm> out;
  out.reserve(acc.size());
  for (auto& [key, count] : acc) {
    if (count != 0) out.push_back({key.first, key.second, count});
  }
  return out;
}

std::vector<Alpha4Term> compute_alpha4_distribution(int q, int n, const OrbitIndex& src) {
  std::map<std::pair<OrbitIndex, int>, BigInt> acc;
  if (q == 2) {
    for_each_binary_split(n, src, [&](int a00, int a01, int a10, int a11, const BigInt& w) {
      const int jw = a00 + a01 + a10 + a11;
      const int tw = a10 + a11;
      const int d = src.j + a00 + a10 - a01 - a11;
      acc[{binary_index(src.i, jw, tw), d}] += w;
    });
  } else {
    for_each_qary_split(q, n, src, [&](const QarySplit& s, const BigInt& w) {
      const int jw = s.a1 + s.a2 + s.b1 + s.b2 + s.c1 + s.c2 + s.d1 + s.d2 + s.d3 + s.e;
      const int tw = s.a1 + s.a2 + s.c1 + s.c2 + s.d1 + s.d2 + s.d3;
      const int pw = s.a1 + s.c1 + s.d1;
      const int d = s.a1 + s.a2 + s.e + src.j - s.b1 - s.c1 - s.d2;
      acc[{OrbitIndex{src.i, jw, tw, pw}, d}] += w;
    });
  }
  std::vector<Alpha4Term> out;
  out.reserve(acc.size());
  for (auto& [key, count] : acc) {
    if (count != 0) out.push_back({key.first, key.second, count});
  }
  return out;
}

void require_member(int q, int n, const OrbitIndex& idx, const char* what) {
  if (!in_index_set(q, n, idx)) {
    throw std::invalid_argument(std::string(what) + " " + to_string(idx, q) +
                                " is not in I(" + std::to_string(q) + "," +
                                std::to_string(n) + ")");
  }
}

}  // namespace

OrbitIndex binary_index(int i, int j, int t) { return OrbitIndex{i, j, t, t}; }

std::string to_string(const OrbitIndex& idx, int q) {
  std::ostringstream os;
  os << '(' << idx.i << ',' << idx.j << ',' << idx.t;
  if (q != 2) os << ',' << idx.p;
  os << ')';
  return os.str();
}

bool in_index_set(int q, int n, const OrbitIndex& idx) {
  if (idx.p < 0 || idx.p > idx.t) return false;
  if (idx.t > idx.i || idx.t > idx.j) return false;
  if (idx.i + idx.j > n + idx.t) return false;
  if (q == 2 && idx.p != idx.t) return false;
  return true;
}

std::vector<OrbitIndex> index_set(int q, int n) {
  require_q(q);
  if (n < 1) throw std::invalid_argument("word length n must be at least 1");
  std::vector<OrbitIndex> out;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int t = std::max(0, i + j - n); t <= std::min(i, j); ++t) {
        if (q == 2) {
          out.push_back(binary_index(i, j, t));
        } else {
          for (int p = 0; p <= t; ++p) out.push_back(OrbitIndex{i, j, t, p});
        }
      }
  return out;
}

std::string_view to_string(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::krawtchouk: return "krawtchouk";
    case CoefficientKind::intersection: return "intersection";
    case CoefficientKind::betaBinary: return "betaBinary";
    case CoefficientKind::alphaNonbinary: return "alphaNonbinary";
    case CoefficientKind::etaBinary: return "etaBinary";
    case CoefficientKind::alpha4Binary: return "alpha4Binary";
    case CoefficientKind::etaQary: return "etaQary";
    case CoefficientKind::alpha4Qary: return "alpha4Qary";
  }
  return "unknown";
}

BigInt binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

BigInt multinomial(long n, std::span<const long> parts) {
  if (n < 0) return 0;
  long rest = n;
  BigInt r = 1;
  for (long part : parts) {
    if (part < 0 || part > rest) return 0;
    r *= binomial(rest, part);
    rest -= part;
  }
  return r;
}

BigInt multinomial(long n, std::initializer_list<long> parts) {
  return multinomial(n, std::span<const long>(parts.begin(), parts.size()));
}

BigInt krawtchouk(int q, int n, int k, int i) {
  require_q(q);
  BigInt sum = 0;
  for (int s = 0; s <= k; ++s) {
    BigInt term = binomial(i, s) * binomial(n - i, k - s) * ipow(q - 1, static_cast<unsigned long>(k - s));
    if (s % 2 == 0) sum += term;
    else sum -= term;
  }
  return sum;
}

BigInt intersection_number(int q, int n, int k, int i, int j) {
  require_q(q);
  BigInt sum = 0;
  const int target = k + i - j;
  if (q == 2) {
    if (target % 2 != 0) return 0;
    const int t = target / 2;
    return binomial(k, t) * binomial(n - k, i - t);
  }
  for (int t = 0; t <= std::min(k, i); ++t) {
    const int p = target - t;
    if (p < 0 || p > t) continue;
    sum += multinomial(k, {t - p, p}) * binomial(n - k, i - t) *
           ipow(q - 1, static_cast<unsigned long>(i - t)) *
           ipow(q - 2, static_cast<unsigned long>(t - p));
  }
  return sum;
}

BigInt beta_binary(int n, int i, int j, int k, int t) {
  CoefficientKey key{CoefficientKind::betaBinary, {n, i, j, k, t}};
  return scalar_cache().get(key, [&] { return beta_general(n, i, j, k, t); });
}

BigInt alpha_nonbinary_scaled(int q, int n, int i, int j, int t, int p, int a, int k) {
  require_q(q);
  CoefficientKey key{CoefficientKind::alphaNonbinary, {q, n, i, j, t, p, a, k}};
  return scalar_cache().get(key, [&]() -> BigInt {
    if (i + j - t < 0) return 0;
    BigInt b = beta_binary(n - a, i - a, j - a, k - a, t - a);
    if (b == 0) return 0;
    BigInt inner = 0;
    for (int g = 0; g <= p; ++g) {
      BigInt c = binomial(a, g) * binomial(t - a, p - g);
      if (c == 0) continue;
      c *= ipow(q - 2, static_cast<unsigned long>(t - a - p + g));
      if ((a - g) % 2 != 0) inner -= c;
      else inner += c;
    }
    return b * ipow(q - 1, static_cast<unsigned long>(i + j - t)) * inner;
  });
}

BigInt eta_binary(int n, const OrbitIndex& src, const OrbitIndex& dst, int d) {
  return eta(2, n, src, dst, d);
}

BigInt eta_qary(int q, int n, const OrbitIndex& src, const OrbitIndex& dst, int d) {
  if (q < 3) throw std::invalid_argument("eta_qary requires q >= 3");
  return eta(q, n, src, dst, d);
}

BigInt eta(int q, int n, const OrbitIndex& src, const OrbitIndex& dst, int d) {
  require_member(q, n, src, "source orbit");
  if (!in_index_set(q, n, dst) || dst.distance() != src.distance()) return 0;
  const auto& dist = eta_distribution(q, n, src);
  auto it = std::lower_bound(dist.begin(), dist.end(), std::make_pair(dst, d),
                             [](const EtaTerm& term, const std::pair<OrbitIndex, int>& key) {
                               return std::tie(term.dst, term.d) < std::tie(key.first, key.second);
                             });
  if (it != dist.end() && it->dst == dst && it->d == d) return it->count;
  return 0;
}

BigInt alpha4_binary(int n, const OrbitIndex& src, int jw, int tw, int d) {
  return alpha4(2, n, src, binary_index(src.i, jw, tw), d);
}

BigInt alpha4_qary(int q, int n, const OrbitIndex& src, int jw, int tw, int pw, int d) {
  if (q < 3) throw std::invalid_argument("alpha4_qary requires q >= 3");
  return alpha4(q, n, src, OrbitIndex{src.i, jw, tw, pw}, d);
}

BigInt alpha4(int q, int n, const OrbitIndex& src, const OrbitIndex& wIdx, int d) {
  require_member(q, n, src, "source orbit");
  if (wIdx.i != src.i || !in_index_set(q, n, wIdx)) return 0;
  const auto& dist = alpha4_distribution(q, n, src);
  auto it = std::lower_bound(dist.begin(), dist.end(), std::make_pair(wIdx, d),
                             [](const Alpha4Term& term, const std::pair<OrbitIndex, int>& key) {
                               return std::tie(term.w, term.d) < std::tie(key.first, key.second);
                             });
  if (it != dist.end() && it->w == wIdx && it->d == d) return it->count;
  return 0;
}

const std::vector<EtaTerm>& eta_distribution(int q, int n, const OrbitIndex& src) {
  require_member(q, n, src, "source orbit");
  return eta_cache().get(DistKey{q, n, src}, [&] { return compute_eta_distribution(q, n, src); });
}

const std::vector<Alpha4Term>& alpha4_distribution(int q, int n, const OrbitIndex& src) {
  require_member(q, n, src, "source orbit");
  return alpha4_cache().get(DistKey{q, n, src},
                            [&] { return compute_alpha4_distribution(q, n, src); });
}

Rational lambda_weighted(int q, int n, const InequalitySet& ineq, const OrbitIndex& src,
                         const OrbitIndex& w) {
  if (ineq.length() != n) throw std::invalid_argument("inequality length does not match n");
  Rational sum = 0;
  for (int d = 0; d <= n; ++d) {
    if (ineq.lambdas()[static_cast<std::size_t>(d)] == 0) continue;
    sum += ineq.lambdas()[static_cast<std::size_t>(d)] * Rational(alpha4(q, n, src, w, d));
  }
  return sum;
}

BigInt orbit_size(int q, int n, const OrbitIndex& idx) {
  if (!in_index_set(q, n, idx)) return 0;
  return ipow(q - 1, static_cast<unsigned long>(idx.i + idx.j - idx.t)) *
         ipow(q - 2, static_cast<unsigned long>(idx.t - idx.p)) *
         multinomial(n, {idx.p, idx.t - idx.p, idx.i - idx.t, idx.j - idx.t});
}

std::vector<std::pair<int, int>> block_labels(int q, int n) {
  std::vector<std::pair<int, int>> out;
  if (q == 2) {
    for (int k = 0; k <= n / 2; ++k) out.emplace_back(0, k);
    return out;
  }
  for (int a = 0; a <= n; ++a)
    for (int k = a; k <= n + a - k; ++k) out.emplace_back(a, k);
  std::sort(out.begin(), out.end(), [](auto x, auto y) {
    return std::tie(x.second, x.first) < std::tie(y.second, y.first);
  });
  return out;
}

BigInt block_coefficient(int q, int n, int a, int k, const OrbitIndex& idx) {
  if (q == 2) {
    if (a != 0) return 0;
    return beta_binary(n, idx.i, idx.j, k, idx.t);
  }
  return alpha_nonbinary_scaled(q, n, idx.i, idx.j, idx.t, idx.p, a, k);
}

BigInt sphere_size(int q, int n, int i) {
  return binomial(n, i) * ipow(q - 1, static_cast<unsigned long>(std::max(i, 0)));
}

BigInt evaluate(const CoefficientKey& key) {
  const auto& v = key.parameters;
  auto need = [&](std::size_t count) {
    if (v.size() != count) {
      throw std::invalid_argument(std::string(to_string(key.kind)) + " expects " +
                                  std::to_string(count) + " parameters");
    }
  };
  switch (key.kind) {
    case CoefficientKind::krawtchouk:
      need(4);
      return krawtchouk(v[0], v[1], v[2], v[3]);
    case CoefficientKind::intersection:
      need(5);
      return intersection_number(v[0], v[1], v[2], v[3], v[4]);
    case CoefficientKind::betaBinary:
      need(5);
      return beta_binary(v[0], v[1], v[2], v[3], v[4]);
    case CoefficientKind::alphaNonbinary:
      need(8);
      return alpha_nonbinary_scaled(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]);
    case CoefficientKind::etaBinary:
      need(8);
      return eta_binary(v[0], binary_index(v[1], v[2], v[3]), binary_index(v[4], v[5], v[6]), v[7]);
    case CoefficientKind::alpha4Binary:
      need(7);
      return alpha4_binary(v[0], binary_index(v[1], v[2], v[3]), v[4], v[5], v[6]);
    case CoefficientKind::etaQary:
      need(11);
      return eta_qary(v[0], v[1], OrbitIndex{v[2], v[3], v[4], v[5]},
                      OrbitIndex{v[6], v[7], v[8], v[9]}, v[10]);
    case CoefficientKind::alpha4Qary:
      need(10);
      return alpha4_qary(v[0], v[1], OrbitIndex{v[2], v[3], v[4], v[5]}, v[6], v[7], v[8], v[9]);
  }
  throw std::invalid_argument("unknown coefficient kind");
}

}  // namespace covbound
