#include "covbound/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace covbound {

namespace {

using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

long checked_size(int q, int n, long cap) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  if (n < 1) throw std::invalid_argument("word length n must be at least 1");
  long size = 1;
  for (int l = 0; l < n; ++l) {
    size *= q;
    if (size > cap) {
      throw std::invalid_argument("q^n = " + std::to_string(q) + "^" + std::to_string(n) +
                                  " exceeds the desk-scale cap " + std::to_string(cap));
    }
  }
  return size;
}

std::string describe(int q, int n, const OrbitIndex& idx) {
  return "q=" + std::to_string(q) + " n=" + std::to_string(n) + " src=" + to_string(idx, q);
}

}  // namespace

HammingSpace::HammingSpace(int q, int n, long cap)
    : q_(q), n_(n), size_(static_cast<int>(checked_size(q, n, cap))) {
  digits_.resize(static_cast<std::size_t>(size_) * static_cast<std::size_t>(n_));
  weights_.resize(static_cast<std::size_t>(size_));
  for (int w = 0; w < size_; ++w) {
    int rest = w;
    int wt = 0;
    for (int l = 0; l < n_; ++l) {
      const int d = rest % q_;
      rest /= q_;
      digits_[static_cast<std::size_t>(w) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(l)] =
          static_cast<std::uint8_t>(d);
      if (d) ++wt;
    }
    weights_[static_cast<std::size_t>(w)] = wt;
  }
}

int HammingSpace::distance(int a, int b) const {
  int d = 0;
  for (int l = 0; l < n_; ++l) d += digit(a, l) != digit(b, l);
  return d;
}

int HammingSpace::subtract(int a, int b) const {
  int out = 0;
  int scale = 1;
  for (int l = 0; l < n_; ++l) {
    out += ((digit(a, l) - digit(b, l) + q_) % q_) * scale;
    scale *= q_;
  }
  return out;
}

int HammingSpace::encode(const std::vector<int>& digits) const {
  if (static_cast<int>(digits.size()) != n_) throw std::invalid_argument("word has wrong length");
  int out = 0;
  int scale = 1;
  for (int l = 0; l < n_; ++l) {
    if (digits[static_cast<std::size_t>(l)] < 0 || digits[static_cast<std::size_t>(l)] >= q_) {
      throw std::invalid_argument("symbol out of range");
    }
    out += digits[static_cast<std::size_t>(l)] * scale;
    scale *= q_;
  }
  return out;
}

OrbitIndex HammingSpace::orbit(int u, int v) const {
  OrbitIndex o;
  for (int l = 0; l < n_; ++l) {
    const int a = digit(u, l);
    const int b = digit(v, l);
    if (a) ++o.i;
    if (b) ++o.j;
    if (a && b) {
      ++o.t;
      if (a == b) ++o.p;
    }
  }
  return o;
}

std::pair<int, int> HammingSpace::representative(const OrbitIndex& idx) const {
  if (!in_index_set(q_, n_, idx)) {
    throw std::invalid_argument("orbit " + to_string(idx, q_) + " is not realized in [" +
                                std::to_string(q_) + "]^" + std::to_string(n_));
  }
  std::vector<int> u(static_cast<std::size_t>(n_), 0);
  std::vector<int> v(static_cast<std::size_t>(n_), 0);
  for (int l = 0; l < idx.i; ++l) u[static_cast<std::size_t>(l)] = 1;
  for (int l = 0; l < idx.p; ++l) v[static_cast<std::size_t>(l)] = 1;
  for (int l = idx.p; l < idx.t; ++l) v[static_cast<std::size_t>(l)] = 2;
  for (int l = idx.i; l < idx.i + idx.j - idx.t; ++l) v[static_cast<std::size_t>(l)] = 1;
  return {encode(u), encode(v)};
}

CodeWitness make_code(int q, int n, std::vector<std::vector<int>> words) {
  if (q < 2 || n < 1) throw std::invalid_argument("code needs q >= 2 and n >= 1");
  if (words.empty()) throw std::invalid_argument("code must be nonempty");
  std::set<std::vector<int>> seen;
  for (const auto& w : words) {
    if (static_cast<int>(w.size()) != n) throw std::invalid_argument("code word has wrong length");
    for (int s : w)
      if (s < 0 || s >= q) throw std::invalid_argument("code symbol out of range");
    if (!seen.insert(w).second) throw std::invalid_argument("duplicate code word");
  }
  return CodeWitness{q, n, std::move(words)};
}

CodeWitness parse_code_text(const std::string& text) {
  std::istringstream in(text);
  int q = 0;
  int n = 0;
  if (!(in >> q >> n)) throw std::invalid_argument("code file: missing 'q n' header");
  std::vector<std::vector<int>> words;
  std::string tok;
  while (in >> tok) {
    std::vector<int> w;
    for (char ch : tok) {
      if (ch < '0' || ch > '9') throw std::invalid_argument("code file: bad word '" + tok + "'");
      w.push_back(ch - '0');
    }
    words.push_back(std::move(w));
  }
  return make_code(q, n, std::move(words));
}

CodeWitness read_code_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open code file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_code_text(buf.str());
}

CodeWitness whole_space(int q, int n) {
  HammingSpace space(q, n);
  std::vector<std::vector<int>> words;
  for (int w = 0; w < space.size(); ++w) {
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) d[static_cast<std::size_t>(l)] = space.digit(w, l);
    words.push_back(std::move(d));
  }
  return make_code(q, n, std::move(words));
}

namespace {

std::vector<int> encode_code(const HammingSpace& space, const CodeWitness& code) {
  std::vector<int> out;
  out.reserve(code.size());
  for (const auto& w : code.words) out.push_back(space.encode(w));
  return out;
}

}  // namespace

int covering_radius(const CodeWitness& code) {
  HammingSpace space(code.q, code.n);
  const auto words = encode_code(space, code);
  int radius = 0;
  for (int u = 0; u < space.size(); ++u) {
    int best = code.n;
    for (int c : words) best = std::min(best, space.distance(u, c));
    radius = std::max(radius, best);
  }
  return radius;
}

std::vector<EtaTerm> eta_distribution_bruteforce(int q, int n, const OrbitIndex& src) {
  HammingSpace space(q, n);
  auto [u, v] = space.representative(src);
  std::map<std::pair<OrbitIndex, int>, long> hist;
  for (int w = 0; w < space.size(); ++w) {
    ++hist[{space.orbit(space.subtract(u, w), space.subtract(v, w)), space.weight(w)}];
  }
  std::vector<EtaTerm> out;
  for (const auto& [key, count] : hist) out.push_back(EtaTerm{key.first, key.second, BigInt(count)});
  return out;
}

std::vector<Alpha4Term> alpha4_distribution_bruteforce(int q, int n, const OrbitIndex& src) {
  HammingSpace space(q, n);
  auto [u, v] = space.representative(src);
  std::map<std::pair<OrbitIndex, int>, long> hist;
  for (int w = 0; w < space.size(); ++w) ++hist[{space.orbit(u, w), space.distance(v, w)}];
  std::vector<Alpha4Term> out;
  for (const auto& [key, count] : hist) out.push_back(Alpha4Term{key.first, key.second, BigInt(count)});
  return out;
}

BigInt count_eta_bruteforce(int q, int n, const OrbitIndex& src, const OrbitIndex& dst, int d) {
  HammingSpace space(q, n);
  auto [u, v] = space.representative(src);
  long count = 0;
  for (int w = 0; w < space.size(); ++w) {
    if (space.weight(w) != d) continue;
    if (space.orbit(space.subtract(u, w), space.subtract(v, w)) == dst) ++count;
  }
  return count;
}

BigInt count_alpha4_bruteforce(int q, int n, const OrbitIndex& src, const OrbitIndex& wIdx, int d) {
  HammingSpace space(q, n);
  auto [u, v] = space.representative(src);
  long count = 0;
  for (int w = 0; w < space.size(); ++w) {
    if (space.distance(v, w) == d && space.orbit(u, w) == wIdx) ++count;
  }
  return count;
}

BigInt intersection_number_bruteforce(int q, int n, int k, int i, int j) {
  HammingSpace space(q, n);
  std::vector<int> ud(static_cast<std::size_t>(n), 0);
  for (int l = 0; l < k && l < n; ++l) ud[static_cast<std::size_t>(l)] = 1;
  const int u = space.encode(ud);
  long count = 0;
  for (int v = 0; v < space.size(); ++v) {
    if (space.weight(v) == i && space.distance(u, v) == j) ++count;
  }
  return count;
}

BigInt krawtchouk_bruteforce(int q, int n, int k, int i) {
  HammingSpace space(q, n);
  std::vector<int> ud(static_cast<std::size_t>(n), 0);
  for (int l = 0; l < i && l < n; ++l) ud[static_cast<std::size_t>(l)] = 1;
  std::vector<long> residues(static_cast<std::size_t>(q), 0);
  for (int v = 0; v < space.size(); ++v) {
    if (space.weight(v) != k) continue;
    int dot = 0;
    for (int l = 0; l < n; ++l) dot += ud[static_cast<std::size_t>(l)] * space.digit(v, l);
    ++residues[static_cast<std::size_t>(dot % q)];
  }
  const long double pi = std::acos(-1.0L);
  long double sum = 0;
  for (int r = 0; r < q; ++r) {
    sum += static_cast<long double>(residues[static_cast<std::size_t>(r)]) * std::cos(2 * pi * r / q);
  }
  return BigInt(static_cast<long>(std::llround(sum)));
}

std::map<OrbitIndex, BigInt> orbit_sizes_bruteforce(int q, int n) {
  HammingSpace space(q, n);
  std::map<OrbitIndex, long> hist;
  for (int u = 0; u < space.size(); ++u)
    for (int v = 0; v < space.size(); ++v) ++hist[space.orbit(u, v)];
  std::map<OrbitIndex, BigInt> out;
  for (const auto& [idx, c] : hist) out.emplace(idx, BigInt(c));
  return out;
}

std::vector<Rational> witness_x(const CodeWitness& code) {
  HammingSpace space(code.q, code.n);
  const auto words = encode_code(space, code);
  const double triples = std::pow(static_cast<double>(words.size()), 3);
  if (triples > 2e9) throw std::invalid_argument("code too large for triple enumeration");
  std::map<OrbitIndex, long> lambda;
  for (int u : words)
    for (int v : words)
      for (int w : words) ++lambda[space.orbit(space.subtract(v, u), space.subtract(w, u))];

  VariableTable vars(code.q, code.n);
  const BigInt qn = ipow(code.q, static_cast<unsigned long>(code.n));
  std::vector<Rational> x(static_cast<std::size_t>(vars.size()));
  std::vector<bool> set(static_cast<std::size_t>(vars.size()), false);
  for (const auto& idx : vars.orbits()) {
    auto it = lambda.find(idx);
    Rational value(BigInt(it == lambda.end() ? 0 : it->second), qn * orbit_size(code.q, code.n, idx));
    value.canonicalize();
    const auto id = static_cast<std::size_t>(vars.id(idx));
    if (!set[id]) {
      x[id] = value;
      set[id] = true;
    } else if (x[id] != value) {
      throw std::logic_error("witness values differ within the class of " + to_string(idx, code.q));
    }
  }
  return x;
}

Rational verify_inequality_on_code(const CodeWitness& code, const InequalitySet& ineq) {
  if (ineq.length() != code.n) throw std::invalid_argument("inequality length does not match n");
  HammingSpace space(code.q, code.n);
  const auto words = encode_code(space, code);
  Rational worst;
  bool first = true;
  std::vector<long> counts(static_cast<std::size_t>(code.n) + 1);
  for (int u = 0; u < space.size(); ++u) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int c : words) ++counts[static_cast<std::size_t>(space.distance(u, c))];
    Rational s = -ineq.beta();
    for (int i = 0; i <= code.n; ++i) {
      s += ineq.lambdas()[static_cast<std::size_t>(i)] * counts[static_cast<std::size_t>(i)];
    }
    if (first || s < worst) {
      worst = s;
      first = false;
    }
  }
  return worst;
}

namespace {

// Evaluates the normalized image phi and the emitted-scale blocks of an
// algebra element given by its coefficients on index_set(q, n).
class BlockMap {
 public:
  BlockMap(int q, int n) : q_(q), n_(n), orbits_(index_set(q, n)), labels_(block_labels(q, n)) {}

  const std::vector<OrbitIndex>& orbits() const { return orbits_; }
  const std::vector<std::pair<int, int>>& labels() const { return labels_; }

  int position(const OrbitIndex& idx) const {
    auto it = std::lower_bound(orbits_.begin(), orbits_.end(), idx);
    return static_cast<int>(it - orbits_.begin());
  }

  std::vector<LMat> image(const std::vector<long double>& x, bool normalized) const {
    std::vector<LMat> out;
    for (auto [a, k] : labels_) {
      const int first = block_first_row(n_, a, k);
      const int last = block_last_row(n_, a, k);
      const int dim = last - first + 1;
      LMat m = LMat::Zero(dim, dim);
      for (int i = first; i <= last; ++i)
        for (int j = first; j <= last; ++j) {
          long double s = 0;
          for (int t = std::max(0, i + j - n_); t <= std::min(i, j); ++t)
            for (int p = q_ == 2 ? t : 0; p <= t; ++p) {
              OrbitIndex idx{i, j, t, p};
              BigInt c = block_coefficient(q_, n_, a, k, idx);
              if (c == 0) continue;
              s += static_cast<long double>(c.get_d()) * x[static_cast<std::size_t>(position(idx))];
            }
          if (normalized) s *= scale(a, k, i) * scale(a, k, j);
          m(i - first, j - first) = s;
        }
      out.push_back(std::move(m));
    }
    return out;
  }

 private:
  long double scale(int a, int k, int i) const {
    const long double b = static_cast<long double>(binomial(n_ + a - 2 * k, i - k).get_d());
    return 1.0L / std::sqrt(b) / std::pow(static_cast<long double>(q_ - 1), i / 2.0L);
  }

  int q_;
  int n_;
  std::vector<OrbitIndex> orbits_;
  std::vector<std::pair<int, int>> labels_;
};

long double min_eig(const LMat& m) {
  if (m.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<LMat> s(m, Eigen::EigenvaluesOnly);
  return s.eigenvalues().minCoeff();
}

}  // namespace

BlockMapReport verify_block_map(int q, int n, int trials, double tolerance, std::uint64_t seed) {
  HammingSpace space(q, n, kEigenCap);
  BlockMap map(q, n);
  const auto& orbits = map.orbits();
  const int N = space.size();
  const std::size_t no = orbits.size();

  std::vector<int> table(static_cast<std::size_t>(N) * static_cast<std::size_t>(N));
  for (int u = 0; u < N; ++u)
    for (int v = 0; v < N; ++v)
      table[static_cast<std::size_t>(u) * static_cast<std::size_t>(N) + static_cast<std::size_t>(v)] =
          map.position(space.orbit(u, v));
  auto orb = [&](int u, int v) {
    return static_cast<std::size_t>(
        table[static_cast<std::size_t>(u) * static_cast<std::size_t>(N) + static_cast<std::size_t>(v)]);
  };
  std::vector<std::pair<int, int>> reps;
  for (const auto& idx : orbits) reps.push_back(space.representative(idx));

  // Coefficients of A^T B (transpose) or A B.
  auto product = [&](const std::vector<long double>& x, const std::vector<long double>& y, bool transpose) {
    std::vector<long double> out(no, 0);
    for (std::size_t r = 0; r < no; ++r) {
      auto [u, v] = reps[r];
      long double s = 0;
      for (int w = 0; w < N; ++w) s += x[transpose ? orb(w, u) : orb(u, w)] * y[orb(w, v)];
      out[r] = s;
    }
    return out;
  };
  auto full = [&](const std::vector<long double>& x) {
    LMat m(N, N);
    for (int u = 0; u < N; ++u)
      for (int v = 0; v < N; ++v) m(u, v) = x[orb(u, v)];
    return m;
  };

  std::mt19937_64 rng(seed);
  const long double amp = 1.0L / std::sqrt(static_cast<long double>(N));
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto random_coeffs = [&]() {
    std::vector<long double> x(no);
    for (auto& v : x) v = amp * static_cast<long double>(unif(rng));
    return x;
  };

  BlockMapReport rep;
  for (int trial = 0; trial < trials; ++trial) {
    const auto x = random_coeffs();
    const auto y = random_coeffs();
    const auto pa = map.image(x, true);
    const auto pb = map.image(y, true);
    const auto pab = map.image(product(x, y, false), true);
    for (std::size_t b = 0; b < pa.size(); ++b) {
      const long double err = (pa[b] * pb[b] - pab[b]).cwiseAbs().maxCoeff();
      rep.homomorphismError = std::max(rep.homomorphismError, static_cast<double>(err));
    }

    // Spectrum: G = B^T B shifted so that alternate trials straddle zero.
    auto g = product(y, y, true);
    const long double mu = min_eig(full(g));
    const long double shift = mu + (trial % 2 == 0 ? 1 : -1) * 0.05L * (1 + std::fabs(mu));
    for (std::size_t r = 0; r < no; ++r) {
      if (orbits[r].i == orbits[r].j && orbits[r].i == orbits[r].t && orbits[r].t == orbits[r].p) {
        g[r] -= shift;
      }
    }
    const long double fullMin = min_eig(full(g));
    long double blockMin = 0;
    bool firstBlock = true;
    for (const auto& m : map.image(g, true)) {
      const long double e = min_eig(m);
      if (firstBlock || e < blockMin) blockMin = e;
      firstBlock = false;
    }
    rep.spectrumError = std::max(rep.spectrumError, static_cast<double>(std::fabs(fullMin - blockMin)));
    bool emittedNegative = false;
    for (const auto& m : map.image(g, false)) emittedNegative = emittedNegative || min_eig(m) < 0;
    if (emittedNegative != (fullMin < 0)) ++rep.signMismatches;
  }

  // Border images of 1_{S_i} 1_{S_j}^T.
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      std::vector<long double> x(no, 0);
      for (std::size_t r = 0; r < no; ++r)
        if (orbits[r].i == i && orbits[r].j == j) x[r] = 1;
      const auto img = map.image(x, true);
      for (std::size_t b = 0; b < img.size(); ++b) {
        LMat expected = LMat::Zero(img[b].rows(), img[b].cols());
        if (map.labels()[b] == std::pair<int, int>{0, 0}) {
          expected(i, j) = std::sqrt(static_cast<long double>(sphere_size(q, n, i).get_d()) *
                                     static_cast<long double>(sphere_size(q, n, j).get_d()));
        }
        rep.borderError =
            std::max(rep.borderError, static_cast<double>((img[b] - expected).cwiseAbs().maxCoeff()));
      }
    }

  {
    std::vector<long double> x(no, 0);
    for (std::size_t r = 0; r < no; ++r)
      if (orbits[r].i == orbits[r].j && orbits[r].j == orbits[r].t && orbits[r].t == orbits[r].p) x[r] = 1;
    for (const auto& m : map.image(x, true)) {
      const LMat id = LMat::Identity(m.rows(), m.cols());
      rep.identityError = std::max(rep.identityError, static_cast<double>((m - id).cwiseAbs().maxCoeff()));
    }
  }

  rep.passed = rep.homomorphismError <= tolerance && rep.spectrumError <= tolerance &&
               rep.signMismatches == 0 && rep.borderError <= tolerance &&
               rep.identityError <= tolerance;
  if (!rep.passed) {
    std::ostringstream os;
    os << "block map check failed for q=" << q << " n=" << n << ": homomorphism "
       << rep.homomorphismError << ", spectrum " << rep.spectrumError << ", sign mismatches "
       << rep.signMismatches << ", border " << rep.borderError << ", identity " << rep.identityError;
    rep.message = os.str();
  }
  return rep;
}

SuiteReport verify_coefficients(int q, int n) {
  SuiteReport rep;
  for (const auto& src : index_set(q, n)) {
    const auto eb = eta_distribution_bruteforce(q, n, src);
    const auto& ef = eta_distribution(q, n, src);
    ++rep.checks;
    if (eb.size() != ef.size()) {
      rep.fail("eta support size differs at " + describe(q, n, src));
    } else {
      for (std::size_t k = 0; k < eb.size(); ++k) {
        if (eb[k].dst != ef[k].dst || eb[k].d != ef[k].d || eb[k].count != ef[k].count) {
          rep.fail("eta differs at " + describe(q, n, src) + " dst=" + to_string(eb[k].dst, q) +
                   " d=" + std::to_string(eb[k].d) + ": brute " + eb[k].count.get_str() +
                   ", closed form " + eta(q, n, src, eb[k].dst, eb[k].d).get_str());
          break;
        }
      }
    }
    const auto ab = alpha4_distribution_bruteforce(q, n, src);
    const auto& af = alpha4_distribution(q, n, src);
    ++rep.checks;
    if (ab.size() != af.size()) {
      rep.fail("alpha4 support size differs at " + describe(q, n, src));
    } else {
      for (std::size_t k = 0; k < ab.size(); ++k) {
        if (ab[k].w != af[k].w || ab[k].d != af[k].d || ab[k].count != af[k].count) {
          rep.fail("alpha4 differs at " + describe(q, n, src) + " w=" + to_string(ab[k].w, q) +
                   " d=" + std::to_string(ab[k].d));
          break;
        }
      }
    }
    if (q == 2) {
      // alpha4 over (u, v, w) equals eta over (u - w, v - w) with the roles of
      // weight and distance exchanged.
      for (const auto& term : ab) {
        const int jw = term.w.j;
        const int tw = term.w.t;
        const int twice = 2 * src.t - 2 * tw + jw + term.d - src.j;
        ++rep.checks;
        if (twice % 2 != 0) {
          rep.fail("eta/alpha4 parity mismatch at " + describe(q, n, src));
          continue;
        }
        const OrbitIndex dst = binary_index(src.i + jw - 2 * tw, term.d, twice / 2);
        if (eta(2, n, src, dst, jw) != term.count) {
          rep.fail("eta/alpha4 correspondence fails at " + describe(q, n, src) +
                   " w=" + to_string(term.w, q) + " d=" + std::to_string(term.d));
        }
      }
    }
  }

  for (int k = 0; k <= n; ++k)
    for (int i = 0; i <= n; ++i) {
      ++rep.checks;
      if (krawtchouk_bruteforce(q, n, k, i) != krawtchouk(q, n, k, i)) {
        rep.fail("krawtchouk differs at q=" + std::to_string(q) + " n=" + std::to_string(n) +
                 " k=" + std::to_string(k) + " i=" + std::to_string(i));
      }
      for (int j = 0; j <= n; ++j) {
        ++rep.checks;
        if (intersection_number_bruteforce(q, n, k, i, j) != intersection_number(q, n, k, i, j)) {
          rep.fail("intersection number differs at q=" + std::to_string(q) + " n=" +
                   std::to_string(n) + " k=" + std::to_string(k) + " i=" + std::to_string(i) +
                   " j=" + std::to_string(j));
        }
      }
    }

  const auto sizes = orbit_sizes_bruteforce(q, n);
  const auto all = index_set(q, n);
  ++rep.checks;
  if (sizes.size() != all.size()) rep.fail("orbit count differs for q=" + std::to_string(q) + " n=" + std::to_string(n));
  for (const auto& idx : all) {
    ++rep.checks;
    auto it = sizes.find(idx);
    if (it == sizes.end() || it->second != orbit_size(q, n, idx)) {
      rep.fail("orbit size differs at " + describe(q, n, idx));
    }
  }
  return rep;
}

}  // namespace covbound
