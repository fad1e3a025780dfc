#pragma once

#include "covbound/numeric.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace covbound {

enum class InequalityProvenance { sphereCovering, vanWee, ceilStrengthened, custom };

std::string_view to_string(InequalityProvenance p);

/// A valid family sum_i lambda_i A_i(u) >= beta over all words u, written
/// (lambda_0, ..., lambda_n) beta. Construction enforces lambda_i >= 0 and
/// beta > 0.
class InequalitySet {
 public:
  InequalitySet(std::vector<Rational> lambdas, Rational beta,
                InequalityProvenance provenance = InequalityProvenance::custom);

  const std::vector<Rational>& lambdas() const { return lambdas_; }
  const Rational& beta() const { return beta_; }
  InequalityProvenance provenance() const { return provenance_; }
  int length() const { return static_cast<int>(lambdas_.size()) - 1; }

  /// Short name used in JSON output and logs, e.g. "sphere(r=1)".
  std::string name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  friend bool operator==(const InequalitySet& a, const InequalitySet& b) {
    return a.lambdas_ == b.lambdas_ && a.beta_ == b.beta_;
  }

 private:
  std::vector<Rational> lambdas_;
  Rational beta_;
  InequalityProvenance provenance_;
  std::string name_;
};

InequalitySet sphere_covering(int q, int n, int r);

/// Binary only. Throws std::invalid_argument unless 0 <= r < n.
InequalitySet van_wee(int n, int r);

InequalitySet ceil_strengthen(const InequalitySet& ineq);

/// beta q^n / sum_i lambda_i C(n,i) (q-1)^i. Throws std::domain_error when the
/// denominator vanishes.
Rational plain_lower_bound(int q, int n, const InequalitySet& ineq);

struct InequalityFile {
  int q;
  int n;
  InequalitySet ineq;
};

/// Reads the three-line text format: "q n", "beta", then n+1 lambdas.
InequalityFile read_inequality_file(const std::filesystem::path& path);
InequalityFile parse_inequality_text(const std::string& text);
std::string format_inequality_text(int q, const InequalitySet& ineq);

}  // namespace covbound
