#pragma once

#include "covbound/numeric.hpp"

#include <map>
#include <span>
#include <string>

namespace covbound {

/// Sparse affine form  constant + sum_id coeff[id] * x[id]  with exact
/// rational coefficients. Zero coefficients are never stored.
class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(Rational constant) : constant_(std::move(constant)) {}

  static LinearForm variable(int id, const Rational& coeff = 1);

  const std::map<int, Rational>& coeffs() const { return coeffs_; }
  const Rational& constant() const { return constant_; }

  bool is_zero() const { return coeffs_.empty() && constant_ == 0; }
  bool is_constant() const { return coeffs_.empty(); }
  int max_variable() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

  void add_term(int id, const Rational& coeff);
  void add_constant(const Rational& c) { constant_ += c; }
  /// this += scale * other
  void add(const LinearForm& other, const Rational& scale = 1);

  Rational evaluate(std::span<const Rational> x) const;
  long double evaluate(std::span<const long double> x) const;

  LinearForm& operator+=(const LinearForm& o) {
    add(o);
    return *this;
  }
  LinearForm& operator-=(const LinearForm& o) {
    add(o, -1);
    return *this;
  }
  LinearForm& operator*=(const Rational& s);

  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator*(const Rational& s, LinearForm a) { return a *= s; }

  friend bool operator==(const LinearForm& a, const LinearForm& b) {
    return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator<(const LinearForm& a, const LinearForm& b);

  /// Human-readable form, e.g. "2*x3 - x0 + 1/2".
  std::string str() const;

 private:
  std::map<int, Rational> coeffs_;
  Rational constant_ = 0;
};

}  // namespace covbound
