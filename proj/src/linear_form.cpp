#include "covbound/linear_form.hpp"

#include <sstream>
#include <stdexcept>

namespace covbound {

LinearForm LinearForm::variable(int id, const Rational& coeff) {
  LinearForm f;
  f.add_term(id, coeff);
  return f;
}

void LinearForm::add_term(int id, const Rational& coeff) {
  if (id < 0) throw std::invalid_argument("negative variable id");
  if (coeff == 0) return;
  auto [it, inserted] = coeffs_.try_emplace(id, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) coeffs_.erase(it);
  }
}

void LinearForm::add(const LinearForm& other, const Rational& scale) {
  if (scale == 0) return;
  for (const auto& [id, c] : other.coeffs_) add_term(id, scale * c);
  constant_ += scale * other.constant_;
}

LinearForm& LinearForm::operator*=(const Rational& s) {
  if (s == 0) {
    coeffs_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [id, c] : coeffs_) c *= s;
  constant_ *= s;
  return *this;
}

Rational LinearForm::evaluate(std::span<const Rational> x) const {
  Rational sum = constant_;
  for (const auto& [id, c] : coeffs_) {
    if (static_cast<std::size_t>(id) >= x.size()) {
      throw std::out_of_range("assignment is missing variable " + std::to_string(id));
    }
    sum += c * x[static_cast<std::size_t>(id)];
  }
  return sum;
}

long double LinearForm::evaluate(std::span<const long double> x) const {
  long double sum = static_cast<long double>(constant_.get_d());
  for (const auto& [id, c] : coeffs_) {
    if (static_cast<std::size_t>(id) >= x.size()) {
      throw std::out_of_range("assignment is missing variable " + std::to_string(id));
    }
    sum += static_cast<long double>(c.get_d()) * x[static_cast<std::size_t>(id)];
  }
  return sum;
}

bool operator<(const LinearForm& a, const LinearForm& b) {
  if (a.constant_ != b.constant_) return a.constant_ < b.constant_;
  auto ia = a.coeffs_.begin();
  auto ib = b.coeffs_.begin();
  for (; ia != a.coeffs_.end() && ib != b.coeffs_.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first;
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return ia == a.coeffs_.end() && ib != b.coeffs_.end();
}

std::string LinearForm::str() const {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Rational& c, const std::string& name) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (name.empty()) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << '*';
      os << name;
    }
  };
  for (const auto& [id, c] : coeffs_) emit(c, "x" + std::to_string(id));
  if (constant_ != 0 || first) emit(constant_, "");
  return os.str();
}

}  // namespace covbound
