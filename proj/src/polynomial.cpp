#include "norden/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "norden/error.hpp"

namespace norden {

Polynomial::Polynomial(int variables, std::vector<Monomial> terms)
    : variables_(variables), terms_(std::move(terms)) {
  for (const auto& m : terms_) {
    if (static_cast<int>(m.exponents.size()) != variables_)
      throw Error("monomial exponent count does not match the number of coordinates");
    for (int e : m.exponents)
      if (e < 0) throw Error("monomial exponents must be non-negative");
  }
}

Polynomial Polynomial::constant(int variables, double c) {
  if (c == 0.0) return Polynomial(variables, {});
  return Polynomial(variables, {Monomial{c, std::vector<int>(static_cast<std::size_t>(variables), 0)}});
}

double Polynomial::eval(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != variables_) throw Error("evaluation point has wrong length");
  double sum = 0.0;
  for (const auto& m : terms_) {
    double v = m.coeff;
    for (int i = 0; i < variables_; ++i) {
      const int e = m.exponents[static_cast<std::size_t>(i)];
      for (int p = 0; p < e; ++p) v *= u[static_cast<std::size_t>(i)];
    }
    sum += v;
  }
  return sum;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= variables_) throw Error("derivative variable out of range");
  std::vector<Monomial> out;
  for (const auto& m : terms_) {
    const int e = m.exponents[static_cast<std::size_t>(var)];
    if (e == 0) continue;
    Monomial d = m;
    d.coeff *= e;
    d.exponents[static_cast<std::size_t>(var)] = e - 1;
    out.push_back(std::move(d));
  }
  return Polynomial(variables_, std::move(out));
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (variables_ != rhs.variables_) {
    if (terms_.empty()) variables_ = rhs.variables_;
    else if (!rhs.terms_.empty()) throw Error("polynomials over different coordinate counts");
  }
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (auto& m : terms_) m.coeff *= s;
  return *this;
}

Polynomial Polynomial::simplified() const {
  std::map<std::vector<int>, double> acc;
  for (const auto& m : terms_) acc[m.exponents] += m.coeff;
  std::vector<Monomial> out;
  for (auto& [exps, c] : acc)
    if (c != 0.0) out.push_back(Monomial{c, exps});
  return Polynomial(variables_, std::move(out));
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator*(double s, Polynomial p) { return p *= s; }

}  // namespace norden
