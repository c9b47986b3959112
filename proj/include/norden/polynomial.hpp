#pragma once

#include <span>
#include <vector>

namespace norden {

struct Monomial {
  double coeff = 0.0;
  std::vector<int> exponents;  // one non-negative exponent per coordinate

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Multivariate polynomial in the chart coordinates u_1..u_m.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(int variables, std::vector<Monomial> terms);

  static Polynomial constant(int variables, double c);

  int variables() const noexcept { return variables_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }

  double eval(std::span<const double> u) const;
  /// Exact partial derivative with respect to coordinate `var`.
  Polynomial derivative(int var) const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator*=(double s);

  /// Merges equal exponent vectors and drops zero coefficients.
  Polynomial simplified() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  int variables_ = 0;
  std::vector<Monomial> terms_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator*(double s, Polynomial p);

/// Square matrix of polynomials, row-major.
using PolyMatrix = std::vector<std::vector<Polynomial>>;

}  // namespace norden
