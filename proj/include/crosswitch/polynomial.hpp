#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace crosswitch {

/// c * x1^i * x2^j
struct Monomial {
  double c = 0.0;
  int i = 0;
  int j = 0;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Univariate polynomial, coefficients in increasing degree.
class UniPoly {
public:
  UniPoly() = default;
  explicit UniPoly(std::vector<double> coeffs);
  UniPoly(std::initializer_list<double> coeffs) : UniPoly(std::vector<double>(coeffs)) {}

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  double coeff(int k) const noexcept {
    return k >= 0 && k < static_cast<int>(coeffs_.size()) ? coeffs_[k] : 0.0;
  }

  double operator()(double s) const noexcept;
  /// Running error bound of Horner evaluation at s (sum |c_k| |s|^k).
  double magnitude(double s) const noexcept;
  UniPoly derivative() const;

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend bool operator==(const UniPoly&, const UniPoly&) = default;

private:
  void trim();
  std::vector<double> coeffs_;
};

/// Bivariate polynomial in (x1, x2), kept in canonical form: monomials sorted
/// by (i, j), no duplicate degree pairs, |c| >= kDropThreshold.
class Polynomial {
public:
  static constexpr double kDropThreshold = 1e-15;

  Polynomial() = default;
  explicit Polynomial(std::vector<Monomial> terms);
  Polynomial(std::initializer_list<Monomial> terms) : Polynomial(std::vector<Monomial>(terms)) {}

  static Polynomial constant(double c);
  /// The coordinate function x1 (var == 1) or x2 (var == 2).
  static Polynomial coordinate(int var);

  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  int total_degree() const noexcept;
  double coeff(int i, int j) const noexcept;

  double operator()(double x1, double x2) const noexcept;
  /// d/dx_var, var in {1, 2}.
  Polynomial derivative(int var) const;
  /// Restrict to the branch x_var = 0 and return the univariate polynomial in
  /// the remaining coordinate.
  UniPoly restrict_to_zero(int var) const;
  /// (x1, x2) -> (x2, x1)
  Polynomial swapped() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);
  friend Polynomial operator-(const Polynomial& p) { return -1.0 * p; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
  std::vector<Monomial> terms_;
};

}  // namespace crosswitch
