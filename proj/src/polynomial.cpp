#include "crosswitch/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace crosswitch {

UniPoly::UniPoly(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void UniPoly::trim() {
  for (auto& c : coeffs_) {
    if (std::abs(c) < Polynomial::kDropThreshold) c = 0.0;
  }
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double UniPoly::operator()(double s) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double UniPoly::magnitude(double s) const noexcept {
  double acc = 0.0;
  const double as = std::abs(s);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * as + std::abs(*it);
  return acc;
}

UniPoly UniPoly::derivative() const {
  std::vector<double> d;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d.push_back(static_cast<double>(k) * coeffs_[k]);
  return UniPoly(std::move(d));
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
  std::vector<double> r(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) r[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) r[k] += b.coeffs_[k];
  return UniPoly(std::move(r));
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) {
  std::vector<double> r(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) r[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) r[k] -= b.coeffs_[k];
  return UniPoly(std::move(r));
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> r(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t p = 0; p < a.coeffs_.size(); ++p)
    for (std::size_t q = 0; q < b.coeffs_.size(); ++q) r[p + q] += a.coeffs_[p] * b.coeffs_[q];
  return UniPoly(std::move(r));
}

namespace {

std::vector<Monomial> canonicalize(const std::vector<Monomial>& terms) {
  std::map<std::pair<int, int>, double> merged;
  for (const auto& m : terms) merged[{m.i, m.j}] += m.c;
  std::vector<Monomial> out;
  out.reserve(merged.size());
  for (const auto& [deg, c] : merged) {
    // non-finite terms are kept so field validation can reject them
    if (!std::isfinite(c) || std::abs(c) >= Polynomial::kDropThreshold) out.push_back({c, deg.first, deg.second});
  }
  return out;
}

double ipow(double x, int n) {
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

}  // namespace

Polynomial::Polynomial(std::vector<Monomial> terms) : terms_(canonicalize(terms)) {}

Polynomial Polynomial::constant(double c) { return Polynomial({{c, 0, 0}}); }

Polynomial Polynomial::coordinate(int var) {
  return var == 1 ? Polynomial({{1.0, 1, 0}}) : Polynomial({{1.0, 0, 1}});
}

int Polynomial::total_degree() const noexcept {
  int d = 0;
  for (const auto& m : terms_) d = std::max(d, m.i + m.j);
  return d;
}

double Polynomial::coeff(int i, int j) const noexcept {
  for (const auto& m : terms_)
    if (m.i == i && m.j == j) return m.c;
  return 0.0;
}

double Polynomial::operator()(double x1, double x2) const noexcept {
  double acc = 0.0;
  for (const auto& m : terms_) acc += m.c * ipow(x1, m.i) * ipow(x2, m.j);
  return acc;
}

Polynomial Polynomial::derivative(int var) const {
  std::vector<Monomial> d;
  for (const auto& m : terms_) {
    if (var == 1 && m.i > 0) d.push_back({m.c * m.i, m.i - 1, m.j});
    if (var == 2 && m.j > 0) d.push_back({m.c * m.j, m.i, m.j - 1});
  }
  return Polynomial(std::move(d));
}

UniPoly Polynomial::restrict_to_zero(int var) const {
  std::vector<double> c;
  for (const auto& m : terms_) {
    const int zero_power = var == 1 ? m.i : m.j;
    if (zero_power != 0) continue;
    const int k = var == 1 ? m.j : m.i;
    if (static_cast<int>(c.size()) <= k) c.resize(k + 1, 0.0);
    c[k] += m.c;
  }
  return UniPoly(std::move(c));
}

Polynomial Polynomial::swapped() const {
  std::vector<Monomial> s;
  s.reserve(terms_.size());
  for (const auto& m : terms_) s.push_back({m.c, m.j, m.i});
  return Polynomial(std::move(s));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Monomial> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return Polynomial(std::move(t));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0 * b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<Monomial> t;
  t.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& p : a.terms_)
    for (const auto& q : b.terms_) t.push_back({p.c * q.c, p.i + q.i, p.j + q.j});
  return Polynomial(std::move(t));
}

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<Monomial> t = p.terms_;
  for (auto& m : t) m.c *= s;
  return Polynomial(std::move(t));
}

}  // namespace crosswitch
