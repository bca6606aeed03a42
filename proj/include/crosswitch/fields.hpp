#pragma once

#include <array>
#include <string_view>

#include "crosswitch/polynomial.hpp"

namespace crosswitch {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  /// Coordinate by index, k in {1, 2}.
  double operator[](int k) const noexcept { return k == 1 ? x1 : x2; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Point on branch `branch` with branch coordinate s: branch 1 is {x1 = 0}
/// parametrized by x2, branch 2 is {x2 = 0} parametrized by x1.
constexpr Point2 branch_point(int branch, double s) noexcept {
  return branch == 1 ? Point2{0.0, s} : Point2{s, 0.0};
}

/// Index of the coordinate running along a branch.
constexpr int along(int branch) noexcept { return branch == 1 ? 2 : 1; }

/// Planar polynomial vector field (f1, f2).
class FieldSpec {
public:
  static constexpr int kDefaultMaxDegree = 8;

  FieldSpec() = default;
  /// Throws Error(InvalidField) when a component exceeds max_degree or a
  /// coefficient is not finite.
  FieldSpec(Polynomial f1, Polynomial f2, int max_degree = kDefaultMaxDegree);

  static FieldSpec constant(double c1, double c2);

  const Polynomial& component(int k) const noexcept { return k == 1 ? f1_ : f2_; }
  const Polynomial& f1() const noexcept { return f1_; }
  const Polynomial& f2() const noexcept { return f2_; }

  std::array<double, 2> operator()(const Point2& p) const noexcept {
    return {f1_(p.x1, p.x2), f2_(p.x1, p.x2)};
  }

  /// Time-reversed field -F.
  FieldSpec negated() const;
  /// Field expressed in swapped coordinates (x1, x2) -> (x2, x1).
  FieldSpec swapped() const;
  FieldSpec scaled(double s) const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

private:
  Polynomial f1_;
  Polynomial f2_;
};

std::array<double, 2> eval_field(const FieldSpec& f, const Point2& p);

/// Exact symbolic derivative of component `component` with respect to x_wrt.
Polynomial partial(const FieldSpec& f, int component, int wrt);

enum class Side { X, Y };
std::string_view to_string(Side s);

/// Z = (X, Y): X is active where x1*x2 > 0, Y where x1*x2 < 0.
class PiecewiseSystem {
public:
  PiecewiseSystem() = default;
  PiecewiseSystem(FieldSpec x, FieldSpec y) : x_(std::move(x)), y_(std::move(y)) {}

  const FieldSpec& X() const noexcept { return x_; }
  const FieldSpec& Y() const noexcept { return y_; }
  const FieldSpec& field(Side s) const noexcept { return s == Side::X ? x_ : y_; }

  /// det Z = X1*Y2 - X2*Y1 as a polynomial.
  Polynomial det() const;
  double det_at(const Point2& p) const noexcept;

  PiecewiseSystem negated() const { return {x_.negated(), y_.negated()}; }
  PiecewiseSystem swapped() const { return {x_.swapped(), y_.swapped()}; }
  PiecewiseSystem scaled(double s) const { return {x_.scaled(s), y_.scaled(s)}; }

  friend bool operator==(const PiecewiseSystem&, const PiecewiseSystem&) = default;

private:
  FieldSpec x_;
  FieldSpec y_;
};

enum class RegionLabel {
  UplusPlus,
  UplusMinus,
  UminusPlus,
  UminusMinus,
  Sigma1Plus,
  Sigma1Minus,
  Sigma2Plus,
  Sigma2Minus,
  Origin,
};

std::string_view to_string(RegionLabel r);

inline constexpr double kDefaultRegionTol = 1e-12;

RegionLabel region_of(const Point2& p, double tol = kDefaultRegionTol);

/// Which field is active at a point off the switching set.
Side active_side(const Point2& p) noexcept;

}  // namespace crosswitch
