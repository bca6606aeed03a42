#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "crosswitch/fields.hpp"
#include "crosswitch/polynomial.hpp"

namespace crosswitch {

enum class BranchPointClass { Crossing, Sliding, Escaping, TangencyX, TangencyY, DoubleTangency };

std::string_view to_string(BranchPointClass c);

inline constexpr double kTangencyRelTol = 1e-9;
inline constexpr double kDegeneracyTol = 1e-9;

/// Normal component of F on branch i, i.e. F_i.
inline double normal_component(const FieldSpec& f, int branch, const Point2& p) {
  return f.component(branch)(p.x1, p.x2);
}

/// Crossing/sliding/escaping label of the branch point with coordinate s.
/// The half-branch (sign of s) fixes which orientation counts as sliding.
/// Throws DegenerateInput for s == 0.
BranchPointClass branch_point_class(const PiecewiseSystem& z, int branch, double s,
                                    double rel_tol = kTangencyRelTol);

/// Same test without tangency tags: only the sign pattern of (X_i, Y_i).
BranchPointClass sign_class(int branch_side, double xi, double yi);

/// Z_i^s = (Y_i X_j - X_i Y_j) / (Y_i - X_i) restricted to branch i, as a
/// velocity along the branch coordinate.
class SlidingField {
public:
  SlidingField(int branch, UniPoly numerator, UniPoly denominator)
      : branch_(branch), numerator_(std::move(numerator)), denominator_(std::move(denominator)) {}

  int branch() const noexcept { return branch_; }
  const UniPoly& numerator() const noexcept { return numerator_; }
  const UniPoly& denominator() const noexcept { return denominator_; }

  /// Throws EvaluationOutsideDomain where the denominator vanishes.
  double operator()(double s) const;
  double derivative(double s) const;

private:
  int branch_;
  UniPoly numerator_;
  UniPoly denominator_;
};

SlidingField sliding_field(const PiecewiseSystem& z, int branch);

/// h_i = [(-1)^(i-1) (X_i - Y_i)]^-1 at p.
double h_factor(const PiecewiseSystem& z, int branch, const Point2& p);

struct DetCheck {
  double lhs;  // sliding field from its restricted polynomials
  double rhs;  // h_i * det Z from pointwise field values
};

/// Both routes to Z_i^s at a sliding/escaping point. Throws
/// EvaluationOutsideDomain unless X_i * Y_i < 0 there.
DetCheck sliding_field_det_check(const PiecewiseSystem& z, int branch, double s);

enum class Stability { Stable, Unstable, Degenerate };
std::string_view to_string(Stability s);

struct PseudoEquilibrium {
  int branch = 1;
  double location = 0.0;
  bool hyperbolic = false;
  Stability stability = Stability::Degenerate;
  double det_slope = 0.0;  // d/ds det Z along the branch
};

struct PseudoEqOptions {
  int cells = 512;
  double xtol = 1e-12;
  double tol = kDegeneracyTol;
};

/// Zeros of det Z on branch i inside [lo, hi] that lie in the sliding or
/// escaping region. Non-hyperbolic roots are reported with Stability::Degenerate.
std::vector<PseudoEquilibrium> pseudo_equilibria(const PiecewiseSystem& z, int branch, double lo, double hi,
                                                 const PseudoEqOptions& opts = {});

enum class Visibility { Visible, Invisible, Boundary };
std::string_view to_string(Visibility v);

struct FoldPoint {
  Side field = Side::X;
  int branch = 1;
  double location = 0.0;
  Visibility visibility = Visibility::Boundary;
  bool regular_fold = false;
  bool degenerate = false;  // Lie quantity vanishes: higher-order tangency
  double lie = 0.0;         // F_j * dF_i/dx_j
};

/// F_j * dF_i/dx_j at p for the tangency of F with branch i.
double lie_quantity(const FieldSpec& f, int branch, const Point2& p);

/// Visible/invisible rule for a tangency of `field` at branch coordinate g:
/// the tangent orbit bends to the side sgn(lie) of the branch, i.e. into the
/// quadrant where x1*x2 has sign sgn(lie)*sgn(g); it is visible when that
/// quadrant is where `field` is active.
Visibility fold_visibility(Side field, double lie, double g);

struct TangencyOptions {
  int cells = 512;
  double xtol = 1e-12;
  double tol = kDegeneracyTol;
};

/// Roots of X_i and Y_i on branch i in [lo, hi]. Throws DegenerateTangency
/// if a normal component vanishes identically on the branch.
std::vector<FoldPoint> find_tangencies(const PiecewiseSystem& z, int branch, double lo, double hi,
                                       const TangencyOptions& opts = {});

struct BranchSegment {
  BranchPointClass cls;
  double from;  // |s| at the end nearer the origin
  double to;
};

struct HalfBranchDecomposition {
  int branch = 1;
  int side = 1;  // +1 or -1
  std::vector<BranchSegment> segments;  // ordered outward from the origin
};

/// Decomposition of Sigma_1^+, Sigma_1^-, Sigma_2^+, Sigma_2^- (in that order)
/// within `radius`. Throws TooManyTangencies if a half-branch carries two or
/// more tangency points.
std::array<HalfBranchDecomposition, 4> sigma_decomposition(const PiecewiseSystem& z, double radius);

}  // namespace crosswitch
