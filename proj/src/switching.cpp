#include "crosswitch/switching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crosswitch/error.hpp"
#include "crosswitch/roots.hpp"

namespace crosswitch {

std::string_view to_string(BranchPointClass c) {
  switch (c) {
    case BranchPointClass::Crossing: return "Crossing";
    case BranchPointClass::Sliding: return "Sliding";
    case BranchPointClass::Escaping: return "Escaping";
    case BranchPointClass::TangencyX: return "TangencyX";
    case BranchPointClass::TangencyY: return "TangencyY";
    case BranchPointClass::DoubleTangency: return "DoubleTangency";
  }
  return "Unknown";
}

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "Stable";
    case Stability::Unstable: return "Unstable";
    case Stability::Degenerate: return "Degenerate";
  }
  return "Unknown";
}

std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::Visible: return "Visible";
    case Visibility::Invisible: return "Invisible";
    case Visibility::Boundary: return "Boundary";
  }
  return "Unknown";
}

BranchPointClass sign_class(int branch_side, double xi, double yi) {
  if (xi * yi > 0) return BranchPointClass::Crossing;
  // On the + half-branch the X side sits at positive x_i, so X_i < 0 pushes
  // into the branch; on the - half-branch the roles flip.
  const bool x_towards = branch_side > 0 ? xi < 0 : xi > 0;
  return x_towards ? BranchPointClass::Sliding : BranchPointClass::Escaping;
}

BranchPointClass branch_point_class(const PiecewiseSystem& z, int branch, double s, double rel_tol) {
  if (s == 0.0) throw Error(ErrorCode::DegenerateInput, "branch_point_class at the origin");
  const Point2 p = branch_point(branch, s);
  const auto xv = z.X()(p);
  const auto yv = z.Y()(p);
  const double scale = std::max({std::abs(xv[0]), std::abs(xv[1]), std::abs(yv[0]), std::abs(yv[1])});
  const double tol = rel_tol * (1.0 + scale);
  const double xi = xv[branch - 1];
  const double yi = yv[branch - 1];
  const bool tx = std::abs(xi) <= tol;
  const bool ty = std::abs(yi) <= tol;
  if (tx && ty) return BranchPointClass::DoubleTangency;
  if (tx) return BranchPointClass::TangencyX;
  if (ty) return BranchPointClass::TangencyY;
  return sign_class(s > 0 ? 1 : -1, xi, yi);
}

double SlidingField::operator()(double s) const {
  const double den = denominator_(s);
  if (denominator_.is_zero() || std::abs(den) <= 1e-14 * std::max(1.0, denominator_.magnitude(s))) {
    throw Error(ErrorCode::EvaluationOutsideDomain,
                "sliding field denominator vanishes on branch " + std::to_string(branch_));
  }
  return numerator_(s) / den;
}

double SlidingField::derivative(double s) const {
  const double den = denominator_(s);
  if (denominator_.is_zero() || std::abs(den) <= 1e-14 * std::max(1.0, denominator_.magnitude(s))) {
    throw Error(ErrorCode::EvaluationOutsideDomain,
                "sliding field denominator vanishes on branch " + std::to_string(branch_));
  }
  const double num = numerator_(s);
  return (numerator_.derivative()(s) * den - num * denominator_.derivative()(s)) / (den * den);
}

SlidingField sliding_field(const PiecewiseSystem& z, int branch) {
  const int i = branch;
  const int j = along(branch);
  const Polynomial& xi = z.X().component(i);
  const Polynomial& xj = z.X().component(j);
  const Polynomial& yi = z.Y().component(i);
  const Polynomial& yj = z.Y().component(j);
  const Polynomial num = yi * xj - xi * yj;
  const Polynomial den = yi - xi;
  return {branch, num.restrict_to_zero(i), den.restrict_to_zero(i)};
}

double h_factor(const PiecewiseSystem& z, int branch, const Point2& p) {
  const double xi = normal_component(z.X(), branch, p);
  const double yi = normal_component(z.Y(), branch, p);
  const double sign = branch == 1 ? 1.0 : -1.0;
  return 1.0 / (sign * (xi - yi));
}

DetCheck sliding_field_det_check(const PiecewiseSystem& z, int branch, double s) {
  const Point2 p = branch_point(branch, s);
  const double xi = normal_component(z.X(), branch, p);
  const double yi = normal_component(z.Y(), branch, p);
  if (!(xi * yi < 0)) {
    throw Error(ErrorCode::EvaluationOutsideDomain, "point is not in a sliding or escaping region");
  }
  const double lhs = sliding_field(z, branch)(s);
  const double rhs = h_factor(z, branch, p) * z.det_at(p);
  return {lhs, rhs};
}

std::vector<PseudoEquilibrium> pseudo_equilibria(const PiecewiseSystem& z, int branch, double lo, double hi,
                                                 const PseudoEqOptions& opts) {
  const UniPoly det = z.det().restrict_to_zero(branch);
  const UniPoly ddet = det.derivative();
  const auto scan = scan_roots(det, lo, hi, {opts.cells, opts.xtol});

  std::vector<PseudoEquilibrium> out;
  for (double r : scan.roots) {
    const Point2 p = branch_point(branch, r);
    const double xi = normal_component(z.X(), branch, p);
    const double yi = normal_component(z.Y(), branch, p);
    if (!(xi * yi < 0)) continue;

    PseudoEquilibrium pe;
    pe.branch = branch;
    pe.location = r;
    pe.det_slope = ddet(r);
    pe.hyperbolic = std::abs(pe.det_slope) > opts.tol;
    if (pe.hyperbolic) {
      const double slope = h_factor(z, branch, p) * pe.det_slope;
      pe.stability = slope < 0 ? Stability::Stable : Stability::Unstable;
    }
    out.push_back(pe);
  }
  return out;
}

double lie_quantity(const FieldSpec& f, int branch, const Point2& p) {
  const int i = branch;
  const int j = along(branch);
  return f.component(j)(p.x1, p.x2) * f.component(i).derivative(j)(p.x1, p.x2);
}

Visibility fold_visibility(Side field, double lie, double g) {
  if (g == 0.0 || lie == 0.0) return Visibility::Boundary;
  const bool lands_in_x_region = (lie > 0) == (g > 0);
  const bool visible = field == Side::X ? lands_in_x_region : !lands_in_x_region;
  return visible ? Visibility::Visible : Visibility::Invisible;
}

std::vector<FoldPoint> find_tangencies(const PiecewiseSystem& z, int branch, double lo, double hi,
                                       const TangencyOptions& opts) {
  std::vector<FoldPoint> out;
  for (Side side : {Side::X, Side::Y}) {
    const FieldSpec& f = z.field(side);
    const FieldSpec& other = z.field(side == Side::X ? Side::Y : Side::X);
    const UniPoly normal = f.component(branch).restrict_to_zero(branch);
    const auto scan = scan_roots(normal, lo, hi, {opts.cells, opts.xtol});
    if (scan.identically_zero) {
      throw Error(ErrorCode::DegenerateTangency,
                  std::string(to_string(side)) + " is tangent to branch " + std::to_string(branch) + " everywhere");
    }
    for (double r : scan.roots) {
      // Snap roots sitting on the origin so the visibility rule sees g == 0.
      const double g = std::abs(r) <= opts.xtol ? 0.0 : r;
      const Point2 p = branch_point(branch, g);
      FoldPoint fp;
      fp.field = side;
      fp.branch = branch;
      fp.location = g;
      fp.lie = lie_quantity(f, branch, p);
      fp.degenerate = std::abs(fp.lie) <= opts.tol;
      fp.visibility = fp.degenerate ? Visibility::Boundary : fold_visibility(side, fp.lie, g);
      const auto ov = other(p);
      fp.regular_fold = !fp.degenerate && std::abs(ov[0]) > opts.tol && std::abs(ov[1]) > opts.tol;
      out.push_back(fp);
    }
  }
  std::sort(out.begin(), out.end(), [](const FoldPoint& a, const FoldPoint& b) { return a.location < b.location; });
  return out;
}

std::array<HalfBranchDecomposition, 4> sigma_decomposition(const PiecewiseSystem& z, double radius) {
  if (!(radius > 0)) throw Error(ErrorCode::DegenerateInput, "radius must be positive");
  std::array<HalfBranchDecomposition, 4> out;
  int slot = 0;
  for (int branch : {1, 2}) {
    const auto folds = find_tangencies(z, branch, -radius, radius);
    for (int side : {1, -1}) {
      HalfBranchDecomposition hb;
      hb.branch = branch;
      hb.side = side;

      std::vector<double> cuts;  // |s| of tangencies strictly inside the half-branch
      for (const auto& f : folds) {
        const double d = f.location * side;
        if (d <= 1e-12) continue;
        if (std::none_of(cuts.begin(), cuts.end(), [&](double c) { return std::abs(c - d) <= 1e-9; }))
          cuts.push_back(d);
      }
      if (cuts.size() >= 2) {
        throw Error(ErrorCode::TooManyTangencies, "half-branch " + std::to_string(branch) +
                                                      (side > 0 ? "+" : "-") + " has " +
                                                      std::to_string(cuts.size()) + " tangencies");
      }
      std::vector<double> knots{0.0};
      knots.insert(knots.end(), cuts.begin(), cuts.end());
      knots.push_back(radius);

      for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double mid = side * 0.5 * (knots[k] + knots[k + 1]);
        const Point2 p = branch_point(branch, mid);
        const auto cls = sign_class(side, normal_component(z.X(), branch, p), normal_component(z.Y(), branch, p));
        if (!hb.segments.empty() && hb.segments.back().cls == cls) {
          hb.segments.back().to = knots[k + 1];
        } else {
          hb.segments.push_back({cls, knots[k], knots[k + 1]});
        }
      }
      out[slot++] = std::move(hb);
    }
  }
  return out;
}

}  // namespace crosswitch
