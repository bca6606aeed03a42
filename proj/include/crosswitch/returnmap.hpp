#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crosswitch/fields.hpp"
#include "crosswitch/integrator.hpp"
#include "crosswitch/switching.hpp"

namespace crosswitch {

/// X carries Sigma_1 to Sigma_2, Y carries Sigma_2 to Sigma_1.
enum class HalfMapDirection { XfromSigma1toSigma2, YfromSigma2toSigma1 };

enum class CoeffSource { Analytic, NumericFit };

struct HalfMapCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  CoeffSource source = CoeffSource::Analytic;
  double error_estimate = 0.0;  // zero for the analytic jet
};

/// Transience at the origin: X1*X2(0) < 0 and Y1*Y2(0) > 0. With these signs
/// X turns orbits from one branch onto the other inside U+ and Y does the same
/// inside U-. Throws NotTransverse if a component vanishes at the origin.
bool is_transient(const PiecewiseSystem& z, double tol = kDegeneracyTol);

/// Third-order jet of the half map from the flow's Taylor series. Throws
/// NotTransverse when the field is tangent to the target branch at 0.
HalfMapCoeffs half_map_coeffs(const FieldSpec& f, HalfMapDirection dir);

/// Fit to numeric half-map samples at +-h, +-h/2, +-h/4.
HalfMapCoeffs half_map_coeffs_numeric(const FieldSpec& f, HalfMapDirection dir, double h = 1e-3);

/// Numeric half map: branch coordinate in, branch coordinate out.
double half_map(const FieldSpec& f, HalfMapDirection dir, double s, const TransitOptions& opts = {});

/// alpha_Z = X1 Y2(0) / (X2 Y1(0)); throws NotTransverse on a zero denominator.
double alpha(const PiecewiseSystem& z);

/// gamma_Z = X1 Y2(0) + X2 Y1(0)
double gamma(const PiecewiseSystem& z);

/// psi = phi_X o phi_Y = alpha x + B x^2 + C x^3 + O(x^4).
struct PsiJet {
  double alpha = 0.0;
  double B = 0.0;
  double C = 0.0;
};
PsiJet compose(const HalfMapCoeffs& x_map, const HalfMapCoeffs& y_map);

/// Cubic coefficient of psi o psi at alpha = -1, i.e. -2 (B^2 + C).
double eta_series(const PsiJet& psi);

/// The closed-form expression -2((b_X a_Y)^2 + c_X a_Y^3 + (b_Y/a_Y)^2 + (c_Y/a_Y)^2).
double eta_closed_form(const HalfMapCoeffs& x_map, const HalfMapCoeffs& y_map);

struct ReturnMapModel {
  double alpha = 0.0;
  double gamma = 0.0;
  HalfMapCoeffs x_map;
  HalfMapCoeffs y_map;
  double beta = 0.0;
  std::optional<double> eta;           // only when |alpha + 1| <= 1e-9
  std::optional<double> eta_formula;   // same condition
  double radius = 0.0;
  std::vector<std::pair<double, double>> samples;  // (x, phi_Z(x)), x in (-radius, 0)
  std::vector<std::string> diagnostics;
};

inline constexpr double kPseudoHopfBand = 1e-9;

/// Throws NotTransient unless is_transient(z) holds.
ReturnMapModel return_map_model(const PiecewiseSystem& z, int sample_count = 16);

struct ReturnMapTrace {
  double value = 0.0;
  std::array<Point2, 4> crossings{};  // Sigma_1, Sigma_2, Sigma_1, Sigma_2
  bool hit_sliding = false;           // some crossing sits on a sliding/escaping segment
};

/// phi_Z(x) = (phi_X o phi_Y)^2 (x) from four numeric transits. Defined for x
/// of either sign as the continuation of the smooth orbits.
ReturnMapTrace numeric_return_map_trace(const PiecewiseSystem& z, double x, const TransitOptions& opts = {});
double numeric_return_map(const PiecewiseSystem& z, double x, const TransitOptions& opts = {});

struct FixedPoint {
  double location = 0.0;
  Stability stability = Stability::Degenerate;
  double derivative = 0.0;
};

struct FixedPointOptions {
  int grid = 256;
  double xtol = 1e-12;
  TransitOptions transit{};
};

/// Nontrivial zeros of phi_Z(x) - x in [lo, hi]; the origin itself is skipped.
std::vector<FixedPoint> fixed_points(const PiecewiseSystem& z, double lo, double hi,
                                     const FixedPointOptions& opts = {});

}  // namespace crosswitch
