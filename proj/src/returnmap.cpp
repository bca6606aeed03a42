#include "crosswitch/returnmap.hpp"

#include <algorithm>
#include <cmath>

#include "crosswitch/error.hpp"
#include "crosswitch/roots.hpp"

namespace crosswitch {

namespace {

struct Route {
  int from;    // branch the map starts on
  int target;  // coordinate that vanishes on arrival
  int output;  // coordinate read off on arrival
};

Route route_of(HalfMapDirection dir) {
  return dir == HalfMapDirection::XfromSigma1toSigma2 ? Route{1, 2, 1} : Route{2, 1, 2};
}

// Power series in the branch coordinate, truncated after degree 3.
using Series = std::array<double, 4>;

Series mul(const Series& a, const Series& b) {
  Series r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; i + j < 4; ++j) r[i + j] += a[i] * b[j];
  return r;
}

Series to_series(const UniPoly& p) { return {p.coeff(0), p.coeff(1), p.coeff(2), p.coeff(3)}; }

// sum_k tau^k / k! * terms[k]
Series flow_sum(const Series& tau, const std::array<Series, 4>& terms) {
  Series out{};
  Series power{1.0, 0.0, 0.0, 0.0};
  double factorial = 1.0;
  for (int k = 0; k < 4; ++k) {
    if (k > 0) {
      power = mul(power, tau);
      factorial *= k;
    }
    const Series t = mul(power, terms[k]);
    for (int m = 0; m < 4; ++m) out[m] += t[m] / factorial;
  }
  return out;
}

Polynomial lie(const FieldSpec& f, const Polynomial& g) {
  return f.f1() * g.derivative(1) + f.f2() * g.derivative(2);
}

// Quadratic through (u_m, y_m); returns its value and slope at u = 0.
std::pair<double, double> quadratic_at_zero(const std::array<double, 3>& u, const std::array<double, 3>& y) {
  const double f01 = (y[1] - y[0]) / (u[1] - u[0]);
  const double f12 = (y[2] - y[1]) / (u[2] - u[1]);
  const double f012 = (f12 - f01) / (u[2] - u[0]);
  return {y[0] - f01 * u[0] + f012 * u[0] * u[1], f01 - f012 * (u[0] + u[1])};
}

std::pair<double, double> line_at_zero(double u0, double y0, double u1, double y1) {
  const double slope = (y1 - y0) / (u1 - u0);
  return {y0 - slope * u0, slope};
}

bool on_sliding_or_escaping(const PiecewiseSystem& z, int branch, const Point2& p) {
  if (p[along(branch)] == 0.0) return false;
  return normal_component(z.X(), branch, p) * normal_component(z.Y(), branch, p) < 0;
}

}  // namespace

bool is_transient(const PiecewiseSystem& z, double tol) {
  const Point2 o{};
  const auto xv = z.X()(o);
  const auto yv = z.Y()(o);
  for (double v : {xv[0], xv[1], yv[0], yv[1]}) {
    if (std::abs(v) <= tol) throw Error(ErrorCode::NotTransverse, "a field component vanishes at the origin");
  }
  return xv[0] * xv[1] < 0 && yv[0] * yv[1] > 0;
}

HalfMapCoeffs half_map_coeffs(const FieldSpec& f, HalfMapDirection dir) {
  const Route r = route_of(dir);
  std::array<Series, 4> p{}, q{};
  Polynomial gt = Polynomial::coordinate(r.target);
  Polynomial go = Polynomial::coordinate(r.output);
  for (int k = 0; k < 4; ++k) {
    if (k > 0) {
      gt = lie(f, gt);
      go = lie(f, go);
    }
    p[k] = to_series(gt.restrict_to_zero(r.from));
    q[k] = to_series(go.restrict_to_zero(r.from));
  }
  const double lead = p[1][0];
  if (lead == 0.0 || std::abs(lead) <= 1e-14 * (1.0 + std::abs(q[1][0]))) {
    throw Error(ErrorCode::NotTransverse, "field is tangent to the target branch at the origin");
  }

  // Arrival time tau(s) = t1 s + t2 s^2 + t3 s^3, fixed order by order: the
  // coefficient of s^m in the arrival condition depends on t_m through lead.
  Series tau{};
  for (int m = 1; m < 4; ++m) {
    const Series e = flow_sum(tau, p);
    tau[m] -= e[m] / lead;
  }
  const Series phi = flow_sum(tau, q);
  return {phi[1], phi[2], phi[3], CoeffSource::Analytic, 0.0};
}

double half_map(const FieldSpec& f, HalfMapDirection dir, double s, const TransitOptions& opts) {
  const Route r = route_of(dir);
  const auto res = transit_to_zero(f, branch_point(r.from, s), r.target, opts);
  return res.end[r.output];
}

HalfMapCoeffs half_map_coeffs_numeric(const FieldSpec& f, HalfMapDirection dir, double h) {
  const std::array<double, 3> xs{h, h / 2, h / 4};
  std::array<double, 3> u{}, odd{}, even{};
  for (int m = 0; m < 3; ++m) {
    const double x = xs[m];
    const double gp = half_map(f, dir, x);
    const double gm = half_map(f, dir, -x);
    u[m] = x * x;
    odd[m] = (gp - gm) / (2.0 * x);      // a + c x^2 + e x^4
    even[m] = (gp + gm) / (2.0 * x * x); // b + d x^2 + f x^4
  }
  const auto [a, c] = quadratic_at_zero(u, odd);
  const auto [b, d] = quadratic_at_zero(u, even);
  (void)d;
  // Lower-order fit on the two finest nodes bounds the truncation error.
  const auto [a2, c2] = line_at_zero(u[1], odd[1], u[2], odd[2]);
  const auto [b2, d2] = line_at_zero(u[1], even[1], u[2], even[2]);
  (void)d2;
  const double err = std::max({std::abs(a - a2), std::abs(b - b2), std::abs(c - c2)});
  return {a, b, c, CoeffSource::NumericFit, err};
}

double alpha(const PiecewiseSystem& z) {
  const Point2 o{};
  const auto xv = z.X()(o);
  const auto yv = z.Y()(o);
  const double den = xv[1] * yv[0];
  if (den == 0.0) throw Error(ErrorCode::NotTransverse, "X2(0)*Y1(0) vanishes");
  return xv[0] * yv[1] / den;
}

double gamma(const PiecewiseSystem& z) {
  const Point2 o{};
  const auto xv = z.X()(o);
  const auto yv = z.Y()(o);
  return xv[0] * yv[1] + xv[1] * yv[0];
}

PsiJet compose(const HalfMapCoeffs& x, const HalfMapCoeffs& y) {
  PsiJet out;
  out.alpha = x.a * y.a;
  out.B = x.a * y.b + x.b * y.a * y.a;
  out.C = x.a * y.c + 2.0 * x.b * y.a * y.b + x.c * y.a * y.a * y.a;
  return out;
}

double eta_series(const PsiJet& psi) { return -2.0 * (psi.B * psi.B + psi.C); }

double eta_closed_form(const HalfMapCoeffs& x, const HalfMapCoeffs& y) {
  const double t1 = x.b * y.a;
  const double t3 = y.b / y.a;
  const double t4 = y.c / y.a;
  return -2.0 * (t1 * t1 + x.c * y.a * y.a * y.a + t3 * t3 + t4 * t4);
}

ReturnMapTrace numeric_return_map_trace(const PiecewiseSystem& z, double x, const TransitOptions& opts) {
  ReturnMapTrace out;
  double s = x;
  for (int k = 0; k < 4; ++k) {
    const bool y_leg = k % 2 == 0;
    const auto dir = y_leg ? HalfMapDirection::YfromSigma2toSigma1 : HalfMapDirection::XfromSigma1toSigma2;
    s = half_map(y_leg ? z.Y() : z.X(), dir, s, opts);
    const int branch = y_leg ? 1 : 2;
    out.crossings[k] = branch_point(branch, s);
    out.hit_sliding = out.hit_sliding || on_sliding_or_escaping(z, branch, out.crossings[k]);
  }
  out.value = s;
  return out;
}

double numeric_return_map(const PiecewiseSystem& z, double x, const TransitOptions& opts) {
  return numeric_return_map_trace(z, x, opts).value;
}

ReturnMapModel return_map_model(const PiecewiseSystem& z, int sample_count) {
  if (!is_transient(z)) throw Error(ErrorCode::NotTransient, "X1X2(0) < 0 and Y1Y2(0) > 0 are required");
  ReturnMapModel m;
  m.alpha = alpha(z);
  m.gamma = gamma(z);
  m.x_map = half_map_coeffs(z.X(), HalfMapDirection::XfromSigma1toSigma2);
  m.y_map = half_map_coeffs(z.Y(), HalfMapDirection::YfromSigma2toSigma1);
  const PsiJet psi = compose(m.x_map, m.y_map);
  m.beta = psi.B;
  if (std::abs(m.alpha + 1.0) <= kPseudoHopfBand) {
    m.eta = eta_series(psi);
    m.eta_formula = eta_closed_form(m.x_map, m.y_map);
  }

  const std::pair<const FieldSpec*, HalfMapDirection> legs[] = {
      {&z.X(), HalfMapDirection::XfromSigma1toSigma2}, {&z.Y(), HalfMapDirection::YfromSigma2toSigma1}};
  for (const auto& [f, dir] : legs) {
    const HalfMapCoeffs& analytic = dir == HalfMapDirection::XfromSigma1toSigma2 ? m.x_map : m.y_map;
    const char* name = dir == HalfMapDirection::XfromSigma1toSigma2 ? "phi_X" : "phi_Y";
    try {
      const auto fit = half_map_coeffs_numeric(*f, dir);
      const double gap = std::max({std::abs(fit.a - analytic.a), std::abs(fit.b - analytic.b),
                                   std::abs(fit.c - analytic.c)});
      if (gap > 1e-5) m.diagnostics.push_back(std::string(name) + " jet disagrees with numeric fit");
    } catch (const Error& e) {
      m.diagnostics.push_back(std::string(name) + " numeric fit failed: " + e.what());
    }
  }

  double r = 1e-2;
  for (int attempt = 0; attempt <= 10; ++attempt, r *= 0.5) {
    std::vector<std::pair<double, double>> samples;
    try {
      for (int k = 1; k <= sample_count; ++k) {
        const double x = -r * k / sample_count;
        samples.emplace_back(x, numeric_return_map(z, x));
      }
    } catch (const Error&) {
      continue;
    }
    m.radius = r;
    m.samples = std::move(samples);
    break;
  }
  if (m.samples.empty()) m.diagnostics.push_back("return map samples failed at every radius");
  return m;
}

std::vector<FixedPoint> fixed_points(const PiecewiseSystem& z, double lo, double hi, const FixedPointOptions& opts) {
  std::vector<FixedPoint> out;
  const int n = opts.grid;
  const double nan = std::nan("");
  auto residual = [&](double x) {
    try {
      return numeric_return_map(z, x, opts.transit) - x;
    } catch (const Error&) {
      return nan;
    }
  };
  std::vector<double> xs(n + 1), fs(n + 1);
  for (int k = 0; k <= n; ++k) {
    xs[k] = k == n ? hi : lo + (hi - lo) * k / n;
    fs[k] = xs[k] == 0.0 ? nan : residual(xs[k]);
  }
  for (int k = 0; k < n; ++k) {
    const double a = xs[k], b = xs[k + 1];
    if (a <= 0.0 && b >= 0.0) continue;  // the trivial fixed point lives here
    if (!std::isfinite(fs[k]) || !std::isfinite(fs[k + 1])) continue;
    double root;
    if (fs[k] == 0.0) {
      root = a;
    } else if ((fs[k] < 0) != (fs[k + 1] < 0) || fs[k + 1] == 0.0) {
      if (fs[k + 1] == 0.0) continue;  // picked up as the next interval's left end
      root = bisect(residual, a, b, fs[k], opts.xtol);
      // A sign change across a jump of the map (orbit hitting a tangency) is not a root.
      const double r0 = residual(root);
      if (!std::isfinite(r0) || std::abs(r0) > 1e-8 * std::max(1.0, std::abs(root))) continue;
    } else {
      continue;
    }
    FixedPoint fp;
    fp.location = root;
    const double dh = 1e-6 * std::max(1e-3, std::abs(root));
    try {
      fp.derivative = (numeric_return_map(z, root + dh, opts.transit) - numeric_return_map(z, root - dh, opts.transit)) /
                      (2.0 * dh);
      if (std::abs(fp.derivative - 1.0) <= 1e-9) fp.stability = Stability::Degenerate;
      else fp.stability = fp.derivative > 1.0 ? Stability::Unstable : Stability::Stable;
    } catch (const Error&) {
      fp.stability = Stability::Degenerate;
    }
    out.push_back(fp);
  }
  return out;
}

}  // namespace crosswitch
