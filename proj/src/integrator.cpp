#include "crosswitch/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "crosswitch/error.hpp"

namespace crosswitch {

Point2 rk4_step(const FieldSpec& f, const Point2& p, double h, double sign) {
  auto rhs = [&](double x1, double x2) {
    const auto v = f(Point2{x1, x2});
    return std::array<double, 2>{sign * v[0], sign * v[1]};
  };
  const auto k1 = rhs(p.x1, p.x2);
  const auto k2 = rhs(p.x1 + 0.5 * h * k1[0], p.x2 + 0.5 * h * k1[1]);
  const auto k3 = rhs(p.x1 + 0.5 * h * k2[0], p.x2 + 0.5 * h * k2[1]);
  const auto k4 = rhs(p.x1 + h * k3[0], p.x2 + h * k3[1]);
  return {p.x1 + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
          p.x2 + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

namespace {

// Step length in (0, hi] at which the RK4 step from q puts x_target on 0.
// Illinois variant of regula falsi; the step map is smooth in h.
double landing_step(const FieldSpec& f, const Point2& q, int target, double hi, double sign) {
  double a = 0.0, fa = q[target];
  double b = hi, fb = rk4_step(f, q, hi, sign)[target];
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    if (fb == 0.0) return b;
    const double c = (a * fb - b * fa) / (fb - fa);
    if (!(c > std::min(a, b) && c < std::max(a, b))) break;
    const double fc = rk4_step(f, q, c, sign)[target];
    if (fc == 0.0) return c;
    if ((fc < 0) == (fb < 0)) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = b;
      fa = fb;
      b = c;
      fb = fc;
      side = 1;
    }
    if (std::abs(b - a) <= 4e-16 * hi) break;
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

}  // namespace

TransitResult transit_to_zero(const FieldSpec& f, const Point2& p, int target, const TransitOptions& opts) {
  TransitResult out{p, 0.0, 0};
  const double c0 = p[target];
  if (c0 == 0.0) return out;

  const auto v = f(p);
  const double ft = v[target - 1];
  const double speed = std::max(std::abs(v[0]), std::abs(v[1]));
  if (std::abs(ft) <= 1e-14 * (1.0 + speed)) {
    throw Error(ErrorCode::NotTransverse, "field is tangent to the target branch at the start point");
  }
  const double sign = -c0 / ft > 0 ? 1.0 : -1.0;
  const double scale = std::max(std::abs(p.x1), std::abs(p.x2));
  const double dt = std::min(opts.max_step, scale / (32.0 * speed));

  Point2 q = p;
  double elapsed = 0.0;
  for (long n = 0;; ++n) {
    if (n >= opts.max_steps) throw Error(ErrorCode::StepLimit, "transit exceeded the step limit");
    if (elapsed > opts.max_time) throw Error(ErrorCode::LeftDomain, "transit did not reach the branch in time");
    const Point2 next = rk4_step(f, q, dt, sign);
    if (!std::isfinite(next.x1) || !std::isfinite(next.x2) || std::max(std::abs(next.x1), std::abs(next.x2)) > opts.box) {
      throw Error(ErrorCode::LeftDomain, "transit left the working box");
    }
    if (next[target] == 0.0 || (next[target] < 0) != (c0 < 0)) {
      const double h = landing_step(f, q, target, dt, sign);
      Point2 end = rk4_step(f, q, h, sign);
      if (target == 1) end.x1 = 0.0; else end.x2 = 0.0;
      out.end = end;
      out.time = sign * (elapsed + h);
      out.steps = n + 1;
      return out;
    }
    q = next;
    elapsed += dt;
  }
}

}  // namespace crosswitch
