#pragma once

#include "crosswitch/fields.hpp"

namespace crosswitch {

/// One classical RK4 step of dp/dt = sign * f(p).
Point2 rk4_step(const FieldSpec& f, const Point2& p, double h, double sign = 1.0);

struct TransitOptions {
  double max_step = 1e-3;
  double box = 1.0;
  double max_time = 1e3;
  long max_steps = 1000000;
};

struct TransitResult {
  Point2 end;      // end[target] is exactly 0
  double time = 0; // signed: negative when the orbit is followed backward
  long steps = 0;
};

/// Follows the orbit of f through p until the coordinate x_target vanishes.
/// The time direction is chosen so that x_target initially moves toward 0,
/// which makes the map a smooth continuation even when the orbit is only
/// reached backward in time. The last step is solved for its length to
/// machine precision, so the landing coordinate is accurate far below the
/// step-size error. Throws LeftDomain, StepLimit, NotTransverse.
TransitResult transit_to_zero(const FieldSpec& f, const Point2& p, int target, const TransitOptions& opts = {});

}  // namespace crosswitch
