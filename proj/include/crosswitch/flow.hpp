#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crosswitch/fields.hpp"
#include "crosswitch/returnmap.hpp"

namespace crosswitch {

enum class Mode { SmoothX, SmoothY, Sliding1, Sliding2, StationaryOrigin, StationarySingularTangency };

enum class Event {
  Start,
  BranchCross1,
  BranchCross2,
  SlidingEntry,
  SlidingExit,
  OriginPass,
  TangencyStop,
  OriginStop,
  TimeLimit,
  BoxExit,
};

std::string_view to_string(Mode m);
std::string_view to_string(Event e);

struct TimedPoint {
  double t = 0.0;
  Point2 p;
};

struct TrajectorySegment {
  Mode mode = Mode::SmoothX;
  std::vector<TimedPoint> points;
  Event entry = Event::Start;
  Event exit = Event::TimeLimit;
  std::vector<std::string> flags;  // ambiguous continuations taken at entry
  double event_residual = 0.0;     // |event function| at the located exit, before snapping
};

struct Trajectory {
  std::vector<TrajectorySegment> segments;
  Event terminal = Event::TimeLimit;
  std::optional<std::string> error;  // set when integration failed part way
};

struct IntegrateOptions {
  double h = 1e-3;
  double event_tol = 1e-12;
  long max_steps = 1000000;
  double tangency_tol = 1e-9;
};

/// Forward Filippov trajectory from p0 up to time tmax, stopped at the box
/// max(|x1|, |x2|) <= box. Throws StepLimit, DegenerateInput.
Trajectory integrate(const PiecewiseSystem& z, const Point2& p0, double tmax, double box,
                     const IntegrateOptions& opts = {});

/// Backward trajectory: the forward trajectory of -Z with times negated.
Trajectory integrate_backward(const PiecewiseSystem& z, const Point2& p0, double tmax, double box,
                              const IntegrateOptions& opts = {});

/// lambda X + (1 - lambda) Y with lambda = Y_i / (Y_i - X_i), at the branch point s.
std::array<double, 2> filippov_velocity(const PiecewiseSystem& z, int branch, double s);

struct PortraitOptions {
  double tmax = 0.0;  // 0 picks 4 * box
  IntegrateOptions integrate{};
  unsigned threads = 0;  // 0 picks the hardware concurrency
};

struct PortraitEntry {
  Point2 seed;
  bool backward = false;
  Trajectory trajectory;
};

/// seeds x seeds lattice of cell centres in [-box, box]^2 plus `seeds` points
/// on each half-branch, each integrated forward and backward. Output order
/// depends only on the inputs.
std::vector<PortraitEntry> phase_portrait(const PiecewiseSystem& z, double box, int seeds,
                                          const PortraitOptions& opts = {});

struct PseudoCycle {
  FixedPoint fixed_point;
  std::array<Point2, 4> crossings{};
};

/// Innermost nontrivial return-map fixed point on Sigma_2^- within (-radius, 0), if any.
/// Throws NotTransient.
std::optional<PseudoCycle> detect_pseudo_cycle(const PiecewiseSystem& z, double radius = 0.3);

}  // namespace crosswitch
