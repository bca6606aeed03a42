#include "crosswitch/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <thread>

#include "crosswitch/error.hpp"
#include "crosswitch/integrator.hpp"
#include "crosswitch/switching.hpp"

namespace crosswitch {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::SmoothX: return "SmoothX";
    case Mode::SmoothY: return "SmoothY";
    case Mode::Sliding1: return "Sliding1";
    case Mode::Sliding2: return "Sliding2";
    case Mode::StationaryOrigin: return "StationaryOrigin";
    case Mode::StationarySingularTangency: return "StationarySingularTangency";
  }
  return "Unknown";
}

std::string_view to_string(Event e) {
  switch (e) {
    case Event::Start: return "Start";
    case Event::BranchCross1: return "BranchCross1";
    case Event::BranchCross2: return "BranchCross2";
    case Event::SlidingEntry: return "SlidingEntry";
    case Event::SlidingExit: return "SlidingExit";
    case Event::OriginPass: return "OriginPass";
    case Event::TangencyStop: return "TangencyStop";
    case Event::OriginStop: return "OriginStop";
    case Event::TimeLimit: return "TimeLimit";
    case Event::BoxExit: return "BoxExit";
  }
  return "Unknown";
}

std::array<double, 2> filippov_velocity(const PiecewiseSystem& z, int branch, double s) {
  const Point2 p = branch_point(branch, s);
  const auto xv = z.X()(p);
  const auto yv = z.Y()(p);
  const double xi = xv[branch - 1], yi = yv[branch - 1];
  if (!(xi * yi < 0)) throw Error(ErrorCode::EvaluationOutsideDomain, "point is not in a sliding or escaping region");
  const double lambda = yi / (yi - xi);
  return {lambda * xv[0] + (1 - lambda) * yv[0], lambda * xv[1] + (1 - lambda) * yv[1]};
}

namespace {

int sgn(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

Mode smooth_mode(Side s) { return s == Side::X ? Mode::SmoothX : Mode::SmoothY; }
Mode sliding_mode(int branch) { return branch == 1 ? Mode::Sliding1 : Mode::Sliding2; }
Event cross_event(int branch) { return branch == 1 ? Event::BranchCross1 : Event::BranchCross2; }
Side other(Side s) { return s == Side::X ? Side::Y : Side::X; }

void set_coord(Point2& p, int k, double v) { (k == 1 ? p.x1 : p.x2) = v; }

// How the next segment starts.
struct Launch {
  Mode mode = Mode::SmoothX;
  Point2 p;
  double t = 0.0;
  Event entry = Event::Start;
  int sigma1 = 0, sigma2 = 0;  // quadrant of a smooth segment
  bool skip1 = false, skip2 = false;  // ignore sign changes of x_k on the first step
  bool skip_origin = false;           // sliding: leaving the origin on the first step
  std::vector<std::string> flags;
};

// g(0) > 0 and g(h) <= 0; returns a step length where g is within tol of 0.
double first_root(const std::function<double(double)>& g, double h, double tol) {
  double a = 0.0, b = h;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double v = g(m);
    if (std::abs(v) <= tol) return m;
    if (v > 0) a = m; else b = m;
    if (b - a <= 1e-17 * h) break;
  }
  return b;
}

class Integrator {
public:
  Integrator(const PiecewiseSystem& z, double tmax, double box, const IntegrateOptions& opts)
      : z_(z), tmax_(tmax), box_(box), opts_(opts) {}

  Trajectory run(const Point2& p0) {
    Trajectory traj;
    std::optional<Launch> next = initial(p0);
    while (next) {
      TrajectorySegment seg;
      seg.mode = next->mode;
      seg.entry = next->entry;
      seg.flags = next->flags;
      std::optional<Launch> after;
      switch (next->mode) {
        case Mode::SmoothX:
        case Mode::SmoothY: after = smooth(*next, seg); break;
        case Mode::Sliding1:
        case Mode::Sliding2: after = sliding(*next, seg); break;
        case Mode::StationaryOrigin:
        case Mode::StationarySingularTangency: stationary(*next, seg); break;
      }
      if (after) seg.exit = after->entry;
      traj.segments.push_back(std::move(seg));
      next = std::move(after);
    }
    traj.terminal = traj.segments.back().exit;
    return traj;
  }

private:
  void count_step() {
    if (++steps_ > opts_.max_steps) throw Error(ErrorCode::StepLimit, "integration exceeded the step limit");
  }

  double tol_at(const Point2& p) const {
    const auto xv = z_.X()(p);
    const auto yv = z_.Y()(p);
    return opts_.tangency_tol *
           (1.0 + std::max({std::abs(xv[0]), std::abs(xv[1]), std::abs(yv[0]), std::abs(yv[1])}));
  }

  Launch stationary_launch(Mode m, const Point2& p, double t, Event e, std::string flag = {}) const {
    Launch l;
    l.mode = m;
    l.p = p;
    l.t = t;
    l.entry = e;
    if (!flag.empty()) l.flags.push_back(std::move(flag));
    return l;
  }

  Launch smooth_launch(Side side, const Point2& p, double t, Event e, int s1, int s2) const {
    Launch l;
    l.mode = smooth_mode(side);
    l.p = p;
    l.t = t;
    l.entry = e;
    l.sigma1 = s1;
    l.sigma2 = s2;
    return l;
  }

  Launch sliding_launch(int branch, const Point2& p, double t, Event e) const {
    Launch l;
    l.mode = sliding_mode(branch);
    l.p = p;
    l.t = t;
    l.entry = e;
    return l;
  }

  std::optional<Launch> initial(Point2 p) {
    if (!std::isfinite(p.x1) || !std::isfinite(p.x2) || std::max(std::abs(p.x1), std::abs(p.x2)) > box_) {
      throw Error(ErrorCode::DegenerateInput, "start point outside the box");
    }
    const bool on1 = std::abs(p.x1) <= opts_.event_tol;
    const bool on2 = std::abs(p.x2) <= opts_.event_tol;
    if (on1 && on2) return at_origin(0.0, 0, Event::Start);
    if (!on1 && !on2) return smooth_launch(active_side(p), p, 0.0, Event::Start, sgn(p.x1), sgn(p.x2));

    const int i = on1 ? 1 : 2;
    set_coord(p, i, 0.0);
    const double s = p[along(i)];
    const double xi = normal_component(z_.X(), i, p);
    const double yi = normal_component(z_.Y(), i, p);
    const double tol = tol_at(p);
    if (std::abs(xi) <= tol && std::abs(yi) <= tol) {
      return stationary_launch(Mode::StationarySingularTangency, p, 0.0, Event::Start);
    }
    if (std::abs(xi) > tol && std::abs(yi) > tol) {
      if (xi * yi < 0) {
        Launch l = sliding_launch(i, p, 0.0, Event::Start);
        if (sign_class(sgn(s), xi, yi) == BranchPointClass::Escaping) l.flags.push_back("start on escaping segment");
        return l;
      }
      const int si = sgn(xi);
      const Side side = si * sgn(s) > 0 ? Side::X : Side::Y;
      return departure(side, i, p, 0.0, Event::Start, si, sgn(s));
    }
    // One field is tangent here: leave with the transverse one when it is
    // active on the side it points to.
    const Side transverse = std::abs(xi) > tol ? Side::X : Side::Y;
    const int si = sgn(transverse == Side::X ? xi : yi);
    const Side active = si * sgn(s) > 0 ? Side::X : Side::Y;
    if (active != transverse) {
      return stationary_launch(Mode::StationarySingularTangency, p, 0.0, Event::Start, "start at a tangency");
    }
    return departure(transverse, i, p, 0.0, Event::Start, si, sgn(s));
  }

  // Smooth segment leaving branch i towards sign si of x_i.
  Launch departure(Side side, int i, const Point2& p, double t, Event e, int si, int sj) const {
    Launch l = i == 1 ? smooth_launch(side, p, t, e, si, sj) : smooth_launch(side, p, t, e, sj, si);
    (i == 1 ? l.skip1 : l.skip2) = true;
    return l;
  }

  std::optional<Launch> smooth(const Launch& l, TrajectorySegment& seg) {
    const Side side = l.mode == Mode::SmoothX ? Side::X : Side::Y;
    const FieldSpec& f = z_.field(side);
    Point2 p = l.p;
    double t = l.t;
    const int sigma[3] = {0, l.sigma1, l.sigma2};
    bool first = true;
    seg.points.push_back({t, p});
    for (;;) {
      if (t >= tmax_) {
        seg.exit = Event::TimeLimit;
        return std::nullopt;
      }
      const double h = std::min(opts_.h, tmax_ - t);
      const Point2 q = rk4_step(f, p, h);
      count_step();

      int hit = 0;
      double tau = h;
      for (int k : {1, 2}) {
        if (first && (k == 1 ? l.skip1 : l.skip2)) continue;
        if (q[k] * sigma[k] > 0) continue;
        const double tk = first_root([&](double s) { return rk4_step(f, p, s)[k] * sigma[k]; }, h, opts_.event_tol);
        if (hit == 0 || tk < tau) {
          hit = k;
          tau = tk;
        }
      }
      if (hit != 0) {
        Point2 e = rk4_step(f, p, tau);
        seg.event_residual = std::abs(e[hit]);
        set_coord(e, hit, 0.0);
        t += tau;
        const int o = along(hit);
        const bool origin = std::abs(e[o]) <= opts_.event_tol;
        if (origin) {
          seg.event_residual = std::max(seg.event_residual, std::abs(e[o]));
          set_coord(e, o, 0.0);
        }
        seg.points.push_back({t, e});
        if (origin) return at_origin(t, 0, Event::OriginPass);
        return on_landing(side, hit, e, t, sigma[hit]);
      }
      if (!std::isfinite(q.x1) || !std::isfinite(q.x2) || std::max(std::abs(q.x1), std::abs(q.x2)) > box_) {
        seg.exit = Event::BoxExit;
        return std::nullopt;
      }
      p = q;
      t += h;
      seg.points.push_back({t, p});
      first = false;
    }
  }

  // Field `side` reached branch i at e, coming from the side where x_i has sign from.
  std::optional<Launch> on_landing(Side side, int i, const Point2& e, double t, int from) {
    const double s = e[along(i)];
    const double xi = normal_component(z_.X(), i, e);
    const double yi = normal_component(z_.Y(), i, e);
    const double fi = side == Side::X ? xi : yi;
    const double gi = side == Side::X ? yi : xi;
    const double tol = tol_at(e);

    if (std::abs(fi) <= tol && std::abs(gi) <= tol) {
      return stationary_launch(Mode::StationarySingularTangency, e, t, Event::TangencyStop);
    }
    if (std::abs(fi) <= tol) {
      // Grazing contact: the orbit of the incoming field stays on its side.
      Launch l = departure(side, i, e, t, cross_event(i), from, sgn(s));
      l.flags.push_back("grazing tangency");
      return l;
    }
    if (fi * gi > 0 || std::abs(gi) <= tol) {
      Launch l = departure(other(side), i, e, t, cross_event(i), -from, sgn(s));
      if (std::abs(gi) <= tol) l.flags.push_back("crossing at a tangency of the other field");
      return l;
    }
    if (sign_class(sgn(s), xi, yi) == BranchPointClass::Sliding) return sliding_launch(i, e, t, Event::SlidingEntry);
    // Arrival on an escaping segment: depart with the field on the far side,
    // which carries the motion on in the same direction.
    Launch l = departure(other(side), i, e, t, cross_event(i), -from, sgn(s));
    l.flags.push_back("landed on escaping segment");
    return l;
  }

  std::optional<Launch> sliding(const Launch& l, TrajectorySegment& seg) {
    const int i = l.mode == Mode::Sliding1 ? 1 : 2;
    const SlidingField sf = sliding_field(z_, i);
    auto xi = [&](double s) { return normal_component(z_.X(), i, branch_point(i, s)); };
    auto yi = [&](double s) { return normal_component(z_.Y(), i, branch_point(i, s)); };
    auto step = [&](double s, double h) {
      const double k1 = sf(s);
      const double k2 = sf(s + 0.5 * h * k1);
      const double k3 = sf(s + 0.5 * h * k2);
      const double k4 = sf(s + h * k3);
      return s + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    };

    double s = l.p[along(i)];
    double t = l.t;
    const int sx = sgn(xi(s)), sy = sgn(yi(s));
    bool first = true;
    seg.points.push_back({t, branch_point(i, s)});
    try {
      for (;;) {
        if (t >= tmax_) {
          seg.exit = Event::TimeLimit;
          return std::nullopt;
        }
        const double h = std::min(opts_.h, tmax_ - t);
        const double sn = step(s, h);
        count_step();

        enum { None, Origin, TangX, TangY } what = None;
        double tau = h;
        auto consider = [&](bool crossed, int kind, const std::function<double(double)>& g) {
          if (!crossed) return;
          const double tk = first_root(g, h, opts_.event_tol);
          if (what == None || tk < tau) {
            what = static_cast<decltype(what)>(kind);
            tau = tk;
          }
        };
        const int ss = sgn(s);
        consider(!(first && l.skip_origin) && ss != 0 && sn * ss <= 0, Origin,
                 [&](double x) { return step(s, x) * ss; });
        consider(xi(sn) * sx <= 0, TangX, [&](double x) { return xi(step(s, x)) * sx; });
        consider(yi(sn) * sy <= 0, TangY, [&](double x) { return yi(step(s, x)) * sy; });

        if (what == Origin) {
          seg.event_residual = std::abs(step(s, tau));
          t += tau;
          seg.points.push_back({t, Point2{}});
          return at_origin(t, i, Event::OriginPass);
        }
        if (what == TangX || what == TangY) {
          const double se = step(s, tau);
          seg.event_residual = std::abs(what == TangX ? xi(se) : yi(se));
          t += tau;
          const Point2 q = branch_point(i, se);
          seg.points.push_back({t, q});
          const Side tangent = what == TangX ? Side::X : Side::Y;
          const double lie = lie_quantity(z_.field(tangent), i, q);
          const Visibility vis =
              std::abs(lie) <= tol_at(q) ? Visibility::Boundary : fold_visibility(tangent, lie, se);
          if (vis != Visibility::Visible) {
            return stationary_launch(Mode::StationarySingularTangency, q, t, Event::TangencyStop);
          }
          // A visible fold bends the tangent orbit into the field's own region.
          const int si = (tangent == Side::X ? 1 : -1) * sgn(se);
          return departure(tangent, i, q, t, Event::SlidingExit, si, sgn(se));
        }
        if (!std::isfinite(sn) || std::abs(sn) > box_) {
          seg.exit = Event::BoxExit;
          return std::nullopt;
        }
        s = sn;
        t += h;
        seg.points.push_back({t, branch_point(i, s)});
        first = false;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EvaluationOutsideDomain) throw;
      // Both normal components vanish: the sliding field is undefined here.
      return stationary_launch(Mode::StationarySingularTangency, branch_point(i, s), t, Event::TangencyStop,
                               "sliding field undefined");
    }
  }

  // Trajectory through the origin; `branch` is the sliding branch it arrived on (0 if smooth).
  std::optional<Launch> at_origin(double t, int branch, Event arrival) {
    (void)branch;
    const Point2 o{};
    const auto xv = z_.X()(o);
    const auto yv = z_.Y()(o);
    const double tol = tol_at(o);
    for (double v : {xv[0], xv[1], yv[0], yv[1]}) {
      if (std::abs(v) <= tol) {
        return stationary_launch(Mode::StationaryOrigin, o, t, Event::OriginStop, "degenerate origin");
      }
    }
    const double xi1 = xv[0] * yv[0], xi2 = xv[1] * yv[1];
    if (xi1 < 0 && xi2 < 0) return stationary_launch(Mode::StationaryOrigin, o, t, Event::OriginStop);
    if (xi1 > 0 && xi2 > 0) {
      // Both fields cross: leave along the field active in the quadrant they point to.
      const int s1 = sgn(xv[0]), s2 = sgn(xv[1]);
      Launch l = smooth_launch(s1 * s2 > 0 ? Side::X : Side::Y, o, t, arrival, s1, s2);
      l.skip1 = l.skip2 = true;
      l.flags.push_back("origin crossing: field of the destination quadrant");
      return l;
    }
    const int i = xi1 < 0 ? 1 : 2;
    const double v0 = sliding_field(z_, i)(0.0);
    if (std::abs(v0) <= tol) return stationary_launch(Mode::StationaryOrigin, o, t, Event::OriginStop);
    Launch l = sliding_launch(i, o, t, arrival);
    l.skip_origin = true;
    return l;
  }

  void stationary(const Launch& l, TrajectorySegment& seg) {
    seg.points.push_back({l.t, l.p});
    if (tmax_ > l.t) seg.points.push_back({tmax_, l.p});
    seg.exit = l.mode == Mode::StationaryOrigin ? Event::OriginStop : Event::TangencyStop;
  }

  const PiecewiseSystem& z_;
  double tmax_;
  double box_;
  IntegrateOptions opts_;
  long steps_ = 0;
};

}  // namespace

Trajectory integrate(const PiecewiseSystem& z, const Point2& p0, double tmax, double box, const IntegrateOptions& opts) {
  if (!(tmax > 0) || !(box > 0)) throw Error(ErrorCode::DegenerateInput, "tmax and box must be positive");
  return Integrator(z, tmax, box, opts).run(p0);
}

Trajectory integrate_backward(const PiecewiseSystem& z, const Point2& p0, double tmax, double box,
                              const IntegrateOptions& opts) {
  Trajectory traj = integrate(z.negated(), p0, tmax, box, opts);
  for (auto& seg : traj.segments)
    for (auto& tp : seg.points) tp.t = -tp.t;
  return traj;
}

std::vector<PortraitEntry> phase_portrait(const PiecewiseSystem& z, double box, int seeds, const PortraitOptions& opts) {
  if (seeds < 1) throw Error(ErrorCode::DegenerateInput, "seeds must be at least 1");
  const double tmax = opts.tmax > 0 ? opts.tmax : 4.0 * box;

  std::vector<PortraitEntry> entries;
  auto add = [&](Point2 p) {
    entries.push_back({p, false, {}});
    entries.push_back({p, true, {}});
  };
  for (int r = 0; r < seeds; ++r)
    for (int c = 0; c < seeds; ++c)
      add({-box + (c + 0.5) * 2.0 * box / seeds, -box + (r + 0.5) * 2.0 * box / seeds});
  for (int branch : {1, 2})
    for (int side : {1, -1})
      for (int k = 0; k < seeds; ++k) add(branch_point(branch, side * box * (k + 0.5) / seeds));

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(entries.size()));
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < threads; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t n = w; n < entries.size(); n += threads) {
        auto& e = entries[n];
        try {
          e.trajectory = e.backward ? integrate_backward(z, e.seed, tmax, box, opts.integrate)
                                    : integrate(z, e.seed, tmax, box, opts.integrate);
        } catch (const Error& err) {
          e.trajectory.error = err.what();
        }
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return entries;
}

std::optional<PseudoCycle> detect_pseudo_cycle(const PiecewiseSystem& z, double radius) {
  if (!is_transient(z)) throw Error(ErrorCode::NotTransient, "X1X2(0) < 0 and Y1Y2(0) > 0 are required");
  FixedPointOptions fo;
  fo.transit.box = std::max(1.0, 20.0 * radius);
  const auto fps = fixed_points(z, -radius, 0.0, fo);
  if (fps.empty()) return std::nullopt;
  PseudoCycle pc;
  pc.fixed_point = fps.back();  // innermost
  pc.crossings = numeric_return_map_trace(z, pc.fixed_point.location, fo.transit).crossings;
  return pc;
}

}  // namespace crosswitch
