// Acceptance run: one PASS/FAIL line per criterion, tolerances printed.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crosswitch/classify.hpp"
#include "crosswitch/error.hpp"
#include "crosswitch/flow.hpp"
#include "crosswitch/io.hpp"
#include "crosswitch/returnmap.hpp"
#include "crosswitch/switching.hpp"
#include "support.hpp"

using namespace crosswitch;
using namespace testsupport;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- 1 ---------------------------------------------------------------
void criterion1() {
  const auto t0 = Clock::now();
  int total = 0, bad = 0;
  for (Verdict v : kNormalFormClasses) {
    for (const auto& s : sign_combinations(v)) {
      ++total;
      const auto c = classify(normal_form(v, s));
      if (c.verdict != v || !(c.signs == s)) {
        ++bad;
        std::printf("  %s misclassified as %s\n", std::string(to_string(v)).c_str(),
                    std::string(to_string(c.verdict)).c_str());
      }
    }
  }
  const double dt = seconds_since(t0);
  report(1, bad == 0 && total == 52 && dt < 5.0,
         std::to_string(total - bad) + "/" + std::to_string(total) + " normal forms reclassified exactly; runtime " +
             fmt("%.3f", dt) + " s (limit 5 s)");
}

// ---- 2 ---------------------------------------------------------------
void criterion2() {
  Signs s;
  s.a = s.b = s.c = 1;
  const auto z = normal_form(Verdict::Stable_C32, s);
  const double a = alpha(z);
  // slope of phi_Z at 0 from a symmetric difference quotient through the origin
  const double h = 1e-4;
  const double slope = (numeric_return_map(z, h) - numeric_return_map(z, -h)) / (2 * h);
  const bool ok = a == -0.5 && std::abs(slope - 0.25) <= 1e-5;
  report(2, ok, "alpha = " + fmt("%.17g", a) + " (exact -0.5 required); numeric return-map slope " +
                    fmt("%.12f", slope) + " vs 0.25, |err| = " + fmt("%.3e", std::abs(slope - 0.25)) + " (tol 1e-5)");
}

// ---- 3 ---------------------------------------------------------------
void criterion3() {
  auto example = [](double a) {
    return PiecewiseSystem(FieldSpec(Polynomial{{1.0 - a, 0, 0}, {1.0, 1, 0}}, Polynomial::constant(1.0)),
                           FieldSpec(Polynomial{{-1.0, 0, 0}, {1.0, 0, 1}}, Polynomial::constant(-1.0)));
  };
  bool ok = classify(example(0.0)).verdict == Verdict::Codim1_DoublePseudoEq;
  double worst = 0.0;
  for (double a : {-0.1, 0.1}) {
    const auto z = example(a);
    ok = ok && classify(z).verdict == Verdict::Stable_C2;
    for (int i = 1; i <= 2; ++i) {
      const auto pe = pseudo_equilibria(z, i, -1.0, 1.0);
      if (pe.size() != 1) {
        ok = false;
        continue;
      }
      worst = std::max(worst, std::abs(pe[0].location - a));
    }
  }
  ok = ok && worst <= 1e-10;
  report(3, ok, "verdicts Codim1_DoublePseudoEq at 0 and Stable_C2 at +-0.1; worst pseudo-equilibrium error " +
                    fmt("%.3e", worst) + " (tol 1e-10)");
}

// ---- 4 ---------------------------------------------------------------
enum Cls { C, S, E };

std::set<BranchPointClass> to_classes(std::initializer_list<Cls> l) {
  std::set<BranchPointClass> out;
  for (Cls c : l) {
    out.insert(c == C ? BranchPointClass::Crossing : (c == S ? BranchPointClass::Sliding : BranchPointClass::Escaping));
  }
  return out;
}

struct TableCell {
  int y1, y2, delta_sign;
  // Sigma_1^+, Sigma_1^-, Sigma_2^+, Sigma_2^-
  std::array<std::set<BranchPointClass>, 4> halves;
};

void criterion4() {
  const auto t0 = Clock::now();
  // Transcribed from the decomposition table for X = (1, x1 - delta), Y = (Y1, Y2).
  const std::vector<TableCell> table = {
      {1, 1, 1, {to_classes({C}), to_classes({C}), to_classes({C, S}), to_classes({E})}},
      {1, 1, 0, {to_classes({C}), to_classes({C}), to_classes({C}), to_classes({E})}},
      {1, 1, -1, {to_classes({C}), to_classes({C}), to_classes({C}), to_classes({E, C})}},
      {-1, -1, 1, {to_classes({E}), to_classes({S}), to_classes({C, E}), to_classes({C})}},
      {-1, -1, 0, {to_classes({E}), to_classes({S}), to_classes({E}), to_classes({C})}},
      {-1, -1, -1, {to_classes({E}), to_classes({S}), to_classes({E}), to_classes({C, S})}},
      {1, -1, 1, {to_classes({C}), to_classes({C}), to_classes({C, E}), to_classes({C})}},
      {1, -1, 0, {to_classes({C}), to_classes({C}), to_classes({E}), to_classes({C})}},
      {1, -1, -1, {to_classes({C}), to_classes({C}), to_classes({E}), to_classes({C, S})}},
      {-1, 1, 1, {to_classes({E}), to_classes({S}), to_classes({S, C}), to_classes({E})}},
      {-1, 1, 0, {to_classes({E}), to_classes({S}), to_classes({C}), to_classes({E})}},
      {-1, 1, -1, {to_classes({E}), to_classes({S}), to_classes({C}), to_classes({E, C})}},
  };
  int matched = 0;
  for (const auto& cell : table) {
    Signs s;
    s.a = cell.y1;
    s.b = cell.y2;
    const auto z = unfolding(UnfoldingKind::RegularFold, s, 0.1 * cell.delta_sign);
    const auto dec = sigma_decomposition(z, 1.0);
    bool same = true;
    for (int h = 0; h < 4; ++h) {
      std::set<BranchPointClass> got;
      for (const auto& seg : dec[h].segments) {
        if (seg.cls != BranchPointClass::TangencyX && seg.cls != BranchPointClass::TangencyY) got.insert(seg.cls);
      }
      same = same && got == cell.halves[h];
    }
    if (same) ++matched;
    else std::printf("  cell Y1=%d Y2=%d sgn(delta)=%d differs\n", cell.y1, cell.y2, cell.delta_sign);
  }
  const double dt = seconds_since(t0);
  report(4, matched == 12 && dt < 2.0,
         std::to_string(matched) + "/12 table cells match exactly; runtime " + fmt("%.3f", dt) + " s (limit 2 s)");
}

// ---- 5 ---------------------------------------------------------------
void criterion5() {
  bool ok = true;
  double worst_shift = 0.0;
  int cases = 0;
  for (int a : {1, -1}) {
    for (int c : {1, -1}) {
      Signs s;
      s.a = a;
      s.b = 1;
      s.c = c;
      const double cycle_side = a * 1 * c;
      for (double d : {-0.05, 0.05}) {
        const auto z = unfolding(UnfoldingKind::PseudoHopf, s, d);
        FixedPointOptions coarse, fine;
        coarse.transit.box = fine.transit.box = 1e3;
        coarse.grid = 256;
        fine.grid = 512;
        const auto f1 = fixed_points(z, -1.2, 1.2, coarse);
        const auto f2 = fixed_points(z, -1.2, 1.2, fine);
        const std::size_t want = d * cycle_side > 0 ? 2 : 0;
        ++cases;
        if (f1.size() != want || f2.size() != want) {
          ok = false;
          std::printf("  a=%d c=%d delta=%g: %zu fixed points, expected %zu\n", a, c, d, f1.size(), want);
          continue;
        }
        if (want == 2 && !(f1[0].location < 0 && f1[1].location > 0)) ok = false;
        for (std::size_t k = 0; k < f1.size(); ++k) {
          worst_shift = std::max(worst_shift, std::abs(f1[k].location - f2[k].location));
          // stability against an independent difference quotient of phi_Z
          const double x = f1[k].location, e = 1e-5;
          const double dphi = (numeric_return_map(z, x + e, coarse.transit) - numeric_return_map(z, x - e, coarse.transit)) /
                              (2 * e);
          if (!(dphi > 1.0) || f1[k].stability != Stability::Unstable) ok = false;
        }
      }
    }
  }
  ok = ok && worst_shift <= 1e-8;
  report(5, ok, std::to_string(cases) + " (sign, delta) cases with b = +1: 0 fixed points on one side, 2 unstable on the other; "
                "location shift under grid x2 " + fmt("%.3e", worst_shift) + " (tol 1e-8)");
}

// ---- 6 ---------------------------------------------------------------
void criterion6() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int systems = 0, points = 0;
  double worst = 0.0;
  while (systems < 1000) {
    const auto z = random_system(rng, 3);
    ++systems;
    for (int i = 1; i <= 2; ++i) {
      for (int k = 0; k < 8; ++k) {
        const double s = u(rng);
        const Point2 p = branch_point(i, s);
        const double xi = z.X()(p)[i - 1], yi = z.Y()(p)[i - 1];
        if (!(xi * yi < 0)) continue;
        const auto d = sliding_field_det_check(z, i, s);
        const double rel = std::abs(d.lhs - d.rhs) / std::abs(d.rhs);
        worst = std::max(worst, rel);
        ++points;
      }
    }
  }
  report(6, worst <= 1e-12 && points > 1000,
         std::to_string(systems) + " systems, " + std::to_string(points) + " sliding points; worst relative error " +
             fmt("%.3e", worst) + " (tol 1e-12)");
}

// ---- 7 ---------------------------------------------------------------
void criterion7() {
  std::mt19937_64 rng(7);
  int systems = 0, bad = 0;
  double smallest = 1e300;
  while (systems < 1000) {
    const auto z = random_system(rng, 3, 1e-3);
    const auto x = z.X()(Point2{0, 0}), y = z.Y()(Point2{0, 0});
    // origin in the closure of a sliding/escaping part of one branch and a crossing part of the other
    const bool one_sliding = (x[0] * y[0] < 0) != (x[1] * y[1] < 0);
    if (!one_sliding) continue;
    ++systems;
    const double det = std::abs(z.det_at({0, 0}));
    smallest = std::min(smallest, det);
    if (!(det > 1e-12)) ++bad;
  }
  report(7, bad == 0, std::to_string(systems) + " systems; smallest |det Z(0)| = " + fmt("%.3e", smallest) +
                          " (must exceed 1e-12)");
}

// ---- 8 ---------------------------------------------------------------
void criterion8() {
  std::mt19937_64 rng(8);
  double worst = 0.0;
  int fields = 0;
  while (fields < 100) {
    const FieldSpec f = random_field(rng, 3, 0.5);
    ++fields;
    for (auto dir : {HalfMapDirection::XfromSigma1toSigma2, HalfMapDirection::YfromSigma2toSigma1}) {
      const auto an = half_map_coeffs(f, dir);
      const auto nu = half_map_coeffs_numeric(f, dir);
      for (auto [p, q] : {std::pair{an.a, nu.a}, std::pair{an.b, nu.b}, std::pair{an.c, nu.c}}) {
        worst = std::max(worst, std::abs(p - q) / std::max(1.0, std::abs(p)));
      }
    }
  }
  report(8, worst <= 1e-5,
         std::to_string(fields) + " fields x 2 directions; worst |analytic - numeric| / max(1, |analytic|) over a, b, c = " +
             fmt("%.3e", worst) + " (tol 1e-5)");
}

// ---- 9 ---------------------------------------------------------------
const std::vector<std::string> kGoldenSystems = {
    "c32.json",           "constant_beta_zero.json", "crossing.json",       "crossing_defaults.json",
    "double_pseudo_eq_0.json", "double_pseudo_eq_m01.json", "double_pseudo_eq_nf.json", "double_pseudo_eq_p01.json",
    "pseudo_hopf.json",   "regular_fold.json",
};

double residual(const Trajectory& t) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < t.segments.size(); ++k) {
    const auto& seg = t.segments[k];
    const Point2 p = seg.points.back().p;
    switch (seg.exit) {
      case Event::BranchCross1: worst = std::max(worst, std::abs(p.x1)); break;
      case Event::BranchCross2: worst = std::max(worst, std::abs(p.x2)); break;
      case Event::OriginPass:
      case Event::OriginStop: worst = std::max({worst, std::abs(p.x1), std::abs(p.x2)}); break;
      case Event::SlidingEntry: worst = std::max(worst, std::min(std::abs(p.x1), std::abs(p.x2))); break;
      default: break;
    }
  }
  for (const auto& seg : t.segments) {
    worst = std::max(worst, seg.event_residual);
    for (const auto& tp : seg.points) {
      if (seg.mode == Mode::Sliding1) worst = std::max(worst, std::abs(tp.p.x1));
      if (seg.mode == Mode::Sliding2) worst = std::max(worst, std::abs(tp.p.x2));
    }
  }
  return worst;
}

void criterion9() {
  double worst_event = 0.0, worst_trip = 0.0;
  int trajectories = 0, trips = 0;
  bool ok = true;
  for (const auto& name : kGoldenSystems) {
    const auto z = load_system_file(data_path(name)).system;
    const auto portrait = phase_portrait(z, 1.0, 4);
    for (const auto& e : portrait) {
      ++trajectories;
      worst_event = std::max(worst_event, residual(e.trajectory));
      if (e.backward || e.trajectory.error) continue;
      // pure crossing orbits are invertible: retrace them backward
      bool crossing = true;
      for (const auto& seg : e.trajectory.segments) {
        crossing = crossing && (seg.mode == Mode::SmoothX || seg.mode == Mode::SmoothY) && seg.flags.empty();
      }
      if (!crossing) continue;
      const auto& end = e.trajectory.segments.back().points.back();
      const auto back = integrate_backward(z, end.p, end.t, 10.0);
      const Point2 q = back.segments.back().points.back().p;
      worst_trip = std::max({worst_trip, std::abs(q.x1 - e.seed.x1), std::abs(q.x2 - e.seed.x2)});
      ++trips;
    }
  }
  ok = ok && worst_event <= 1e-10 && worst_trip <= 1e-6 && trips > 0;
  report(9, ok, std::to_string(trajectories) + " golden trajectories, worst event residual " + fmt("%.3e", worst_event) +
                    " (tol 1e-10); " + std::to_string(trips) + " crossing round trips, worst error " +
                    fmt("%.3e", worst_trip) + " (tol 1e-6)");
}

// ---- 10 --------------------------------------------------------------
struct Run {
  int rc = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = "'" CROSSWITCH_CLI_PATH "' " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion10() {
  std::vector<std::string> inputs = kGoldenSystems;
  for (const char* bad : {"bad_missing_f2.json", "bad_nan.json", "bad_syntax.json"}) inputs.push_back(bad);
  int commands = 0, differing = 0;
  const std::string tmp = CROSSWITCH_TEST_TMP;
  for (const auto& name : inputs) {
    const std::string path = "'" + data_path(name) + "'";
    const std::vector<std::string> cmds = {
        "classify " + path,
        "return-map " + path + " --samples 8",
        "integrate " + path + " --from=-0.4,0.3 --time 3",
        "integrate " + path + " --from 0.4,0.3 --time=-3",
    };
    for (const auto& c : cmds) {
      const auto a = run(c), b = run(c);
      ++commands;
      if (a.rc != b.rc || a.out != b.out) {
        ++differing;
        std::printf("  differs: %s\n", c.c_str());
      }
    }
    for (const char* ext : {".svg", ".csv"}) {
      const std::string o1 = tmp + "/acc_a" + ext, o2 = tmp + "/acc_b" + ext;
      const auto a = run("portrait " + path + " --box 1 --seeds 3 --out '" + o1 + "'");
      const auto b = run("portrait " + path + " --box 1 --seeds 3 --out '" + o2 + "'");
      ++commands;
      if (a.rc != b.rc || a.out != b.out || slurp(o1) != slurp(o2)) {
        ++differing;
        std::printf("  differs: portrait %s%s\n", name.c_str(), ext);
      }
      std::remove(o1.c_str());
      std::remove(o2.c_str());
    }
  }
  for (const char* c : {"sweep RegularFold --signs a=1,b=-1 --delta=-0.2:0.2:5",
                        "sweep PseudoHopf --signs a=1,b=1,c=1 --delta=-0.1:0.1:5",
                        "sweep DoublePseudoEq --signs a=1,b=-1,c1=1,c2=-1 --delta=-0.1:0.1:5",
                        "normal-form Stable_C2 --signs a=1,b=-1,c=1"}) {
    const auto a = run(c), b = run(c);
    ++commands;
    if (a.rc != b.rc || a.out != b.out) {
      ++differing;
      std::printf("  differs: %s\n", c);
    }
  }
  report(10, differing == 0 && commands > 0,
         std::to_string(commands) + " CLI invocations run twice over " + std::to_string(inputs.size()) +
             " golden inputs; " + std::to_string(differing) + " differed (stdout, exit code and output files compared byte for byte)");
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    try {
      criteria[k]();
    } catch (const std::exception& e) {
      report(static_cast<int>(k + 1), false, std::string("threw: ") + e.what());
    }
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
