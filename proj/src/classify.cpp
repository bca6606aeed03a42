#include "crosswitch/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "crosswitch/error.hpp"

namespace crosswitch {

namespace {

int sgn(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

int delta_of(int r, int s) { return r == s ? 1 : 0; }

std::optional<int>& slot(Signs& s, const std::string& name) {
  if (name == "a") return s.a;
  if (name == "b") return s.b;
  if (name == "c") return s.c;
  if (name == "c1") return s.c1;
  return s.c2;
}

const std::optional<int>& slot(const Signs& s, const std::string& name) {
  return slot(const_cast<Signs&>(s), name);
}

// Checks that exactly the named signs are present and each is +-1.
void require_signs(const Signs& s, const std::vector<std::string>& names, std::string_view what) {
  for (const char* n : {"a", "b", "c", "c1", "c2"}) {
    const auto& v = slot(s, n);
    const bool wanted = std::find(names.begin(), names.end(), n) != names.end();
    if (wanted && !v) throw Error(ErrorCode::InvalidSigns, std::string(what) + " needs sign " + n);
    if (!wanted && v) throw Error(ErrorCode::InvalidSigns, std::string(what) + " takes no sign " + n);
    if (v && *v != 1 && *v != -1) throw Error(ErrorCode::InvalidSigns, std::string("sign ") + n + " must be +1 or -1");
  }
}

Polynomial k(double c) { return Polynomial::constant(c); }

FieldSpec constant_field(double c1, double c2) { return FieldSpec::constant(c1, c2); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable_C1: return "Stable_C1";
    case Verdict::Stable_C2: return "Stable_C2";
    case Verdict::Stable_C31: return "Stable_C31";
    case Verdict::Stable_C32: return "Stable_C32";
    case Verdict::Codim1_DoublePseudoEq: return "Codim1_DoublePseudoEq";
    case Verdict::Codim1_PseudoHopf: return "Codim1_PseudoHopf";
    case Verdict::Codim1_RegularFold: return "Codim1_RegularFold";
    case Verdict::HigherCodimension: return "HigherCodimension";
  }
  return "Unknown";
}

std::optional<Verdict> verdict_from_string(std::string_view s) {
  for (Verdict v : kNormalFormClasses)
    if (to_string(v) == s) return v;
  if (s == "HigherCodimension") return Verdict::HigherCodimension;
  return std::nullopt;
}

bool is_stable(Verdict v) {
  return v == Verdict::Stable_C1 || v == Verdict::Stable_C2 || v == Verdict::Stable_C31 || v == Verdict::Stable_C32;
}

bool is_codim1(Verdict v) {
  return v == Verdict::Codim1_DoublePseudoEq || v == Verdict::Codim1_PseudoHopf || v == Verdict::Codim1_RegularFold;
}

std::vector<std::string> sign_names(Verdict v) {
  switch (v) {
    case Verdict::Stable_C1:
    case Verdict::Stable_C31:
    case Verdict::Codim1_RegularFold: return {"a", "b"};
    case Verdict::Stable_C2:
    case Verdict::Stable_C32:
    case Verdict::Codim1_PseudoHopf: return {"a", "b", "c"};
    case Verdict::Codim1_DoublePseudoEq: return {"a", "b", "c1", "c2"};
    case Verdict::HigherCodimension: return {};
  }
  return {};
}

std::vector<Signs> sign_combinations(Verdict v) {
  const auto names = sign_names(v);
  std::vector<Signs> out;
  const int n = static_cast<int>(names.size());
  for (int mask = 0; mask < (1 << n); ++mask) {
    Signs s;
    for (int i = 0; i < n; ++i) slot(s, names[i]) = (mask >> (n - 1 - i)) & 1 ? -1 : 1;
    out.push_back(s);
  }
  return out;
}

Classification classify(const PiecewiseSystem& z, double tol) {
  Classification out;
  Witnesses& w = out.witnesses;
  const Point2 o{};
  const auto xv = z.X()(o);
  const auto yv = z.Y()(o);
  const Polynomial det = z.det();

  w.xi1 = xv[0] * yv[0];
  w.xi2 = xv[1] * yv[1];
  w.det0 = det(0.0, 0.0);
  w.ddet_dx1 = det.derivative(1)(0.0, 0.0);
  w.ddet_dx2 = det.derivative(2)(0.0, 0.0);
  w.X1X2 = xv[0] * xv[1];
  w.gamma = xv[0] * yv[1] + xv[1] * yv[0];
  if (std::abs(xv[1] * yv[0]) > tol) w.alpha = xv[0] * yv[1] / (xv[1] * yv[0]);

  auto higher = [&](std::string reason) {
    out.verdict = Verdict::HigherCodimension;
    out.reasons.push_back(std::move(reason));
    return out;
  };

  // Tangency layer: some field component vanishes at the origin.
  struct Zero {
    Side side;
    int component;
  };
  std::vector<Zero> zeros;
  for (Side side : {Side::X, Side::Y}) {
    const auto v = side == Side::X ? xv : yv;
    for (int c = 1; c <= 2; ++c)
      if (std::abs(v[c - 1]) <= tol) zeros.push_back({side, c});
  }
  if (!zeros.empty()) {
    if (zeros.size() > 1) return higher("boundary value: more than one field component vanishes at the origin");
    const Zero zr = zeros.front();
    const FieldSpec& f = z.field(zr.side);
    const auto other = zr.side == Side::X ? yv : xv;
    FoldWitness fw;
    fw.field = zr.side;
    fw.branch = zr.component;
    fw.lie = lie_quantity(f, zr.component, o);
    fw.regular = std::abs(fw.lie) > tol && std::abs(other[0]) > tol && std::abs(other[1]) > tol;
    w.fold = fw;
    if (std::abs(fw.lie) <= tol) return higher("degenerate fold: Lie quantity vanishes at the origin");
    out.verdict = Verdict::Codim1_RegularFold;
    out.signs.a = sgn(other[0]);
    out.signs.b = sgn(other[1]);
    return out;
  }

  const double xi1 = *w.xi1, xi2 = *w.xi2;
  if (std::abs(xi1) <= tol) return higher("boundary value: xi_1=" + fmt(xi1));
  if (std::abs(xi2) <= tol) return higher("boundary value: xi_2=" + fmt(xi2));

  if (xi1 > 0 && xi2 > 0) {
    out.verdict = Verdict::Stable_C1;
    out.signs.a = sgn(xv[0]);
    out.signs.b = sgn(xv[1]);
    return out;
  }

  if (xi1 < 0 && xi2 < 0) {
    if (std::abs(*w.det0) > tol) {
      out.verdict = Verdict::Stable_C2;
      out.signs.a = sgn(xv[0]);
      out.signs.b = sgn(xv[1]);
      out.signs.c = sgn(*w.det0);
      return out;
    }
    if (std::abs(*w.ddet_dx1) > tol && std::abs(*w.ddet_dx2) > tol) {
      out.verdict = Verdict::Codim1_DoublePseudoEq;
      out.signs.a = sgn(xv[0]);
      out.signs.b = sgn(xv[1]);
      out.signs.c1 = sgn(*w.ddet_dx2);
      out.signs.c2 = sgn(*w.ddet_dx1);
      return out;
    }
    if (std::abs(*w.ddet_dx1) <= tol) out.reasons.push_back("boundary value: ddet/dx1(0)=0");
    if (std::abs(*w.ddet_dx2) <= tol) out.reasons.push_back("boundary value: ddet/dx2(0)=0");
    out.verdict = Verdict::HigherCodimension;
    return out;
  }

  // Mixed signs.
  if (std::abs(*w.X1X2) <= tol) return higher("boundary value: X1X2(0)=0");
  if (*w.X1X2 > 0) {
    out.verdict = Verdict::Stable_C31;
    out.signs.a = sgn(xv[0]);
    out.signs.b = sgn(yv[0]);
    return out;
  }
  const double a = *w.alpha;
  if (std::abs(a + 1.0) > tol) {
    out.verdict = Verdict::Stable_C32;
    out.signs.a = sgn(xv[0]);
    out.signs.b = sgn(yv[0]);
    out.signs.c = sgn(a + 1.0);
    return out;
  }

  const auto xm = half_map_coeffs(z.X(), HalfMapDirection::XfromSigma1toSigma2);
  const auto ym = half_map_coeffs(z.Y(), HalfMapDirection::YfromSigma2toSigma1);
  const PsiJet psi = compose(xm, ym);
  w.beta = psi.B;
  w.eta = eta_series(psi);
  w.eta_formula = eta_closed_form(xm, ym);
  const bool beta_ok = std::abs(*w.beta) > tol;
  const bool eta_ok = std::abs(*w.eta) > tol;
  if (beta_ok && eta_ok) {
    out.verdict = Verdict::Codim1_PseudoHopf;
    out.signs.a = sgn(yv[0]);
    out.signs.b = sgn(*w.eta);
    out.signs.c = sgn(xv[0] * yv[0]);
    return out;
  }
  if (!beta_ok) out.reasons.push_back("beta_Z=0");
  if (!eta_ok) out.reasons.push_back("eta_Z=0");
  out.verdict = Verdict::HigherCodimension;
  return out;
}

std::string_view to_string(UnfoldingKind k) {
  switch (k) {
    case UnfoldingKind::DoublePseudoEq: return "DoublePseudoEq";
    case UnfoldingKind::PseudoHopf: return "PseudoHopf";
    case UnfoldingKind::RegularFold: return "RegularFold";
  }
  return "Unknown";
}

std::optional<UnfoldingKind> unfolding_kind_from_string(std::string_view s) {
  for (auto k : {UnfoldingKind::DoublePseudoEq, UnfoldingKind::PseudoHopf, UnfoldingKind::RegularFold}) {
    if (to_string(k) == s || to_string(codim1_verdict(k)) == s) return k;
  }
  return std::nullopt;
}

Verdict codim1_verdict(UnfoldingKind k) {
  switch (k) {
    case UnfoldingKind::DoublePseudoEq: return Verdict::Codim1_DoublePseudoEq;
    case UnfoldingKind::PseudoHopf: return Verdict::Codim1_PseudoHopf;
    case UnfoldingKind::RegularFold: return Verdict::Codim1_RegularFold;
  }
  return Verdict::HigherCodimension;
}

PiecewiseSystem unfolding(UnfoldingKind kind, const Signs& s, double delta) {
  require_signs(s, sign_names(codim1_verdict(kind)), to_string(kind));
  if (!std::isfinite(delta) || std::abs(delta) > 0.5) {
    throw Error(ErrorCode::DegenerateInput, "unfolding parameter must satisfy |delta| <= 0.5");
  }
  const double a = *s.a, b = *s.b;
  switch (kind) {
    case UnfoldingKind::DoublePseudoEq: {
      const double c1 = *s.c1, c2 = *s.c2;
      FieldSpec x(Polynomial{{a, 0, 0}, {-b * c2, 1, 0}}, k(b + a * delta));
      FieldSpec y(k(-a), Polynomial{{-b, 0, 0}, {a * c1, 0, 1}});
      return {x, y};
    }
    case UnfoldingKind::PseudoHopf: {
      const double c = *s.c;
      FieldSpec x(k(a * c), k(-(a * c + delta)));
      FieldSpec y(k(a), Polynomial{{a, 0, 0}, {1.0, 1, 0}, {a * b, 2, 0}});
      return {x, y};
    }
    case UnfoldingKind::RegularFold: {
      FieldSpec x(k(1.0), Polynomial{{1.0, 1, 0}, {-delta, 0, 0}});
      return {x, constant_field(a, b)};
    }
  }
  throw Error(ErrorCode::InvalidSigns, "unknown unfolding");
}

PiecewiseSystem normal_form(Verdict v, const Signs& s) {
  switch (v) {
    case Verdict::Codim1_DoublePseudoEq: return unfolding(UnfoldingKind::DoublePseudoEq, s, 0.0);
    case Verdict::Codim1_PseudoHopf: return unfolding(UnfoldingKind::PseudoHopf, s, 0.0);
    case Verdict::Codim1_RegularFold: return unfolding(UnfoldingKind::RegularFold, s, 0.0);
    case Verdict::HigherCodimension: throw Error(ErrorCode::InvalidSigns, "HigherCodimension has no normal form");
    default: break;
  }
  require_signs(s, sign_names(v), to_string(v));
  const double a = *s.a, b = *s.b;
  switch (v) {
    case Verdict::Stable_C1: return {constant_field(a, b), constant_field(a, b)};
    case Verdict::Stable_C2: {
      const int c = *s.c;
      const int ab = static_cast<int>(a * b);
      const double x1 = (delta_of(-1, ab) * delta_of(1, c) + 1) * a;
      const double x2 = -(delta_of(-1, ab) * delta_of(-1, c) - ab) * a;
      const double y1 = -(delta_of(1, ab) * delta_of(1, c) + 1) * a;
      const double y2 = -(delta_of(1, ab) * delta_of(-1, c) + ab) * a;
      return {constant_field(x1, x2), constant_field(y1, y2)};
    }
    case Verdict::Stable_C31: return {constant_field(a, a), constant_field(b, -b)};
    case Verdict::Stable_C32: {
      const int c = *s.c;
      return {constant_field(a, -a), constant_field(b * (1 + delta_of(1, c)), b * (1 + delta_of(-1, c)))};
    }
    default: break;
  }
  throw Error(ErrorCode::InvalidSigns, "unknown class");
}

std::array<SegmentSet, 4> regular_fold_table(int a, int b, int ds) {
  using C = BranchPointClass;
  const SegmentSet c{C::Crossing}, s{C::Sliding}, e{C::Escaping};
  const SegmentSet cs{C::Crossing, C::Sliding}, ce{C::Crossing, C::Escaping};
  // Order: Sigma_1^+, Sigma_1^-, Sigma_2^+, Sigma_2^-.
  if (a > 0 && b > 0) {
    if (ds > 0) return {c, c, cs, e};
    if (ds == 0) return {c, c, c, e};
    return {c, c, c, ce};
  }
  if (a < 0 && b < 0) {
    if (ds > 0) return {e, s, ce, c};
    if (ds == 0) return {e, s, e, c};
    return {e, s, e, cs};
  }
  if (a > 0) {  // b < 0
    if (ds > 0) return {c, c, ce, c};
    if (ds == 0) return {c, c, e, c};
    return {c, c, e, cs};
  }
  // a < 0, b > 0
  if (ds > 0) return {e, s, cs, e};
  if (ds == 0) return {e, s, c, e};
  return {e, s, c, ce};
}

Verdict predicted_verdict(UnfoldingKind k, const Signs& s, int ds) {
  if (ds == 0) return codim1_verdict(k);
  switch (k) {
    case UnfoldingKind::DoublePseudoEq: return Verdict::Stable_C2;
    case UnfoldingKind::PseudoHopf: return Verdict::Stable_C32;
    case UnfoldingKind::RegularFold: {
      const int a = s.a.value_or(1), b = s.b.value_or(1);
      if (a > 0 && b > 0) return ds < 0 ? Verdict::Stable_C1 : Verdict::Stable_C32;
      if (a < 0 && b < 0) return ds < 0 ? Verdict::Stable_C2 : Verdict::Stable_C32;
      if (a > 0) return ds < 0 ? Verdict::Stable_C31 : Verdict::Stable_C1;
      return ds < 0 ? Verdict::Stable_C31 : Verdict::Stable_C2;
    }
  }
  return Verdict::HigherCodimension;
}

namespace {

void check_double_pseudo_eq(const PiecewiseSystem& z, const Signs& s, double delta, UnfoldingSample& out) {
  const int ds = sgn(delta);
  const int c[3] = {0, *s.c1, *s.c2};
  // Stable iff h_i * d(det)/ds < 0, with sgn h_1 = a and sgn h_2 = -b.
  const int hsign[3] = {0, *s.a, -*s.b};
  for (int branch : {1, 2}) {
    const auto pes = pseudo_equilibria(z, branch, -0.5, 0.5);
    out.pseudo_equilibria.insert(out.pseudo_equilibria.end(), pes.begin(), pes.end());
    const std::string tag = "P" + std::to_string(branch);
    if (pes.size() != 1) {
      out.failures.push_back(tag + ": expected one pseudo-equilibrium, found " + std::to_string(pes.size()));
      continue;
    }
    const auto& pe = pes.front();
    const double expected = -delta * c[branch];
    if (std::abs(pe.location - expected) > 1e-9) {
      out.failures.push_back(tag + ": location " + fmt(pe.location) + " expected " + fmt(expected));
    }
    if (ds != 0 && sgn(pe.location) != -ds * c[branch]) out.failures.push_back(tag + ": wrong half-branch");
    const Stability want = hsign[branch] * c[branch] < 0 ? Stability::Stable : Stability::Unstable;
    if (pe.stability != want) out.failures.push_back(tag + ": stability " + std::string(to_string(pe.stability)));
  }
}

void check_pseudo_hopf(const PiecewiseSystem& z, const Signs& s, double delta, UnfoldingSample& out) {
  const int a = *s.a, b = *s.b, c = *s.c;
  const int ds = sgn(delta);
  const auto at_zero = classify(unfolding(UnfoldingKind::PseudoHopf, s, 0.0));
  const double eta0 = at_zero.witnesses.eta.value_or(0.0);
  if (sgn(eta0) != b) out.failures.push_back("sgn(eta_Z) at delta=0 differs from b");

  const double al = alpha(z);
  if (ds != 0) {
    const bool stable = std::abs(al) < 1.0;
    if (stable != (a * c * ds > 0)) out.failures.push_back("origin stability does not flip as predicted");
  }

  // Cycles bifurcate to the side where the origin's stability is opposite to
  // that of the cubic term: sgn(delta) = a*b*c.
  const double est = eta0 != 0.0 ? std::sqrt(std::abs(1.0 - al * al) / std::abs(eta0)) : 0.0;
  // The cubic estimate undershoots the true cycle by ~10% at |delta|=0.5.
  const double r = std::clamp(1.5 * est, 0.05, 2.5);
  FixedPointOptions fo;
  fo.transit.box = 1e3;
  out.fixed_points = fixed_points(z, -r, r, fo);
  const bool cycle_side = ds != 0 && ds == a * b * c;
  if (!cycle_side) {
    if (!out.fixed_points.empty()) {
      out.failures.push_back("nontrivial fixed points: found " + std::to_string(out.fixed_points.size()) + ", expected 0");
    }
    return;
  }
  // The bifurcating cycle is the innermost one; the global polynomial field
  // can carry further cycles farther out, which the local picture says nothing about.
  const FixedPoint* inner_neg = nullptr;
  const FixedPoint* inner_pos = nullptr;
  for (const auto& fp : out.fixed_points) {
    if (fp.location < 0 && (!inner_neg || fp.location > inner_neg->location)) inner_neg = &fp;
    if (fp.location > 0 && (!inner_pos || fp.location < inner_pos->location)) inner_pos = &fp;
  }
  if (!inner_neg || !inner_pos) {
    out.failures.push_back("nontrivial fixed points: found " + std::to_string(out.fixed_points.size()) +
                           ", expected one on each side of the origin");
    return;
  }
  const Stability wanted = b > 0 ? Stability::Unstable : Stability::Stable;
  for (const FixedPoint* fp : {inner_neg, inner_pos}) {
    if (fp->stability != wanted) out.failures.push_back("fixed point stability " + std::string(to_string(fp->stability)));
  }
}

void check_regular_fold(const PiecewiseSystem& z, const Signs& s, double delta, UnfoldingSample& out) {
  const int ds = sgn(delta);
  const auto decomposition = sigma_decomposition(z, 1.0);
  out.decomposition = decomposition;
  const auto table = regular_fold_table(*s.a, *s.b, ds);
  static const char* names[4] = {"Sigma_1^+", "Sigma_1^-", "Sigma_2^+", "Sigma_2^-"};
  for (int h = 0; h < 4; ++h) {
    SegmentSet got;
    for (const auto& seg : decomposition[h].segments) got.push_back(seg.cls);
    std::sort(got.begin(), got.end());
    got.erase(std::unique(got.begin(), got.end()), got.end());
    if (got != table[h]) out.failures.push_back(std::string(names[h]) + " decomposition differs from the table");
  }
  out.folds = find_tangencies(z, 2, -1.0, 1.0);
  const Visibility want = ds > 0 ? Visibility::Visible : (ds < 0 ? Visibility::Invisible : Visibility::Boundary);
  if (out.folds.size() != 1 || out.folds.front().field != Side::X) {
    out.failures.push_back("expected exactly one fold of X on Sigma_2");
  } else if (out.folds.front().visibility != want || !out.folds.front().regular_fold) {
    out.failures.push_back("fold visibility " + std::string(to_string(out.folds.front().visibility)));
  }
}

}  // namespace

UnfoldingSample evaluate_unfolding(UnfoldingKind k, const Signs& s, double delta, double tol) {
  UnfoldingSample out;
  out.delta = delta;
  const PiecewiseSystem z = unfolding(k, s, delta);
  out.classification = classify(z, tol);
  const Verdict want = predicted_verdict(k, s, sgn(delta));
  if (out.classification.verdict != want) {
    out.failures.push_back("verdict " + std::string(to_string(out.classification.verdict)) + ", expected " +
                           std::string(to_string(want)));
  }
  try {
    switch (k) {
      case UnfoldingKind::DoublePseudoEq: check_double_pseudo_eq(z, s, delta, out); break;
      case UnfoldingKind::PseudoHopf: check_pseudo_hopf(z, s, delta, out); break;
      case UnfoldingKind::RegularFold: check_regular_fold(z, s, delta, out); break;
    }
  } catch (const Error& e) {
    out.failures.push_back(e.what());
  }
  return out;
}

UnfoldingReport verify_unfolding(UnfoldingKind k, const Signs& s, const std::vector<double>& deltas,
                                 double tol) {
  UnfoldingReport report;
  report.kind = k;
  report.signs = s;
  for (double d : deltas) {
    report.samples.push_back(evaluate_unfolding(k, s, d, tol));
    const auto& f = report.samples.back().failures;
    if (!f.empty()) throw Error(ErrorCode::PredictionMismatch, "delta=" + fmt(d) + ": " + f.front());
  }
  return report;
}

}  // namespace crosswitch
