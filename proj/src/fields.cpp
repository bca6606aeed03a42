#include "crosswitch/fields.hpp"

#include <cmath>
#include <string>

#include "crosswitch/error.hpp"

namespace crosswitch {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::EvaluationOutsideDomain: return "EvaluationOutsideDomain";
    case ErrorCode::DegenerateTangency: return "DegenerateTangency";
    case ErrorCode::TooManyTangencies: return "TooManyTangencies";
    case ErrorCode::NotTransverse: return "NotTransverse";
    case ErrorCode::NotTransient: return "NotTransient";
    case ErrorCode::EtaUndefined: return "EtaUndefined";
    case ErrorCode::LeftDomain: return "LeftDomain";
    case ErrorCode::StepLimit: return "StepLimit";
    case ErrorCode::InvalidSigns: return "InvalidSigns";
    case ErrorCode::PredictionMismatch: return "PredictionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidNumerics: return "InvalidNumerics";
  }
  return "Unknown";
}

namespace {

void validate(const Polynomial& p, int max_degree, const char* name) {
  if (p.total_degree() > max_degree) {
    throw Error(ErrorCode::InvalidField, std::string(name) + " exceeds maximum total degree " +
                                             std::to_string(max_degree));
  }
  for (const auto& m : p.terms()) {
    if (!std::isfinite(m.c)) throw Error(ErrorCode::InvalidField, std::string(name) + " has a non-finite coefficient");
    if (m.i < 0 || m.j < 0) throw Error(ErrorCode::InvalidField, std::string(name) + " has a negative power");
  }
}

}  // namespace

FieldSpec::FieldSpec(Polynomial f1, Polynomial f2, int max_degree) : f1_(std::move(f1)), f2_(std::move(f2)) {
  validate(f1_, max_degree, "f1");
  validate(f2_, max_degree, "f2");
}

FieldSpec FieldSpec::constant(double c1, double c2) {
  return {Polynomial::constant(c1), Polynomial::constant(c2)};
}

FieldSpec FieldSpec::negated() const { return {-f1_, -f2_}; }

FieldSpec FieldSpec::swapped() const { return {f2_.swapped(), f1_.swapped()}; }

FieldSpec FieldSpec::scaled(double s) const { return {s * f1_, s * f2_}; }

std::array<double, 2> eval_field(const FieldSpec& f, const Point2& p) { return f(p); }

Polynomial partial(const FieldSpec& f, int component, int wrt) { return f.component(component).derivative(wrt); }

std::string_view to_string(Side s) { return s == Side::X ? "X" : "Y"; }

Polynomial PiecewiseSystem::det() const { return x_.f1() * y_.f2() - x_.f2() * y_.f1(); }

double PiecewiseSystem::det_at(const Point2& p) const noexcept {
  const auto xv = x_(p);
  const auto yv = y_(p);
  return xv[0] * yv[1] - xv[1] * yv[0];
}

std::string_view to_string(RegionLabel r) {
  switch (r) {
    case RegionLabel::UplusPlus: return "UplusPlus";
    case RegionLabel::UplusMinus: return "UplusMinus";
    case RegionLabel::UminusPlus: return "UminusPlus";
    case RegionLabel::UminusMinus: return "UminusMinus";
    case RegionLabel::Sigma1Plus: return "Sigma1Plus";
    case RegionLabel::Sigma1Minus: return "Sigma1Minus";
    case RegionLabel::Sigma2Plus: return "Sigma2Plus";
    case RegionLabel::Sigma2Minus: return "Sigma2Minus";
    case RegionLabel::Origin: return "Origin";
  }
  return "Unknown";
}

RegionLabel region_of(const Point2& p, double tol) {
  const bool on1 = std::abs(p.x1) <= tol;
  const bool on2 = std::abs(p.x2) <= tol;
  if (on1 && on2) return RegionLabel::Origin;
  if (on1) return p.x2 > 0 ? RegionLabel::Sigma1Plus : RegionLabel::Sigma1Minus;
  if (on2) return p.x1 > 0 ? RegionLabel::Sigma2Plus : RegionLabel::Sigma2Minus;
  const bool f_positive = (p.x1 > 0) == (p.x2 > 0);
  if (f_positive) return p.x2 > 0 ? RegionLabel::UplusPlus : RegionLabel::UplusMinus;
  return p.x2 > 0 ? RegionLabel::UminusPlus : RegionLabel::UminusMinus;
}

Side active_side(const Point2& p) noexcept { return p.x1 * p.x2 > 0 ? Side::X : Side::Y; }

}  // namespace crosswitch
