#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crosswitch/fields.hpp"
#include "crosswitch/returnmap.hpp"
#include "crosswitch/switching.hpp"

namespace crosswitch {

enum class Verdict {
  Stable_C1,
  Stable_C2,
  Stable_C31,
  Stable_C32,
  Codim1_DoublePseudoEq,
  Codim1_PseudoHopf,
  Codim1_RegularFold,
  HigherCodimension,
};

inline constexpr std::array<Verdict, 7> kNormalFormClasses{
    Verdict::Stable_C1,           Verdict::Stable_C2,         Verdict::Stable_C31,         Verdict::Stable_C32,
    Verdict::Codim1_DoublePseudoEq, Verdict::Codim1_PseudoHopf, Verdict::Codim1_RegularFold,
};

std::string_view to_string(Verdict v);
std::optional<Verdict> verdict_from_string(std::string_view s);
bool is_stable(Verdict v);
bool is_codim1(Verdict v);

/// Sign record; each entry is -1 or +1 when present.
struct Signs {
  std::optional<int> a, b, c, c1, c2;
  friend bool operator==(const Signs&, const Signs&) = default;
};

/// Names of the signs a class or family is parametrized by, e.g. {"a","b","c"}.
std::vector<std::string> sign_names(Verdict v);
/// Every valid sign record for the class, in a fixed order.
std::vector<Signs> sign_combinations(Verdict v);

struct FoldWitness {
  Side field = Side::X;
  int branch = 1;  // branch the field is tangent to
  double lie = 0.0;
  bool regular = false;
};

struct Witnesses {
  std::optional<double> xi1, xi2, det0, ddet_dx1, ddet_dx2, X1X2;
  std::optional<double> alpha, gamma, beta, eta, eta_formula;
  std::optional<FoldWitness> fold;
};

struct Classification {
  Verdict verdict = Verdict::HigherCodimension;
  Signs signs;
  Witnesses witnesses;
  std::vector<std::string> reasons;
};

/// Singularity class of the origin. Every strict sign test uses the band
/// |q| <= tol; values inside it are treated as zero.
Classification classify(const PiecewiseSystem& z, double tol = kDegeneracyTol);

/// Literal normal form of a class. Codimension-one classes return their
/// unfolding at delta = 0. Throws InvalidSigns.
PiecewiseSystem normal_form(Verdict v, const Signs& s);

enum class UnfoldingKind { DoublePseudoEq, PseudoHopf, RegularFold };

std::string_view to_string(UnfoldingKind k);
std::optional<UnfoldingKind> unfolding_kind_from_string(std::string_view s);
Verdict codim1_verdict(UnfoldingKind k);

/// One-parameter family through the codimension-one class. |delta| <= 0.5.
/// Throws InvalidSigns, DegenerateInput.
PiecewiseSystem unfolding(UnfoldingKind k, const Signs& s, double delta);

/// Decomposition classes of one half-branch, as an unordered set.
using SegmentSet = std::vector<BranchPointClass>;  // sorted, unique

/// Expected decomposition of Sigma_1^+, Sigma_1^-, Sigma_2^+, Sigma_2^- for the
/// regular-fold family with Y = (a, b), by sign of delta.
std::array<SegmentSet, 4> regular_fold_table(int a, int b, int delta_sign);

/// Expected verdict of the unfolding at a delta of the given sign.
Verdict predicted_verdict(UnfoldingKind k, const Signs& s, int delta_sign);

struct UnfoldingSample {
  double delta = 0.0;
  Classification classification;
  std::vector<PseudoEquilibrium> pseudo_equilibria;  // both branches
  std::vector<FoldPoint> folds;                      // Sigma_2
  std::vector<FixedPoint> fixed_points;              // nontrivial, both signs of x
  std::optional<std::array<HalfBranchDecomposition, 4>> decomposition;
  std::vector<std::string> failures;  // predictions that did not hold
};

/// Classifies the family member at delta and checks the predicted phenomena.
/// Never throws for valid signs; failed checks land in `failures`.
/// `tol` is the degeneracy band handed to classify.
UnfoldingSample evaluate_unfolding(UnfoldingKind k, const Signs& s, double delta, double tol = kDegeneracyTol);

struct UnfoldingReport {
  UnfoldingKind kind = UnfoldingKind::RegularFold;
  Signs signs;
  std::vector<UnfoldingSample> samples;
};

/// Throws PredictionMismatch naming the first failing check.
UnfoldingReport verify_unfolding(UnfoldingKind k, const Signs& s, const std::vector<double>& deltas,
                                 double tol = kDegeneracyTol);

}  // namespace crosswitch
