#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crosswitch/classify.hpp"

namespace crosswitch {

struct SweepRecord {
  double delta = 0.0;
  Verdict verdict = Verdict::HigherCodimension;
  std::optional<double> alpha;
  double gamma = 0.0;
  double det0 = 0.0;
  std::vector<PseudoEquilibrium> pseudo_equilibria;
  std::optional<FoldPoint> fold;
  std::vector<FixedPoint> fixed_points;
  std::vector<std::string> failures;
};

/// Parses "lo:hi:n" into n evenly spaced values. Values within 1e-12 of
/// zero (relative to the range) are snapped to 0. Throws ParseError unless
/// n >= 3 and the grid contains 0.
std::vector<double> parse_delta_grid(std::string_view text);

/// One record per delta, ordered by delta, computed in parallel.
std::vector<SweepRecord> run_sweep(UnfoldingKind kind, const Signs& signs, std::vector<double> deltas,
                                   unsigned threads = 0, double tol = kDegeneracyTol);

/// Columns delta,verdict,alpha,gamma,det0,pseudo_equilibria,fold,fixed_points,checks.
std::string sweep_csv(const std::vector<SweepRecord>& records);

}  // namespace crosswitch
