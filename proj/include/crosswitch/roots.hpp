#pragma once

#include <vector>

#include "crosswitch/polynomial.hpp"

namespace crosswitch {

struct RootScanOptions {
  int cells = 512;
  double xtol = 1e-12;
};

struct RootScan {
  std::vector<double> roots;  // ascending
  bool identically_zero = false;
};

/// Real roots of p in [lo, hi]: sign changes over a uniform grid refined by
/// bisection, plus grid nodes where p vanishes to rounding accuracy. Roots of
/// even multiplicity that fall strictly between nodes are not detected.
RootScan scan_roots(const UniPoly& p, double lo, double hi, const RootScanOptions& opts = {});

/// Bisection for f on [a, b] with f(a) * f(b) < 0.
template <class F>
double bisect(F&& f, double a, double b, double fa, double xtol) {
  for (int it = 0; it < 200 && (b - a) > xtol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace crosswitch
