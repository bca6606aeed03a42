#include "crosswitch/roots.hpp"

#include <cmath>
#include <limits>

namespace crosswitch {

RootScan scan_roots(const UniPoly& p, double lo, double hi, const RootScanOptions& opts) {
  RootScan out;
  if (p.is_zero()) {
    out.identically_zero = true;
    return out;
  }
  const int n = opts.cells;
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> xs(n + 1), vs(n + 1);
  std::vector<bool> zero(n + 1);
  for (int k = 0; k <= n; ++k) {
    xs[k] = k == n ? hi : lo + (hi - lo) * static_cast<double>(k) / n;
    vs[k] = p(xs[k]);
    // Horner rounding bound: a node inside it is treated as an exact root.
    zero[k] = std::abs(vs[k]) <= 4.0 * eps * (p.degree() + 1) * p.magnitude(xs[k]);
  }

  for (int k = 0; k <= n;) {
    if (zero[k]) {
      int e = k;
      while (e + 1 <= n && zero[e + 1]) ++e;
      out.roots.push_back(0.5 * (xs[k] + xs[e]));
      k = e + 1;
      continue;
    }
    if (k < n && !zero[k + 1] && (vs[k] < 0) != (vs[k + 1] < 0)) {
      out.roots.push_back(bisect(p, xs[k], xs[k + 1], vs[k], opts.xtol));
    }
    ++k;
  }
  return out;
}

}  // namespace crosswitch
