#include "crosswitch/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <thread>

#include "crosswitch/error.hpp"
#include "crosswitch/io.hpp"

namespace crosswitch {

std::vector<double> parse_delta_grid(std::string_view text) {
  const std::string s(text);
  const auto c1 = s.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
  if (c2 == std::string::npos) throw Error(ErrorCode::ParseError, "delta grid must be lo:hi:n");
  double lo, hi;
  long n;
  try {
    std::size_t used = 0;
    lo = std::stod(s.substr(0, c1), &used);
    if (used != c1) throw std::invalid_argument("lo");
    hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1), &used);
    if (used != c2 - c1 - 1) throw std::invalid_argument("hi");
    n = std::stol(s.substr(c2 + 1), &used);
    if (used != s.size() - c2 - 1) throw std::invalid_argument("n");
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "delta grid must be lo:hi:n");
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw Error(ErrorCode::InvalidNumerics, "delta grid is not finite");
  if (n < 3 || !(hi > lo)) throw Error(ErrorCode::ParseError, "delta grid needs lo < hi and n >= 3");
  std::vector<double> out;
  bool has_zero = false;
  for (long k = 0; k < n; ++k) {
    double d = k == n - 1 ? hi : lo + (hi - lo) * static_cast<double>(k) / (n - 1);
    if (std::abs(d) <= 1e-12 * (hi - lo)) d = 0.0;
    has_zero = has_zero || d == 0.0;
    out.push_back(d);
  }
  if (!has_zero) throw Error(ErrorCode::ParseError, "delta grid must contain 0");
  return out;
}

std::vector<SweepRecord> run_sweep(UnfoldingKind kind, const Signs& signs, std::vector<double> deltas,
                                   unsigned threads, double tol) {
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
  // Validate the signs once up front so workers only see valid input.
  (void)unfolding(kind, signs, 0.0);

  std::vector<SweepRecord> out(deltas.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, deltas.size())));
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < threads; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t n = w; n < deltas.size(); n += threads) {
        const UnfoldingSample sample = evaluate_unfolding(kind, signs, deltas[n], tol);
        SweepRecord& r = out[n];
        const Witnesses& wit = sample.classification.witnesses;
        r.delta = deltas[n];
        r.verdict = sample.classification.verdict;
        r.alpha = wit.alpha;
        r.gamma = wit.gamma.value_or(0.0);
        r.det0 = wit.det0.value_or(0.0);
        r.pseudo_equilibria = sample.pseudo_equilibria;
        if (!sample.folds.empty()) r.fold = sample.folds.front();
        r.fixed_points = sample.fixed_points;
        r.failures = sample.failures;
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::string out = "delta,verdict,alpha,gamma,det0,pseudo_equilibria,fold,fixed_points,checks\n";
  for (const auto& r : records) {
    std::string pes;
    for (const auto& pe : r.pseudo_equilibria) {
      if (!pes.empty()) pes += ';';
      pes += std::to_string(pe.branch) + ':' + format_real(pe.location) + ':' + std::string(to_string(pe.stability));
    }
    std::string fold;
    if (r.fold) {
      fold = std::string(to_string(r.fold->field)) + ':' + std::to_string(r.fold->branch) + ':' +
             format_real(r.fold->location) + ':' + std::string(to_string(r.fold->visibility));
    }
    std::string fps;
    for (const auto& fp : r.fixed_points) {
      if (!fps.empty()) fps += ';';
      fps += format_real(fp.location) + ':' + std::string(to_string(fp.stability));
    }
    std::string checks;
    for (const auto& f : r.failures) {
      if (!checks.empty()) checks += " | ";
      checks += f;
    }
    if (checks.empty()) checks = "ok";
    // Commas inside the free-text column would break the row.
    std::replace(checks.begin(), checks.end(), ',', ';');
    out += format_real(r.delta) + ',' + std::string(to_string(r.verdict)) + ',' + (r.alpha ? format_real(*r.alpha) : "") +
           ',' + format_real(r.gamma) + ',' + format_real(r.det0) + ',' + pes + ',' + fold + ',' + fps + ',' + checks +
           '\n';
  }
  return out;
}

}  // namespace crosswitch
