// crosswitch: command-line front end.
//
// Exit status: 0 success, 1 other failure, 2 malformed input or usage,
// 3 non-finite numbers, 4 unfolding prediction mismatch.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "crosswitch/classify.hpp"
#include "crosswitch/error.hpp"
#include "crosswitch/flow.hpp"
#include "crosswitch/io.hpp"
#include "crosswitch/returnmap.hpp"
#include "crosswitch/sweep.hpp"

namespace cw = crosswitch;

namespace {

int exit_code(cw::ErrorCode code) {
  switch (code) {
    case cw::ErrorCode::ParseError:
    case cw::ErrorCode::InvalidField:
    case cw::ErrorCode::InvalidSigns: return 2;
    case cw::ErrorCode::InvalidNumerics: return 3;
    case cw::ErrorCode::PredictionMismatch: return 4;
    default: return 1;
  }
}

// Degeneracy band; CROSSWITCH_TOL overrides it for testing.
double degeneracy_tol() {
  const char* env = std::getenv("CROSSWITCH_TOL");
  if (!env || !*env) return cw::kDegeneracyTol;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v >= 0) || !std::isfinite(v)) {
    throw cw::Error(cw::ErrorCode::ParseError, "CROSSWITCH_TOL must be a non-negative number");
  }
  return v;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cw::Error(cw::ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

// CLI value if given, else the system file's "defaults" entry, else fallback.
template <class T>
T pick(const CLI::Option* opt, const T& cli_value, const cw::Json& defaults, const char* key, const T& fallback) {
  if (opt && opt->count() > 0) return cli_value;
  if (defaults.contains(key)) {
    try {
      return defaults[key].get<T>();
    } catch (const cw::Json::exception&) {
      throw cw::Error(cw::ErrorCode::ParseError, std::string("defaults.") + key + " has the wrong type");
    }
  }
  return fallback;
}

cw::Point2 parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw cw::Error(cw::ErrorCode::ParseError, "--from expects x1,x2");
  try {
    std::size_t u1 = 0, u2 = 0;
    const double x1 = std::stod(text.substr(0, comma), &u1);
    const double x2 = std::stod(text.substr(comma + 1), &u2);
    if (u1 != comma || u2 != text.size() - comma - 1) throw std::invalid_argument("point");
    if (!std::isfinite(x1) || !std::isfinite(x2)) throw cw::Error(cw::ErrorCode::InvalidNumerics, "--from is not finite");
    return {x1, x2};
  } catch (const std::logic_error&) {
    throw cw::Error(cw::ErrorCode::ParseError, "--from expects x1,x2");
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis of planar vector fields switched on the cross x1*x2 = 0"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cw::kToolVersion));

  auto* classify = app.add_subcommand("classify", "Classify the singularity at the origin");
  std::string classify_path;
  classify->add_option("system", classify_path, "System JSON file")->required();

  auto* portrait = app.add_subcommand("portrait", "Phase portrait as SVG or CSV");
  std::string portrait_path, portrait_out;
  double portrait_box = 1.0, portrait_tmax = 0.0;
  int portrait_seeds = 6;
  portrait->add_option("system", portrait_path, "System JSON file")->required();
  auto* box_opt = portrait->add_option("--box", portrait_box, "Half width of the plotted square");
  auto* seeds_opt = portrait->add_option("--seeds", portrait_seeds, "Seeds per lattice edge");
  auto* ptmax_opt = portrait->add_option("--tmax", portrait_tmax, "Integration time per seed");
  portrait->add_option("--out", portrait_out, "Output file (.svg or .csv)")->required();

  auto* sweep = app.add_subcommand("sweep", "Sweep an unfolding family");
  std::string sweep_kind, sweep_signs, sweep_delta, sweep_out;
  sweep->add_option("kind", sweep_kind, "DoublePseudoEq, PseudoHopf or RegularFold")->required();
  sweep->add_option("--signs", sweep_signs, "Signs, e.g. a=1,b=-1")->required();
  sweep->add_option("--delta", sweep_delta, "Grid lo:hi:n containing 0")->required();
  sweep->add_option("--out", sweep_out, "CSV output file (stdout if omitted)");

  auto* nf = app.add_subcommand("normal-form", "Write the normal form of a class");
  std::string nf_class, nf_signs, nf_out;
  nf->add_option("class", nf_class, "Verdict tag, e.g. Stable_C32")->required();
  nf->add_option("--signs", nf_signs, "Signs, e.g. a=1,b=1,c=1")->required();
  nf->add_option("--out", nf_out, "JSON output file (stdout if omitted)");

  auto* rmap = app.add_subcommand("return-map", "Return-map coefficients and samples");
  std::string rmap_path;
  int rmap_samples = 16;
  rmap->add_option("system", rmap_path, "System JSON file")->required();
  auto* samples_opt = rmap->add_option("--samples", rmap_samples, "Number of samples on Sigma_2^-");

  auto* integ = app.add_subcommand("integrate", "Integrate one trajectory to CSV");
  std::string integ_path, integ_from, integ_out;
  double integ_time = 1.0, integ_box = 10.0;
  integ->add_option("system", integ_path, "System JSON file")->required();
  integ->add_option("--from", integ_from, "Start point x1,x2")->required();
  auto* time_opt = integ->add_option("--time", integ_time, "Integration time (negative runs backward)");
  auto* ibox_opt = integ->add_option("--box", integ_box, "Stop when max(|x1|,|x2|) exceeds this");
  integ->add_option("--out", integ_out, "CSV output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*classify) {
      const double tol = degeneracy_tol();
      const auto file = cw::load_system_file(classify_path);
      const auto c = cw::classify(file.system, tol);
      std::cout << cw::canonical_dump(cw::classification_to_json(c, file.system)) << '\n';
    } else if (*portrait) {
      const auto file = cw::load_system_file(portrait_path);
      const double box = pick(box_opt, portrait_box, file.defaults, "box", 1.0);
      const int seeds = pick(seeds_opt, portrait_seeds, file.defaults, "seeds", 6);
      cw::PortraitOptions opts;
      opts.tmax = pick(ptmax_opt, portrait_tmax, file.defaults, "tmax", 0.0);
      if (!(box > 0) || seeds < 1) throw cw::Error(cw::ErrorCode::ParseError, "--box must be positive, --seeds >= 1");
      const auto entries = cw::phase_portrait(file.system, box, seeds, opts);
      if (ends_with(portrait_out, ".csv")) write_output(portrait_out, cw::portrait_csv(entries));
      else if (ends_with(portrait_out, ".svg")) write_output(portrait_out, cw::portrait_svg(entries, box));
      else throw cw::Error(cw::ErrorCode::ParseError, "--out must end in .svg or .csv");
    } else if (*sweep) {
      const auto kind = cw::unfolding_kind_from_string(sweep_kind);
      if (!kind) throw cw::Error(cw::ErrorCode::ParseError, "unknown family " + sweep_kind);
      const auto signs = cw::parse_signs(sweep_signs);
      const auto deltas = cw::parse_delta_grid(sweep_delta);
      const auto records = cw::run_sweep(*kind, signs, deltas, 0, degeneracy_tol());
      write_output(sweep_out, cw::sweep_csv(records));
      for (const auto& r : records) {
        if (!r.failures.empty()) {
          throw cw::Error(cw::ErrorCode::PredictionMismatch,
                          "delta=" + cw::format_real(r.delta) + ": " + r.failures.front());
        }
      }
    } else if (*nf) {
      const auto v = cw::verdict_from_string(nf_class);
      if (!v || *v == cw::Verdict::HigherCodimension) throw cw::Error(cw::ErrorCode::ParseError, "unknown class " + nf_class);
      const auto z = cw::normal_form(*v, cw::parse_signs(nf_signs));
      write_output(nf_out, cw::canonical_dump(cw::system_to_json(z)) + '\n');
    } else if (*rmap) {
      const auto file = cw::load_system_file(rmap_path);
      const int n = pick(samples_opt, rmap_samples, file.defaults, "samples", 16);
      if (n < 1) throw cw::Error(cw::ErrorCode::ParseError, "--samples must be positive");
      const auto m = cw::return_map_model(file.system, n);
      std::cout << cw::canonical_dump(cw::return_map_to_json(m, file.system)) << '\n';
    } else if (*integ) {
      const auto file = cw::load_system_file(integ_path);
      const double t = pick(time_opt, integ_time, file.defaults, "time", 1.0);
      const double box = pick(ibox_opt, integ_box, file.defaults, "box", 10.0);
      if (!std::isfinite(t) || t == 0.0) throw cw::Error(cw::ErrorCode::ParseError, "--time must be nonzero");
      const auto p0 = parse_point(integ_from);
      const auto traj = t > 0 ? cw::integrate(file.system, p0, t, box) : cw::integrate_backward(file.system, p0, -t, box);
      write_output(integ_out, cw::trajectory_csv(traj));
    }
  } catch (const cw::Error& e) {
    std::cerr << "crosswitch: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "crosswitch: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
