#include "crosswitch/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "crosswitch/error.hpp"

namespace crosswitch {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double read_coefficient(const Json& c, const std::string& where) {
  if (c.is_string()) {
    const auto s = c.get<std::string>();
    if (s == "NaN" || s == "nan" || s == "Infinity" || s == "-Infinity" || s == "inf" || s == "-inf") {
      throw Error(ErrorCode::InvalidNumerics, where + ": non-finite coefficient");
    }
    parse_fail(where + ": coefficient must be a number");
  }
  if (!c.is_number()) parse_fail(where + ": coefficient must be a number");
  const double v = c.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidNumerics, where + ": non-finite coefficient");
  return v;
}

int read_power(const Json& p, const std::string& where) {
  if (!p.is_number_integer()) parse_fail(where + ": power must be an integer");
  const auto v = p.get<long long>();
  if (v < 0 || v > 64) parse_fail(where + ": power out of range");
  return static_cast<int>(v);
}

Polynomial read_component(const Json& arr, const std::string& where) {
  if (!arr.is_array()) parse_fail(where + " must be an array of monomials");
  std::vector<Monomial> terms;
  for (std::size_t n = 0; n < arr.size(); ++n) {
    const Json& m = arr[n];
    const std::string at = where + "[" + std::to_string(n) + "]";
    if (!m.is_object()) parse_fail(at + " must be an object");
    for (const auto& [key, value] : m.items()) {
      (void)value;
      if (key != "c" && key != "i" && key != "j") parse_fail(at + ": unknown key " + key);
    }
    if (!m.contains("c")) parse_fail(at + ": missing c");
    terms.push_back({read_coefficient(m["c"], at), m.contains("i") ? read_power(m["i"], at) : 0,
                     m.contains("j") ? read_power(m["j"], at) : 0});
  }
  return Polynomial(std::move(terms));
}

FieldSpec read_field(const Json& j, const std::string& name) {
  if (!j.is_object()) parse_fail(name + " must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "f1" && key != "f2") parse_fail(name + ": unknown key " + key);
  }
  if (!j.contains("f1") || !j.contains("f2")) parse_fail(name + " needs f1 and f2");
  try {
    return {read_component(j["f1"], name + ".f1"), read_component(j["f2"], name + ".f2")};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidField) parse_fail(e.what());
    throw;
  }
}

void dump(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {  // std::map keeps keys sorted
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        dump(value, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t n = 0; n < j.size(); ++n) {
        if (n) out += ',';
        dump(j[n], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: out += format_real(j.get<double>()); break;
    default: out += j.dump(); break;
  }
}

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

const char* mode_colour(Mode m) {
  switch (m) {
    case Mode::SmoothX: return "#1f77b4";
    case Mode::SmoothY: return "#ff7f0e";
    case Mode::Sliding1:
    case Mode::Sliding2: return "#2ca02c";
    default: return "#d62728";
  }
}

}  // namespace

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

SystemFile parse_system(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) parse_fail("system file must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "X" && key != "Y" && key != "defaults" && key != "schema" && key != "name" && key != "description") {
      parse_fail("unknown key " + key);
    }
  }
  if (!j.contains("X") || !j.contains("Y")) parse_fail("system file needs X and Y");
  if (j.contains("schema") && j["schema"] != kSchemaVersion) parse_fail("unsupported schema version");
  SystemFile out;
  out.system = PiecewiseSystem(read_field(j["X"], "X"), read_field(j["Y"], "Y"));
  if (j.contains("defaults")) {
    if (!j["defaults"].is_object()) parse_fail("defaults must be an object");
    out.defaults = j["defaults"];
  }
  return out;
}

SystemFile load_system_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

Json field_to_json(const FieldSpec& f) {
  Json out = Json::object();
  for (int k : {1, 2}) {
    Json arr = Json::array();
    for (const auto& m : f.component(k).terms()) arr.push_back({{"c", m.c}, {"i", m.i}, {"j", m.j}});
    out[k == 1 ? "f1" : "f2"] = arr;
  }
  return out;
}

Json system_to_json(const PiecewiseSystem& z) {
  return {{"schema", kSchemaVersion}, {"X", field_to_json(z.X())}, {"Y", field_to_json(z.Y())}};
}

std::string canonical_dump(const Json& j) {
  std::string out;
  dump(j, out);
  return out;
}

std::string system_digest(const PiecewiseSystem& z) {
  const std::string text = canonical_dump(system_to_json(z));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("digest computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int n = 0; n < len; ++n) {
    out += hex[md[n] >> 4];
    out += hex[md[n] & 15];
  }
  return out;
}

Json signs_to_json(const Signs& s) {
  Json out = Json::object();
  if (s.a) out["a"] = *s.a;
  if (s.b) out["b"] = *s.b;
  if (s.c) out["c"] = *s.c;
  if (s.c1) out["c1"] = *s.c1;
  if (s.c2) out["c2"] = *s.c2;
  return out;
}

Json classification_to_json(const Classification& c, const PiecewiseSystem& z) {
  const Witnesses& w = c.witnesses;
  Json wj = {{"xi1", opt(w.xi1)},           {"xi2", opt(w.xi2)},         {"det0", opt(w.det0)},
             {"ddet_dx1", opt(w.ddet_dx1)}, {"ddet_dx2", opt(w.ddet_dx2)}, {"X1X2", opt(w.X1X2)},
             {"alpha", opt(w.alpha)},       {"gamma", opt(w.gamma)},     {"beta", opt(w.beta)},
             {"eta", opt(w.eta)},           {"eta_formula", opt(w.eta_formula)}};
  if (w.fold) {
    wj["fold"] = {{"field", std::string(to_string(w.fold->field))},
                  {"branch", w.fold->branch},
                  {"lie", w.fold->lie},
                  {"regular", w.fold->regular}};
  } else {
    wj["fold"] = nullptr;
  }
  return {{"schema", kSchemaVersion},
          {"tool_version", std::string(kToolVersion)},
          {"system_digest", system_digest(z)},
          {"verdict", std::string(to_string(c.verdict))},
          {"signs", signs_to_json(c.signs)},
          {"witnesses", wj},
          {"reasons", c.reasons}};
}

Json return_map_to_json(const ReturnMapModel& m, const PiecewiseSystem& z) {
  auto coeffs = [](const HalfMapCoeffs& h) {
    return Json{{"a", h.a}, {"b", h.b}, {"c", h.c}};
  };
  Json samples = Json::array();
  for (const auto& [x, y] : m.samples) samples.push_back(Json::array({x, y}));
  return {{"schema", kSchemaVersion},
          {"tool_version", std::string(kToolVersion)},
          {"system_digest", system_digest(z)},
          {"alpha", m.alpha},
          {"gamma", m.gamma},
          {"beta", m.beta},
          {"eta", opt(m.eta)},
          {"eta_formula", opt(m.eta_formula)},
          {"phi_X", coeffs(m.x_map)},
          {"phi_Y", coeffs(m.y_map)},
          {"radius", m.radius},
          {"samples", samples},
          {"diagnostics", m.diagnostics}};
}

Signs parse_signs(std::string_view text) {
  Signs s;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidSigns, "expected name=value in " + item);
    const std::string name = item.substr(0, eq), value = item.substr(eq + 1);
    int v;
    if (value == "1" || value == "+1" || value == "+") v = 1;
    else if (value == "-1" || value == "-") v = -1;
    else throw Error(ErrorCode::InvalidSigns, "sign " + name + " must be +1 or -1");
    std::optional<int>* slot = name == "a"    ? &s.a
                               : name == "b"  ? &s.b
                               : name == "c"  ? &s.c
                               : name == "c1" ? &s.c1
                               : name == "c2" ? &s.c2
                                              : nullptr;
    if (!slot) throw Error(ErrorCode::InvalidSigns, "unknown sign " + name);
    if (*slot) throw Error(ErrorCode::InvalidSigns, "sign " + name + " given twice");
    *slot = v;
  }
  return s;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,x1,x2,mode\n";
  for (const auto& seg : traj.segments) {
    for (const auto& tp : seg.points) {
      out += format_real(tp.t) + ',' + format_real(tp.p.x1) + ',' + format_real(tp.p.x2) + ',' +
             std::string(to_string(seg.mode)) + '\n';
    }
  }
  return out;
}

std::string portrait_csv(const std::vector<PortraitEntry>& entries) {
  std::string out = "trajectory,direction,t,x1,x2,mode\n";
  for (std::size_t n = 0; n < entries.size(); ++n) {
    const auto& e = entries[n];
    const std::string head = std::to_string(n) + ',' + (e.backward ? "backward" : "forward") + ',';
    for (const auto& seg : e.trajectory.segments) {
      for (const auto& tp : seg.points) {
        out += head + format_real(tp.t) + ',' + format_real(tp.p.x1) + ',' + format_real(tp.p.x2) + ',' +
               std::string(to_string(seg.mode)) + '\n';
      }
    }
  }
  return out;
}

std::string portrait_svg(const std::vector<PortraitEntry>& entries, double box) {
  constexpr double size = 600.0;
  auto px = [&](double x) { return (x + box) / (2.0 * box) * size; };
  auto py = [&](double y) { return (box - y) / (2.0 * box) * size; };
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                size, size, size, size);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"0\" y1=\"%.3f\" x2=\"%.0f\" y2=\"%.3f\" stroke=\"black\" stroke-width=\"1.5\"/>\n", py(0),
                size, py(0));
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.3f\" y1=\"0\" x2=\"%.3f\" y2=\"%.0f\" stroke=\"black\" stroke-width=\"1.5\"/>\n", px(0),
                px(0), size);
  out += buf;
  for (const auto& e : entries) {
    for (const auto& seg : e.trajectory.segments) {
      if (seg.mode == Mode::StationaryOrigin || seg.mode == Mode::StationarySingularTangency) {
        const Point2 p = seg.points.front().p;
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"%s\"/>\n", px(p.x1), py(p.x2),
                      mode_colour(seg.mode));
        out += buf;
        continue;
      }
      if (seg.points.size() < 2) continue;
      std::snprintf(buf, sizeof buf, "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"%s\" points=\"",
                    mode_colour(seg.mode),
                    seg.mode == Mode::Sliding1 || seg.mode == Mode::Sliding2 ? "3" : "1");
      out += buf;
      // Thin the polyline; the last point is always kept so junctions meet.
      const std::size_t stride = std::max<std::size_t>(1, seg.points.size() / 400);
      for (std::size_t n = 0; n < seg.points.size(); n += stride) {
        std::snprintf(buf, sizeof buf, "%.3f,%.3f ", px(seg.points[n].p.x1), py(seg.points[n].p.x2));
        out += buf;
      }
      const Point2 last = seg.points.back().p;
      std::snprintf(buf, sizeof buf, "%.3f,%.3f\"/>\n", px(last.x1), py(last.x2));
      out += buf;
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace crosswitch
