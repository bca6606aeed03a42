#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crosswitch/classify.hpp"
#include "crosswitch/flow.hpp"
#include "crosswitch/returnmap.hpp"

namespace crosswitch {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::json;

/// A system file: {"X": {"f1": [...], "f2": [...]}, "Y": {...}} with
/// monomials {"c": number, "i": int, "j": int}, plus an optional "defaults"
/// object of CLI option values and an optional "schema" number.
struct SystemFile {
  PiecewiseSystem system;
  Json defaults = Json::object();
};

/// Throws ParseError on malformed input and InvalidNumerics on non-finite
/// coefficients (including the strings "NaN", "Infinity", "-Infinity").
SystemFile parse_system(std::string_view text);
SystemFile load_system_file(const std::string& path);

Json field_to_json(const FieldSpec& f);
Json system_to_json(const PiecewiseSystem& z);

/// Sorted keys, no whitespace, floats as "%.12e", integers as integers.
std::string canonical_dump(const Json& j);

/// Lower-case hex SHA-256 of the canonical system JSON.
std::string system_digest(const PiecewiseSystem& z);

Json signs_to_json(const Signs& s);
Json classification_to_json(const Classification& c, const PiecewiseSystem& z);
Json return_map_to_json(const ReturnMapModel& m, const PiecewiseSystem& z);

/// Parses "a=1,b=-1,c=1". Throws InvalidSigns.
Signs parse_signs(std::string_view text);

/// Columns t,x1,x2,mode.
std::string trajectory_csv(const Trajectory& traj);
/// Columns trajectory,direction,t,x1,x2,mode.
std::string portrait_csv(const std::vector<PortraitEntry>& entries);
/// Sigma drawn as the two axes, one polyline per segment coloured by mode.
std::string portrait_svg(const std::vector<PortraitEntry>& entries, double box);

/// "%.12e" with negative zero folded to zero.
std::string format_real(double v);

}  // namespace crosswitch
