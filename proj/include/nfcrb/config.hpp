#pragma once

#include "nfcrb/scene.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace nfcrb {

/// Range, angle, velocity and reflectivity of the default single target.
inline constexpr double kDefaultRange = 100.0;
inline constexpr double kDefaultAngleDeg = 20.0;
inline constexpr double kDefaultVx = 1.0;
inline constexpr double kDefaultVy = 4.0;
inline constexpr double kDefaultRcsRe = 1.0;
inline constexpr double kDefaultRcsIm = 0.1;

double deg_to_rad(double degrees);

/// Monostatic scene with one target at 100 m / 20 deg, alpha = 1 + 0.1j, v = (1, 4).
SceneConfig default_config();

/// Parse a key = value document. Omitted keys keep their defaults; '#' starts
/// a comment. Target 1 without position keys sits at the default position. Throws ParseError (with the offending line) on unknown keys,
/// duplicate or conflicting keys, malformed values and incomplete targets.
SceneConfig parse_config(std::string_view text);

/// Read and parse a file. A missing file is a ParseError with line 0.
SceneConfig load_config(const std::string& path);

/// Resolved configuration as "key = value" lines in a fixed order.
std::vector<std::string> config_echo(const SceneConfig& config);

} // namespace nfcrb
