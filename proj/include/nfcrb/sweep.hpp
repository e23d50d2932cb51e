#pragma once

#include "nfcrb/report.hpp"
#include "nfcrb/scene.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nfcrb {

enum class SweepVariable { Range, Angle, Antennas, Snapshots, Power };

const char* to_string(SweepVariable variable);
const char* unit_of(SweepVariable variable);
SweepVariable parse_sweep_variable(const std::string& name);

struct SweepSpec {
    SweepVariable variable = SweepVariable::Range;
    std::vector<double> grid;  ///< m | degrees | count | count | W
    SceneConfig base;
    std::vector<BoundKind> bounds{kAllBounds.begin(), kAllBounds.end()};
    std::vector<Variant> variants{kAllVariants.begin(), kAllVariants.end()};
};

/// Throws InvalidArgument for an empty or non-monotone grid, non-integer counts
/// or empty bound/variant lists.
void validate(const SweepSpec& spec);

/// Base configuration with the sweep variable set to `value`. Range and angle
/// act on target 1 about the origin; antennas set both array sizes.
SceneConfig point_config(const SweepSpec& spec, double value);

struct SweepRow {
    double value = 0.0;
    std::optional<TargetEvaluation> target;  ///< absent when the point failed
    int target_index = 0;
    std::string error;
};

/// Rows in grid order (one per target per grid point). Failing points yield a
/// row with the error set; the sweep continues.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers = 1);

void write_sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows, std::ostream& out);

} // namespace nfcrb
