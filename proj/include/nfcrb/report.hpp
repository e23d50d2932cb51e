#pragma once

#include "nfcrb/approx.hpp"
#include "nfcrb/crb.hpp"
#include "nfcrb/geometry.hpp"
#include "nfcrb/scene.hpp"

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nfcrb {

inline constexpr const char* kToolVersion = "1.0.0";

enum class BoundKind { Rcs, Vx, Vy, X, Y };
inline constexpr std::array<BoundKind, 5> kAllBounds = {BoundKind::Rcs, BoundKind::Vx,
                                                        BoundKind::Vy, BoundKind::X, BoundKind::Y};
const char* to_string(BoundKind kind);
/// Inverse of to_string; throws InvalidArgument.
BoundKind parse_bound(const std::string& name);

enum class Variant { Exact, FF, NF };
inline constexpr std::array<Variant, 3> kAllVariants = {Variant::Exact, Variant::FF, Variant::NF};
const char* to_string(Variant variant);
Variant parse_variant(const std::string& name);

/// Exact bound (1 / F_ii, alpha summed over real and imaginary part) and the
/// two closed-form approximations of one bound.
struct BoundValues {
    double exact = 0.0;
    std::optional<double> ff;
    std::optional<double> nf;
    std::optional<double> relerr_ff;  ///< empty when exact diverges or FF is unavailable
    std::optional<double> relerr_nf;

    std::optional<double> value(Variant v) const;
    std::optional<double> relerr(Variant v) const;
};

struct TargetEvaluation {
    int index = 0;
    Polar polar_tx;
    Polar polar_rx;
    Region region_tx = Region::Fresnel;
    Region region_rx = Region::Fresnel;
    std::array<BoundValues, 5> bounds;  ///< kAllBounds order
    std::optional<CrbRecord> full;       ///< all parameters unknown
    std::optional<CrbRecord> schur;      ///< other targets eliminated
    std::string error;                   ///< approximation failures, "; "-separated
};

struct PointEvaluation {
    std::vector<TargetEvaluation> targets;
    std::optional<double> condition_number;
    std::optional<CrbStatus> status;
    std::string inverse_error;  ///< set when the full inverse could not be formed
    bool displacement_warning = false;
};

struct EvalOptions {
    int fim_workers = 1;
    bool with_inverse = true;  ///< also compute the full and Schur inverses
};

PointEvaluation evaluate_point(const Scene& scene, const EvalOptions& options = {});

/// "%.12e", "inf" for divergence markers, empty for absent values.
std::string format_cell(std::optional<double> value);

/// Double-quoted CSV field with embedded quotes doubled.
std::string csv_quote(const std::string& text);

void write_eval_text(const Scene& scene, const PointEvaluation& eval, std::ostream& out);

/// One row per target and bound.
void write_eval_csv(const Scene& scene, const PointEvaluation& eval, std::ostream& out);

} // namespace nfcrb
