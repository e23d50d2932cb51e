#pragma once

#include "nfcrb/geometry.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <string_view>
#include <vector>

namespace nfcrb {

inline constexpr double kSpeedOfLightSI = 299792458.0;
inline constexpr double kSpeedOfLightParity = 3.0e8;

/// Point scatterer: position (m), velocity (m/s) and complex reflectivity.
struct Target {
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double rcs_re = 1.0;
    double rcs_im = 0.0;

    Vec2 position() const { return {x, y}; }
    Vec2 velocity() const { return {vx, vy}; }
    std::complex<double> rcs() const { return {rcs_re, rcs_im}; }

    /// Place a target at `range` and broadside angle `angle` (rad) about `origin`.
    static Target from_polar(double range, double angle, Vec2 velocity = Vec2::Zero(),
                             std::complex<double> rcs = {1.0, 0.0}, Vec2 origin = Vec2::Zero());
};

/// Real parameter kinds in their stacking order.
enum class ParamKind : int { X = 0, Y = 1, Vx = 2, Vy = 3, AlphaR = 4, AlphaI = 5 };

inline constexpr std::array<ParamKind, 6> kAllParamKinds = {
    ParamKind::X, ParamKind::Y, ParamKind::Vx, ParamKind::Vy, ParamKind::AlphaR, ParamKind::AlphaI};

std::string_view to_string(ParamKind kind);

/// Index of parameter (kind, q) in the stacked vector [x.., y.., vx.., vy.., aR.., aI..].
inline int param_index(ParamKind kind, int q, int target_count) {
    return static_cast<int>(kind) * target_count + q;
}

/// 10^((level - 30) / 10)
double dbm_to_watts(double level_dbm);

struct SceneConfig {
    double carrier_hz = 15.0e9;
    double lightspeed = kSpeedOfLightParity;
    std::optional<double> wavelength_m;  ///< derived as lightspeed / carrier_hz when absent
    double t_sym_s = 1.0e-4;
    int snapshots = 256;
    double power_w = 0.1;
    double noise_var_w = dbm_to_watts(-114.0);
    ArrayGeometry tx = ArrayGeometry::ula(256, 0.01);
    ArrayGeometry rx = ArrayGeometry::ula(256, 0.01);
    std::vector<Target> targets;
    bool reduce_phase = false;  ///< evaluate e^{-jkr} with r reduced modulo lambda
};

/// Validated, immutable sensing scenario.
class Scene {
public:
    /// Ratio above which the constant-velocity / small-displacement model is flagged.
    static constexpr double kDisplacementWarnRatio = 1e-2;

    const SceneConfig& config() const { return config_; }

    double carrier_hz() const { return config_.carrier_hz; }
    double lightspeed() const { return config_.lightspeed; }
    double wavelength() const { return wavelength_; }
    /// 2 pi f_c / c
    double wavenumber() const { return wavenumber_; }
    double t_sym() const { return config_.t_sym_s; }
    int snapshots() const { return config_.snapshots; }
    double power() const { return config_.power_w; }
    double noise_var() const { return config_.noise_var_w; }
    const ArrayGeometry& tx() const { return config_.tx; }
    const ArrayGeometry& rx() const { return config_.rx; }
    const std::vector<Target>& targets() const { return config_.targets; }
    const Target& target(int q) const { return config_.targets[static_cast<std::size_t>(q)]; }
    int target_count() const { return static_cast<int>(config_.targets.size()); }
    int param_count() const { return 6 * target_count(); }
    bool reduce_phase() const { return config_.reduce_phase; }

    /// max_q |v_q| M T_sym / min element range.
    double displacement_ratio() const { return displacement_ratio_; }
    bool displacement_warning() const { return displacement_ratio_ > kDisplacementWarnRatio; }

private:
    friend Scene make_scene(SceneConfig config);
    Scene() = default;

    SceneConfig config_;
    double wavelength_ = 0.0;
    double wavenumber_ = 0.0;
    double displacement_ratio_ = 0.0;
};

/// Validate `config` and build a Scene. An empty target list is rejected.
Scene make_scene(SceneConfig config);

/// Same scene with a different target list (re-validated).
Scene with_targets(const Scene& scene, std::vector<Target> targets);

/// Scene with every element, target position and velocity rotated about the origin.
Scene rotated(const Scene& scene, double angle);

Eigen::VectorXd pack(const std::vector<Target>& targets);
std::vector<Target> unpack(const Eigen::VectorXd& values);

struct Polar {
    double range = 0.0;
    double angle = 0.0;  ///< from broadside (y-axis): x = r sin(angle), y = r cos(angle)
};

Polar polar_of(const Target& target, const ArrayGeometry& geom);

} // namespace nfcrb
