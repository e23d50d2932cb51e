#include "nfcrb/scene.hpp"

#include "nfcrb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nfcrb {

namespace {

constexpr double kMinElementDistance = 1e-6;

void check_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidArgument(std::string(name) + " must be positive and finite");
    }
}

} // namespace

Target Target::from_polar(double range, double angle, Vec2 velocity, std::complex<double> rcs,
                          Vec2 origin) {
    Target t;
    t.x = origin.x() + range * std::sin(angle);
    t.y = origin.y() + range * std::cos(angle);
    t.vx = velocity.x();
    t.vy = velocity.y();
    t.rcs_re = rcs.real();
    t.rcs_im = rcs.imag();
    return t;
}

std::string_view to_string(ParamKind kind) {
    switch (kind) {
    case ParamKind::X: return "x";
    case ParamKind::Y: return "y";
    case ParamKind::Vx: return "vx";
    case ParamKind::Vy: return "vy";
    case ParamKind::AlphaR: return "alpha_r";
    case ParamKind::AlphaI: return "alpha_i";
    }
    return "?";
}

Scene make_scene(SceneConfig config) {
    check_positive(config.carrier_hz, "carrier_hz");
    check_positive(config.lightspeed, "lightspeed");
    check_positive(config.t_sym_s, "t_sym_s");
    check_positive(config.power_w, "power_w");
    check_positive(config.noise_var_w, "noise_var_w");
    if (config.snapshots < 1) {
        throw InvalidArgument("snapshots must be >= 1");
    }
    if (config.targets.empty()) {
        throw InvalidArgument("scene needs at least one target");
    }

    Scene scene;
    const double derived = config.lightspeed / config.carrier_hz;
    if (config.wavelength_m) {
        check_positive(*config.wavelength_m, "wavelength_m");
        if (std::abs(*config.wavelength_m * config.carrier_hz - config.lightspeed)
            > 1e-12 * config.lightspeed) {
            throw InvalidArgument("wavelength_m * carrier_hz does not match the speed of light");
        }
        scene.wavelength_ = *config.wavelength_m;
    } else {
        scene.wavelength_ = derived;
    }
    scene.wavenumber_ = 2.0 * std::numbers::pi * config.carrier_hz / config.lightspeed;

    double min_range = std::numeric_limits<double>::infinity();
    double max_speed = 0.0;
    for (std::size_t q = 0; q < config.targets.size(); ++q) {
        const Target& t = config.targets[q];
        const std::array<double, 6> fields = {t.x, t.y, t.vx, t.vy, t.rcs_re, t.rcs_im};
        if (!std::all_of(fields.begin(), fields.end(), [](double v) { return std::isfinite(v); })) {
            throw InvalidArgument("target " + std::to_string(q + 1) + " has a non-finite field");
        }
        for (const auto* geom : {&config.tx, &config.rx}) {
            for (const auto& p : geom->positions()) {
                const double r = (t.position() - p).norm();
                if (r <= kMinElementDistance) {
                    throw DegenerateGeometry("target " + std::to_string(q + 1)
                                             + " coincides with an array element");
                }
                min_range = std::min(min_range, r);
            }
        }
        max_speed = std::max(max_speed, t.velocity().norm());
    }
    scene.displacement_ratio_ = max_speed * config.snapshots * config.t_sym_s / min_range;
    scene.config_ = std::move(config);
    return scene;
}

Scene with_targets(const Scene& scene, std::vector<Target> targets) {
    SceneConfig cfg = scene.config();
    cfg.targets = std::move(targets);
    return make_scene(std::move(cfg));
}

Scene rotated(const Scene& scene, double angle) {
    SceneConfig cfg = scene.config();
    cfg.tx = cfg.tx.rotated(angle);
    cfg.rx = cfg.rx.rotated(angle);
    const Eigen::Rotation2Dd rot(angle);
    for (auto& t : cfg.targets) {
        const Vec2 p = rot * t.position();
        const Vec2 v = rot * t.velocity();
        t.x = p.x();
        t.y = p.y();
        t.vx = v.x();
        t.vy = v.y();
    }
    return make_scene(std::move(cfg));
}

Eigen::VectorXd pack(const std::vector<Target>& targets) {
    const int q_count = static_cast<int>(targets.size());
    Eigen::VectorXd values(6 * q_count);
    for (int q = 0; q < q_count; ++q) {
        const Target& t = targets[static_cast<std::size_t>(q)];
        values(param_index(ParamKind::X, q, q_count)) = t.x;
        values(param_index(ParamKind::Y, q, q_count)) = t.y;
        values(param_index(ParamKind::Vx, q, q_count)) = t.vx;
        values(param_index(ParamKind::Vy, q, q_count)) = t.vy;
        values(param_index(ParamKind::AlphaR, q, q_count)) = t.rcs_re;
        values(param_index(ParamKind::AlphaI, q, q_count)) = t.rcs_im;
    }
    return values;
}

std::vector<Target> unpack(const Eigen::VectorXd& values) {
    if (values.size() % 6 != 0) {
        throw InvalidArgument("parameter vector length must be a multiple of 6");
    }
    const int q_count = static_cast<int>(values.size() / 6);
    std::vector<Target> targets(static_cast<std::size_t>(q_count));
    for (int q = 0; q < q_count; ++q) {
        Target& t = targets[static_cast<std::size_t>(q)];
        t.x = values(param_index(ParamKind::X, q, q_count));
        t.y = values(param_index(ParamKind::Y, q, q_count));
        t.vx = values(param_index(ParamKind::Vx, q, q_count));
        t.vy = values(param_index(ParamKind::Vy, q, q_count));
        t.rcs_re = values(param_index(ParamKind::AlphaR, q, q_count));
        t.rcs_im = values(param_index(ParamKind::AlphaI, q, q_count));
    }
    return targets;
}

Polar polar_of(const Target& target, const ArrayGeometry& geom) {
    const double dx = target.x - geom.centroid().x();
    const double dy = target.y - geom.centroid().y();
    const double r = std::hypot(dx, dy);
    if (r == 0.0) {
        throw DegenerateGeometry("target sits on the array centroid");
    }
    return {r, std::atan2(dx, dy)};
}

double dbm_to_watts(double level_dbm) {
    return std::pow(10.0, (level_dbm - 30.0) / 10.0);
}

} // namespace nfcrb
