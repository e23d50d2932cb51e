#include "nfcrb/approx.hpp"

#include "nfcrb/crb.hpp"
#include "nfcrb/errors.hpp"

#include <cmath>
#include <numbers>

namespace nfcrb {

namespace {

constexpr double kAngleFloor = 1e-12;

// Neumaier-compensated accumulation.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void require_axis_ula(const ArrayGeometry& geom) {
    if (!geom.is_axis_ula()) {
        throw InvalidArgument("closed-form approximations need a uniform linear array on the x-axis");
    }
}

// (N^2 - 1) d^2 / r^2, the aperture-over-range factor shared by all corrections.
double aperture_ratio(const ArrayGeometry& geom, double range) {
    const double n = geom.count();
    const double d = geom.spacing();
    return (n * n - 1.0) * d * d / (range * range);
}

struct SideTerms {
    Polar polar;
    double s = 0.0;
    double c = 0.0;
    double ratio = 0.0;  // aperture_ratio
    int count = 1;
};

SideTerms side_terms(const ArrayGeometry& geom, const Target& target) {
    require_axis_ula(geom);
    SideTerms t;
    t.polar = polar_of(target, geom);
    t.s = std::sin(t.polar.angle);
    t.c = std::cos(t.polar.angle);
    t.ratio = aperture_ratio(geom, t.polar.range);
    t.count = geom.count();
    return t;
}

// Common factor 32 pi^2 sigma^2 (r_T r_R)^2 / (|alpha|^2 P N_t N_r lambda^2).
double kinematic_base(const Scene& scene, const SideTerms& tx, const SideTerms& rx,
                      std::complex<double> alpha) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double lam = scene.wavelength();
    const double rr = tx.polar.range * rx.polar.range;
    return 32.0 * pi2 * scene.noise_var() * rr * rr /
           (std::norm(alpha) * scene.power() * tx.count * rx.count * lam * lam);
}

double kinematic_approx(const Scene& scene, int q, Axis axis, ApproxVariant variant,
                        double slow_time) {
    const Target& target = scene.target(q);
    if (std::norm(target.rcs()) == 0.0) {
        return kDivergent;
    }
    const SideTerms tx = side_terms(scene.tx(), target);
    const SideTerms rx = side_terms(scene.rx(), target);
    const CorrectionTerms ct = correction_terms(scene, q);
    const double base = kinematic_base(scene, tx, rx, target.rcs()) / slow_time;

    double denom = 0.0;
    if (variant == ApproxVariant::FarField) {
        denom = axis == Axis::X ? ct.angle_x : ct.angle_y;
    } else {
        // angle factor times Psi, i.e. Phi, which stays finite at broadside
        denom = axis == Axis::X ? ct.phi_x : ct.phi_y;
    }
    if (!(std::abs(denom) >= kAngleFloor)) {
        return kDivergent;
    }
    if (denom < 0.0) {
        throw ApproximationOutOfDomain("near-field correction makes the bound negative");
    }
    return base / denom;
}

} // namespace

const char* to_string(GainVariant variant) {
    switch (variant) {
    case GainVariant::Exact: return "exact";
    case GainVariant::FarField: return "FF";
    case GainVariant::NearField: return "NF";
    }
    return "unknown";
}

const char* to_string(ApproxVariant variant) {
    return variant == ApproxVariant::FarField ? "FF" : "NF";
}

GainTerms gain(const ArrayGeometry& geom, const Target& target, double wavelength,
               GainVariant variant) {
    if (!(wavelength > 0.0)) {
        throw InvalidArgument("wavelength must be positive");
    }
    GainTerms out;
    out.variant = variant;
    if (variant == GainVariant::Exact) {
        CompensatedSum sum;
        for (const Vec2& el : geom.positions()) {
            const double r2 = (target.position() - el).squaredNorm();
            if (r2 == 0.0) {
                throw DegenerateGeometry("target coincides with an array element");
            }
            sum.add(1.0 / r2);
        }
        out.g = sum.value();
    } else {
        require_axis_ula(geom);
        const Polar p = polar_of(target, geom);
        const double n = geom.count();
        const double r2 = p.range * p.range;
        out.g = n / r2;
        if (variant == GainVariant::NearField) {
            const double s = std::sin(p.angle);
            out.g += n * aperture_ratio(geom, p.range) * (4.0 * s * s - 1.0) / (12.0 * r2);
        }
    }
    out.G = wavelength * wavelength / (16.0 * std::numbers::pi * std::numbers::pi) * out.g;
    return out;
}

SceneGains gains(const Scene& scene, int q, GainVariant variant) {
    const Target& t = scene.target(q);
    return {gain(scene.tx(), t, scene.wavelength(), variant),
            gain(scene.rx(), t, scene.wavelength(), variant)};
}

double slow_time_sum(int snapshots) {
    const double m = snapshots;
    return m * (m + 1.0) * (2.0 * m + 1.0) / 6.0;
}

CorrectionTerms correction_terms(const Scene& scene, int q) {
    const Target& target = scene.target(q);
    const SideTerms tx = side_terms(scene.tx(), target);
    const SideTerms rx = side_terms(scene.rx(), target);

    CorrectionTerms ct;
    const double et = tx.ratio / 12.0;
    const double er = rx.ratio / 12.0;
    const double st2 = tx.s * tx.s;
    const double sr2 = rx.s * rx.s;
    const double ct2 = tx.c * tx.c;
    const double cr2 = rx.c * rx.c;

    ct.delta_tx = et * (4.0 * st2 - 1.0);
    ct.delta_rx = er * (4.0 * sr2 - 1.0);
    ct.a_tx = 1.0 + ct.delta_tx;
    ct.a_rx = 1.0 + ct.delta_rx;

    // B = leading angle term + correction; the corrections are kept apart so
    // Phi can be formed as (angle factor) + (small excess) without cancellation.
    const double bt_x_corr = et * (12.0 * st2 * st2 - 10.0 * st2 + 1.0);
    const double br_x_corr = er * (12.0 * sr2 * sr2 - 10.0 * sr2 + 1.0);
    const double bt_y_corr = et * ct2 * (12.0 * st2 - 2.0);
    const double br_y_corr = er * cr2 * (12.0 * sr2 - 2.0);
    ct.b_tx_x = st2 + bt_x_corr;
    ct.b_rx_x = sr2 + br_x_corr;
    ct.b_tx_y = ct2 + bt_y_corr;
    ct.b_rx_y = cr2 + br_y_corr;

    ct.delta_nf_x_tx = tx.ratio / 8.0 * (-3.0 + 5.0 * st2);
    ct.delta_nf_x_rx = rx.ratio / 8.0 * (-3.0 + 5.0 * sr2);
    ct.delta_nf_y_tx = tx.ratio / 8.0 * (-1.0 + 5.0 * st2);
    ct.delta_nf_y_rx = rx.ratio / 8.0 * (-1.0 + 5.0 * sr2);

    ct.angle_x = (tx.s + rx.s) * (tx.s + rx.s);
    ct.angle_y = (tx.c + rx.c) * (tx.c + rx.c);

    // Phi = A_T B_R + A_R B_T + 2 s_T s_R (1 + dT + dR) minus the angle factor.
    const double excess_x = ct.delta_tx * sr2 + br_x_corr * ct.a_tx + ct.delta_rx * st2 +
                            bt_x_corr * ct.a_rx +
                            2.0 * tx.s * rx.s * (ct.delta_nf_x_tx + ct.delta_nf_x_rx);
    const double excess_y = ct.delta_tx * cr2 + br_y_corr * ct.a_tx + ct.delta_rx * ct2 +
                            bt_y_corr * ct.a_rx +
                            2.0 * tx.c * rx.c * (ct.delta_nf_y_tx + ct.delta_nf_y_rx);
    ct.phi_x = ct.angle_x + excess_x;
    ct.phi_y = ct.angle_y + excess_y;
    ct.psi_x = ct.angle_x < kAngleFloor ? kDivergent : 1.0 + excess_x / ct.angle_x;
    ct.psi_y = ct.angle_y < kAngleFloor ? kDivergent : 1.0 + excess_y / ct.angle_y;

    ct.c_m = slow_time_sum(scene.snapshots());
    return ct;
}

double crb_rcs_approx(const Scene& scene, int q, ApproxVariant variant) {
    const Target& target = scene.target(q);
    const SideTerms tx = side_terms(scene.tx(), target);
    const SideTerms rx = side_terms(scene.rx(), target);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double lam2 = scene.wavelength() * scene.wavelength();
    const double rr = tx.polar.range * rx.polar.range;
    const double ff = 256.0 * scene.noise_var() * pi2 * pi2 * rr * rr /
                      (scene.power() * scene.snapshots() * tx.count * rx.count * lam2 * lam2);
    if (variant == ApproxVariant::FarField) {
        return ff;
    }
    const CorrectionTerms ct = correction_terms(scene, q);
    if (ct.a_tx <= 0.0 || ct.a_rx <= 0.0) {
        throw ApproximationOutOfDomain("1 + Delta <= 0: target too close for the expansion");
    }
    return ff / (ct.a_tx * ct.a_rx);
}

double crb_velocity_approx(const Scene& scene, int q, Axis axis, ApproxVariant variant) {
    const double t = scene.t_sym();
    return kinematic_approx(scene, q, axis, variant, t * t * slow_time_sum(scene.snapshots()));
}

double crb_location_approx(const Scene& scene, int q, Axis axis, ApproxVariant variant) {
    return kinematic_approx(scene, q, axis, variant, static_cast<double>(scene.snapshots()));
}

double relative_error(double approx, double truth) {
    if (truth == 0.0 || !std::isfinite(truth)) {
        throw UndefinedError("relative error needs a finite, nonzero reference");
    }
    if (std::isinf(approx)) {
        return kDivergent;
    }
    return std::abs((approx - truth) / truth);
}

} // namespace nfcrb
