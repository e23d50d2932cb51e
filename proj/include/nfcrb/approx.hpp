#pragma once

#include "nfcrb/geometry.hpp"
#include "nfcrb/scene.hpp"
#include "nfcrb/steering.hpp"

namespace nfcrb {

enum class GainVariant { Exact, FarField, NearField };
enum class ApproxVariant { FarField, NearField };

const char* to_string(GainVariant variant);
const char* to_string(ApproxVariant variant);

/// Channel gain of one array: g = sum_n 1/r_n^2 and G = lambda^2/(16 pi^2) g.
struct GainTerms {
    double g = 0.0;
    double G = 0.0;
    GainVariant variant = GainVariant::Exact;
};

/// Tx and Rx gains of target q.
struct SceneGains {
    GainTerms tx;
    GainTerms rx;
};

GainTerms gain(const ArrayGeometry& geom, const Target& target, double wavelength,
               GainVariant variant);
SceneGains gains(const Scene& scene, int q, GainVariant variant);

/// Second-order near-field correction terms of the closed-form bounds.
struct CorrectionTerms {
    double delta_tx = 0.0;
    double delta_rx = 0.0;
    double a_tx = 1.0;
    double a_rx = 1.0;
    double b_tx_x = 0.0;
    double b_rx_x = 0.0;
    double b_tx_y = 0.0;
    double b_rx_y = 0.0;
    double delta_nf_x_tx = 0.0;
    double delta_nf_x_rx = 0.0;
    double delta_nf_y_tx = 0.0;
    double delta_nf_y_rx = 0.0;
    double phi_x = 0.0;
    double phi_y = 0.0;
    double psi_x = 1.0;  ///< +inf when (sin_tx + sin_rx)^2 < 1e-12
    double psi_y = 1.0;  ///< +inf when (cos_tx + cos_rx)^2 < 1e-12
    double c_m = 0.0;

    /// (sin_tx + sin_rx)^2 and (cos_tx + cos_rx)^2
    double angle_x = 0.0;
    double angle_y = 0.0;
};

/// M(M+1)(2M+1)/6
double slow_time_sum(int snapshots);

CorrectionTerms correction_terms(const Scene& scene, int q);

/// Closed-form CRB of alpha (real plus imaginary part).
double crb_rcs_approx(const Scene& scene, int q, ApproxVariant variant);
double crb_velocity_approx(const Scene& scene, int q, Axis axis, ApproxVariant variant);
double crb_location_approx(const Scene& scene, int q, Axis axis, ApproxVariant variant);

/// |approx - truth| / |truth|. Throws UndefinedError when truth is zero or not finite.
double relative_error(double approx, double truth);

} // namespace nfcrb
