#pragma once

#include "nfcrb/scene.hpp"

#include <Eigen/Dense>

#include <complex>

namespace nfcrb {

enum class Side { Tx, Rx };
enum class Axis { X, Y };

const char* to_string(Side side);

/// Per-element response of one array to target q at slow-time index m (1-based).
struct SteeringVector {
    Eigen::VectorXcd entries;
    Side side = Side::Tx;
    int snapshot = 1;
    int target_index = 0;
};

/// Entry-wise derivative of a steering vector with respect to one target parameter.
struct SteeringDerivative {
    Eigen::VectorXcd entries;
    ParamKind with_respect_to = ParamKind::X;
    Side side = Side::Tx;
    int snapshot = 1;
    int target_index = 0;
};

/// Steering vector together with its four kinematic derivatives, sharing one
/// evaluation of the element distances.
struct SteeringSet {
    Eigen::VectorXcd a;
    Eigen::VectorXcd dx;
    Eigen::VectorXcd dy;
    Eigen::VectorXcd dvx;
    Eigen::VectorXcd dvy;

    const Eigen::VectorXcd& derivative(ParamKind kind) const;
};

/// Free-space amplitude lambda / (4 pi |target - element|).
double pathloss(const Vec2& target_pos, const Vec2& element_pos, double wavelength);

/// Two-path Doppler shift (Hz) of the Tx element -> target -> Rx element path.
double doppler_shift(const Target& target, const Vec2& tx_element, const Vec2& rx_element,
                     double carrier_hz, double lightspeed);

/// Purely imaginary exponent j k (<v, u> m T_sym - r) of one element.
std::complex<double> phase(const Target& target, const Vec2& element, int m, const Scene& scene);

const ArrayGeometry& array_of(const Scene& scene, Side side);

SteeringVector steering_vector(const Scene& scene, Side side, int m, int q);
SteeringDerivative d_steering_velocity(const Scene& scene, Side side, int m, int q, Axis axis);
SteeringDerivative d_steering_location(const Scene& scene, Side side, int m, int q, Axis axis);

SteeringSet steering_set(const Scene& scene, Side side, int m, int q);

} // namespace nfcrb
