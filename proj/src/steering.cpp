#include "nfcrb/steering.hpp"

#include "nfcrb/errors.hpp"

#include <cmath>
#include <numbers>

namespace nfcrb {

namespace {

constexpr std::complex<double> kJ{0.0, 1.0};

double checked_distance(const Vec2& target_pos, const Vec2& element_pos) {
    const double r = (target_pos - element_pos).norm();
    if (r == 0.0) {
        throw DegenerateGeometry("target coincides with an array element");
    }
    return r;
}

// Element-wise quantities shared by the steering entry and its derivatives.
struct ElementTerms {
    double dx;
    double dy;
    double r;
    std::complex<double> entry;
};

ElementTerms element_terms(const Scene& scene, const Target& t, const Vec2& element, int m) {
    ElementTerms e;
    e.dx = t.x - element.x();
    e.dy = t.y - element.y();
    e.r = checked_distance(t.position(), element);
    const double k = scene.wavenumber();
    const double radial = (t.vx * e.dx + t.vy * e.dy) / e.r;
    const double range = scene.reduce_phase() ? std::fmod(e.r, scene.wavelength()) : e.r;
    // Doppler and propagation phases are exponentiated separately so a tiny
    // velocity change is not swamped by the rounding of k r.
    const std::complex<double> doppler = std::polar(1.0, k * radial * m * scene.t_sym());
    const std::complex<double> propagation = std::polar(1.0, -k * range);
    const double g = scene.wavelength() / (4.0 * std::numbers::pi * e.r);
    e.entry = g * doppler * propagation;
    return e;
}

std::complex<double> location_factor(const Scene& scene, const Target& t, const ElementTerms& e,
                                     int m, Axis axis) {
    const double k = scene.wavenumber();
    const double mt = m * scene.t_sym();
    const double r2 = e.r * e.r;
    const double r3 = r2 * e.r;
    if (axis == Axis::X) {
        return kJ * k * (t.vx * mt - e.dx) / e.r - e.dx / r2
               - kJ * k * mt * (t.vx * e.dx * e.dx + t.vy * e.dx * e.dy) / r3;
    }
    return kJ * k * (t.vy * mt - e.dy) / e.r - e.dy / r2
           - kJ * k * mt * (t.vy * e.dy * e.dy + t.vx * e.dx * e.dy) / r3;
}

std::complex<double> velocity_factor(const Scene& scene, const ElementTerms& e, int m, Axis axis) {
    const double offset = axis == Axis::X ? e.dx : e.dy;
    return kJ * scene.wavenumber() * (m * scene.t_sym()) * offset / e.r;
}

ParamKind velocity_kind(Axis axis) { return axis == Axis::X ? ParamKind::Vx : ParamKind::Vy; }
ParamKind location_kind(Axis axis) { return axis == Axis::X ? ParamKind::X : ParamKind::Y; }

} // namespace

const char* to_string(Side side) { return side == Side::Tx ? "tx" : "rx"; }

const Eigen::VectorXcd& SteeringSet::derivative(ParamKind kind) const {
    switch (kind) {
    case ParamKind::X: return dx;
    case ParamKind::Y: return dy;
    case ParamKind::Vx: return dvx;
    case ParamKind::Vy: return dvy;
    default: break;
    }
    throw InvalidArgument("RCS parameters have no steering derivative");
}

double pathloss(const Vec2& target_pos, const Vec2& element_pos, double wavelength) {
    return wavelength / (4.0 * std::numbers::pi * checked_distance(target_pos, element_pos));
}

double doppler_shift(const Target& target, const Vec2& tx_element, const Vec2& rx_element,
                     double carrier_hz, double lightspeed) {
    const Vec2 to_tx = target.position() - tx_element;
    const Vec2 to_rx = target.position() - rx_element;
    const double rt = checked_distance(target.position(), tx_element);
    const double rr = checked_distance(target.position(), rx_element);
    const Vec2 v = target.velocity();
    return carrier_hz / lightspeed * (v.dot(to_tx) / rt + v.dot(to_rx) / rr);
}

std::complex<double> phase(const Target& target, const Vec2& element, int m, const Scene& scene) {
    const Vec2 offset = target.position() - element;
    const double r = checked_distance(target.position(), element);
    const double radial = target.velocity().dot(offset) / r;
    return {0.0, scene.wavenumber() * (radial * m * scene.t_sym() - r)};
}

const ArrayGeometry& array_of(const Scene& scene, Side side) {
    return side == Side::Tx ? scene.tx() : scene.rx();
}

SteeringVector steering_vector(const Scene& scene, Side side, int m, int q) {
    const ArrayGeometry& geom = array_of(scene, side);
    const Target& t = scene.target(q);
    SteeringVector out{Eigen::VectorXcd(geom.count()), side, m, q};
    for (int n = 0; n < geom.count(); ++n) {
        out.entries(n) = element_terms(scene, t, geom.position(n), m).entry;
    }
    return out;
}

SteeringDerivative d_steering_velocity(const Scene& scene, Side side, int m, int q, Axis axis) {
    const ArrayGeometry& geom = array_of(scene, side);
    const Target& t = scene.target(q);
    SteeringDerivative out{Eigen::VectorXcd(geom.count()), velocity_kind(axis), side, m, q};
    for (int n = 0; n < geom.count(); ++n) {
        const ElementTerms e = element_terms(scene, t, geom.position(n), m);
        out.entries(n) = velocity_factor(scene, e, m, axis) * e.entry;
    }
    return out;
}

SteeringDerivative d_steering_location(const Scene& scene, Side side, int m, int q, Axis axis) {
    const ArrayGeometry& geom = array_of(scene, side);
    const Target& t = scene.target(q);
    SteeringDerivative out{Eigen::VectorXcd(geom.count()), location_kind(axis), side, m, q};
    for (int n = 0; n < geom.count(); ++n) {
        const ElementTerms e = element_terms(scene, t, geom.position(n), m);
        out.entries(n) = location_factor(scene, t, e, m, axis) * e.entry;
    }
    return out;
}

SteeringSet steering_set(const Scene& scene, Side side, int m, int q) {
    const ArrayGeometry& geom = array_of(scene, side);
    const Target& t = scene.target(q);
    const int n_el = geom.count();
    SteeringSet s{Eigen::VectorXcd(n_el), Eigen::VectorXcd(n_el), Eigen::VectorXcd(n_el),
                  Eigen::VectorXcd(n_el), Eigen::VectorXcd(n_el)};
    for (int n = 0; n < n_el; ++n) {
        const ElementTerms e = element_terms(scene, t, geom.position(n), m);
        s.a(n) = e.entry;
        s.dx(n) = location_factor(scene, t, e, m, Axis::X) * e.entry;
        s.dy(n) = location_factor(scene, t, e, m, Axis::Y) * e.entry;
        s.dvx(n) = velocity_factor(scene, e, m, Axis::X) * e.entry;
        s.dvy(n) = velocity_factor(scene, e, m, Axis::Y) * e.entry;
    }
    return s;
}

} // namespace nfcrb
