#include "nfcrb/fim.hpp"

#include "nfcrb/errors.hpp"
#include "nfcrb/parallel.hpp"
#include "nfcrb/steering.hpp"

#include <array>
#include <vector>

namespace nfcrb {

namespace {

constexpr std::complex<double> kJ{0.0, 1.0};
constexpr int kSlots = 5;  // a, dx, dy, dvx, dvy

int slot_of(ParamKind kind) {
    switch (kind) {
    case ParamKind::X: return 1;
    case ParamKind::Y: return 2;
    case ParamKind::Vx: return 3;
    case ParamKind::Vy: return 4;
    default: return 0;
    }
}

bool is_location(ParamKind kind) { return kind == ParamKind::X || kind == ParamKind::Y; }

// One rank-1 piece coef * u w^T of a channel derivative, u and w given as
// column indices into the stacked Rx / Tx steering matrices.
struct Term {
    std::complex<double> coef;
    int rx_col;
    int tx_col;
};

struct ParamTerms {
    std::array<Term, 2> terms;
    int count;
};

std::vector<ParamTerms> build_terms(const Scene& scene, const FimOptions& options) {
    const int q_count = scene.target_count();
    std::vector<ParamTerms> out(static_cast<std::size_t>(scene.param_count()));
    for (ParamKind kind : kAllParamKinds) {
        for (int q = 0; q < q_count; ++q) {
            const int base = kSlots * q;
            ParamTerms& p = out[static_cast<std::size_t>(param_index(kind, q, q_count))];
            if (kind == ParamKind::AlphaR) {
                p = {{Term{1.0, base, base}, Term{}}, 1};
            } else if (kind == ParamKind::AlphaI) {
                p = {{Term{kJ, base, base}, Term{}}, 1};
            } else {
                std::complex<double> alpha = scene.target(q).rcs();
                if (is_location(kind)) {
                    alpha *= options.location_derivative_scale;
                }
                const int s = base + slot_of(kind);
                p = {{Term{alpha, s, base}, Term{alpha, base, s}}, 2};
            }
        }
    }
    return out;
}

Eigen::MatrixXcd stacked_steering(const Scene& scene, Side side, int m) {
    const int q_count = scene.target_count();
    Eigen::MatrixXcd v(array_of(scene, side).count(), kSlots * q_count);
    for (int q = 0; q < q_count; ++q) {
        const SteeringSet s = steering_set(scene, side, m, q);
        v.col(kSlots * q + 0) = s.a;
        v.col(kSlots * q + 1) = s.dx;
        v.col(kSlots * q + 2) = s.dy;
        v.col(kSlots * q + 3) = s.dvx;
        v.col(kSlots * q + 4) = s.dvy;
    }
    return v;
}

// Re tr(D_i^H D_j) for all parameter pairs at one snapshot, using
// tr((u1 w1^T)^H u2 w2^T) = (u1^H u2)(w1^H w2).
Eigen::MatrixXd isotropic_snapshot(const Scene& scene, const std::vector<ParamTerms>& terms, int m) {
    const Eigen::MatrixXcd vr = stacked_steering(scene, Side::Rx, m);
    const Eigen::MatrixXcd vt = stacked_steering(scene, Side::Tx, m);
    const Eigen::MatrixXcd hr = vr.adjoint() * vr;
    const Eigen::MatrixXcd ht = vt.adjoint() * vt;

    const int n = scene.param_count();
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i) {
        const ParamTerms& pi = terms[static_cast<std::size_t>(i)];
        for (int j = i; j < n; ++j) {
            const ParamTerms& pj = terms[static_cast<std::size_t>(j)];
            std::complex<double> acc = 0.0;
            for (int a = 0; a < pi.count; ++a) {
                for (int b = 0; b < pj.count; ++b) {
                    const Term& t1 = pi.terms[static_cast<std::size_t>(a)];
                    const Term& t2 = pj.terms[static_cast<std::size_t>(b)];
                    acc += std::conj(t1.coef) * t2.coef * hr(t1.rx_col, t2.rx_col)
                           * ht(t1.tx_col, t2.tx_col);
                }
            }
            out(i, j) = acc.real();
            out(j, i) = acc.real();
        }
    }
    return out;
}

// Re{(D_i x_m)^H (D_j x_m)} for all parameter pairs at one snapshot.
Eigen::MatrixXd explicit_snapshot(const Scene& scene, const std::vector<ParamTerms>& terms,
                                  const Eigen::VectorXcd& x, int m) {
    const Eigen::MatrixXcd vr = stacked_steering(scene, Side::Rx, m);
    const Eigen::MatrixXcd vt = stacked_steering(scene, Side::Tx, m);
    const Eigen::VectorXcd wx = vt.transpose() * x;  // w^T x for every Tx column

    const int n = scene.param_count();
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(vr.rows(), n);
    for (int i = 0; i < n; ++i) {
        const ParamTerms& p = terms[static_cast<std::size_t>(i)];
        for (int a = 0; a < p.count; ++a) {
            const Term& t = p.terms[static_cast<std::size_t>(a)];
            z.col(i) += (t.coef * wx(t.tx_col)) * vr.col(t.rx_col);
        }
    }
    const Eigen::MatrixXcd gram = z.adjoint() * z;
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            out(i, j) = gram(i, j).real();
            out(j, i) = gram(i, j).real();
        }
    }
    return out;
}

} // namespace

FisherInfo::FisherInfo(Eigen::MatrixXd unscaled, double scale)
    : unscaled_(std::move(unscaled)), scale_(scale) {
    if (unscaled_.rows() != unscaled_.cols() || unscaled_.rows() % 6 != 0) {
        throw InvalidArgument("Fisher information must be square with 6Q rows");
    }
}

Eigen::MatrixXcd channel_matrix(const Scene& scene, int m, int q) {
    const SteeringVector ar = steering_vector(scene, Side::Rx, m, q);
    const SteeringVector at = steering_vector(scene, Side::Tx, m, q);
    return scene.target(q).rcs() * ar.entries * at.entries.transpose();
}

ChannelDerivative d_channel(const Scene& scene, int m, int q, ParamKind kind) {
    const SteeringSet sr = steering_set(scene, Side::Rx, m, q);
    const SteeringSet st = steering_set(scene, Side::Tx, m, q);
    ChannelDerivative out{Eigen::MatrixXcd(), kind, q, m};
    switch (kind) {
    case ParamKind::AlphaR:
        out.matrix = sr.a * st.a.transpose();
        break;
    case ParamKind::AlphaI:
        out.matrix = kJ * (sr.a * st.a.transpose());
        break;
    default:
        out.matrix = scene.target(q).rcs()
                     * (sr.derivative(kind) * st.a.transpose() + sr.a * st.derivative(kind).transpose());
        break;
    }
    return out;
}

FisherInfo fim(const Scene& scene, const TransmitSpec& transmit, const FimOptions& options) {
    const int snapshots = scene.snapshots();
    const bool explicit_mode = transmit.mode == TransmitSpec::Mode::ExplicitSymbols;
    if (explicit_mode
        && (transmit.symbols.rows() != scene.tx().count() || transmit.symbols.cols() != snapshots)) {
        throw InvalidArgument("symbol matrix must be N_t x M");
    }

    const std::vector<ParamTerms> terms = build_terms(scene, options);
    std::vector<Eigen::MatrixXd> parts(static_cast<std::size_t>(snapshots));
    parallel_for(snapshots, options.workers, [&](int idx) {
        const int m = idx + 1;
        parts[static_cast<std::size_t>(idx)] =
            explicit_mode ? explicit_snapshot(scene, terms, transmit.symbols.col(idx), m)
                          : isotropic_snapshot(scene, terms, m);
    });

    Eigen::MatrixXd total = pairwise_sum(parts, 0, parts.size());
    const double scale = explicit_mode ? 2.0 / scene.noise_var()
                                       : 2.0 * scene.power() / scene.noise_var();
    return {std::move(total), scale};
}

} // namespace nfcrb
