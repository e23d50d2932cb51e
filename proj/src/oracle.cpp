#include "nfcrb/oracle.hpp"

#include "nfcrb/errors.hpp"
#include "nfcrb/parallel.hpp"
#include "nfcrb/steering.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

namespace nfcrb {

namespace {

constexpr double kFloor = 1e-30;

double& field_of(Target& t, ParamKind kind) {
    switch (kind) {
    case ParamKind::X: return t.x;
    case ParamKind::Y: return t.y;
    case ParamKind::Vx: return t.vx;
    case ParamKind::Vy: return t.vy;
    case ParamKind::AlphaR: return t.rcs_re;
    case ParamKind::AlphaI: return t.rcs_im;
    }
    return t.x;
}

void check_step(double step, double value) {
    const double scale = std::max(std::abs(value), 1.0);
    if (!(step >= 10.0 * std::numeric_limits<double>::epsilon() * scale)) {
        throw InvalidArgument("finite-difference step underflows the parameter scale");
    }
}

Scene perturbed(const Scene& scene, int q, ParamKind kind, double delta) {
    std::vector<Target> targets = scene.targets();
    field_of(targets[static_cast<std::size_t>(q)], kind) += delta;
    return with_targets(scene, std::move(targets));
}

class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace

double FdSteps::for_kind(ParamKind kind) const {
    switch (kind) {
    case ParamKind::X:
    case ParamKind::Y: return position;
    case ParamKind::Vx:
    case ParamKind::Vy: return velocity;
    default: return rcs;
    }
}

std::string FdSteps::describe() const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "pos=%.1e vel=%.1e rcs=%.1e", position, velocity, rcs);
    return buf;
}

double oracle_rel_error(double analytic, double oracle) {
    return std::abs(analytic - oracle) / std::max(std::abs(oracle), kFloor);
}

OracleReport make_report(std::string quantity, double analytic, double oracle, double rel_error,
                         double tolerance, std::string steps) {
    OracleReport r;
    r.quantity = std::move(quantity);
    r.analytic = analytic;
    r.oracle = oracle;
    r.rel_error = rel_error;
    r.steps = std::move(steps);
    r.tolerance = tolerance;
    r.pass = rel_error <= tolerance;
    return r;
}

double relative_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).norm() / std::max(b.norm(), kFloor);
}

FisherInfo fd_fim(const Scene& scene, const FdSteps& steps, const TransmitSpec& transmit,
                  int workers) {
    const int q_count = scene.target_count();
    const int n = scene.param_count();
    const int snapshots = scene.snapshots();
    const bool explicit_mode = transmit.mode == TransmitSpec::Mode::ExplicitSymbols;
    if (explicit_mode
        && (transmit.symbols.rows() != scene.tx().count() || transmit.symbols.cols() != snapshots)) {
        throw InvalidArgument("symbol matrix must be N_t x M");
    }

    // Perturbed scenes, built once: index 2*i is +h, 2*i+1 is -h.
    std::vector<Scene> shifted;
    std::vector<double> h(static_cast<std::size_t>(n));
    std::vector<int> owner(static_cast<std::size_t>(n));
    shifted.reserve(static_cast<std::size_t>(2 * n));
    for (ParamKind kind : kAllParamKinds) {
        for (int q = 0; q < q_count; ++q) {
            const int i = param_index(kind, q, q_count);
            const double step = steps.for_kind(kind);
            Target t = scene.target(q);
            check_step(step, field_of(t, kind));
            h[static_cast<std::size_t>(i)] = step;
            owner[static_cast<std::size_t>(i)] = q;
        }
    }
    for (int i = 0; i < n; ++i) {
        const ParamKind kind = kAllParamKinds[static_cast<std::size_t>(i / q_count)];
        const int q = owner[static_cast<std::size_t>(i)];
        shifted.push_back(perturbed(scene, q, kind, h[static_cast<std::size_t>(i)]));
        shifted.push_back(perturbed(scene, q, kind, -h[static_cast<std::size_t>(i)]));
    }

    std::vector<Eigen::MatrixXd> parts(static_cast<std::size_t>(snapshots));
    parallel_for(snapshots, workers, [&](int idx) {
        const int m = idx + 1;
        // Only the perturbed target's contribution changes; the others cancel.
        std::vector<Eigen::MatrixXcd> d(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const int q = owner[static_cast<std::size_t>(i)];
            const double step = h[static_cast<std::size_t>(i)];
            d[static_cast<std::size_t>(i)] =
                (channel_matrix(shifted[static_cast<std::size_t>(2 * i)], m, q)
                 - channel_matrix(shifted[static_cast<std::size_t>(2 * i + 1)], m, q))
                / (2.0 * step);
        }
        Eigen::MatrixXd part(n, n);
        if (explicit_mode) {
            const Eigen::VectorXcd x = transmit.symbols.col(idx);
            Eigen::MatrixXcd z(scene.rx().count(), n);
            for (int i = 0; i < n; ++i) {
                z.col(i) = d[static_cast<std::size_t>(i)] * x;
            }
            part = (z.adjoint() * z).real();
        } else {
            for (int i = 0; i < n; ++i) {
                for (int j = i; j < n; ++j) {
                    const double v = (d[static_cast<std::size_t>(i)].conjugate()
                                          .cwiseProduct(d[static_cast<std::size_t>(j)]))
                                         .sum()
                                         .real();
                    part(i, j) = v;
                    part(j, i) = v;
                }
            }
        }
        parts[static_cast<std::size_t>(idx)] = std::move(part);
    });

    Eigen::MatrixXd total = pairwise_sum(parts, 0, parts.size());
    const double scale = explicit_mode ? 2.0 / scene.noise_var()
                                       : 2.0 * scene.power() / scene.noise_var();
    return {std::move(total), scale};
}

const char* to_string(GainKind kind) {
    switch (kind) {
    case GainKind::G: return "G";
    case GainKind::DotX: return "Gdot_x";
    case GainKind::DotY: return "Gdot_y";
    case GainKind::CrossX: return "cross_x";
    case GainKind::CrossY: return "cross_y";
    }
    return "unknown";
}

double brute_gain(const ArrayGeometry& geom, const Target& target, GainKind kind) {
    CompensatedSum sum;
    for (const Vec2& el : geom.positions()) {
        const Vec2 diff = target.position() - el;
        const double r2 = diff.squaredNorm();
        if (r2 == 0.0) {
            throw DegenerateGeometry("target coincides with an array element");
        }
        const double r = std::sqrt(r2);
        switch (kind) {
        case GainKind::G: sum.add(1.0 / r2); break;
        case GainKind::DotX: sum.add(diff.x() * diff.x() / (r2 * r2)); break;
        case GainKind::DotY: sum.add(diff.y() * diff.y() / (r2 * r2)); break;
        case GainKind::CrossX: sum.add(diff.x() / (r2 * r)); break;
        case GainKind::CrossY: sum.add(diff.y() / (r2 * r)); break;
        }
    }
    return sum.value();
}

OracleReport monte_carlo_isotropic(const Scene& scene, int draws, std::uint64_t seed,
                                   int workers) {
    if (draws < 1000) {
        throw InvalidArgument("Monte Carlo check needs at least 1000 draws");
    }
    const int n = scene.param_count();
    const int q_count = scene.target_count();
    const int snapshots = scene.snapshots();
    const int nt = scene.tx().count();

    // Channel derivatives do not depend on the symbols; compute them once.
    std::vector<std::vector<Eigen::MatrixXcd>> d(static_cast<std::size_t>(snapshots));
    parallel_for(snapshots, workers, [&](int idx) {
        auto& dm = d[static_cast<std::size_t>(idx)];
        dm.resize(static_cast<std::size_t>(n));
        for (ParamKind kind : kAllParamKinds) {
            for (int q = 0; q < q_count; ++q) {
                dm[static_cast<std::size_t>(param_index(kind, q, q_count))] =
                    d_channel(scene, idx + 1, q, kind).matrix;
            }
        }
    });

    // Draws are split into fixed chunks with their own seeds so the result does
    // not depend on the worker count.
    constexpr int kChunk = 250;
    const int chunks = (draws + kChunk - 1) / kChunk;
    const double amp = std::sqrt(scene.power());
    std::vector<Eigen::MatrixXd> parts(static_cast<std::size_t>(chunks));
    parallel_for(chunks, workers, [&](int c) {
        std::seed_seq seq{seed, static_cast<std::uint64_t>(c)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
        const int lo = c * kChunk;
        const int hi = std::min(draws, lo + kChunk);
        Eigen::VectorXcd x(nt);
        Eigen::MatrixXcd z(scene.rx().count(), n);
        for (int draw = lo; draw < hi; ++draw) {
            for (int m = 0; m < snapshots; ++m) {
                for (int e = 0; e < nt; ++e) {
                    x(e) = std::polar(amp, phase(rng));
                }
                const auto& dm = d[static_cast<std::size_t>(m)];
                for (int i = 0; i < n; ++i) {
                    z.col(i) = dm[static_cast<std::size_t>(i)] * x;
                }
                acc += (z.adjoint() * z).real();
            }
        }
        parts[static_cast<std::size_t>(c)] = std::move(acc);
    });
    const Eigen::MatrixXd mc = pairwise_sum(parts, 0, parts.size()) / static_cast<double>(draws);

    const FisherInfo iso = fim(scene);
    // Isotropic unscaled Gram times P equals the expected explicit Gram.
    const Eigen::MatrixXd expected = scene.power() * iso.unscaled();
    const double err = relative_frobenius(mc, expected);
    const double scale = 2.0 / scene.noise_var();
    return make_report("monte_carlo_isotropic", (scale * expected).norm(), (scale * mc).norm(), err,
                       3.0 / std::sqrt(static_cast<double>(draws)),
                       "draws=" + std::to_string(draws) + " seed=" + std::to_string(seed));
}

std::vector<OracleReport> check_steering_derivatives(const Scene& scene, int m, int q,
                                                     const FdSteps& steps) {
    std::vector<OracleReport> out;
    const Target& base = scene.target(q);
    for (Side side : {Side::Tx, Side::Rx}) {
        const SteeringSet analytic = steering_set(scene, side, m, q);
        struct Family {
            const char* name;
            ParamKind kx;
            ParamKind ky;
            double step;
        };
        const Family families[] = {{"location", ParamKind::X, ParamKind::Y, steps.position},
                                   {"velocity", ParamKind::Vx, ParamKind::Vy, steps.velocity}};
        for (const Family& f : families) {
            double err = 0.0;
            double norm = 0.0;
            double fd_norm = 0.0;
            for (ParamKind kind : {f.kx, f.ky}) {
                Target copy = base;
                check_step(f.step, field_of(copy, kind));
                const Scene plus = perturbed(scene, q, kind, f.step);
                const Scene minus = perturbed(scene, q, kind, -f.step);
                const Eigen::VectorXcd fd = (steering_vector(plus, side, m, q).entries
                                             - steering_vector(minus, side, m, q).entries)
                                            / (2.0 * f.step);
                const Eigen::VectorXcd& an = analytic.derivative(kind);
                err = std::max(err, (fd - an).cwiseAbs().maxCoeff());
                norm = std::max(norm, an.cwiseAbs().maxCoeff());
                fd_norm = std::max(fd_norm, fd.cwiseAbs().maxCoeff());
            }
            const double rel = err / std::max(norm, kFloor);
            std::string name = std::string("steering_") + f.name + "_" + to_string(side);
            char detail[64];
            std::snprintf(detail, sizeof detail, "h=%.1e m=%d q=%d", f.step, m, q);
            out.push_back(make_report(std::move(name), norm, fd_norm, rel, 1e-5, detail));
        }
    }
    return out;
}

} // namespace nfcrb
