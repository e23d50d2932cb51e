#include "nfcrb/verify.hpp"

#include "nfcrb/approx.hpp"
#include "nfcrb/config.hpp"
#include "nfcrb/crb.hpp"
#include "nfcrb/errors.hpp"
#include "nfcrb/parallel.hpp"
#include "nfcrb/report.hpp"
#include "nfcrb/steering.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace nfcrb {

namespace {

enum Battery : std::uint64_t { kSteering = 1, kFim = 2, kInvariants = 3, kMonteCarlo = 4 };

std::mt19937_64 scene_rng(std::uint64_t seed, Battery battery, int index) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(battery), static_cast<std::uint64_t>(index)};
    return std::mt19937_64(seq);
}

// Random monostatic scene: N in {4, 32}, M in {4, 16}, ranges 10..500 m,
// angles within +-60 deg, speeds up to 20 m/s.
Scene random_scene(std::mt19937_64& rng, int targets) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto pick = [&](int a, int b) { return unit(rng) < 0.5 ? a : b; };

    SceneConfig cfg;
    const int n = pick(4, 32);
    cfg.tx = ArrayGeometry::ula(n, 0.01);
    cfg.rx = ArrayGeometry::ula(n, 0.01);
    cfg.snapshots = pick(4, 16);
    for (int q = 0; q < targets; ++q) {
        const double range = 10.0 + 490.0 * unit(rng);
        const double angle = deg_to_rad(-60.0 + 120.0 * unit(rng));
        const double speed = 20.0 * unit(rng);
        const double heading = 2.0 * std::numbers::pi * unit(rng);
        Target t = Target::from_polar(range, angle);
        t.vx = speed * std::cos(heading);
        t.vy = speed * std::sin(heading);
        t.rcs_re = -1.0 + 2.0 * unit(rng);
        t.rcs_im = -1.0 + 2.0 * unit(rng);
        cfg.targets.push_back(t);
    }
    return make_scene(cfg);
}

std::string label(const char* what, int index) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s[%d]", what, index);
    return buf;
}

std::vector<OracleReport> steering_battery(const VerifyOptions& opt) {
    std::vector<std::vector<OracleReport>> parts(static_cast<std::size_t>(opt.battery));
    parallel_for(opt.battery, opt.workers, [&](int i) {
        auto rng = scene_rng(opt.seed, kSteering, i);
        const Scene scene = random_scene(rng, 1);
        for (OracleReport& r : check_steering_derivatives(scene, scene.snapshots(), 0)) {
            r.quantity = label(r.quantity.c_str(), i);
            parts[static_cast<std::size_t>(i)].push_back(std::move(r));
        }
    });
    std::vector<OracleReport> out;
    for (auto& p : parts) {
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

std::vector<OracleReport> fim_battery(const VerifyOptions& opt) {
    std::vector<OracleReport> out(static_cast<std::size_t>(opt.battery));
    const FdSteps steps;
    parallel_for(opt.battery, opt.workers, [&](int i) {
        auto rng = scene_rng(opt.seed, kFim, i);
        const Scene scene = random_scene(rng, 1 + i % 2);
        FimOptions fo;
        if (opt.inject_fault) {
            fo.location_derivative_scale = 1.0 + 1e-3;
        }
        const FisherInfo analytic = fim(scene, TransmitSpec::isotropic(), fo);
        const FisherInfo fd = fd_fim(scene, steps);
        const double err = relative_frobenius(analytic.unscaled(), fd.unscaled());
        out[static_cast<std::size_t>(i)] =
            make_report(label("fim_vs_fd", i), analytic.matrix().norm(), fd.matrix().norm(), err,
                        1e-5, steps.describe());
    });
    return out;
}

std::vector<OracleReport> invariant_battery(const VerifyOptions& opt) {
    std::vector<std::vector<OracleReport>> parts(static_cast<std::size_t>(opt.battery));
    parallel_for(opt.battery, opt.workers, [&](int i) {
        auto rng = scene_rng(opt.seed, kInvariants, i);
        const Scene scene = random_scene(rng, 1 + i % 2);
        auto& out = parts[static_cast<std::size_t>(i)];

        const FisherInfo f = fim(scene);
        const Eigen::MatrixXd u = f.unscaled();
        const double asym = (u - u.transpose()).cwiseAbs().maxCoeff();
        out.push_back(make_report(label("fim_symmetric", i), 0.0, asym, asym, 0.0));

        const Eigen::VectorXd d = u.diagonal().cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXd eq = d.asDiagonal() * u * d.asDiagonal();
        const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(eq, Eigen::EigenvaluesOnly)
                              .eigenvalues()
                              .minCoeff();
        const double neg = std::max(0.0, -lo);
        out.push_back(make_report(label("fim_psd", i), lo, 0.0, neg, 1e-10));

        // Closed form against the reciprocal Fisher diagonal, every target.
        const CrbReport diag = fisher_diagonal_crb(f);
        double worst = 0.0;
        for (int q = 0; q < scene.target_count(); ++q) {
            const CrbRecord cf = closed_form_single(scene, q).targets[0];
            const CrbRecord& fd = diag.targets[static_cast<std::size_t>(q)];
            for (ParamKind kind : kAllParamKinds) {
                worst = std::max(worst, oracle_rel_error(cf.get(kind), fd.get(kind)));
            }
        }
        out.push_back(make_report(label("closed_form_vs_fisher_diag", i), 0.0, 0.0, worst, 1e-10));

        // Doubling the power halves every bound.
        SceneConfig cfg = scene.config();
        cfg.power_w *= 2.0;
        const CrbReport doubled = fisher_diagonal_crb(fim(make_scene(cfg)));
        double scaling = 0.0;
        for (int q = 0; q < scene.target_count(); ++q) {
            for (ParamKind kind : kAllParamKinds) {
                const double base = diag.targets[static_cast<std::size_t>(q)].get(kind);
                const double twice = doubled.targets[static_cast<std::size_t>(q)].get(kind);
                scaling = std::max(scaling, oracle_rel_error(2.0 * twice, base));
            }
        }
        out.push_back(make_report(label("power_scaling", i), 0.0, 0.0, scaling, 1e-12));

        // Steering norms against the brute-force gain, both arrays of target 0.
        for (Side side : {Side::Tx, Side::Rx}) {
            const double lam = scene.wavelength();
            const double norm2 = steering_vector(scene, side, 1, 0).entries.squaredNorm();
            const double g = brute_gain(array_of(scene, side), scene.target(0), GainKind::G);
            const double expected = lam * lam / (16.0 * std::numbers::pi * std::numbers::pi) * g;
            out.push_back(make_report(label(side == Side::Tx ? "steering_gain_tx" : "steering_gain_rx", i),
                                      norm2, expected, oracle_rel_error(norm2, expected), 1e-12));
        }
    });
    std::vector<OracleReport> out;
    for (auto& p : parts) {
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

// Gain expansion check on a 256-element half-wavelength array at 20 deg.
std::vector<OracleReport> gain_expansion_battery() {
    const double lam = 0.02;
    const ArrayGeometry geom = ArrayGeometry::ula(256, lam / 2.0);
    const std::vector<double> ranges = {50, 100, 200, 400, 800, 1600};
    std::vector<OracleReport> out;
    std::vector<double> log_r;
    std::vector<double> log_res;
    bool ordered = true;
    double worst_ratio = 0.0;
    for (double r : ranges) {
        const Target t = Target::from_polar(r, deg_to_rad(20.0));
        const double exact = brute_gain(geom, t, GainKind::G);
        const double nf = gain(geom, t, lam, GainVariant::NearField).g;
        const double ff = gain(geom, t, lam, GainVariant::FarField).g;
        const double e_nf = std::abs(nf - exact) / exact;
        const double e_ff = std::abs(ff - exact) / exact;
        ordered = ordered && e_nf < e_ff;
        worst_ratio = std::max(worst_ratio, e_nf / e_ff);
        log_r.push_back(std::log(r));
        log_res.push_back(std::log(e_nf));
    }
    out.push_back(make_report("gain_nf_better_than_ff", worst_ratio, 1.0, ordered ? 0.0 : 1.0, 0.0));

    // Least-squares slope of the log relative residual against log range.
    const double n = static_cast<double>(log_r.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_r.size(); ++i) {
        sx += log_r[i];
        sy += log_res[i];
        sxx += log_r[i] * log_r[i];
        sxy += log_r[i] * log_res[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.push_back(make_report("gain_nf_residual_slope", slope, -4.0, std::abs(slope + 4.0), 0.3));
    return out;
}

std::vector<OracleReport> monte_carlo_battery(const VerifyOptions& opt) {
    SceneConfig cfg;
    cfg.tx = ArrayGeometry::ula(4, 0.01);
    cfg.rx = ArrayGeometry::ula(4, 0.01);
    cfg.snapshots = 4;
    Target t = Target::from_polar(20.0, deg_to_rad(30.0));
    t.vx = 1.0;
    t.vy = 4.0;
    t.rcs_re = 1.0;
    t.rcs_im = 0.1;
    cfg.targets = {t};
    const Scene scene = make_scene(cfg);
    auto rng = scene_rng(opt.seed, kMonteCarlo, 0);
    const std::uint64_t mc_seed = rng();
    return {monte_carlo_isotropic(scene, opt.mc_draws, mc_seed, opt.workers)};
}

} // namespace

VerifyResult run_verify(const VerifyOptions& options) {
    if (options.battery < 1) {
        throw InvalidArgument("battery size must be positive");
    }
    VerifyResult result;
    auto append = [&](std::vector<OracleReport> reports) {
        for (OracleReport& r : reports) {
            result.all_pass = result.all_pass && r.pass;
            result.reports.push_back(std::move(r));
        }
    };
    append(steering_battery(options));
    append(fim_battery(options));
    append(gain_expansion_battery());
    append(monte_carlo_battery(options));
    append(invariant_battery(options));
    return result;
}

void write_verify_report(const VerifyOptions& options, const VerifyResult& result,
                         std::ostream& out) {
    char buf[512];
    out << "nfcrb " << kToolVersion << " verify\n";
    std::snprintf(buf, sizeof buf, "seed = %llu, battery = %d, mc_draws = %d%s\n",
                  static_cast<unsigned long long>(options.seed), options.battery, options.mc_draws,
                  options.inject_fault ? ", fault injected" : "");
    out << buf;
    int failed = 0;
    for (const OracleReport& r : result.reports) {
        std::snprintf(buf, sizeof buf, "%-4s %-40s analytic=%.9e oracle=%.9e relerr=%.3e tol=%.1e%s%s\n",
                      r.pass ? "PASS" : "FAIL", r.quantity.c_str(), r.analytic, r.oracle,
                      r.rel_error, r.tolerance, r.steps.empty() ? "" : " steps: ", r.steps.c_str());
        out << buf;
        failed += r.pass ? 0 : 1;
    }
    std::snprintf(buf, sizeof buf, "%zu checks, %d failed\n", result.reports.size(), failed);
    out << buf;
}

} // namespace nfcrb
