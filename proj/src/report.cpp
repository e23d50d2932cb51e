#include "nfcrb/report.hpp"

#include "nfcrb/config.hpp"
#include "nfcrb/errors.hpp"
#include "nfcrb/fim.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace nfcrb {

namespace {

double record_bound(const CrbRecord& r, BoundKind kind) {
    switch (kind) {
    case BoundKind::Rcs: return r.crb_alpha;
    case BoundKind::Vx: return r.crb_vx;
    case BoundKind::Vy: return r.crb_vy;
    case BoundKind::X: return r.crb_x;
    case BoundKind::Y: return r.crb_y;
    }
    return 0.0;
}

double approx_bound(const Scene& scene, int q, BoundKind kind, ApproxVariant variant) {
    switch (kind) {
    case BoundKind::Rcs: return crb_rcs_approx(scene, q, variant);
    case BoundKind::Vx: return crb_velocity_approx(scene, q, Axis::X, variant);
    case BoundKind::Vy: return crb_velocity_approx(scene, q, Axis::Y, variant);
    case BoundKind::X: return crb_location_approx(scene, q, Axis::X, variant);
    case BoundKind::Y: return crb_location_approx(scene, q, Axis::Y, variant);
    }
    return 0.0;
}

std::optional<double> relerr_or_empty(const std::optional<double>& approx, double exact) {
    if (!approx || !std::isfinite(exact) || exact == 0.0) {
        return std::nullopt;
    }
    return relative_error(*approx, exact);
}

const char* units_of(BoundKind kind) {
    switch (kind) {
    case BoundKind::Rcs: return "1";
    case BoundKind::Vx:
    case BoundKind::Vy: return "(m/s)^2";
    default: return "m^2";
    }
}

void append_error(std::string& dst, const std::string& msg) {
    if (!dst.empty()) {
        dst += "; ";
    }
    dst += msg;
}

} // namespace

const char* to_string(BoundKind kind) {
    switch (kind) {
    case BoundKind::Rcs: return "rcs";
    case BoundKind::Vx: return "vx";
    case BoundKind::Vy: return "vy";
    case BoundKind::X: return "x";
    case BoundKind::Y: return "y";
    }
    return "unknown";
}

BoundKind parse_bound(const std::string& name) {
    for (BoundKind k : kAllBounds) {
        if (name == to_string(k)) {
            return k;
        }
    }
    throw InvalidArgument("unknown bound '" + name + "' (expected rcs, vx, vy, x or y)");
}

const char* to_string(Variant variant) {
    switch (variant) {
    case Variant::Exact: return "exact";
    case Variant::FF: return "FF";
    case Variant::NF: return "NF";
    }
    return "unknown";
}

Variant parse_variant(const std::string& name) {
    for (Variant v : kAllVariants) {
        if (name == to_string(v)) {
            return v;
        }
    }
    throw InvalidArgument("unknown variant '" + name + "' (expected exact, FF or NF)");
}

std::optional<double> BoundValues::value(Variant v) const {
    switch (v) {
    case Variant::Exact: return exact;
    case Variant::FF: return ff;
    case Variant::NF: return nf;
    }
    return std::nullopt;
}

std::optional<double> BoundValues::relerr(Variant v) const {
    switch (v) {
    case Variant::FF: return relerr_ff;
    case Variant::NF: return relerr_nf;
    default: return std::nullopt;
    }
}

PointEvaluation evaluate_point(const Scene& scene, const EvalOptions& options) {
    FimOptions fim_options;
    fim_options.workers = options.fim_workers;
    const FisherInfo fisher = fim(scene, TransmitSpec::isotropic(), fim_options);
    const CrbReport diag = fisher_diagonal_crb(fisher);

    PointEvaluation out;
    out.displacement_warning = scene.displacement_warning();

    std::optional<CrbReport> full;
    std::optional<CrbReport> schur;
    if (options.with_inverse) {
        try {
            FullCrb f = full_crb(fisher);
            out.condition_number = f.report.condition_number;
            out.status = f.report.status;
            full = std::move(f.report);
            schur = scene.target_count() > 1 ? schur_crb(fisher) : *full;
        } catch (const SingularFim& err) {
            out.inverse_error = err.what();
        }
    }

    const RegionBoundaries btx = region_boundaries(scene.tx(), scene.wavelength());
    const RegionBoundaries brx = region_boundaries(scene.rx(), scene.wavelength());
    for (int q = 0; q < scene.target_count(); ++q) {
        TargetEvaluation te;
        te.index = q;
        te.polar_tx = polar_of(scene.target(q), scene.tx());
        te.polar_rx = polar_of(scene.target(q), scene.rx());
        te.region_tx = classify_region(btx, te.polar_tx.range);
        te.region_rx = classify_region(brx, te.polar_rx.range);
        if (full) {
            te.full = full->targets[static_cast<std::size_t>(q)];
            te.schur = schur->targets[static_cast<std::size_t>(q)];
        }
        for (std::size_t b = 0; b < kAllBounds.size(); ++b) {
            const BoundKind kind = kAllBounds[b];
            BoundValues& bv = te.bounds[b];
            bv.exact = record_bound(diag.targets[static_cast<std::size_t>(q)], kind);
            for (ApproxVariant av : {ApproxVariant::FarField, ApproxVariant::NearField}) {
                try {
                    const double v = approx_bound(scene, q, kind, av);
                    (av == ApproxVariant::FarField ? bv.ff : bv.nf) = v;
                } catch (const std::exception& err) {
                    append_error(te.error, std::string(to_string(kind)) + "_" + to_string(av)
                                               + ": " + err.what());
                }
            }
            bv.relerr_ff = relerr_or_empty(bv.ff, bv.exact);
            bv.relerr_nf = relerr_or_empty(bv.nf, bv.exact);
        }
        out.targets.push_back(std::move(te));
    }
    return out;
}

std::string csv_quote(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out += '"';
        }
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string format_cell(std::optional<double> value) {
    if (!value) {
        return {};
    }
    if (std::isinf(*value) && *value > 0.0) {
        return "inf";
    }
    if (!std::isfinite(*value)) {
        // never emitted as a number; an empty cell marks an undefined value
        return {};
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", *value);
    return buf;
}

void write_eval_text(const Scene& scene, const PointEvaluation& eval, std::ostream& out) {
    char buf[256];
    out << "nfcrb " << kToolVersion << " eval\n";
    std::snprintf(buf, sizeof buf,
                  "lambda = %.6e m, M = %d, T_sym = %.6e s, P = %.6e W, sigma^2 = %.6e W\n",
                  scene.wavelength(), scene.snapshots(), scene.t_sym(), scene.power(),
                  scene.noise_var());
    out << buf;
    std::snprintf(buf, sizeof buf, "Tx: N = %d, d = %.6e m, centroid = %.6e m\n",
                  scene.tx().count(), scene.tx().spacing(), scene.tx().centroid_x());
    out << buf;
    std::snprintf(buf, sizeof buf, "Rx: N = %d, d = %.6e m, centroid = %.6e m\n",
                  scene.rx().count(), scene.rx().spacing(), scene.rx().centroid_x());
    out << buf;
    if (eval.condition_number) {
        std::snprintf(buf, sizeof buf, "FIM condition number (equilibrated) = %.3e%s\n",
                      *eval.condition_number,
                      eval.status == CrbStatus::IllConditioned ? " [ill-conditioned]" : "");
        out << buf;
    }
    if (!eval.inverse_error.empty()) {
        out << "full inverse unavailable: " << eval.inverse_error << "\n";
    }
    if (eval.displacement_warning) {
        out << "warning: target displacement over the CPI exceeds 1% of its range\n";
    }

    for (const TargetEvaluation& te : eval.targets) {
        const Target& t = scene.target(te.index);
        out << "\n";
        std::snprintf(buf, sizeof buf,
                      "target %d: pos = (%.6f, %.6f) m, v = (%.6f, %.6f) m/s, alpha = %.6f%+.6fj\n",
                      te.index + 1, t.x, t.y, t.vx, t.vy, t.rcs_re, t.rcs_im);
        out << buf;
        std::snprintf(buf, sizeof buf,
                      "  Tx: r = %.6f m, theta = %.6f deg (%s); Rx: r = %.6f m, theta = %.6f deg (%s)\n",
                      te.polar_tx.range, te.polar_tx.angle * 180.0 / std::numbers::pi,
                      to_string(te.region_tx), te.polar_rx.range,
                      te.polar_rx.angle * 180.0 / std::numbers::pi, to_string(te.region_rx));
        out << buf;
        std::snprintf(buf, sizeof buf, "  %-6s %-10s %-20s %-20s %-20s %-20s %-20s %-20s %-20s\n",
                      "bound", "units", "exact", "FF", "NF", "relerr_FF", "relerr_NF", "full",
                      "schur");
        out << buf;
        for (std::size_t b = 0; b < kAllBounds.size(); ++b) {
            const BoundKind kind = kAllBounds[b];
            const BoundValues& bv = te.bounds[b];
            auto cell = [](std::optional<double> v) {
                const std::string s = format_cell(v);
                return s.empty() ? std::string("-") : s;
            };
            std::optional<double> full;
            std::optional<double> schur;
            if (te.full) {
                full = record_bound(*te.full, kind);
                schur = record_bound(*te.schur, kind);
            }
            std::snprintf(buf, sizeof buf, "  %-6s %-10s %-20s %-20s %-20s %-20s %-20s %-20s %-20s\n",
                          to_string(kind), units_of(kind), cell(bv.exact).c_str(),
                          cell(bv.ff).c_str(), cell(bv.nf).c_str(), cell(bv.relerr_ff).c_str(),
                          cell(bv.relerr_nf).c_str(), cell(full).c_str(), cell(schur).c_str());
            out << buf;
        }
        if (!te.error.empty()) {
            out << "  note: " << te.error << "\n";
        }
    }
}

void write_eval_csv(const Scene& scene, const PointEvaluation& eval, std::ostream& out) {
    out << "# nfcrb " << kToolVersion << " eval\n";
    out << "# seed: none\n";
    for (const std::string& line : config_echo(scene.config())) {
        out << "# config: " << line << "\n";
    }
    out << "# units: rcs=1 vx,vy=(m/s)^2 x,y=m^2 relerr=1\n";
    out << "target,bound,exact,FF,NF,relerr_FF,relerr_NF,full,schur,error\n";
    for (const TargetEvaluation& te : eval.targets) {
        for (std::size_t b = 0; b < kAllBounds.size(); ++b) {
            const BoundKind kind = kAllBounds[b];
            const BoundValues& bv = te.bounds[b];
            std::optional<double> full;
            std::optional<double> schur;
            if (te.full) {
                full = record_bound(*te.full, kind);
                schur = record_bound(*te.schur, kind);
            }
            out << te.index + 1 << ',' << to_string(kind) << ',' << format_cell(bv.exact) << ','
                << format_cell(bv.ff) << ',' << format_cell(bv.nf) << ','
                << format_cell(bv.relerr_ff) << ',' << format_cell(bv.relerr_nf) << ','
                << format_cell(full) << ',' << format_cell(schur) << ',' << csv_quote(te.error) << '\n';
        }
    }
}

} // namespace nfcrb
