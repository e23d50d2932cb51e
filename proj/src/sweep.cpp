#include "nfcrb/sweep.hpp"

#include "nfcrb/config.hpp"
#include "nfcrb/errors.hpp"
#include "nfcrb/parallel.hpp"

#include <cmath>
#include <cstdio>

namespace nfcrb {

namespace {

std::string format_grid_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

bool is_count(SweepVariable v) {
    return v == SweepVariable::Antennas || v == SweepVariable::Snapshots;
}

} // namespace

const char* to_string(SweepVariable variable) {
    switch (variable) {
    case SweepVariable::Range: return "range";
    case SweepVariable::Angle: return "angle";
    case SweepVariable::Antennas: return "antennas";
    case SweepVariable::Snapshots: return "snapshots";
    case SweepVariable::Power: return "power";
    }
    return "unknown";
}

const char* unit_of(SweepVariable variable) {
    switch (variable) {
    case SweepVariable::Range: return "m";
    case SweepVariable::Angle: return "deg";
    case SweepVariable::Power: return "W";
    default: return "count";
    }
}

SweepVariable parse_sweep_variable(const std::string& name) {
    for (SweepVariable v : {SweepVariable::Range, SweepVariable::Angle, SweepVariable::Antennas,
                            SweepVariable::Snapshots, SweepVariable::Power}) {
        if (name == to_string(v)) {
            return v;
        }
    }
    throw InvalidArgument("unknown sweep variable '" + name + "'");
}

void validate(const SweepSpec& spec) {
    if (spec.grid.empty()) {
        throw InvalidArgument("sweep grid is empty");
    }
    if (spec.bounds.empty() || spec.variants.empty()) {
        throw InvalidArgument("at least one bound and one variant are required");
    }
    for (double v : spec.grid) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("sweep grid values must be finite");
        }
        if (is_count(spec.variable) && (v != std::floor(v) || v < 1.0)) {
            throw InvalidArgument("antenna and snapshot grids must hold positive integers");
        }
        if (spec.variable != SweepVariable::Angle && !(v > 0.0)) {
            throw InvalidArgument(std::string(to_string(spec.variable)) + " grid must be positive");
        }
    }
    if (spec.grid.size() > 1) {
        const bool up = spec.grid[1] > spec.grid[0];
        for (std::size_t i = 1; i < spec.grid.size(); ++i) {
            if (up ? !(spec.grid[i] > spec.grid[i - 1]) : !(spec.grid[i] < spec.grid[i - 1])) {
                throw InvalidArgument("sweep grid must be strictly monotone");
            }
        }
    }
}

SceneConfig point_config(const SweepSpec& spec, double value) {
    SceneConfig cfg = spec.base;
    Target& t = cfg.targets.at(0);
    switch (spec.variable) {
    case SweepVariable::Range: {
        const double angle = std::atan2(t.x, t.y);
        const Target p = Target::from_polar(value, angle);
        t.x = p.x;
        t.y = p.y;
        break;
    }
    case SweepVariable::Angle: {
        const double range = std::hypot(t.x, t.y);
        const Target p = Target::from_polar(range, deg_to_rad(value));
        t.x = p.x;
        t.y = p.y;
        break;
    }
    case SweepVariable::Antennas: {
        const int n = static_cast<int>(value);
        cfg.tx = ArrayGeometry::ula(n, cfg.tx.spacing(), cfg.tx.centroid_x());
        cfg.rx = ArrayGeometry::ula(n, cfg.rx.spacing(), cfg.rx.centroid_x());
        break;
    }
    case SweepVariable::Snapshots:
        cfg.snapshots = static_cast<int>(value);
        break;
    case SweepVariable::Power:
        cfg.power_w = value;
        break;
    }
    return cfg;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers) {
    validate(spec);
    const int points = static_cast<int>(spec.grid.size());
    std::vector<std::vector<SweepRow>> per_point(spec.grid.size());
    parallel_for(points, workers, [&](int i) {
        const double value = spec.grid[static_cast<std::size_t>(i)];
        auto& rows = per_point[static_cast<std::size_t>(i)];
        try {
            const Scene scene = make_scene(point_config(spec, value));
            EvalOptions options;
            options.with_inverse = false;
            PointEvaluation eval = evaluate_point(scene, options);
            for (TargetEvaluation& te : eval.targets) {
                SweepRow row;
                row.value = value;
                row.target_index = te.index;
                row.error = te.error;
                row.target = std::move(te);
                rows.push_back(std::move(row));
            }
        } catch (const std::exception& err) {
            SweepRow row;
            row.value = value;
            row.error = err.what();
            rows.push_back(std::move(row));
        }
    });
    std::vector<SweepRow> out;
    for (auto& rows : per_point) {
        for (auto& row : rows) {
            out.push_back(std::move(row));
        }
    }
    return out;
}

void write_sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "# nfcrb " << kToolVersion << " sweep\n";
    out << "# seed: none\n";
    out << "# sweep: variable=" << to_string(spec.variable) << " unit=" << unit_of(spec.variable)
        << " grid=";
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        out << (i ? ";" : "") << format_grid_value(spec.grid[i]);
    }
    out << "\n";
    for (const std::string& line : config_echo(spec.base)) {
        out << "# config: " << line << "\n";
    }
    out << "# units: " << to_string(spec.variable) << "=" << unit_of(spec.variable)
        << " rcs=1 vx,vy=(m/s)^2 x,y=m^2 relerr=1\n";

    out << to_string(spec.variable) << ",target";
    for (BoundKind b : spec.bounds) {
        for (Variant v : spec.variants) {
            out << ',' << to_string(b) << '_' << to_string(v);
        }
    }
    for (BoundKind b : spec.bounds) {
        for (Variant v : spec.variants) {
            if (v != Variant::Exact) {
                out << ",relerr_" << to_string(b) << '_' << to_string(v);
            }
        }
    }
    out << ",region_tx,region_rx,error\n";

    for (const SweepRow& row : rows) {
        out << format_grid_value(row.value) << ',' << row.target_index + 1;
        for (BoundKind b : spec.bounds) {
            for (Variant v : spec.variants) {
                out << ',';
                if (row.target) {
                    out << format_cell(row.target->bounds[static_cast<std::size_t>(b)].value(v));
                }
            }
        }
        for (BoundKind b : spec.bounds) {
            for (Variant v : spec.variants) {
                if (v != Variant::Exact) {
                    out << ',';
                    if (row.target) {
                        out << format_cell(row.target->bounds[static_cast<std::size_t>(b)].relerr(v));
                    }
                }
            }
        }
        out << ',' << (row.target ? to_string(row.target->region_tx) : "")
            << ',' << (row.target ? to_string(row.target->region_rx) : "")
            << ',' << csv_quote(row.error) << '\n';
    }
}

} // namespace nfcrb
