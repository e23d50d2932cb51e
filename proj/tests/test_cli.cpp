#include "nfcrb/config.hpp"
#include "nfcrb/errors.hpp"
#include "nfcrb/report.hpp"
#include "nfcrb/sweep.hpp"
#include "nfcrb/verify.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace nfcrb;

namespace {

int parse_error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') {
            out.push_back(line);
        }
    }
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.push_back(cell);
            cell.clear();
        } else {
            cell += c;
        }
    }
    out.push_back(cell);
    return out;
}

std::string sweep_csv(const SweepSpec& spec, int workers) {
    std::ostringstream out;
    write_sweep_csv(spec, run_sweep(spec, workers), out);
    return out.str();
}

} // namespace

TEST(ParseConfig, EmptyDocumentGivesPaperDefaults) {
    const SceneConfig cfg = parse_config("");
    const Scene s = make_scene(cfg);
    ASSERT_EQ(s.target_count(), 1);
    const Polar p = polar_of(s.target(0), s.tx());
    EXPECT_NEAR(p.range, 100.0, 1e-12);
    EXPECT_NEAR(p.angle, deg_to_rad(20.0), 1e-14);
    EXPECT_EQ(s.target(0).rcs(), std::complex<double>(1.0, 0.1));
    EXPECT_EQ(s.target(0).velocity(), Vec2(1.0, 4.0));
    EXPECT_EQ(s.tx().count(), 256);
    EXPECT_DOUBLE_EQ(s.tx().spacing(), 0.01);
}

TEST(ParseConfig, Units) {
    EXPECT_NEAR(parse_config("noise_dbm = -114").noise_var_w, 3.9811e-15, 1e-19);
    EXPECT_DOUBLE_EQ(parse_config("tx.spacing_over_lambda = 0.5").tx.spacing(), 0.01);
    EXPECT_DOUBLE_EQ(parse_config("rx.spacing_m = 0.004\nrx.count=8").rx.spacing(), 0.004);
    EXPECT_DOUBLE_EQ(parse_config("noise_w = 2e-15").noise_var_w, 2e-15);
}

TEST(ParseConfig, TargetsAndComments) {
    const SceneConfig cfg = parse_config(
        "# bistatic\n"
        "tx.centroid_x = -2\n"
        "rx.centroid_x = 2   # receive array\n"
        "target.1.range = 150\n"
        "target.1.angle_deg = -45\n"
        "target.2.x = 3\n"
        "target.2.y = 40\n"
        "target.2.vx = 0\n"
        "target.2.rcs_im = -0.5\n");
    ASSERT_EQ(cfg.targets.size(), 2u);
    EXPECT_NEAR(std::hypot(cfg.targets[0].x, cfg.targets[0].y), 150.0, 1e-12);
    EXPECT_LT(cfg.targets[0].x, 0.0);
    EXPECT_EQ(cfg.targets[1].x, 3.0);
    EXPECT_EQ(cfg.targets[1].vx, 0.0);
    EXPECT_EQ(cfg.targets[1].vy, kDefaultVy);
    EXPECT_EQ(cfg.targets[1].rcs_im, -0.5);
    EXPECT_EQ(cfg.tx.centroid_x(), -2.0);
}

TEST(ParseConfig, VelocityOnlyKeepsDefaultPosition) {
    const SceneConfig cfg = parse_config("target.1.vx = 0\ntarget.1.vy = 0\n");
    EXPECT_NEAR(std::hypot(cfg.targets[0].x, cfg.targets[0].y), kDefaultRange, 1e-12);
    EXPECT_EQ(cfg.targets[0].vx, 0.0);
}

TEST(ParseConfig, ErrorsCarryLineNumbers) {
    EXPECT_EQ(parse_error_line("snapshots = 4\nbogus = 1\n"), 2);
    EXPECT_EQ(parse_error_line("noise_dbm = -100\n\nnoise_w = 1e-15\n"), 3);
    EXPECT_EQ(parse_error_line("tx.spacing_m = 0.01\ntx.spacing_over_lambda = 0.5\n"), 2);
    EXPECT_EQ(parse_error_line("target.2.x = 1\ntarget.2.y = 5\n"), 1);
    EXPECT_EQ(parse_error_line("target.1.x = 1\n"), 1);
    EXPECT_EQ(parse_error_line("target.1.x = 1\ntarget.1.y = 2\ntarget.1.range = 5\n"), 3);
    EXPECT_EQ(parse_error_line("snapshots = 2.5\n"), 1);
    EXPECT_EQ(parse_error_line("power_w = abc\n"), 1);
    EXPECT_EQ(parse_error_line("power_w = 1\npower_w = 2\n"), 2);
    EXPECT_EQ(parse_error_line("just text\n"), 1);
    EXPECT_EQ(parse_error_line("target.x.y = 1\n"), 1);
    EXPECT_EQ(parse_error_line("target.1.z = 1\n"), 1);
}

TEST(ParseConfig, EchoIsStable) {
    const SceneConfig a = parse_config("");
    const SceneConfig b = parse_config("carrier_hz = 15e9\n");
    EXPECT_EQ(config_echo(a), config_echo(b));
}

TEST(Eval, PaperDefaultFinite) {
    const Scene s = make_scene(default_config());
    const PointEvaluation e = evaluate_point(s);
    ASSERT_EQ(e.targets.size(), 1u);
    for (const BoundValues& b : e.targets[0].bounds) {
        EXPECT_TRUE(std::isfinite(b.exact));
        EXPECT_GT(b.exact, 0.0);
    }
    ASSERT_TRUE(e.targets[0].full.has_value());
    for (ParamKind k : kAllParamKinds) {
        EXPECT_TRUE(std::isfinite(e.targets[0].full->get(k)));
    }
}

TEST(Eval, BroadsideFarFieldLocationIsInf) {
    const Scene s = make_scene(parse_config("target.1.range=100\ntarget.1.angle_deg=0\n"
                                            "target.1.vx=0\ntarget.1.vy=0\n"));
    const PointEvaluation e = evaluate_point(s);
    const BoundValues& x = e.targets[0].bounds[static_cast<int>(BoundKind::X)];
    EXPECT_TRUE(std::isinf(*x.ff));
    EXPECT_TRUE(std::isfinite(x.exact));
    std::ostringstream text;
    write_eval_text(s, e, text);
    EXPECT_NE(text.str().find("inf"), std::string::npos);
    std::ostringstream csv;
    write_eval_csv(s, e, csv);
    EXPECT_NE(csv.str().find(",x,"), std::string::npos);
    EXPECT_EQ(csv.str().find("nan"), std::string::npos);
}

TEST(Eval, ThreeTargetBistaticHasThreeBlocks) {
    const Scene s = make_scene(nfcrb::testutil::bistatic_three_target_config(64));
    const PointEvaluation e = evaluate_point(s);
    EXPECT_EQ(e.targets.size(), 3u);
    std::ostringstream text;
    write_eval_text(s, e, text);
    for (const char* tag : {"target 1:", "target 2:", "target 3:"}) {
        EXPECT_NE(text.str().find(tag), std::string::npos);
    }
}

TEST(Sweep, RangeRcsIncreases) {
    SweepSpec spec;
    spec.base = default_config();
    spec.variable = SweepVariable::Range;
    spec.grid = {50, 100, 200, 400, 800, 1600};
    spec.bounds = {BoundKind::Rcs};
    const auto rows = run_sweep(spec);
    ASSERT_EQ(rows.size(), 6u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_GT(rows[i].target->bounds[0].exact, rows[i - 1].target->bounds[0].exact);
    }
}

TEST(Sweep, AntennasDecrease) {
    SweepSpec spec;
    spec.base = default_config();
    spec.variable = SweepVariable::Antennas;
    spec.grid = {16, 32, 64, 128, 256};
    const auto rows = run_sweep(spec);
    ASSERT_EQ(rows.size(), 5u);
    for (std::size_t b = 0; b < kAllBounds.size(); ++b) {
        for (std::size_t i = 1; i < rows.size(); ++i) {
            EXPECT_LT(rows[i].target->bounds[b].exact, rows[i - 1].target->bounds[b].exact);
        }
    }
}

TEST(Sweep, SinglePointEqualsEval) {
    SweepSpec spec;
    spec.base = default_config();
    spec.variable = SweepVariable::Power;
    spec.grid = {0.1};
    const auto rows = run_sweep(spec);
    ASSERT_EQ(rows.size(), 1u);
    const PointEvaluation e = evaluate_point(make_scene(default_config()));
    for (std::size_t b = 0; b < kAllBounds.size(); ++b) {
        EXPECT_EQ(rows[0].target->bounds[b].exact, e.targets[0].bounds[b].exact);
        EXPECT_EQ(rows[0].target->bounds[b].ff, e.targets[0].bounds[b].ff);
        EXPECT_EQ(rows[0].target->bounds[b].nf, e.targets[0].bounds[b].nf);
    }
}

TEST(Sweep, GridValidation) {
    SweepSpec spec;
    spec.base = default_config();
    EXPECT_THROW(run_sweep(spec), InvalidArgument);
    spec.grid = {100, 50, 50};
    EXPECT_THROW(run_sweep(spec), InvalidArgument);
    spec.variable = SweepVariable::Antennas;
    spec.grid = {16, 32.5};
    EXPECT_THROW(run_sweep(spec), InvalidArgument);
    spec.variable = SweepVariable::Angle;
    spec.grid = {30, 0, -30};
    EXPECT_NO_THROW(validate(spec));
}

TEST(Sweep, FailingPointKeepsGoing) {
    SweepSpec spec;
    spec.base = default_config();
    spec.base.tx = ArrayGeometry::ula(2, 0.01);
    spec.base.rx = ArrayGeometry::ula(2, 0.01);
    spec.base.targets[0] = Target::from_polar(10.0, deg_to_rad(90.0));
    spec.variable = SweepVariable::Range;
    spec.grid = {0.005, 1.0, 2.0};
    const auto rows = run_sweep(spec);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_FALSE(rows[0].target.has_value());
    EXPECT_FALSE(rows[0].error.empty());
    EXPECT_TRUE(rows[1].target.has_value());
    std::ostringstream csv;
    write_sweep_csv(spec, rows, csv);
    EXPECT_EQ(data_lines(csv.str()).size(), 4u);
}

TEST(Sweep, CsvSchemaAndCells) {
    SweepSpec spec;
    spec.base = parse_config("target.1.vx=0\ntarget.1.vy=0\n");
    spec.variable = SweepVariable::Angle;
    spec.grid = {-20, 0, 20};
    const std::string csv = sweep_csv(spec, 1);
    const auto lines = data_lines(csv);
    ASSERT_EQ(lines.size(), 4u);
    const auto header = split(lines[0]);
    EXPECT_EQ(header[0], "angle");
    EXPECT_EQ(header[2], "rcs_exact");
    EXPECT_EQ(header[3], "rcs_FF");
    EXPECT_NE(std::find(header.begin(), header.end(), "relerr_x_NF"), header.end());
    EXPECT_EQ(header.back(), "error");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i]);
        ASSERT_EQ(cells.size(), header.size());
        for (std::size_t c = 0; c + 3 < cells.size(); ++c) {
            const std::string& v = cells[c];
            EXPECT_NE(v, "nan");
            if (!v.empty() && v != "inf") {
                EXPECT_TRUE(std::isfinite(std::stod(v))) << v;
            }
        }
    }
    // Broadside row: FF x bound diverges, its relerr is inf, exact is finite.
    const auto mid = split(lines[2]);
    const auto col = [&](const char* name) {
        return std::find(header.begin(), header.end(), name) - header.begin();
    };
    EXPECT_EQ(mid[col("x_FF")], "inf");
    EXPECT_EQ(mid[col("relerr_x_FF")], "inf");
    EXPECT_NE(mid[col("x_exact")], "inf");
    EXPECT_EQ(csv.find("nan"), std::string::npos);
    EXPECT_NE(csv.find("# units:"), std::string::npos);
}

TEST(Sweep, RegionFlagsMatchGeometry) {
    SweepSpec spec;
    spec.base = default_config();
    spec.variable = SweepVariable::Range;
    spec.grid = {10, 100, 1000};
    const auto rows = run_sweep(spec);
    const RegionBoundaries b = region_boundaries(spec.base.tx, 0.02);
    for (const SweepRow& r : rows) {
        EXPECT_EQ(r.target->region_tx, classify_region(b, r.value));
    }
    EXPECT_EQ(rows[0].target->region_tx, Region::Reactive);
    EXPECT_EQ(rows[2].target->region_tx, Region::Fraunhofer);
}

TEST(Sweep, DeterministicAcrossWorkers) {
    SweepSpec spec;
    spec.base = nfcrb::testutil::bistatic_three_target_config(32);
    spec.variable = SweepVariable::Snapshots;
    spec.grid = {4, 8, 16, 32};
    const std::string a = sweep_csv(spec, 1);
    EXPECT_EQ(a, sweep_csv(spec, 3));
    EXPECT_EQ(a, sweep_csv(spec, 1));
    EXPECT_EQ(data_lines(a).size(), 1u + 4u * 3u);
}

TEST(Verify, DefaultBatteryPassesAndIsDeterministic) {
    VerifyOptions opt;
    opt.seed = 7;
    opt.battery = 6;
    const VerifyResult a = run_verify(opt);
    EXPECT_TRUE(a.all_pass);
    opt.workers = 3;
    const VerifyResult b = run_verify(opt);
    std::ostringstream ra;
    std::ostringstream rb;
    opt.workers = 1;
    write_verify_report(opt, a, ra);
    write_verify_report(opt, b, rb);
    EXPECT_EQ(ra.str(), rb.str());
}

TEST(Verify, InjectedFaultIsCaught) {
    VerifyOptions opt;
    opt.battery = 4;
    opt.inject_fault = true;
    const VerifyResult r = run_verify(opt);
    EXPECT_FALSE(r.all_pass);
    bool fim_failed = false;
    for (const OracleReport& rep : r.reports) {
        if (rep.quantity.rfind("fim_vs_fd", 0) == 0 && !rep.pass) {
            fim_failed = true;
        }
    }
    EXPECT_TRUE(fim_failed);
}
