#include "nfcrb/config.hpp"
#include "nfcrb/errors.hpp"
#include "nfcrb/scene.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace nfcrb;

TEST(Scene, PaperDefaultsAreValid) {
    const Scene s = make_scene(default_config());
    EXPECT_DOUBLE_EQ(s.wavelength(), 0.02);
    EXPECT_EQ(s.tx().count(), 256);
    EXPECT_DOUBLE_EQ(s.tx().spacing(), 0.01);
    EXPECT_EQ(s.snapshots(), 256);
    EXPECT_DOUBLE_EQ(s.power(), 0.1);
    EXPECT_NEAR(s.noise_var(), 3.9811e-15, 1e-19);
    EXPECT_EQ(s.param_count(), 6);
    EXPECT_FALSE(s.displacement_warning());
}

TEST(Scene, TargetOnElementIsDegenerate) {
    SceneConfig cfg = default_config();
    cfg.tx = ArrayGeometry::ula(3, 0.01);
    cfg.targets = {Target{0.0, 0.0}};
    EXPECT_THROW(make_scene(cfg), DegenerateGeometry);
}

TEST(Scene, RejectsInvalidFields) {
    SceneConfig cfg = default_config();
    cfg.power_w = 0.0;
    EXPECT_THROW(make_scene(cfg), InvalidArgument);
    cfg = default_config();
    cfg.noise_var_w = -1.0;
    EXPECT_THROW(make_scene(cfg), InvalidArgument);
    cfg = default_config();
    cfg.snapshots = 0;
    EXPECT_THROW(make_scene(cfg), InvalidArgument);
    cfg = default_config();
    cfg.targets.clear();
    EXPECT_THROW(make_scene(cfg), InvalidArgument);
    cfg = default_config();
    cfg.wavelength_m = 0.021;
    EXPECT_THROW(make_scene(cfg), InvalidArgument);
}

TEST(Scene, ThreeTargetBistatic) {
    const Scene s = make_scene(testutil::bistatic_three_target_config());
    EXPECT_EQ(s.target_count(), 3);
    EXPECT_EQ(s.param_count(), 18);
}

TEST(Scene, DisplacementWarning) {
    SceneConfig cfg = testutil::single_target_config(4, 256, 10.0, 0.0, 0.0, 20.0);
    cfg.t_sym_s = 1e-3;  // 20 m/s * 0.256 s = 5.1 m at 10 m
    EXPECT_TRUE(make_scene(cfg).displacement_warning());
}

TEST(Pack, SingleTarget) {
    const Target t{1, 2, 3, 4, 5, 6};
    const Eigen::VectorXd v = pack({t});
    ASSERT_EQ(v.size(), 6);
    for (int i = 0; i < 6; ++i) {
        EXPECT_EQ(v(i), i + 1);
    }
}

TEST(Pack, BlockOrdering) {
    const Target a{1, 2, 3, 4, 5, 6};
    const Target b{11, 12, 13, 14, 15, 16};
    const Eigen::VectorXd v = pack({a, b});
    EXPECT_EQ(v(2), 2.0);
    EXPECT_EQ(v(3), 12.0);
    EXPECT_EQ(v(param_index(ParamKind::AlphaI, 1, 2)), 16.0);
}

TEST(Pack, RoundTrip) {
    for (int q : {1, 2, 5}) {
        std::vector<Target> targets;
        for (int i = 0; i < q; ++i) {
            targets.push_back(Target{1.0 * i, 2.0 + i, -1.5 * i, 0.25, 0.5 - i, 7.0});
        }
        const auto back = unpack(pack(targets));
        ASSERT_EQ(back.size(), targets.size());
        for (std::size_t i = 0; i < targets.size(); ++i) {
            EXPECT_EQ(pack({back[i]}), pack({targets[i]}));
        }
        const Eigen::VectorXd v = pack(targets);
        EXPECT_EQ(pack(unpack(v)), v);
    }
    EXPECT_THROW(unpack(Eigen::VectorXd::Zero(7)), InvalidArgument);
}

TEST(Polar, Examples) {
    const auto geom = ArrayGeometry::ula(3, 0.01);
    Polar p = polar_of(Target{0.0, 100.0}, geom);
    EXPECT_DOUBLE_EQ(p.range, 100.0);
    EXPECT_DOUBLE_EQ(p.angle, 0.0);

    const double th = 20.0 * std::numbers::pi / 180.0;
    p = polar_of(Target{100.0 * std::sin(th), 100.0 * std::cos(th)}, geom);
    EXPECT_NEAR(p.range, 100.0, 1e-12);
    EXPECT_NEAR(p.angle, th, 1e-14);

    p = polar_of(Target{0.0, 100.0}, ArrayGeometry::ula(3, 0.01, -2.0));
    EXPECT_DOUBLE_EQ(p.range, std::sqrt(4.0 + 1e4));
    EXPECT_DOUBLE_EQ(p.angle, std::atan2(2.0, 100.0));

    EXPECT_THROW(polar_of(Target{0.0, 0.0}, geom), DegenerateGeometry);
}

TEST(Polar, RoundTrip) {
    const auto geom = ArrayGeometry::ula(8, 0.01, 1.5);
    for (double r : {3.0, 47.0, 1234.5}) {
        for (double deg : {-75.0, -10.0, 0.0, 33.0, 89.0}) {
            const Target t = Target::from_polar(r, deg_to_rad(deg), Vec2::Zero(), 1.0,
                                                geom.centroid());
            const Polar p = polar_of(t, geom);
            const Target back = Target::from_polar(p.range, p.angle, Vec2::Zero(), 1.0,
                                                   geom.centroid());
            EXPECT_LE((back.position() - t.position()).norm(), 1e-10 * r);
        }
    }
}

TEST(Dbm, Conversion) {
    EXPECT_DOUBLE_EQ(dbm_to_watts(0.0), 1e-3);
    EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
    EXPECT_NEAR(dbm_to_watts(-114.0), 3.9811e-15, 1e-19);
}
