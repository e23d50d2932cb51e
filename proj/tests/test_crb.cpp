#include "nfcrb/config.hpp"
#include "nfcrb/crb.hpp"
#include "nfcrb/errors.hpp"
#include "nfcrb/fim.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nfcrb;
using nfcrb::testutil::rel;

namespace {

// Random SPD matrix with a moderate condition number.
Eigen::MatrixXd random_spd(int n, unsigned seed) {
    std::srand(seed);
    const Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n);
    return a * a.transpose() + n * Eigen::MatrixXd::Identity(n, n);
}

double max_rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

} // namespace

TEST(FullCrb, DiagonalFisher) {
    Eigen::VectorXd d(6);
    d << 1.0, 2.0, 4.0, 8.0, 16.0, 32.0;
    const FullCrb c = full_crb(FisherInfo::from_matrix(d.asDiagonal()));
    for (int i = 0; i < 6; ++i) {
        EXPECT_DOUBLE_EQ(c.crb(i, i), 1.0 / d(i));
    }
    EXPECT_EQ(c.report.status, CrbStatus::Ok);
    EXPECT_NEAR(*c.report.condition_number, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(c.report.targets[0].crb_alpha, 1.0 / 16 + 1.0 / 32);
}

TEST(FullCrb, CoincidentTargetsAreSingular) {
    SceneConfig cfg = nfcrb::testutil::single_target_config(8, 4, 30.0, 10.0);
    cfg.targets.push_back(cfg.targets[0]);
    EXPECT_THROW(full_crb(fim(make_scene(cfg))), SingularFim);
}

TEST(FullCrb, ZeroInformationIsSingular) {
    SceneConfig cfg = nfcrb::testutil::single_target_config(8, 4, 30.0, 10.0);
    cfg.targets[0].rcs_re = 0.0;
    cfg.targets[0].rcs_im = 0.0;
    EXPECT_THROW(full_crb(fim(make_scene(cfg))), SingularFim);
}

TEST(FullCrb, PaperDefaultIsIllConditionedButReported) {
    const FullCrb c = full_crb(fim(make_scene(default_config())));
    ASSERT_TRUE(c.report.condition_number.has_value());
    EXPECT_GT(*c.report.condition_number, 1.0);
    for (ParamKind k : kAllParamKinds) {
        EXPECT_GT(c.report.targets[0].get(k), 0.0);
    }
}

TEST(FullCrb, AlphaPartsDifferWhenAllParametersAreUnknown) {
    // The phase of alpha trades off against range through exp(-j k r), so the
    // marginal bounds of alpha_R and alpha_I are not equal. Equality holds for
    // the bounds with the other parameters known (see FisherDiagonal below).
    SceneConfig cfg = default_config();
    cfg.targets[0].vx = 0.0;
    cfg.targets[0].vy = 0.0;
    const FullCrb c = full_crb(fim(make_scene(cfg)));
    EXPECT_GT(c.report.targets[0].crb_alpha_i / c.report.targets[0].crb_alpha_r, 10.0);
}

TEST(FullCrb, DiagonalDominatesReciprocalFisherDiagonal) {
    const FisherInfo f = fim(make_scene(nfcrb::testutil::bistatic_three_target_config(16)));
    const FullCrb c = full_crb(f);
    for (int i = 0; i < f.size(); ++i) {
        EXPECT_GE(c.crb(i, i) * (1.0 + 1e-9), 1.0 / f(i, i));
    }
}

TEST(ConditionalCrb, BlockDiagonal) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(6, 6);
    f.topLeftCorner(3, 3) = random_spd(3, 1);
    f.bottomRightCorner(3, 3) = random_spd(3, 2);
    const Eigen::MatrixXd c = conditional_crb(FisherInfo::from_matrix(f), {0, 1, 2});
    EXPECT_LE(max_rel(c, f.topLeftCorner(3, 3).inverse()), 1e-12);
}

TEST(ConditionalCrb, MatchesFullInverseSubBlock) {
    for (unsigned seed : {3u, 4u, 5u}) {
        const Eigen::MatrixXd f = random_spd(12, seed);
        const FisherInfo fi = FisherInfo::from_matrix(f);
        const Eigen::MatrixXd full = full_crb(fi).crb;
        const std::vector<int> subset = {7, 1, 4};
        EXPECT_LE(max_rel(conditional_crb(fi, subset), full(subset, subset)), 1e-8);
    }
}

TEST(ConditionalCrb, AllParametersEqualsFull) {
    const FisherInfo f = fim(nfcrb::testutil::canonical_scene());
    std::vector<int> all(6);
    for (int i = 0; i < 6; ++i) {
        all[i] = i;
    }
    EXPECT_LE(max_rel(conditional_crb(f, all), full_crb(f).crb), 1e-8);
    EXPECT_THROW(conditional_crb(f, {0, 0}), InvalidArgument);
    EXPECT_THROW(conditional_crb(f, {6}), InvalidArgument);
}

TEST(SchurCrb, MatchesFullInverseOnBattery) {
    for (int n : {64, 256}) {
        const FisherInfo f = fim(make_scene(nfcrb::testutil::bistatic_three_target_config(n)));
        const FullCrb full = full_crb(f);
        ASSERT_EQ(full.report.status, CrbStatus::Ok);
        const CrbReport s = schur_crb(f);
        for (int q = 0; q < 3; ++q) {
            for (ParamKind k : kAllParamKinds) {
                const int i = param_index(k, q, 3);
                EXPECT_LE(rel(s.targets[q].get(k), full.crb(i, i)), 1e-8) << n;
            }
        }
    }
}

TEST(SchurCrb, SmallBistaticIsFlaggedIllConditioned) {
    const FisherInfo f = fim(make_scene(nfcrb::testutil::bistatic_three_target_config(16)));
    EXPECT_EQ(full_crb(f).report.status, CrbStatus::IllConditioned);
    EXPECT_EQ(schur_crb(f).status, CrbStatus::IllConditioned);
}

TEST(SchurCrb, SingleTargetEqualsFull) {
    const FisherInfo f = fim(nfcrb::testutil::canonical_scene());
    const CrbReport s = schur_crb(f);
    const FullCrb full = full_crb(f);
    for (ParamKind k : kAllParamKinds) {
        EXPECT_LE(rel(s.targets[0].get(k), full.report.targets[0].get(k)), 1e-10);
    }
}

TEST(ClosedForm, MatchesReciprocalFisherDiagonal) {
    const Scene s = nfcrb::testutil::canonical_scene();
    const CrbRecord cf = closed_form_single(s, 0).targets[0];
    const CrbRecord fd = fisher_diagonal_crb(fim(s)).targets[0];
    for (ParamKind k : kAllParamKinds) {
        EXPECT_LE(rel(cf.get(k), fd.get(k)), 1e-10) << to_string(k);
    }
    EXPECT_EQ(cf.crb_alpha_r, cf.crb_alpha_i);
    EXPECT_EQ(fd.crb_alpha_r, fd.crb_alpha_i);
    EXPECT_EQ(cf.crb_alpha, cf.crb_alpha_r + cf.crb_alpha_i);
}

TEST(ClosedForm, ZeroAlphaDiverges) {
    SceneConfig cfg = nfcrb::testutil::single_target_config(8, 4, 30.0, 10.0, 1.0, 4.0, 0.0);
    const CrbRecord cf = closed_form_single(make_scene(cfg), 0).targets[0];
    EXPECT_TRUE(is_divergent(cf.crb_x));
    EXPECT_TRUE(is_divergent(cf.crb_vy));
    EXPECT_TRUE(std::isfinite(cf.crb_alpha));
}

TEST(ClosedForm, BroadsideVelocityIsFinite) {
    SceneConfig cfg = nfcrb::testutil::single_target_config(64, 16, 20.0, 0.0, 0.0, 0.0);
    const CrbRecord cf = closed_form_single(make_scene(cfg), 0).targets[0];
    EXPECT_TRUE(std::isfinite(cf.crb_vx));
    EXPECT_GT(cf.crb_vx, 0.0);
}

TEST(ClosedForm, ExactScalingLaws) {
    SceneConfig cfg = nfcrb::testutil::single_target_config(16, 8, 40.0, 20.0);
    const CrbRecord base = fisher_diagonal_crb(fim(make_scene(cfg))).targets[0];
    SceneConfig twice = cfg;
    twice.power_w *= 2.0;
    const CrbRecord p2 = fisher_diagonal_crb(fim(make_scene(twice))).targets[0];
    for (ParamKind k : kAllParamKinds) {
        EXPECT_LE(rel(2.0 * p2.get(k), base.get(k)), 1e-12);
    }
    SceneConfig noisy = cfg;
    noisy.noise_var_w *= 4.0;
    const CrbRecord n4 = fisher_diagonal_crb(fim(make_scene(noisy))).targets[0];
    for (ParamKind k : kAllParamKinds) {
        EXPECT_LE(rel(n4.get(k), 4.0 * base.get(k)), 1e-12);
    }
}

TEST(Crb, RotationPreservesTraces) {
    const Scene s = make_scene(default_config());
    const Scene r = rotated(s, deg_to_rad(30.0));
    const Eigen::MatrixXd a = full_crb(fim(s)).crb;
    const Eigen::MatrixXd b = full_crb(fim(r)).crb;
    EXPECT_LE(rel(b(0, 0) + b(1, 1), a(0, 0) + a(1, 1)), 1e-8);
    EXPECT_LE(rel(b(2, 2) + b(3, 3), a(2, 2) + a(3, 3)), 1e-8);
}
