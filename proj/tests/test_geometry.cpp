#include "nfcrb/errors.hpp"
#include "nfcrb/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nfcrb;

TEST(Ula, ThreeElementsCentered) {
    const auto g = ArrayGeometry::ula(3, 0.01);
    ASSERT_EQ(g.count(), 3);
    EXPECT_DOUBLE_EQ(g.position(0).x(), -0.01);
    EXPECT_DOUBLE_EQ(g.position(1).x(), 0.0);
    EXPECT_DOUBLE_EQ(g.position(2).x(), 0.01);
    for (const auto& p : g.positions()) {
        EXPECT_EQ(p.y(), 0.0);
    }
}

TEST(Ula, SingleElementAtCentroid) {
    const auto g = ArrayGeometry::ula(1, 0.01);
    EXPECT_EQ(g.position(0), Vec2(0.0, 0.0));
}

TEST(Ula, OffsetCentroid) {
    const auto g = ArrayGeometry::ula(4, 1.0, 2.0);
    const double expected[] = {0.5, 1.5, 2.5, 3.5};
    for (int n = 0; n < 4; ++n) {
        EXPECT_DOUBLE_EQ(g.position(n).x(), expected[n]);
    }
    EXPECT_TRUE(g.is_axis_ula());
}

TEST(Ula, RejectsBadInput) {
    EXPECT_THROW(ArrayGeometry::ula(0, 0.01), InvalidArgument);
    EXPECT_THROW(ArrayGeometry::ula(4, 0.0), InvalidArgument);
    EXPECT_THROW(ArrayGeometry::ula(4, -1.0), InvalidArgument);
}

TEST(Aperture, Examples) {
    EXPECT_NEAR(aperture(ArrayGeometry::ula(256, 0.01)), 2.55, 1e-12);
    EXPECT_EQ(aperture(ArrayGeometry::ula(1, 0.3)), 0.0);
    EXPECT_DOUBLE_EQ(aperture(ArrayGeometry::ula(2, 0.5)), 0.5);
}

TEST(RegionBoundaries, PaperArray) {
    const auto b = region_boundaries(ArrayGeometry::ula(256, 0.01), 0.02);
    EXPECT_NEAR(b.reactive, 0.62 * std::sqrt(std::pow(2.55, 3) / 0.02), 1e-9);
    EXPECT_NEAR(b.reactive, 17.85, 0.01);
    EXPECT_NEAR(b.fraunhofer, 650.25, 1e-9);
}

TEST(RegionBoundaries, DegenerateAndUnit) {
    const auto b0 = region_boundaries(ArrayGeometry::ula(1, 0.01), 0.02);
    EXPECT_EQ(b0.reactive, 0.0);
    EXPECT_EQ(b0.fraunhofer, 0.0);
    const auto b1 = region_boundaries(ArrayGeometry::ula(2, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(b1.reactive, 0.62);
    EXPECT_DOUBLE_EQ(b1.fraunhofer, 2.0);
    EXPECT_THROW(region_boundaries(ArrayGeometry::ula(2, 1.0), 0.0), InvalidArgument);
}

TEST(RegionBoundaries, Classification) {
    const auto b = region_boundaries(ArrayGeometry::ula(256, 0.01), 0.02);
    EXPECT_EQ(classify_region(b, 10.0), Region::Reactive);
    EXPECT_EQ(classify_region(b, 100.0), Region::Fresnel);
    EXPECT_EQ(classify_region(b, 1000.0), Region::Fraunhofer);
}

TEST(MomentSums, Examples) {
    const auto m3 = moment_sums(ArrayGeometry::ula(3, 1.0));
    EXPECT_NEAR(m3.first, 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(m3.second, 2.0);
    const auto m1 = moment_sums(ArrayGeometry::ula(1, 1.0));
    EXPECT_EQ(m1.first, 0.0);
    EXPECT_EQ(m1.second, 0.0);
}

TEST(MomentSums, MatchesClosedFormForPaperArray) {
    const auto g = ArrayGeometry::ula(256, 0.01, 1.7);
    const auto m = moment_sums(g);
    double brute = 0.0;
    for (const auto& p : g.positions()) {
        brute += (p.x() - 1.7) * (p.x() - 1.7);
    }
    const double closed = 256.0 * (256.0 * 256.0 - 1.0) * 1e-4 / 12.0;
    EXPECT_NEAR(m.first, 0.0, 1e-11);
    EXPECT_NEAR(m.second, closed, 1e-10 * closed);
    EXPECT_NEAR(brute, closed, 1e-10 * closed);
}

TEST(ArrayGeometry, RotationKeepsDistances) {
    const auto g = ArrayGeometry::ula(5, 0.2, 1.0);
    const auto r = g.rotated(0.3);
    EXPECT_FALSE(r.is_axis_ula());
    for (int n = 0; n < g.count(); ++n) {
        EXPECT_NEAR(r.position(n).norm(), g.position(n).norm(), 1e-14);
    }
}
