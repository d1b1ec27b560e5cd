#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hnb/invariants.hpp"
#include "support.hpp"

using namespace hnb;
using hnb::testing::random_configuration;

TEST(Hyperboloid, VertexAtRest) {
    const SpatialConfiguration cfg{Curvature(2.0), {{1.5, {0, 0, 2.0}, {}}}};
    const auto f = first_integrals(cfg);
    EXPECT_EQ(f.c1, 0.0);
    EXPECT_EQ(f.c2, 0.0);
    EXPECT_EQ(f.c3, 0.0);
    EXPECT_EQ(f.h, 0.0);
}

TEST(Hyperboloid, VertexMovingAlongX) {
    // c2 = m (z xdot - x zdot) with z = R, x = 0, xdot = v
    const double m = 1.5, R = 2.0, v = 0.3;
    const SpatialConfiguration cfg{Curvature(R), {{m, {0, 0, R}, {v, 0, 0}}}};
    const auto f = first_integrals(cfg);
    EXPECT_NEAR(f.c2, m * R * v, 1e-15);
    EXPECT_EQ(f.c1, 0.0);
    EXPECT_EQ(f.c3, 0.0);
    EXPECT_NEAR(f.h, 0.5 * m * v * v, 1e-15);
}

TEST(Disk, CenterAtRestHasOnlyPotentialEnergy) {
    const PlanarConfiguration cfg{Curvature(1.0), Chart::disk, {{1.0, 0.0, {}}, {2.0, {0.3, 0.4}, {}}}};
    const auto f = first_integrals(cfg);
    EXPECT_EQ(f.c1, 0.0);
    EXPECT_EQ(f.c2, 0.0);
    EXPECT_EQ(f.c3, 0.0);
    EXPECT_NEAR(f.h, -potential(cfg), 1e-15);
}

TEST(Disk, ImaginaryPartsVanish) {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 500; ++i) {
        const auto cfg = random_configuration(rng, Chart::disk, 3, 1.3);
        EXPECT_LT(first_integrals(cfg).imag_residue, 1e-12);
    }
}

TEST(Disk, RotationKeepsC3) {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 100; ++i) {
        auto cfg = random_configuration(rng, Chart::disk, 3, 1.0);
        const auto before = first_integrals(cfg);
        const cplx rot = std::polar(1.0, 1.234);
        for (auto& b : cfg.bodies) {
            b.pos *= rot;
            b.vel *= rot;
        }
        const auto after = first_integrals(cfg);
        EXPECT_NEAR(after.c3, before.c3, 1e-12 * (1 + std::abs(before.c3)));
        EXPECT_NEAR(after.h, before.h, 1e-12 * (1 + std::abs(before.h)));
    }
}

TEST(HalfPlane, AtRestOnAxisHasNoMomentum) {
    const double R = 1.3;
    const PlanarConfiguration cfg{Curvature(R), Chart::halfplane, {{1.0, {0, R}, {}}}};
    const auto f = first_integrals(cfg);
    EXPECT_NEAR(f.c1, 0.0, 1e-15);
    EXPECT_NEAR(f.c2, 0.0, 1e-15);
    EXPECT_NEAR(f.c3, 0.0, 1e-15);
}

TEST(HalfPlane, MatchesDiskAndHyperboloid) {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 500; ++i) {
        const auto cfg = random_configuration(rng, Chart::disk, 3, 0.8);
        const auto fd = first_integrals(cfg);
        const auto fh = first_integrals(to_halfplane(cfg));
        const auto fq = first_integrals(to_hyperboloid(cfg));
        EXPECT_LT(fh.imag_residue, 1e-10);
        for (auto [a, b, c] : {std::tuple{fd.h, fh.h, fq.h}, std::tuple{fd.c1, fh.c1, fq.c1},
                               std::tuple{fd.c2, fh.c2, fq.c2}, std::tuple{fd.c3, fh.c3, fq.c3}}) {
            EXPECT_NEAR(a, b, 1e-9 * (1 + std::abs(a)));
            EXPECT_NEAR(a, c, 1e-10 * (1 + std::abs(a)));
        }
    }
}

TEST(Drift, ConstantSeriesHasNoDrift) {
    const std::vector<FirstIntegrals> samples(5, FirstIntegrals{-1.0, 0.5, 0.0, 2.0, 0.0});
    const auto d = drift_report(samples);
    EXPECT_EQ(d.max(), 0.0);
}

TEST(Drift, RelativeWithFloor) {
    const std::vector<FirstIntegrals> samples{{-2.0, 1e-9, 0.0, 4.0, 0.0}, {-2.002, 2e-9, 0.0, 4.0, 0.0}};
    const auto d = drift_report(samples);
    EXPECT_NEAR(d.h, 1e-3, 1e-12);
    // |c1| is below the floor, so its drift is measured against the floor
    EXPECT_NEAR(d.c1, 1e-9 / drift_floor, 1e-15);
    EXPECT_EQ(d.c3, 0.0);
    EXPECT_NEAR(d.max(), 1e-3, 1e-12);
}
