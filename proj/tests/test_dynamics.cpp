#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hnb/dynamics.hpp"
#include "support.hpp"

using namespace hnb;
using hnb::testing::random_configuration;

namespace {

double sinh_sq(const Curvature& c, const ChartPoint& a, const ChartPoint& b) {
    const double s = std::sinh(geodesic_distance(c, a, b) / c.radius());
    return s * s;
}

}  // namespace

TEST(Theta, DiskCollisionIsZero) {
    const Curvature c(1.0);
    EXPECT_EQ(theta_disk(c, {0.3, 0.2}, {0.3, 0.2}), 0.0);
}

TEST(Theta, DiskAntipodalPair) {
    const double R = 1.5, a = 0.6;
    const double expected = 16 * a * a * R * R * std::pow(R * R + a * a, 2);
    EXPECT_NEAR(theta_disk(Curvature(R), a, -a), expected, 1e-12 * expected);
}

TEST(Theta, DiskMatchesDistance) {
    std::mt19937_64 rng(31);
    const double R = 1.2;
    const Curvature c(R);
    for (int i = 0; i < 2000; ++i) {
        const cplx a = hnb::testing::random_disk_point(rng, R, 0.8), b = hnb::testing::random_disk_point(rng, R, 0.8);
        const double Da = R * R - std::norm(a), Db = R * R - std::norm(b);
        const double expected = Da * Da * Db * Db * sinh_sq(c, DiskPoint{a}, DiskPoint{b});
        EXPECT_NEAR(theta_disk(c, a, b), expected, 1e-9 * expected + 1e-14);
        const double coth = std::cosh(geodesic_distance(c, DiskPoint{a}, DiskPoint{b}) / R) /
                            std::sinh(geodesic_distance(c, DiskPoint{a}, DiskPoint{b}) / R);
        EXPECT_NEAR(coth_distance_disk(c, a, b), coth, 1e-12 * coth);
        EXPECT_LT(disk_pair_numerator(c, a, b), 0.0);
    }
}

TEST(Theta, HalfPlaneValues) {
    EXPECT_EQ(theta_halfplane({0.4, 1.0}, {0.4, 1.0}), 0.0);
    EXPECT_NEAR(theta_halfplane({0, 1}, {0, 2}), 36.0, 1e-12);
    EXPECT_NEAR(theta_halfplane_expanded({0, 1}, {0, 2}), 36.0, 1e-12);
}

TEST(Theta, HalfPlaneFormsAgree) {
    std::mt19937_64 rng(32);
    const Curvature c(1.0);
    for (int i = 0; i < 10000; ++i) {
        const cplx a = hnb::testing::random_halfplane_point(rng, 1.0), b = hnb::testing::random_halfplane_point(rng, 1.0);
        const double t1 = theta_halfplane(a, b), t2 = theta_halfplane_expanded(a, b);
        // the difference of squares cancels down from the size of its terms
        const double terms = std::pow(2 * (std::norm(a) + std::norm(b)), 2);
        EXPECT_NEAR(t1, t2, 1e-14 * terms);
        const double expected = 16 * std::pow(a.imag() * b.imag(), 2) * sinh_sq(c, HalfPlanePoint{a}, HalfPlanePoint{b});
        EXPECT_NEAR(t2, expected, 1e-9 * expected);
        EXPECT_LT(halfplane_pair_numerator(a, b), 0.0);
    }
}

TEST(Potential, SingleBodyIsZero) {
    PlanarConfiguration cfg{Curvature(1.0), Chart::disk, {{2.0, {0.1, 0.2}, {}}}};
    EXPECT_EQ(potential(cfg), 0.0);
    cfg.chart = Chart::halfplane;
    cfg.bodies[0].pos = {0.0, 1.0};
    EXPECT_EQ(potential(cfg), 0.0);
}

TEST(Potential, TwoUnitMassesIsCothOfDistance) {
    const double R = 1.7;
    const Curvature c(R);
    const cplx a{0.4, -0.3}, b{-0.9, 0.5};
    const PlanarConfiguration cfg{c, Chart::disk, {{1.0, a, {}}, {1.0, b, {}}}};
    const double d = geodesic_distance(c, DiskPoint{a}, DiskPoint{b});
    EXPECT_NEAR(potential(cfg), 1.0 / (R * std::tanh(d / R)), 1e-12);
}

TEST(Potential, IsometryInvariance) {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 100; ++i) {
        auto cfg = random_configuration(rng, Chart::disk, 4, 1.3);
        const double u = potential(cfg);
        for (auto& b : cfg.bodies) b.pos *= std::polar(1.0, 0.77);
        EXPECT_NEAR(potential(cfg), u, 1e-12 * std::abs(u));

        auto half = random_configuration(rng, Chart::halfplane, 4, 1.3);
        const double v = potential(half);
        for (auto& b : half.bodies) b.pos *= std::exp(0.9);
        EXPECT_NEAR(potential(half), v, 1e-12 * std::abs(v));
    }
}

TEST(Potential, ChartsAgree) {
    std::mt19937_64 rng(34);
    for (int i = 0; i < 200; ++i) {
        const auto cfg = random_configuration(rng, Chart::disk, 3, 0.9);
        const double u = potential(cfg);
        EXPECT_NEAR(potential(to_halfplane(cfg)), u, 1e-10 * std::abs(u));
        EXPECT_NEAR(potential(to_hyperboloid(cfg)), u, 1e-10 * std::abs(u));
    }
}

TEST(Gradient, SingleBodyIsZero) {
    const PlanarConfiguration d{Curvature(1.0), Chart::disk, {{1.0, {0.2, 0.1}, {}}}};
    EXPECT_EQ(grad_potential_disk(d, 0), cplx(0.0));
    const PlanarConfiguration h{Curvature(1.0), Chart::halfplane, {{1.0, {0.2, 1.1}, {}}}};
    EXPECT_EQ(grad_potential_halfplane(h, 0), cplx(0.0));
}

TEST(Gradient, AntipodalPairIsRealAndOpposite) {
    const PlanarConfiguration cfg{Curvature(1.0), Chart::disk, {{1.0, 0.4, {}}, {1.0, -0.4, {}}}};
    const cplx g0 = grad_potential_disk(cfg, 0), g1 = grad_potential_disk(cfg, 1);
    EXPECT_EQ(g0.imag(), 0.0);
    EXPECT_EQ(g1.imag(), 0.0);
    EXPECT_NEAR(g0.real(), -g1.real(), 1e-15 * std::abs(g0));
    EXPECT_NE(g0.real(), 0.0);
}

TEST(Gradient, MirrorPairInHalfPlane) {
    const cplx w{0.6, 1.3};
    const PlanarConfiguration cfg{Curvature(1.0), Chart::halfplane, {{1.0, w, {}}, {1.0, -std::conj(w), {}}}};
    const cplx g0 = grad_potential_halfplane(cfg, 0), g1 = grad_potential_halfplane(cfg, 1);
    EXPECT_NEAR(std::abs(g1 + std::conj(g0)), 0.0, 1e-14 * std::abs(g0));
}

TEST(Gradient, MatchesFiniteDifferences) {
    std::mt19937_64 rng(35);
    for (Chart chart : {Chart::disk, Chart::halfplane}) {
        for (int i = 0; i < 50; ++i) {
            const auto cfg = random_configuration(rng, chart, 3, 1.1);
            for (std::size_t k = 0; k < 3; ++k) {
                const cplx g = chart == Chart::disk ? grad_potential_disk(cfg, k) : grad_potential_halfplane(cfg, k);
                const double scale = chart == Chart::disk ? 1e-4 : 1e-4 * cfg.bodies[k].pos.imag();
                const cplx fd = hnb::testing::wirtinger_conj([](const auto& c) { return potential(c); }, cfg, k, scale);
                EXPECT_LT(std::abs(g - fd), 1e-6 * std::abs(g));
            }
        }
    }
}

TEST(Acceleration, SingleBodyIsGeodesic) {
    const Curvature c(1.4);
    const PlanarConfiguration d{c, Chart::disk, {{3.0, {0.2, 0.5}, {0.7, -0.1}}}};
    EXPECT_EQ(acceleration(d, 0), geodesic_acceleration_disk(c, {d.bodies[0].pos, d.bodies[0].vel}));
    const PlanarConfiguration h{c, Chart::halfplane, {{3.0, {0.2, 0.5}, {0.7, -0.1}}}};
    EXPECT_EQ(acceleration(h, 0), geodesic_acceleration_halfplane({h.bodies[0].pos, h.bodies[0].vel}));
}

TEST(Acceleration, RotatingAntipodalPairIsRadial) {
    const double a = 0.5, omega = 0.8;
    const PlanarConfiguration cfg{
        Curvature(1.0), Chart::disk, {{1.0, a, {0.0, a * omega}}, {1.0, -a, {0.0, -a * omega}}}};
    EXPECT_LT(std::abs(acceleration(cfg, 0).imag()), 1e-12);
    EXPECT_LT(std::abs(acceleration(cfg, 1).imag()), 1e-12);
}

TEST(Acceleration, ChartsAgreeThroughJacobian) {
    std::mt19937_64 rng(36);
    for (int i = 0; i < 200; ++i) {
        const auto cfg = random_configuration(rng, Chart::disk, 3, 1.0);
        const double R = cfg.ctx.radius();
        const auto half = to_halfplane(cfg);
        const cplx I(0, 1);
        for (std::size_t k = 0; k < 3; ++k) {
            const cplx z = cfg.bodies[k].pos, dz = cfg.bodies[k].vel;
            // w = i R (R - z) / (R + z)
            const cplx d1 = -2.0 * I * R * R / ((R + z) * (R + z));
            const cplx d2 = 4.0 * I * R * R / ((R + z) * (R + z) * (R + z));
            const cplx expected = d2 * dz * dz + d1 * acceleration(cfg, k);
            const cplx got = acceleration(half, k);
            EXPECT_LT(std::abs(got - expected), 1e-9 * (1 + std::abs(expected)));
        }
    }
}

TEST(Acceleration, HyperboloidAgreesWithDisk) {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 100; ++i) {
        const auto cfg = random_configuration(rng, Chart::disk, 3, 1.0);
        const auto sheet = to_hyperboloid(cfg);
        // advance both by a tiny Taylor step and compare positions to second order
        const double h = 1e-4;
        for (std::size_t k = 0; k < 3; ++k) {
            const Vec3 a = acceleration(sheet, k);
            const auto& b = sheet.bodies[k];
            const Vec3 q = b.pos + h * b.vel + 0.5 * h * h * a;
            const cplx z = cfg.bodies[k].pos + h * cfg.bodies[k].vel + 0.5 * h * h * acceleration(cfg, k);
            const Vec3 expected = hyperboloid_from_disk(cfg.ctx, {z}).q;
            EXPECT_LT(std::abs(q.x - expected.x) + std::abs(q.y - expected.y) + std::abs(q.z - expected.z),
                      1e-9 * (1 + b.pos.z));
        }
    }
}

TEST(Acceleration, CollisionThrows) {
    const PlanarConfiguration cfg{Curvature(1.0), Chart::disk, {{1.0, 0.3, {}}, {1.0, 0.3, {}}}};
    EXPECT_THROW(acceleration(cfg, 0), SingularityError);
    EXPECT_THROW(validate(cfg), SingularityError);
}

TEST(Validate, MassAndChartRules) {
    PlanarConfiguration cfg{Curvature(1.0), Chart::disk, {{0.0, 0.3, {}}, {1.0, -0.3, {}}}};
    EXPECT_THROW(validate(cfg), DomainError);
    cfg.restricted = true;
    EXPECT_NO_THROW(validate(cfg));
    cfg.bodies[0].mass = -1.0;
    EXPECT_THROW(validate(cfg), DomainError);
    cfg.bodies[0].mass = 1.0;
    cfg.bodies[0].pos = 1.2;
    EXPECT_THROW(validate(cfg), DomainError);
    EXPECT_THROW(validate(PlanarConfiguration{Curvature(1.0), Chart::disk, {}}), UsageError);
    SpatialConfiguration sc{Curvature(1.0), {{1.0, {0, 0, 1}, {0, 0, 1}}}};
    EXPECT_THROW(validate(sc), DomainError);
}

TEST(Singularity, ReportsCollisionAsZero) {
    const PlanarConfiguration cfg{Curvature(1.0), Chart::disk, {{1.0, 0.3, {}}, {1.0, 0.3, {}}, {1.0, -0.5, {}}}};
    const auto m = singularity_proximity(cfg);
    EXPECT_EQ(m.min_theta, 0.0);
    EXPECT_EQ(m.min_distance, 0.0);
    EXPECT_EQ(m.pairs.size(), 3u);
}

TEST(Singularity, SeparatedBodiesArePositive) {
    std::mt19937_64 rng(38);
    for (int i = 0; i < 100; ++i) {
        const auto cfg = random_configuration(rng, Chart::disk, 4, 1.0);
        const auto m = singularity_proximity(cfg);
        EXPECT_GT(m.min_theta, 0.0);
        // both charts see the same pair vanish together: Theta2 / (Dk Dj)^2 = Theta3 / (4 yk yj)^2
        const auto half = to_halfplane(cfg);
        const auto mh = singularity_proximity(half);
        for (std::size_t p = 0; p < m.pairs.size(); ++p) {
            const auto& pd = m.pairs[p];
            const double Dk = 1 - std::norm(cfg.bodies[pd.first].pos), Dj = 1 - std::norm(cfg.bodies[pd.second].pos);
            const double yk = half.bodies[pd.first].pos.imag(), yj = half.bodies[pd.second].pos.imag();
            const double lhs = pd.theta / (Dk * Dk * Dj * Dj), rhs = mh.pairs[p].theta / (16 * yk * yk * yj * yj);
            EXPECT_NEAR(lhs, rhs, 1e-8 * rhs);
        }
    }
}

TEST(Accelerations, BatchMatchesSingle) {
    std::mt19937_64 rng(39);
    const auto cfg = random_configuration(rng, Chart::halfplane, 5, 1.0);
    std::vector<cplx> out(5);
    accelerations(cfg, out);
    for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(std::abs(out[k] - acceleration(cfg, k)), 0.0, 1e-14 * (1 + std::abs(out[k])));
}
