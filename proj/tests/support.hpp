#pragma once

#include <cmath>
#include <random>

#include "hnb/dynamics.hpp"
#include "hnb/geometry.hpp"

namespace hnb::testing {

inline cplx random_disk_point(std::mt19937_64& rng, double R, double max_frac = 0.9) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = R * max_frac * std::sqrt(u(rng));
    return std::polar(r, 2.0 * M_PI * u(rng));
}

inline cplx random_halfplane_point(std::mt19937_64& rng, double R) {
    std::uniform_real_distribution<double> x(-2.0 * R, 2.0 * R), logy(std::log(0.2), std::log(3.0));
    return {x(rng), R * std::exp(logy(rng))};
}

inline cplx random_velocity(std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> g(0.0, scale);
    return {g(rng), g(rng)};
}

// Bodies pairwise at least `min_distance` apart (hyperbolic distance, units of R).
inline PlanarConfiguration random_configuration(std::mt19937_64& rng, Chart chart, std::size_t n, double R,
                                                double min_distance = 0.2, double speed = 0.3) {
    const Curvature ctx(R);
    std::uniform_real_distribution<double> mass(0.5, 2.0);
    for (;;) {
        PlanarConfiguration cfg{ctx, chart, {}};
        for (std::size_t k = 0; k < n; ++k) {
            const cplx p = chart == Chart::disk ? random_disk_point(rng, R) : random_halfplane_point(rng, R);
            const double vscale = chart == Chart::disk ? speed * (R * R - std::norm(p)) / (R * R) : speed * p.imag() / R;
            cfg.bodies.push_back({mass(rng), p, random_velocity(rng, vscale)});
        }
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            for (std::size_t j = i + 1; j < n && ok; ++j) {
                const ChartPoint a = chart == Chart::disk ? ChartPoint{DiskPoint{cfg.bodies[i].pos}}
                                                          : ChartPoint{HalfPlanePoint{cfg.bodies[i].pos}};
                const ChartPoint b = chart == Chart::disk ? ChartPoint{DiskPoint{cfg.bodies[j].pos}}
                                                          : ChartPoint{HalfPlanePoint{cfg.bodies[j].pos}};
                ok = geodesic_distance(ctx, a, b) > min_distance * R;
            }
        }
        if (ok) return cfg;
    }
}

// Fourth-order central difference of f at x with step h.
template <class F>
double central_difference(F&& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// Wirtinger derivative d/d conj(z_k) of a real function of a planar configuration.
template <class F>
cplx wirtinger_conj(F&& f, PlanarConfiguration cfg, std::size_t k, double h) {
    const cplx base = cfg.bodies[k].pos;
    auto along = [&](cplx dir) {
        return [&, dir](double s) {
            cfg.bodies[k].pos = base + s * dir;
            return f(cfg);
        };
    };
    const double dx = central_difference(along({1.0, 0.0}), 0.0, h);
    const double dy = central_difference(along({0.0, 1.0}), 0.0, h);
    return 0.5 * cplx(dx, dy);
}

}  // namespace hnb::testing
