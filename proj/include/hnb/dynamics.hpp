#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hnb/geometry.hpp"

namespace hnb {

struct PlanarBody {
    double mass = 1.0;
    cplx pos;
    cplx vel;
};

struct SpatialBody {
    double mass = 1.0;
    Vec3 pos;
    Vec3 vel;
};

// Bodies in the disk or half-plane chart. Massless bodies are allowed only when
// `restricted` is set; they feel the others but exert no force.
struct PlanarConfiguration {
    Curvature ctx;
    Chart chart = Chart::disk;
    std::vector<PlanarBody> bodies;
    bool restricted = false;
};

// Bodies on the upper sheet of the hyperboloid, velocities tangent to it.
struct SpatialConfiguration {
    Curvature ctx;
    std::vector<SpatialBody> bodies;
    bool restricted = false;
};

// Throws DomainError / UsageError on bad masses or chart membership, SingularityError on collisions.
void validate(const PlanarConfiguration& cfg);
void validate(const SpatialConfiguration& cfg);

PlanarConfiguration to_disk(const PlanarConfiguration& cfg);
PlanarConfiguration to_halfplane(const PlanarConfiguration& cfg);
PlanarConfiguration to_disk(const SpatialConfiguration& cfg);
SpatialConfiguration to_hyperboloid(const PlanarConfiguration& cfg);

// Pairwise distance below this fraction of R counts as a collision.
inline constexpr double collision_fraction = 1e-8;

// Theta_2 for a disk pair, evaluated as the printed difference of squares.
double theta_disk(const Curvature& ctx, cplx zk, cplx zj);
// 2(zk conj(zj) + zj conj(zk)) R^2 - (|zk|^2 + R^2)(|zj|^2 + R^2); negative off collision.
double disk_pair_numerator(const Curvature& ctx, cplx zk, cplx zj) noexcept;
// Closed-form coth(d/R) for a disk pair.
double coth_distance_disk(const Curvature& ctx, cplx zk, cplx zj);

// Theta_3 for a half-plane pair, bracketed difference-of-squares form.
double theta_halfplane(cplx wk, cplx wj);
// The same quantity written as a sum of nonnegative terms in x and y.
double theta_halfplane_expanded(cplx wk, cplx wj) noexcept;
// (conj(wk) + wk)(conj(wj) + wj) - 2(|wk|^2 + |wj|^2); negative off collision.
double halfplane_pair_numerator(cplx wk, cplx wj) noexcept;

// Force function (1/R) sum m_k m_j coth(d_kj / R).
double potential(const PlanarConfiguration& cfg);
double potential(const SpatialConfiguration& cfg);
double potential_disk(const PlanarConfiguration& cfg);
double potential_halfplane(const PlanarConfiguration& cfg);

// Wirtinger derivative of the force function with respect to the conjugate of body k.
cplx grad_potential_disk(const PlanarConfiguration& cfg, std::size_t k);
cplx grad_potential_halfplane(const PlanarConfiguration& cfg, std::size_t k);
// Lorentz gradient of the force function at body k on the hyperboloid.
Vec3 grad_potential_hyperboloid(const SpatialConfiguration& cfg, std::size_t k);

cplx acceleration(const PlanarConfiguration& cfg, std::size_t k);
Vec3 acceleration(const SpatialConfiguration& cfg, std::size_t k);

// All accelerations at once; `out` must hold one entry per body.
void accelerations(const PlanarConfiguration& cfg, std::span<cplx> out);
void accelerations(const SpatialConfiguration& cfg, std::span<Vec3> out);

struct PairMetrics {
    std::size_t first;
    std::size_t second;
    double theta;
    double distance;
};

struct SingularityMetrics {
    std::vector<PairMetrics> pairs;
    double min_theta;
    double min_distance;
    // Theta values come from the factored form; this counts printed-form evaluations that
    // came out slightly negative from rounding and were clamped.
    std::size_t clamped = 0;
};

SingularityMetrics singularity_proximity(const PlanarConfiguration& cfg);
SingularityMetrics singularity_proximity(const SpatialConfiguration& cfg);

}  // namespace hnb
