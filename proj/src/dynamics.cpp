#include "hnb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hnb {

namespace {

constexpr double clamp_rel = 1e-14;

double sq(double x) { return x * x; }

// Pairwise separation in the form cosh(d/R) - 1, computed from differences.
struct Separation {
    double delta;
    double distance;
};

Separation separation_from_delta(double R, double delta) {
    delta = std::max(delta, 0.0);
    return Separation{delta, R * std::log1p(delta + std::sqrt(delta * (delta + 2.0)))};
}

Separation disk_separation(double R, cplx zk, cplx zj) {
    const double Dk = R * R - std::norm(zk);
    const double Dj = R * R - std::norm(zj);
    return separation_from_delta(R, 2.0 * R * R * std::norm(zk - zj) / (Dk * Dj));
}

Separation halfplane_separation(double R, cplx wk, cplx wj) {
    return separation_from_delta(R, std::norm(wk - wj) / (2.0 * wk.imag() * wj.imag()));
}

Separation spatial_separation(double R, const Vec3& a, const Vec3& b) {
    const Vec3 d = a - b;
    return separation_from_delta(R, lorentz_inner(d, d) / (2.0 * R * R));
}

[[noreturn]] void collide(std::size_t k, std::size_t j, double distance) {
    throw SingularityError(std::min(k, j), std::max(k, j),
                           "bodies " + std::to_string(std::min(k, j)) + " and " +
                               std::to_string(std::max(k, j)) + " collide (distance " +
                               std::to_string(distance) + ")");
}

void check_pair(double R, const Separation& s, std::size_t k, std::size_t j) {
    if (s.distance < collision_fraction * R) collide(k, j, s.distance);
}

// Clamps a difference of squares that rounding pushed slightly below zero.
double clamp_theta(double raw, double scale, std::size_t* clamped) {
    if (raw >= 0.0) return raw;
    if (raw >= -clamp_rel * scale) {
        if (clamped) ++*clamped;
        return 0.0;
    }
    throw DomainError("Theta evaluated to a negative value beyond rounding");
}

void require_chart(const PlanarConfiguration& cfg, Chart chart) {
    if (cfg.chart != chart) {
        throw UsageError(std::string("operation expects the ") + chart_name(chart) +
                         " chart, configuration is in the " + chart_name(cfg.chart) + " chart");
    }
}

template <class Body>
void validate_masses(const std::vector<Body>& bodies, bool restricted) {
    if (bodies.empty()) throw UsageError("configuration has no bodies");
    for (const auto& b : bodies) {
        if (!std::isfinite(b.mass) || b.mass < 0.0) throw DomainError("mass must be finite and nonnegative");
        if (b.mass == 0.0 && !restricted) {
            throw DomainError("massless body in a configuration not flagged restricted");
        }
    }
}

// Per-unit-mass contribution of body j to the conjugate gradient at body k (disk).
cplx disk_unit_grad(double R, cplx zk, cplx zj, double mj, std::size_t k, std::size_t j) {
    const double R2 = R * R;
    const double Dk = R2 - std::norm(zk);
    const double Dj = R2 - std::norm(zj);
    const Separation s = disk_separation(R, zk, zj);
    check_pair(R, s, k, j);
    const double theta = sq(Dk * Dj) * s.delta * (s.delta + 2.0);
    const cplx P = Dk * Dj * Dj * (zj - zk) * (R2 - zk * std::conj(zj));
    return 2.0 * mj * R * P / (theta * std::sqrt(theta));
}

cplx halfplane_unit_grad(double R, cplx wk, cplx wj, double mj, std::size_t k, std::size_t j) {
    const Separation s = halfplane_separation(R, wk, wj);
    check_pair(R, s, k, j);
    const double theta = 16.0 * sq(wk.imag() * wj.imag()) * s.delta * (s.delta + 2.0);
    const cplx ak = std::conj(wk) - wk;
    const cplx aj = std::conj(wj) - wj;
    const cplx P = ak * aj * aj * (wk - wj) * (std::conj(wj) - wk);
    return -2.0 * mj / R * P / (theta * std::sqrt(theta));
}

Vec3 spatial_unit_grad(double R, const Vec3& qk, const Vec3& qj, double mj, std::size_t k, std::size_t j) {
    const Separation s = spatial_separation(R, qk, qj);
    check_pair(R, s, k, j);
    const double c = 1.0 + s.delta;
    const double sinh2 = s.delta * (s.delta + 2.0);
    return (mj / (R * R * R * sinh2 * std::sqrt(sinh2))) * (qj - c * qk);
}

double coth_from_delta(double delta) {
    return (1.0 + delta) / std::sqrt(delta * (delta + 2.0));
}

}  // namespace

void validate(const PlanarConfiguration& cfg) {
    if (cfg.chart == Chart::hyperboloid) throw UsageError("planar configuration in the hyperboloid chart");
    validate_masses(cfg.bodies, cfg.restricted);
    const double R = cfg.ctx.radius();
    for (std::size_t k = 0; k < cfg.bodies.size(); ++k) {
        const cplx p = cfg.bodies[k].pos;
        if (cfg.chart == Chart::disk) {
            validate(cfg.ctx, DiskPoint{p});
        } else {
            validate(cfg.ctx, HalfPlanePoint{p});
        }
        if (!std::isfinite(cfg.bodies[k].vel.real()) || !std::isfinite(cfg.bodies[k].vel.imag())) {
            throw DomainError("velocity must be finite");
        }
        for (std::size_t j = 0; j < k; ++j) {
            const cplx q = cfg.bodies[j].pos;
            const Separation s = cfg.chart == Chart::disk ? disk_separation(R, p, q) : halfplane_separation(R, p, q);
            check_pair(R, s, j, k);
        }
    }
}

void validate(const SpatialConfiguration& cfg) {
    validate_masses(cfg.bodies, cfg.restricted);
    const double R = cfg.ctx.radius();
    for (std::size_t k = 0; k < cfg.bodies.size(); ++k) {
        const auto& b = cfg.bodies[k];
        validate(cfg.ctx, HyperboloidPoint{b.pos});
        const double tangency = std::abs(lorentz_inner(b.pos, b.vel));
        const double scale = std::sqrt(sq(b.pos.x) + sq(b.pos.y) + sq(b.pos.z)) *
                             std::sqrt(sq(b.vel.x) + sq(b.vel.y) + sq(b.vel.z));
        if (tangency > 1e-8 * scale) throw DomainError("hyperboloid velocity is not tangent to the sheet");
        for (std::size_t j = 0; j < k; ++j) check_pair(R, spatial_separation(R, b.pos, cfg.bodies[j].pos), j, k);
    }
}

PlanarConfiguration to_disk(const PlanarConfiguration& cfg) {
    if (cfg.chart == Chart::disk) return cfg;
    require_chart(cfg, Chart::halfplane);
    PlanarConfiguration out{cfg.ctx, Chart::disk, {}, cfg.restricted};
    out.bodies.reserve(cfg.bodies.size());
    for (const auto& b : cfg.bodies) {
        const PlanarState s = disk_state_from_halfplane(cfg.ctx, {b.pos, b.vel});
        out.bodies.push_back({b.mass, s.pos, s.vel});
    }
    return out;
}

PlanarConfiguration to_halfplane(const PlanarConfiguration& cfg) {
    if (cfg.chart == Chart::halfplane) return cfg;
    require_chart(cfg, Chart::disk);
    PlanarConfiguration out{cfg.ctx, Chart::halfplane, {}, cfg.restricted};
    out.bodies.reserve(cfg.bodies.size());
    for (const auto& b : cfg.bodies) {
        const PlanarState s = halfplane_state_from_disk(cfg.ctx, {b.pos, b.vel});
        out.bodies.push_back({b.mass, s.pos, s.vel});
    }
    return out;
}

PlanarConfiguration to_disk(const SpatialConfiguration& cfg) {
    PlanarConfiguration out{cfg.ctx, Chart::disk, {}, cfg.restricted};
    out.bodies.reserve(cfg.bodies.size());
    for (const auto& b : cfg.bodies) {
        const PlanarState s = disk_state_from_hyperboloid(cfg.ctx, {b.pos, b.vel});
        out.bodies.push_back({b.mass, s.pos, s.vel});
    }
    return out;
}

SpatialConfiguration to_hyperboloid(const PlanarConfiguration& cfg) {
    const PlanarConfiguration disk = to_disk(cfg);
    SpatialConfiguration out{cfg.ctx, {}, cfg.restricted};
    out.bodies.reserve(disk.bodies.size());
    for (const auto& b : disk.bodies) {
        const SpatialState s = hyperboloid_state_from_disk(cfg.ctx, {b.pos, b.vel});
        out.bodies.push_back({b.mass, s.pos, s.vel});
    }
    return out;
}

double disk_pair_numerator(const Curvature& ctx, cplx zk, cplx zj) noexcept {
    const double R2 = sq(ctx.radius());
    return 2.0 * (zk * std::conj(zj) + zj * std::conj(zk)).real() * R2 -
           (std::norm(zk) + R2) * (std::norm(zj) + R2);
}

double theta_disk(const Curvature& ctx, cplx zk, cplx zj) {
    const double R2 = sq(ctx.radius());
    const double A = disk_pair_numerator(ctx, zk, zj);
    const double B = (R2 - std::norm(zk)) * (R2 - std::norm(zj));
    return clamp_theta(A * A - B * B, A * A, nullptr);
}

double coth_distance_disk(const Curvature& ctx, cplx zk, cplx zj) {
    const double theta = theta_disk(ctx, zk, zj);
    if (theta == 0.0) throw SingularityError(0, 1, "coincident disk points have no finite coth");
    return -disk_pair_numerator(ctx, zk, zj) / std::sqrt(theta);
}

double halfplane_pair_numerator(cplx wk, cplx wj) noexcept {
    return ((std::conj(wk) + wk) * (std::conj(wj) + wj)).real() - 2.0 * (std::norm(wk) + std::norm(wj));
}

double theta_halfplane(cplx wk, cplx wj) {
    const double N = halfplane_pair_numerator(wk, wj);
    const cplx ak = std::conj(wk) - wk;
    const cplx aj = std::conj(wj) - wj;
    const double B = (ak * ak * aj * aj).real();
    return clamp_theta(N * N - B, N * N, nullptr);
}

double theta_halfplane_expanded(cplx wk, cplx wj) noexcept {
    const double dx = wk.real() - wj.real();
    const double yk = wk.imag(), yj = wj.imag();
    return 4.0 * dx * dx * (dx * dx + 2.0 * (yk * yk + yj * yj)) + 4.0 * sq(yk * yk - yj * yj);
}

double potential_disk(const PlanarConfiguration& cfg) {
    require_chart(cfg, Chart::disk);
    const double R = cfg.ctx.radius();
    double sum = 0.0;
    const auto& b = cfg.bodies;
    for (std::size_t k = 0; k < b.size(); ++k) {
        for (std::size_t j = k + 1; j < b.size(); ++j) {
            const Separation s = disk_separation(R, b[k].pos, b[j].pos);
            check_pair(R, s, k, j);
            sum += b[k].mass * b[j].mass * coth_from_delta(s.delta);
        }
    }
    return sum / R;
}

double potential_halfplane(const PlanarConfiguration& cfg) {
    require_chart(cfg, Chart::halfplane);
    const double R = cfg.ctx.radius();
    double sum = 0.0;
    const auto& b = cfg.bodies;
    for (std::size_t k = 0; k < b.size(); ++k) {
        for (std::size_t j = k + 1; j < b.size(); ++j) {
            const Separation s = halfplane_separation(R, b[k].pos, b[j].pos);
            check_pair(R, s, k, j);
            sum += b[k].mass * b[j].mass * coth_from_delta(s.delta);
        }
    }
    return sum / R;
}

double potential(const PlanarConfiguration& cfg) {
    return cfg.chart == Chart::disk ? potential_disk(cfg) : potential_halfplane(cfg);
}

double potential(const SpatialConfiguration& cfg) {
    const double R = cfg.ctx.radius();
    double sum = 0.0;
    const auto& b = cfg.bodies;
    for (std::size_t k = 0; k < b.size(); ++k) {
        for (std::size_t j = k + 1; j < b.size(); ++j) {
            const Separation s = spatial_separation(R, b[k].pos, b[j].pos);
            check_pair(R, s, k, j);
            sum += b[k].mass * b[j].mass * coth_from_delta(s.delta);
        }
    }
    return sum / R;
}

cplx grad_potential_disk(const PlanarConfiguration& cfg, std::size_t k) {
    require_chart(cfg, Chart::disk);
    const double R = cfg.ctx.radius();
    const auto& b = cfg.bodies;
    cplx sum{};
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (j != k) sum += disk_unit_grad(R, b[k].pos, b[j].pos, b[j].mass, k, j);
    }
    return b[k].mass * sum;
}

cplx grad_potential_halfplane(const PlanarConfiguration& cfg, std::size_t k) {
    require_chart(cfg, Chart::halfplane);
    const double R = cfg.ctx.radius();
    const auto& b = cfg.bodies;
    cplx sum{};
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (j != k) sum += halfplane_unit_grad(R, b[k].pos, b[j].pos, b[j].mass, k, j);
    }
    return b[k].mass * sum;
}

Vec3 grad_potential_hyperboloid(const SpatialConfiguration& cfg, std::size_t k) {
    const double R = cfg.ctx.radius();
    const auto& b = cfg.bodies;
    Vec3 sum{};
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (j != k) sum += spatial_unit_grad(R, b[k].pos, b[j].pos, b[j].mass, k, j);
    }
    return b[k].mass * sum;
}

cplx acceleration(const PlanarConfiguration& cfg, std::size_t k) {
    const double R = cfg.ctx.radius();
    const auto& b = cfg.bodies;
    const PlanarState s{b[k].pos, b[k].vel};
    cplx force{};
    if (cfg.chart == Chart::disk) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (j != k) force += disk_unit_grad(R, b[k].pos, b[j].pos, b[j].mass, k, j);
        }
        return geodesic_acceleration_disk(cfg.ctx, s) + 2.0 / disk_metric_factor(cfg.ctx, s.pos) * force;
    }
    require_chart(cfg, Chart::halfplane);
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (j != k) force += halfplane_unit_grad(R, b[k].pos, b[j].pos, b[j].mass, k, j);
    }
    const cplx gap = s.pos - std::conj(s.pos);
    return geodesic_acceleration_halfplane(s) - gap * gap / (2.0 * R * R) * force;
}

Vec3 acceleration(const SpatialConfiguration& cfg, std::size_t k) {
    const double R = cfg.ctx.radius();
    const auto& b = cfg.bodies;
    Vec3 force{};
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (j != k) force += spatial_unit_grad(R, b[k].pos, b[j].pos, b[j].mass, k, j);
    }
    return force + (lorentz_inner(b[k].vel, b[k].vel) / (R * R)) * b[k].pos;
}

void accelerations(const PlanarConfiguration& cfg, std::span<cplx> out) {
    const std::size_t n = cfg.bodies.size();
    if (out.size() != n) throw UsageError("acceleration buffer size mismatch");
    const double R = cfg.ctx.radius();
    const auto& b = cfg.bodies;
    std::fill(out.begin(), out.end(), cplx{});
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k || b[j].mass == 0.0) continue;
            out[k] += cfg.chart == Chart::disk ? disk_unit_grad(R, b[k].pos, b[j].pos, b[j].mass, k, j)
                                               : halfplane_unit_grad(R, b[k].pos, b[j].pos, b[j].mass, k, j);
        }
        const PlanarState s{b[k].pos, b[k].vel};
        if (cfg.chart == Chart::disk) {
            out[k] = geodesic_acceleration_disk(cfg.ctx, s) + 2.0 / disk_metric_factor(cfg.ctx, s.pos) * out[k];
        } else {
            const cplx gap = s.pos - std::conj(s.pos);
            out[k] = geodesic_acceleration_halfplane(s) - gap * gap / (2.0 * R * R) * out[k];
        }
    }
}

void accelerations(const SpatialConfiguration& cfg, std::span<Vec3> out) {
    const std::size_t n = cfg.bodies.size();
    if (out.size() != n) throw UsageError("acceleration buffer size mismatch");
    for (std::size_t k = 0; k < n; ++k) out[k] = acceleration(cfg, k);
}

SingularityMetrics singularity_proximity(const PlanarConfiguration& cfg) {
    SingularityMetrics m{{}, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0};
    const double R = cfg.ctx.radius();
    const auto& b = cfg.bodies;
    for (std::size_t k = 0; k < b.size(); ++k) {
        for (std::size_t j = k + 1; j < b.size(); ++j) {
            double theta;
            Separation s;
            if (cfg.chart == Chart::disk) {
                const double A = disk_pair_numerator(cfg.ctx, b[k].pos, b[j].pos);
                const double B = (R * R - std::norm(b[k].pos)) * (R * R - std::norm(b[j].pos));
                clamp_theta(A * A - B * B, A * A, &m.clamped);
                s = disk_separation(R, b[k].pos, b[j].pos);
                theta = B * B * s.delta * (s.delta + 2.0);
            } else {
                const double N = halfplane_pair_numerator(b[k].pos, b[j].pos);
                const cplx ak = std::conj(b[k].pos) - b[k].pos;
                const cplx aj = std::conj(b[j].pos) - b[j].pos;
                clamp_theta(N * N - (ak * ak * aj * aj).real(), N * N, &m.clamped);
                s = halfplane_separation(R, b[k].pos, b[j].pos);
                theta = 16.0 * sq(b[k].pos.imag() * b[j].pos.imag()) * s.delta * (s.delta + 2.0);
            }
            m.pairs.push_back({k, j, theta, s.distance});
            m.min_theta = std::min(m.min_theta, theta);
            m.min_distance = std::min(m.min_distance, s.distance);
        }
    }
    return m;
}

SingularityMetrics singularity_proximity(const SpatialConfiguration& cfg) {
    SingularityMetrics m{{}, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0};
    const double R = cfg.ctx.radius();
    const auto& b = cfg.bodies;
    for (std::size_t k = 0; k < b.size(); ++k) {
        for (std::size_t j = k + 1; j < b.size(); ++j) {
            const Separation s = spatial_separation(R, b[k].pos, b[j].pos);
            // Lorentz analog of Theta: C^2 - 1 with C = cosh(d/R).
            const double theta = s.delta * (s.delta + 2.0);
            m.pairs.push_back({k, j, theta, s.distance});
            m.min_theta = std::min(m.min_theta, theta);
            m.min_distance = std::min(m.min_distance, s.distance);
        }
    }
    return m;
}

}  // namespace hnb
