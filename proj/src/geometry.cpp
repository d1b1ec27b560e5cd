#include "hnb/geometry.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace hnb {

namespace {

double sq(double x) { return x * x; }

// Spacelike difference of two sheet points gives cosh(d/R) - 1 without cancellation.
double cosh_minus_one(const Curvature& ctx, const Vec3& a, const Vec3& b) {
    const Vec3 d = a - b;
    return lorentz_inner(d, d) / (2.0 * sq(ctx.radius()));
}

void require_disk(const Curvature& ctx, cplx z) {
    if (!in_disk(ctx, z)) {
        throw DomainError("disk point at or beyond the boundary circle");
    }
}

void require_halfplane(const Curvature& ctx, cplx w) {
    if (!in_halfplane(ctx, w)) {
        throw DomainError("half-plane point with nonpositive imaginary part");
    }
}

}  // namespace

Curvature::Curvature(double radius, double chart_tol) : radius_(radius), chart_tol_(chart_tol) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw DomainError("curvature radius must be positive and finite");
    }
    if (!(chart_tol > 0.0)) {
        throw DomainError("chart tolerance must be positive");
    }
}

const char* chart_name(Chart chart) noexcept {
    switch (chart) {
        case Chart::hyperboloid: return "hyperboloid";
        case Chart::disk: return "disk";
        case Chart::halfplane: return "halfplane";
    }
    return "unknown";
}

Chart chart_from_name(const char* name) {
    if (std::strcmp(name, "hyperboloid") == 0) return Chart::hyperboloid;
    if (std::strcmp(name, "disk") == 0) return Chart::disk;
    if (std::strcmp(name, "halfplane") == 0) return Chart::halfplane;
    throw UsageError(std::string("unknown chart '") + name + "'");
}

Chart chart_of(const ChartPoint& p) noexcept {
    switch (p.index()) {
        case 0: return Chart::hyperboloid;
        case 1: return Chart::disk;
        default: return Chart::halfplane;
    }
}

double lorentz_inner(const Vec3& a, const Vec3& b) noexcept {
    return a.x * b.x + a.y * b.y - a.z * b.z;
}

bool on_upper_sheet(const Curvature& ctx, const Vec3& q) noexcept {
    const double r2 = sq(ctx.radius());
    const double scale = r2 + sq(q.x) + sq(q.y) + sq(q.z);
    return q.z > 0.0 && std::abs(lorentz_inner(q, q) + r2) <= ctx.chart_tol() * scale;
}

bool in_disk(const Curvature& ctx, cplx z) noexcept {
    return std::isfinite(z.real()) && std::isfinite(z.imag()) && std::abs(z) < ctx.radius();
}

bool in_halfplane(const Curvature&, cplx w) noexcept {
    return std::isfinite(w.real()) && w.imag() > 0.0 && std::isfinite(w.imag());
}

void validate(const Curvature& ctx, const ChartPoint& p) {
    if (const auto* h = std::get_if<HyperboloidPoint>(&p)) {
        if (!on_upper_sheet(ctx, h->q)) throw DomainError("point is off the upper sheet");
    } else if (const auto* d = std::get_if<DiskPoint>(&p)) {
        require_disk(ctx, d->z);
    } else {
        require_halfplane(ctx, std::get<HalfPlanePoint>(p).w);
    }
}

DiskPoint disk_from_hyperboloid(const Curvature& ctx, const HyperboloidPoint& p) {
    if (!on_upper_sheet(ctx, p.q)) throw DomainError("point is off the upper sheet");
    const double R = ctx.radius();
    const double s = R / (R + p.q.z);
    return DiskPoint{cplx(p.q.x * s, p.q.y * s)};
}

HyperboloidPoint hyperboloid_from_disk(const Curvature& ctx, const DiskPoint& p) {
    require_disk(ctx, p.z);
    const double R = ctx.radius();
    const double r2 = std::norm(p.z);
    const double D = R * R - r2;
    return HyperboloidPoint{Vec3{2.0 * R * R * p.z.real() / D, 2.0 * R * R * p.z.imag() / D,
                                 R * (r2 + R * R) / D}};
}

HalfPlanePoint halfplane_from_disk(const Curvature& ctx, const DiskPoint& p) {
    require_disk(ctx, p.z);
    const double R = ctx.radius();
    const cplx I(0.0, 1.0);
    return HalfPlanePoint{I * R * (R - p.z) / (R + p.z)};
}

DiskPoint disk_from_halfplane(const Curvature& ctx, const HalfPlanePoint& p) {
    require_halfplane(ctx, p.w);
    const double R = ctx.radius();
    const cplx I(0.0, 1.0);
    return DiskPoint{(-R * p.w + I * R * R) / (p.w + I * R)};
}

HyperboloidPoint to_hyperboloid(const Curvature& ctx, const ChartPoint& p) {
    if (const auto* h = std::get_if<HyperboloidPoint>(&p)) {
        if (!on_upper_sheet(ctx, h->q)) throw DomainError("point is off the upper sheet");
        return *h;
    }
    return hyperboloid_from_disk(ctx, to_disk(ctx, p));
}

DiskPoint to_disk(const Curvature& ctx, const ChartPoint& p) {
    if (const auto* h = std::get_if<HyperboloidPoint>(&p)) return disk_from_hyperboloid(ctx, *h);
    if (const auto* d = std::get_if<DiskPoint>(&p)) {
        require_disk(ctx, d->z);
        return *d;
    }
    return disk_from_halfplane(ctx, std::get<HalfPlanePoint>(p));
}

HalfPlanePoint to_halfplane(const Curvature& ctx, const ChartPoint& p) {
    if (const auto* h = std::get_if<HalfPlanePoint>(&p)) {
        require_halfplane(ctx, h->w);
        return *h;
    }
    return halfplane_from_disk(ctx, to_disk(ctx, p));
}

PlanarState halfplane_state_from_disk(const Curvature& ctx, const PlanarState& s) {
    const double R = ctx.radius();
    const cplx I(0.0, 1.0);
    const cplx jac = -2.0 * I * R * R / ((R + s.pos) * (R + s.pos));
    return PlanarState{halfplane_from_disk(ctx, DiskPoint{s.pos}).w, jac * s.vel};
}

PlanarState disk_state_from_halfplane(const Curvature& ctx, const PlanarState& s) {
    const double R = ctx.radius();
    const cplx I(0.0, 1.0);
    const cplx jac = -2.0 * I * R * R / ((s.pos + I * R) * (s.pos + I * R));
    return PlanarState{disk_from_halfplane(ctx, HalfPlanePoint{s.pos}).z, jac * s.vel};
}

SpatialState hyperboloid_state_from_disk(const Curvature& ctx, const PlanarState& s) {
    const double R = ctx.radius();
    const HyperboloidPoint q = hyperboloid_from_disk(ctx, DiskPoint{s.pos});
    const double u = s.pos.real(), v = s.pos.imag();
    const double du = s.vel.real(), dv = s.vel.imag();
    const double D = R * R - u * u - v * v;
    const double radial = u * du + v * dv;
    const double c = 2.0 * R * R / (D * D);
    const Vec3 dq{c * (du * D + 2.0 * u * radial), c * (dv * D + 2.0 * v * radial),
                  4.0 * R * R * R * radial / (D * D)};
    return SpatialState{q.q, dq};
}

PlanarState disk_state_from_hyperboloid(const Curvature& ctx, const SpatialState& s) {
    const double R = ctx.radius();
    const DiskPoint p = disk_from_hyperboloid(ctx, HyperboloidPoint{s.pos});
    const double den = sq(R + s.pos.z);
    const double du = R * (s.vel.x * (R + s.pos.z) - s.pos.x * s.vel.z) / den;
    const double dv = R * (s.vel.y * (R + s.pos.z) - s.pos.y * s.vel.z) / den;
    return PlanarState{p.z, cplx(du, dv)};
}

double disk_metric_factor(const Curvature& ctx, cplx z) noexcept {
    const double R = ctx.radius();
    return 4.0 * sq(R * R) / sq(R * R - std::norm(z));
}

double halfplane_metric_factor(const Curvature& ctx, cplx w) noexcept {
    return sq(ctx.radius() / w.imag());
}

double geodesic_distance(const Curvature& ctx, const ChartPoint& a, const ChartPoint& b) {
    // Points in a common complex chart use the native cosh(d/R) - 1, which has no cancellation.
    const double R = ctx.radius();
    double native = -1.0;
    if (const auto *za = std::get_if<DiskPoint>(&a), *zb = std::get_if<DiskPoint>(&b); za && zb) {
        require_disk(ctx, za->z);
        require_disk(ctx, zb->z);
        native = 2.0 * R * R * std::norm(za->z - zb->z) / ((R * R - std::norm(za->z)) * (R * R - std::norm(zb->z)));
    } else if (const auto *wa = std::get_if<HalfPlanePoint>(&a), *wb = std::get_if<HalfPlanePoint>(&b); wa && wb) {
        require_halfplane(ctx, wa->w);
        require_halfplane(ctx, wb->w);
        native = std::norm(wa->w - wb->w) / (2.0 * wa->w.imag() * wb->w.imag());
    }
    if (native >= 0.0) return R * std::log1p(native + std::sqrt(native * (native + 2.0)));

    const Vec3 qa = to_hyperboloid(ctx, a).q;
    const Vec3 qb = to_hyperboloid(ctx, b).q;
    double delta = cosh_minus_one(ctx, qa, qb);
    if (delta < 0.0) {
        const double scale = 1.0 - lorentz_inner(qa, qb) / sq(ctx.radius());
        if (delta < -ctx.chart_tol() * scale) {
            throw DomainError("acosh argument below 1: points are not on a common sheet");
        }
        delta = 0.0;
    }
    // acosh(1 + delta), written to keep relative accuracy for nearby points
    return ctx.radius() * std::log1p(delta + std::sqrt(delta * (delta + 2.0)));
}

ChristoffelSymbols christoffel_disk(const Curvature& ctx, const DiskPoint& p) {
    require_disk(ctx, p.z);
    const double R = ctx.radius();
    const double u = p.z.real(), v = p.z.imag();
    const double den = R * R - u * u - v * v;
    const double a = 2.0 * u / den;
    const double b = 2.0 * v / den;
    return ChristoffelSymbols{a, b, -a, -b, a, b};
}

cplx geodesic_acceleration_disk(const Curvature& ctx, const PlanarState& s) noexcept {
    const double R = ctx.radius();
    return -2.0 * std::conj(s.pos) * s.vel * s.vel / (R * R - std::norm(s.pos));
}

cplx geodesic_acceleration_halfplane(const PlanarState& s) noexcept {
    return 2.0 * s.vel * s.vel / (s.pos - std::conj(s.pos));
}

PlanarState geodesic_flow_disk(const Curvature& ctx, const PlanarState& s, double t) {
    require_disk(ctx, s.pos);
    if (s.vel == cplx(0.0, 0.0) || t == 0.0) return s;
    const double R = ctx.radius();
    const double R2 = R * R;
    const cplx p = s.pos;
    const double D = R2 - std::norm(p);
    // Move p to the center, where geodesics are diameters z = R tanh(|v| t / R).
    const cplx v0 = s.vel * R2 / D;
    const double speed = std::abs(v0);
    const double arg = speed * t / R;
    const cplx dir = v0 / speed;
    const cplx zeta = dir * R * std::tanh(arg);
    const double sech = 1.0 / std::cosh(arg);
    const cplx zeta_dot = v0 * sech * sech;
    const cplx den = R2 + std::conj(p) * zeta;
    const PlanarState out{R2 * (zeta + p) / den, R2 * D / (den * den) * zeta_dot};
    if (!in_disk(ctx, out.pos)) {
        throw BoundaryEscapeError("geodesic reached the boundary circle at working precision", s);
    }
    return out;
}

PlanarState geodesic_flow_halfplane(const Curvature& ctx, const PlanarState& s, double t) {
    require_halfplane(ctx, s.pos);
    if (s.vel == cplx(0.0, 0.0) || t == 0.0) return s;
    try {
        const PlanarState d = geodesic_flow_disk(ctx, disk_state_from_halfplane(ctx, s), t);
        const double R = ctx.radius();
        if (std::abs(R + d.pos) <= 1e-15 * R) throw DomainError("image at the point at infinity");
        const PlanarState out = halfplane_state_from_disk(ctx, d);
        if (!in_halfplane(ctx, out.pos)) throw DomainError("image below the real axis");
        return out;
    } catch (const DomainError&) {
        throw BoundaryEscapeError("geodesic reached the ideal boundary at working precision", s);
    }
}

SpatialState geodesic_flow_hyperboloid(const Curvature& ctx, const SpatialState& s, double t) {
    if (!on_upper_sheet(ctx, s.pos)) throw DomainError("point is off the upper sheet");
    const double speed2 = lorentz_inner(s.vel, s.vel);
    if (speed2 <= 0.0 || t == 0.0) return s;
    const double R = ctx.radius();
    const double speed = std::sqrt(speed2);
    const double a = speed * t / R;
    const double ch = std::cosh(a), sh = std::sinh(a);
    return SpatialState{ch * s.pos + (R * sh / speed) * s.vel, (speed * sh / R) * s.pos + ch * s.vel};
}

double metric_speed_disk(const Curvature& ctx, const PlanarState& s) noexcept {
    return std::sqrt(disk_metric_factor(ctx, s.pos)) * std::abs(s.vel);
}

double metric_speed_halfplane(const Curvature& ctx, const PlanarState& s) noexcept {
    return std::sqrt(halfplane_metric_factor(ctx, s.pos)) * std::abs(s.vel);
}

}  // namespace hnb
