#include "hnb/isometries.hpp"

#include <algorithm>
#include <cmath>

namespace hnb {

namespace {

constexpr double pole_tol = 1e-14;

const cplx I(0.0, 1.0);

}  // namespace

double max_abs_diff(const Mat2& x, const Mat2& y) noexcept {
    return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d)});
}

bool is_su11(const Mat2& m, double tol) noexcept {
    return std::abs(m.d - std::conj(m.a)) <= tol && std::abs(m.c - std::conj(m.b)) <= tol &&
           std::abs(std::norm(m.a) - std::norm(m.b) - 1.0) <= tol;
}

bool is_sl2r(const Mat2& m, double tol) noexcept {
    const double imag = std::max({std::abs(m.a.imag()), std::abs(m.b.imag()), std::abs(m.c.imag()),
                                  std::abs(m.d.imag())});
    return imag <= tol && std::abs(m.det() - 1.0) <= tol;
}

bool acts_on_disk(Subgroup tag) noexcept {
    return tag == Subgroup::G1 || tag == Subgroup::G2 || tag == Subgroup::G3;
}

const char* subgroup_name(Subgroup tag) noexcept {
    switch (tag) {
        case Subgroup::G1: return "G1";
        case Subgroup::G2: return "G2";
        case Subgroup::G3: return "G3";
        case Subgroup::Phi1: return "Phi1";
        case Subgroup::Phi2: return "Phi2";
        case Subgroup::Phi3: return "Phi3";
    }
    return "unknown";
}

Mat2 subgroup_matrix(Subgroup tag, double t) {
    const double ch = std::cosh(t / 2.0), sh = std::sinh(t / 2.0);
    switch (tag) {
        case Subgroup::G1: return Mat2{ch, sh, sh, ch};
        case Subgroup::G2: return Mat2{std::polar(1.0, t / 2.0), 0.0, 0.0, std::polar(1.0, -t / 2.0)};
        case Subgroup::G3: return Mat2{ch, I * sh, -I * sh, ch};
        case Subgroup::Phi1: return Mat2{std::exp(t / 2.0), 0.0, 0.0, std::exp(-t / 2.0)};
        case Subgroup::Phi2: return Mat2{1.0, t, 0.0, 1.0};
        case Subgroup::Phi3: return Mat2{std::cos(t), std::sin(t), -std::sin(t), std::cos(t)};
    }
    throw UsageError("unknown subgroup");
}

Mat2 subgroup_generator(Subgroup tag) {
    switch (tag) {
        case Subgroup::G1: return Mat2{0.0, 0.5, 0.5, 0.0};
        case Subgroup::G2: return Mat2{0.5 * I, 0.0, 0.0, -0.5 * I};
        case Subgroup::G3: return Mat2{0.0, 0.5 * I, -0.5 * I, 0.0};
        case Subgroup::Phi1: return Mat2{0.5, 0.0, 0.0, -0.5};
        case Subgroup::Phi2: return Mat2{0.0, 1.0, 0.0, 0.0};
        case Subgroup::Phi3: return Mat2{0.0, 1.0, -1.0, 0.0};
    }
    throw UsageError("unknown subgroup");
}

cplx mobius_disk(const Curvature& ctx, const Mat2& m, cplx z) {
    const double R = ctx.radius();
    const cplx s = z / R;
    const cplx den = m.c * s + m.d;
    if (std::abs(den) < pole_tol) throw DomainError("Moebius map sends the point to infinity");
    return R * (m.a * s + m.b) / den;
}

cplx mobius_halfplane(const Mat2& m, cplx w) {
    const cplx den = m.c * w + m.d;
    if (std::abs(den) < pole_tol) throw DomainError("Moebius map sends the point to infinity");
    return (m.a * w + m.b) / den;
}

ChartPoint mobius_apply(const Curvature& ctx, const Mat2& m, const ChartPoint& p) {
    validate(ctx, p);
    if (const auto* d = std::get_if<DiskPoint>(&p)) {
        if (!is_su11(m, 1e-10)) throw UsageError("disk Moebius map needs an SU(1,1) matrix");
        return DiskPoint{mobius_disk(ctx, m, d->z)};
    }
    if (const auto* h = std::get_if<HalfPlanePoint>(&p)) {
        if (!is_sl2r(m, 1e-10)) throw UsageError("half-plane Moebius map needs an SL(2,R) matrix");
        return HalfPlanePoint{mobius_halfplane(m, h->w)};
    }
    throw UsageError("Moebius maps act on the disk or the half plane, not the hyperboloid");
}

cplx killing_field(const Curvature& ctx, Subgroup tag, cplx p) {
    const Mat2 X = subgroup_generator(tag);
    if (acts_on_disk(tag)) {
        const double R = ctx.radius();
        return R * X.b + (X.a - X.d) * p - X.c * p * p / R;
    }
    return X.b + (X.a - X.d) * p - X.c * p * p;
}

double killing_pushforward_check(const Curvature& ctx, Subgroup tag, cplx p) {
    if (tag != Subgroup::G2) throw UsageError("pushforward check is defined for the rotation subgroup G2");
    const Vec3 q = hyperboloid_from_disk(ctx, DiskPoint{p}).q;
    const PlanarState pushed = disk_state_from_hyperboloid(ctx, SpatialState{q, Vec3{-q.y, q.x, 0.0}});
    return std::abs(killing_field(ctx, tag, p) - pushed.vel);
}

std::vector<cplx> orbit(const Curvature& ctx, Subgroup tag, cplx p, std::span<const double> t_samples) {
    std::vector<cplx> out;
    out.reserve(t_samples.size());
    const bool disk = acts_on_disk(tag);
    validate(ctx, disk ? ChartPoint{DiskPoint{p}} : ChartPoint{HalfPlanePoint{p}});
    for (double t : t_samples) {
        const Mat2 m = subgroup_matrix(tag, t);
        out.push_back(disk ? mobius_disk(ctx, m, p) : mobius_halfplane(m, p));
    }
    return out;
}

}  // namespace hnb
