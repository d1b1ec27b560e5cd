#include "hnb/invariants.hpp"

#include <algorithm>
#include <cmath>

namespace hnb {

namespace {

// Accumulates a complex sum and keeps track of the imaginary part that is dropped.
struct RealSum {
    cplx total{};

    void add(cplx term) { total += term; }
    double value(double& residue) const {
        residue = std::max(residue, std::abs(total.imag()));
        return total.real();
    }
};

}  // namespace

FirstIntegrals first_integrals_disk(const PlanarConfiguration& cfg) {
    if (cfg.chart != Chart::disk) throw UsageError("disk integrals need a disk configuration");
    const double R = cfg.ctx.radius();
    const double R2 = R * R;
    const cplx I(0.0, 1.0);
    double kinetic = 0.0;
    RealSum c1, c2, c3;
    for (const auto& b : cfg.bodies) {
        const cplx z = b.pos, zd = b.vel;
        const cplx zc = std::conj(z), zdc = std::conj(zd);
        const double D = R2 - std::norm(z);
        const double w = b.mass * R2 * R / (D * D);
        kinetic += 0.5 * b.mass * disk_metric_factor(cfg.ctx, z) * std::norm(zd);
        c1.add(I * w * (R2 * (zd - zdc) + zd * zc * zc - zdc * z * z));
        c2.add(w * (R2 * (zd + zdc) - zd * zc * zc - zdc * z * z));
        c3.add(2.0 * I * w * R * (zc * zd - z * zdc));
    }
    FirstIntegrals out;
    out.h = kinetic - potential_disk(cfg);
    out.c1 = c1.value(out.imag_residue);
    out.c2 = c2.value(out.imag_residue);
    out.c3 = c3.value(out.imag_residue);
    return out;
}

FirstIntegrals first_integrals_halfplane(const PlanarConfiguration& cfg) {
    if (cfg.chart != Chart::halfplane) throw UsageError("half-plane integrals need a half-plane configuration");
    const double R = cfg.ctx.radius();
    const double R2 = R * R;
    double kinetic = 0.0;
    RealSum c1, c2, c3;
    for (const auto& b : cfg.bodies) {
        const cplx w = b.pos, wd = b.vel;
        const cplx wc = std::conj(w), wdc = std::conj(wd);
        const cplx gap2 = (w - wc) * (w - wc);
        const cplx quad = wdc * w * w + wd * wc * wc;
        kinetic += 0.5 * b.mass * halfplane_metric_factor(cfg.ctx, w) * std::norm(wd);
        c1.add(-b.mass * R / gap2 * (quad - R2 * (wd + wdc)));
        c2.add(2.0 * b.mass * R2 / gap2 * (wd * wc + wdc * w));
        c3.add(b.mass * R / gap2 * (quad + R2 * (wd + wdc)));
    }
    FirstIntegrals out;
    out.h = kinetic - potential_halfplane(cfg);
    out.c1 = c1.value(out.imag_residue);
    out.c2 = c2.value(out.imag_residue);
    out.c3 = c3.value(out.imag_residue);
    return out;
}

FirstIntegrals first_integrals_hyperboloid(const SpatialConfiguration& cfg) {
    const double kappa = cfg.ctx.kappa();
    FirstIntegrals out;
    double kinetic = 0.0;
    for (const auto& b : cfg.bodies) {
        const Vec3& q = b.pos;
        const Vec3& v = b.vel;
        kinetic += 0.5 * b.mass * lorentz_inner(v, v) * (kappa * lorentz_inner(q, q));
        out.c1 += b.mass * (q.y * v.z - q.z * v.y);
        out.c2 += b.mass * (q.z * v.x - q.x * v.z);
        out.c3 += b.mass * (q.y * v.x - q.x * v.y);
    }
    out.h = kinetic - potential(cfg);
    return out;
}

FirstIntegrals first_integrals(const PlanarConfiguration& cfg) {
    return cfg.chart == Chart::disk ? first_integrals_disk(cfg) : first_integrals_halfplane(cfg);
}

FirstIntegrals first_integrals(const SpatialConfiguration& cfg) { return first_integrals_hyperboloid(cfg); }

double DriftReport::max() const noexcept { return std::max({h, c1, c2, c3}); }

DriftReport drift_report(std::span<const FirstIntegrals> samples, double floor) {
    DriftReport r;
    if (samples.empty()) return r;
    const FirstIntegrals& f0 = samples.front();
    auto rel = [floor](double v, double v0) { return std::abs(v - v0) / std::max(std::abs(v0), floor); };
    for (const auto& f : samples) {
        r.h = std::max(r.h, rel(f.h, f0.h));
        r.c1 = std::max(r.c1, rel(f.c1, f0.c1));
        r.c2 = std::max(r.c2, rel(f.c2, f0.c2));
        r.c3 = std::max(r.c3, rel(f.c3, f0.c3));
    }
    return r;
}

}  // namespace hnb
