#include "hnb/relequil.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

namespace hnb {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

double sq(double x) { return x * x; }

// Left sides and per-unit-mass right-hand terms of one equilibrium system.
struct System {
    std::vector<cplx> lhs;
    std::vector<std::vector<cplx>> unit;  // unit[k][j]: contribution of body j at unit mass
};

void require_chart(const PlanarConfiguration& cfg, Chart chart, const char* what) {
    if (cfg.chart != chart) {
        throw UsageError(std::string(what) + " needs the " + chart_name(chart) + " chart");
    }
}

// Theta written through cosh(d/R) - 1 to avoid the cancellation in the difference of squares.
double disk_theta(double R, cplx zk, cplx zj, std::size_t k, std::size_t j) {
    const double Dk = R * R - std::norm(zk);
    const double Dj = R * R - std::norm(zj);
    const double delta = 2.0 * R * R * std::norm(zk - zj) / (Dk * Dj);
    const double d = R * std::acosh(1.0 + delta);
    if (d < collision_fraction * R) throw SingularityError(std::min(k, j), std::max(k, j), "collision in residual");
    return sq(Dk * Dj) * delta * (delta + 2.0);
}

double halfplane_theta(double R, cplx wk, cplx wj, std::size_t k, std::size_t j) {
    const double delta = std::norm(wk - wj) / (2.0 * wk.imag() * wj.imag());
    const double d = R * std::acosh(1.0 + delta);
    if (d < collision_fraction * R) throw SingularityError(std::min(k, j), std::max(k, j), "collision in residual");
    return 16.0 * sq(wk.imag() * wj.imag()) * delta * (delta + 2.0);
}

System build_system(REClass cls, const PlanarConfiguration& cfg) {
    const std::size_t n = cfg.bodies.size();
    const double R = cfg.ctx.radius();
    const double R2 = R * R, R3 = R2 * R;
    System s{std::vector<cplx>(n), std::vector<std::vector<cplx>>(n, std::vector<cplx>(n))};
    if (cls == REClass::elliptic) {
        require_chart(cfg, Chart::disk, "elliptic residual");
        for (std::size_t k = 0; k < n; ++k) {
            const cplx zk = cfg.bodies[k].pos;
            if (!in_disk(cfg.ctx, zk)) throw DomainError("body outside the disk");
            const double r2 = std::norm(zk);
            const double Dk = R2 - r2;
            s.lhs[k] = R3 * (R2 + r2) * zk / (4.0 * sq(sq(Dk)));
            for (std::size_t j = 0; j < n; ++j) {
                if (j == k) continue;
                const cplx zj = cfg.bodies[j].pos;
                const double theta = disk_theta(R, zk, zj, k, j);
                const double Dj = R2 - std::norm(zj);
                s.unit[k][j] = -Dj * Dj * (zj - zk) * (R2 - zk * std::conj(zj)) / (theta * std::sqrt(theta));
            }
        }
        return s;
    }
    require_chart(cfg, Chart::halfplane, "half-plane residual");
    for (std::size_t k = 0; k < n; ++k) {
        const cplx wk = cfg.bodies[k].pos;
        if (!in_halfplane(cfg.ctx, wk)) throw DomainError("body outside the half plane");
        const cplx gap = wk - std::conj(wk);
        const cplx gap4 = gap * gap * gap * gap;
        s.lhs[k] = cls == REClass::hyperbolic ? R3 * wk * (wk + std::conj(wk)) / (4.0 * gap4) : R3 / (2.0 * gap4);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            const cplx wj = cfg.bodies[j].pos;
            const double theta = halfplane_theta(R, wk, wj, k, j);
            const cplx aj = wj - std::conj(wj);
            s.unit[k][j] = aj * aj * (wk - wj) * (std::conj(wj) - wk) / (theta * std::sqrt(theta));
        }
    }
    return s;
}

ResidualReport report_from(REClass cls, const System& s, const PlanarConfiguration& cfg) {
    const std::size_t n = cfg.bodies.size();
    ResidualReport r;
    r.cls = cls;
    r.lhs = s.lhs;
    r.rhs.assign(n, cplx{});
    r.residuals.assign(n, cplx{});
    for (std::size_t k = 0; k < n; ++k) {
        double magnitude = std::abs(s.lhs[k]);
        for (std::size_t j = 0; j < n; ++j) {
            const cplx term = cfg.bodies[j].mass * s.unit[k][j];
            r.rhs[k] += term;
            magnitude += std::abs(term);
        }
        r.residuals[k] = s.lhs[k] - r.rhs[k];
        const double abs_res = std::abs(r.residuals[k]);
        r.norm = std::max(r.norm, abs_res);
        if (magnitude > 0.0) r.scaled_norm = std::max(r.scaled_norm, abs_res / magnitude);
    }
    return r;
}

// Bisection on a bracket with f(lo) and f(hi) of opposite sign, to the last representable digit.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Runs body(i, out) for i in [0, count) over `jobs` threads; each thread keeps its own
// accumulator and the accumulators are merged in thread order.
template <class Acc, class Body, class Merge>
Acc parallel_reduce(std::size_t count, unsigned jobs, Acc init, Body body, Merge merge) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    std::vector<Acc> partial(jobs, init);
    std::vector<std::exception_ptr> errors(jobs);
    auto work = [&](unsigned t) {
        try {
            for (std::size_t i = t; i < count; i += jobs) body(i, partial[t]);
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(work, t);
        for (auto& th : threads) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    Acc out = init;
    for (const auto& p : partial) out = merge(out, p);
    return out;
}

struct MinPair {
    double norm = std::numeric_limits<double>::infinity();
    double scaled = std::numeric_limits<double>::infinity();
};

MinPair merge_min(const MinPair& a, const MinPair& b) {
    return MinPair{std::min(a.norm, b.norm), std::min(a.scaled, b.scaled)};
}

}  // namespace

const char* re_class_name(REClass c) noexcept {
    switch (c) {
        case REClass::elliptic: return "elliptic";
        case REClass::hyperbolic: return "hyperbolic";
        case REClass::parabolic: return "parabolic";
    }
    return "unknown";
}

ResidualReport residual(REClass cls, const PlanarConfiguration& cfg) {
    return report_from(cls, build_system(cls, cfg), cfg);
}

ResidualReport elliptic_residual(const PlanarConfiguration& cfg) { return residual(REClass::elliptic, cfg); }
ResidualReport hyperbolic_residual(const PlanarConfiguration& cfg) { return residual(REClass::hyperbolic, cfg); }
ResidualReport parabolic_residual(const PlanarConfiguration& cfg) { return residual(REClass::parabolic, cfg); }

double fit_mass_scale(REClass cls, const PlanarConfiguration& cfg) {
    const System s = build_system(cls, cfg);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < s.lhs.size(); ++k) {
        cplx b{};
        for (std::size_t j = 0; j < s.lhs.size(); ++j) b += cfg.bodies[j].mass * s.unit[k][j];
        num += (std::conj(b) * s.lhs[k]).real();
        den += std::norm(b);
    }
    if (den == 0.0) throw InfeasibleError("right-hand side vanishes for every body; no mass scale closes the system");
    return num / den;
}

PlanarConfiguration scale_masses(PlanarConfiguration cfg, double s) {
    for (auto& b : cfg.bodies) b.mass *= s;
    return cfg;
}

// ---- elliptic two-body ----

double two_body_shape_function(double m1, double m2, double alpha, double R, double x) noexcept {
    const double R2 = R * R;
    return m1 * alpha * (R2 + alpha * alpha) * sq(R2 - x * x) - m2 * x * (R2 + x * x) * sq(R2 - alpha * alpha);
}

double two_body_shape_derivative(double m1, double m2, double alpha, double R, double x) noexcept {
    const double R2 = R * R;
    return -4.0 * m1 * alpha * (R2 + alpha * alpha) * x * (R2 - x * x) -
           m2 * (R2 + 3.0 * x * x) * sq(R2 - alpha * alpha);
}

double solve_two_body_elliptic(double m1, double m2, double alpha, double R) {
    if (!(m1 > 0.0) || !(m2 > 0.0)) throw DomainError("masses must be positive");
    if (!(alpha > 0.0) || !(alpha < R)) throw DomainError("need 0 < alpha < R");
    auto f = [&](double x) { return two_body_shape_function(m1, m2, alpha, R, x); };
    // f(0) > 0 and f(R) < 0 for every admissible input
    return bisect(f, 0.0, R);
}

TwoBodyEllipticSolution two_body_elliptic(double m1, double m2, double alpha, double R) {
    TwoBodyEllipticSolution out;
    out.r = solve_two_body_elliptic(m1, m2, alpha, R);
    PlanarConfiguration cfg{Curvature(R), Chart::disk, {{m1, cplx(alpha, 0.0), {}}, {m2, cplx(-out.r, 0.0), {}}}};
    out.scale = fit_mass_scale(REClass::elliptic, cfg);
    out.cfg = scale_masses(cfg, out.scale);
    for (auto& b : out.cfg.bodies) b.vel = -0.5 * I * b.pos;
    return out;
}

NoDoubleRootCertificate two_body_no_double_roots_certificate(double m1, double m2, double alpha, double R) {
    NoDoubleRootCertificate c;
    c.root = solve_two_body_elliptic(m1, m2, alpha, R);
    c.derivative_at_root = two_body_shape_derivative(m1, m2, alpha, R, c.root);
    // x^4 + 6 R^2 x^2 + R^4 = 0 as a quadratic in x^2
    const double R2 = R * R;
    const cplx disc = std::sqrt(cplx(36.0 * R2 * R2 - 4.0 * R2 * R2, 0.0));
    const std::array<cplx, 2> y{(-6.0 * R2 + disc) / 2.0, (-6.0 * R2 - disc) / 2.0};
    for (std::size_t i = 0; i < 2; ++i) {
        const cplx x = std::sqrt(y[i]);
        c.quartic_roots[2 * i] = x;
        c.quartic_roots[2 * i + 1] = -x;
    }
    bool real_root = false;
    for (const cplx& x : c.quartic_roots) real_root = real_root || std::abs(x.imag()) == 0.0;
    c.holds = !real_root && c.derivative_at_root < 0.0;
    return c;
}

// ---- elliptic three-body ----

double euler_shape_function(double x, double R) noexcept {
    const double R2 = R * R;
    return (R2 + x * x) * x * x * x / sq(sq(R2 - x * x));
}

EulerThreeResult euler_elliptic_three(double m2, double m3, double alpha, double r, double R) {
    if (!(m2 > 0.0) || !(m3 > 0.0)) throw DomainError("masses must be positive");
    if (!(alpha > 0.0 && alpha < R && r > 0.0 && r < R)) throw DomainError("need 0 < alpha, r < R");
    EulerThreeResult out;
    const double R2 = R * R;
    const double Da2 = sq(R2 - alpha * alpha), Dr2 = sq(R2 - r * r);
    const double left = alpha * alpha * alpha * (R2 + alpha * alpha) * Dr2 * Dr2;
    const double right = r * r * r * (R2 + r * r) * Da2 * Da2;
    out.determinant = left - right;
    if (std::abs(out.determinant) > 1e-12 * (left + right)) {
        out.reason = "determinant is nonzero: the outer bodies must sit at equal distance from the center";
        return out;
    }
    if (std::abs(m2 - m3) > 1e-12 * std::max(m2, m3)) {
        out.reason = "outer masses differ: the linear system forces m2 = m3";
        return out;
    }
    PlanarConfiguration cfg{Curvature(R), Chart::disk,
                            {{1.0, cplx(0.0, 0.0), {}}, {m2, cplx(alpha, 0.0), {}}, {m3, cplx(-alpha, 0.0), {}}}};
    const System s = build_system(REClass::elliptic, cfg);
    // Body 2's equation is linear in the central mass.
    out.central_mass = ((s.lhs[1] - m3 * s.unit[1][2]) / s.unit[1][0]).real();
    if (!(out.central_mass > 0.0)) {
        out.reason = "outer masses too large: the central mass would be nonpositive";
        return out;
    }
    cfg.bodies[0].mass = out.central_mass;
    for (auto& b : cfg.bodies) b.vel = -0.5 * I * b.pos;
    out.cfg = cfg;
    out.feasible = true;
    return out;
}

double restricted_shape_function(double x, double R) noexcept {
    const double R2 = R * R;
    return (R2 + x * x) * x / sq(R2 - x * x);
}

RestrictedProbeResult restricted_euler_probe(double m2, double m3, double alpha, double beta, double c, double R) {
    if (!(m2 > 0.0) || m2 != m3) throw UsageError("restricted probe needs equal positive primary masses");
    if (!(alpha > 0.0 && alpha < R && beta > 0.0 && beta < R && std::abs(c) < R)) {
        throw DomainError("need 0 < alpha, beta < R and |c| < R");
    }
    RestrictedProbeResult out;
    out.h_alpha = restricted_shape_function(alpha, R);
    out.h_beta = restricted_shape_function(beta, R);
    PlanarConfiguration cfg{Curvature(R), Chart::disk,
                            {{0.0, cplx(c, 0.0), {}}, {m2, cplx(alpha, 0.0), {}}, {m3, cplx(-beta, 0.0), {}}},
                            true};
    const ResidualReport rep = elliptic_residual(cfg);
    for (std::size_t k = 0; k < 3; ++k) out.residuals[k] = rep.residuals[k];
    if (std::abs(out.h_alpha - out.h_beta) > 1e-12 * std::max(out.h_alpha, out.h_beta)) {
        out.reason = "primaries at different distances from the center (h is strictly increasing)";
        return out;
    }
    const double probe_scale = std::abs(rep.lhs[0]) + std::abs(rep.rhs[0]) + std::abs(rep.lhs[1]);
    if (std::abs(out.residuals[0]) > 1e-10 * probe_scale) {
        out.reason = "probe away from the center: its equation cannot balance";
        return out;
    }
    out.primary_mass = m2 * fit_mass_scale(REClass::elliptic, cfg);
    out.feasible = true;
    return out;
}

std::array<double, 2> lagrange_angle_conditions(double theta2, double theta3, double r, double R) {
    auto D = [&](double phi) {
        return std::pow(8.0, 1.5) * R * R * R * r * r * r * std::pow(1.0 - std::cos(phi), 1.5) *
               std::pow(R * R * R * R + r * r * r * r - 2.0 * R * R * r * r * std::cos(phi), 1.5);
    };
    const double D12 = D(theta2), D23 = D(theta3 - theta2), D13 = D(theta3);
    const double a = (1.0 - std::cos(theta2)) / D12;
    const double b = (1.0 - std::cos(theta3 - theta2)) / D23;
    const double c = 2.0 * (1.0 - std::cos(theta3)) / D13;
    const double p = std::sin(theta2) / D12;
    const double q = std::sin(theta3 - theta2) / D23;
    return {(a + b - c) / (std::abs(a) + std::abs(b) + std::abs(c)),
            (p - q) / (std::abs(p) + std::abs(q))};
}

LagrangeResult lagrange_elliptic_three(double r, double R) {
    if (!(r > 0.0 && r < R)) throw DomainError("need 0 < r < R");
    PlanarConfiguration cfg{Curvature(R), Chart::disk, {}};
    for (int k = 0; k < 3; ++k) cfg.bodies.push_back({1.0, std::polar(r, 2.0 * pi * k / 3.0), {}});
    const System s = build_system(REClass::elliptic, cfg);
    cplx unit_rhs{};
    for (std::size_t j = 1; j < 3; ++j) unit_rhs += s.unit[0][j];
    LagrangeResult out;
    out.mass = (s.lhs[0] / unit_rhs).real();
    for (auto& b : cfg.bodies) {
        b.mass = out.mass;
        b.vel = -0.5 * I * b.pos;
    }
    out.cfg = cfg;
    const auto cond = lagrange_angle_conditions(2.0 * pi / 3.0, 4.0 * pi / 3.0, r, R);
    out.angle_real_residual = cond[0];
    out.angle_imag_residual = cond[1];
    return out;
}

std::vector<double> lagrange_angle_candidates() {
    // cos(2t) - cos(t) = (2 cos t + 1)(cos t - 1)
    std::vector<double> out;
    for (double c : {1.0, -0.5}) {
        const double t = std::acos(c);
        out.push_back(t);
        out.push_back(2.0 * pi - t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---- hyperbolic ----

double slope_height(double theta) noexcept { return sq(std::sin(theta)) / std::cos(theta); }

TwoBodyHyperbolicResult solve_two_body_hyperbolic(double m1, double m2, double theta1, double R) {
    if (!(m1 > 0.0) || !(m2 > 0.0)) throw DomainError("masses must be positive");
    TwoBodyHyperbolicResult out;
    out.theta1 = theta1;
    if (!(theta1 > 0.0 && theta1 < pi)) {
        out.reason = "angle outside (0, pi)";
        return out;
    }
    if (std::abs(theta1 - pi / 2.0) < 1e-12) {
        out.reason = "body on the imaginary axis: no hyperbolic equilibrium has a body on the geodesic ray";
        return out;
    }
    // m1 F(theta2) = -m2 F(theta1): the heavier body sits closer to the axis
    const double target = -(m2 / m1) * slope_height(theta1);
    auto f = [&](double t) { return slope_height(t) - target; };
    // slope_height is increasing on (0, pi/2) and on (pi/2, pi), with opposite signs
    const double eps = 1e-15;
    out.theta2 = theta1 < pi / 2.0 ? bisect(f, pi / 2.0 + eps, pi) : bisect(f, 0.0, pi / 2.0 - eps);
    if (m1 == m2) out.theta2 = pi - theta1;
    PlanarConfiguration cfg{Curvature(R), Chart::halfplane,
                            {{m1, std::polar(R, theta1), {}}, {m2, std::polar(R, out.theta2), {}}}};
    out.scale = fit_mass_scale(REClass::hyperbolic, cfg);
    if (!(out.scale > 0.0)) {
        out.reason = "mass scale closing the system is nonpositive";
        return out;
    }
    out.cfg = scale_masses(cfg, out.scale);
    for (auto& b : out.cfg.bodies) b.vel = -0.5 * b.pos;
    out.feasible = true;
    return out;
}

double three_body_angle_function(double x) noexcept {
    return std::pow(std::cos(x), 3) / std::pow(std::sin(x), 4);
}

bool three_body_angles_admissible(double theta1, double theta3) {
    auto inside = [](double t) { return t != 0.0 && std::abs(t) < pi / 2.0; };
    if (!inside(theta1) || !inside(theta3)) return false;
    const double q1 = three_body_angle_function(theta1), q3 = three_body_angle_function(theta3);
    // q is even and strictly monotone on each side, so equal values force |theta1| = |theta3|
    if (std::abs(q1 - q3) > 1e-12 * std::max(q1, q3)) return false;
    // equal angles put two bodies on the same point of the common half circle
    return std::abs(theta1 - theta3) > 1e-12;
}

ThreeBodyHyperbolicResult solve_three_body_hyperbolic(double theta1, double R, double middle_ratio) {
    if (theta1 == 0.0) throw DomainError("outer body on the geodesic ray collides with the middle body");
    if (!(std::abs(theta1) < pi / 2.0)) throw DomainError("angle must lie in (-pi/2, pi/2)");
    if (!(middle_ratio > 0.0)) throw DomainError("mass ratio must be positive");
    ThreeBodyHyperbolicResult out;
    out.theta1 = theta1;
    PlanarConfiguration cfg{Curvature(R), Chart::halfplane,
                            {{1.0, I * R * std::polar(1.0, theta1), {}},
                             {1.0, I * R, {}},
                             {1.0, I * R * std::polar(1.0, -theta1), {}}}};
    const System s = build_system(REClass::hyperbolic, cfg);
    // Body 1: lhs = m (ratio u12 + u13). All three numbers share one direction.
    const cplx combined = middle_ratio * s.unit[0][1] + s.unit[0][2];
    if (std::abs(combined) == 0.0) {
        out.reason = "mass equation is degenerate";
        return out;
    }
    out.outer_mass = (s.lhs[0] / combined).real();
    out.middle_mass = middle_ratio * out.outer_mass;
    if (!(out.outer_mass > 0.0)) {
        out.reason = "solved masses are not positive at this angle";
        return out;
    }
    cfg.bodies[0].mass = out.outer_mass;
    cfg.bodies[1].mass = out.middle_mass;
    cfg.bodies[2].mass = out.outer_mass;
    for (auto& b : cfg.bodies) b.vel = -0.5 * b.pos;
    out.cfg = cfg;
    out.feasible = true;
    return out;
}

SweepSummary hyperbolic_nogo_sweep(NoGoKind kind, std::size_t samples, double R, std::uint64_t seed, unsigned jobs) {
    const Curvature ctx(R);
    auto body = [&](std::size_t i, MinPair& acc) {
        std::mt19937_64 rng(splitmix(seed ^ splitmix(i)));
        std::uniform_real_distribution<double> mass(0.1, 10.0), height(0.1 * R, 3.0 * R), angle(0.05, pi - 0.05);
        PlanarConfiguration cfg{ctx, Chart::halfplane, {}};
        if (kind == NoGoKind::imaginary_axis) {
            cfg.bodies = {{mass(rng), I * height(rng), {}}, {mass(rng), I * height(rng), {}}};
        } else {
            const double t = angle(rng);
            cfg.bodies = {{mass(rng), std::polar(height(rng), t), {}}, {mass(rng), std::polar(height(rng), t), {}}};
        }
        const ResidualReport r = hyperbolic_residual(cfg);
        acc = merge_min(acc, MinPair{r.norm, r.scaled_norm});
    };
    const MinPair m = parallel_reduce(samples, jobs, MinPair{}, body, merge_min);
    return SweepSummary{samples, m.norm, m.scaled};
}

// ---- parabolic ----

StackSigns parabolic_stack_signs(const PlanarConfiguration& cfg, std::size_t k) {
    const ResidualReport r = parabolic_residual(cfg);
    auto sign = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
    return StackSigns{sign(r.lhs[k].real()), sign(r.rhs[k].real())};
}

namespace {

struct ParabolicAcc {
    std::size_t excluded = 0;
    std::size_t contradictions = 0;
    MinPair min;
    // best general configuration seen by this worker, kept for local refinement
    double best_scaled = std::numeric_limits<double>::infinity();
    std::vector<double> best_params;
};

// Parameters: masses, real parts, imaginary parts, each of length n.
PlanarConfiguration parabolic_config(const Curvature& ctx, std::span<const double> p, std::size_t n) {
    PlanarConfiguration cfg{ctx, Chart::halfplane, {}};
    for (std::size_t k = 0; k < n; ++k) cfg.bodies.push_back({p[k], cplx(p[n + k], p[2 * n + k]), {}});
    return cfg;
}

}  // namespace

ParabolicCertificate parabolic_nonexistence_certificate(std::size_t n, double R, std::size_t samples,
                                                        std::uint64_t seed, unsigned jobs) {
    if (n < 2) throw UsageError("parabolic certificate needs at least two bodies");
    const Curvature ctx(R);
    const std::array<double, 3> lo{0.1, -2.0 * R, 0.1 * R};
    const std::array<double, 3> hi{10.0, 2.0 * R, 2.0 * R};

    auto body = [&](std::size_t i, ParabolicAcc& acc) {
        std::mt19937_64 rng(splitmix(seed ^ splitmix(i)));
        std::vector<double> p(3 * n);
        for (std::size_t g = 0; g < 3; ++g) {
            std::uniform_real_distribution<double> u(lo[g], hi[g]);
            for (std::size_t k = 0; k < n; ++k) p[g * n + k] = u(rng);
        }
        // Stage (i): a generic configuration. At the body with the largest real part every
        // imaginary term has the same sign, so the imaginary residual cannot vanish.
        {
            const PlanarConfiguration cfg = parabolic_config(ctx, p, n);
            const ResidualReport r = parabolic_residual(cfg);
            std::size_t right = 0;
            for (std::size_t k = 1; k < n; ++k) {
                if (cfg.bodies[k].pos.real() > cfg.bodies[right].pos.real()) right = k;
            }
            if (r.residuals[right].imag() < 0.0) ++acc.excluded;
            acc.min = merge_min(acc.min, MinPair{r.norm, r.scaled_norm});
            if (r.scaled_norm < acc.best_scaled) {
                acc.best_scaled = r.scaled_norm;
                acc.best_params = p;
            }
        }
        // Stage (ii): the same masses and heights stacked on one vertical line.
        {
            std::uniform_real_distribution<double> shift(lo[1], hi[1]);
            const double a0 = shift(rng);
            for (std::size_t k = 0; k < n; ++k) p[n + k] = a0;
            const PlanarConfiguration cfg = parabolic_config(ctx, p, n);
            std::size_t top = 0;
            for (std::size_t k = 1; k < n; ++k) {
                if (cfg.bodies[k].pos.imag() > cfg.bodies[top].pos.imag()) top = k;
            }
            const ResidualReport r = parabolic_residual(cfg);
            if (r.lhs[top].real() > 0.0 && r.rhs[top].real() < 0.0) ++acc.contradictions;
            acc.min = merge_min(acc.min, MinPair{r.norm, r.scaled_norm});
        }
    };
    auto merge = [](const ParabolicAcc& a, const ParabolicAcc& b) {
        ParabolicAcc out;
        out.excluded = a.excluded + b.excluded;
        out.contradictions = a.contradictions + b.contradictions;
        out.min = merge_min(a.min, b.min);
        const bool take_b = b.best_scaled < a.best_scaled;
        out.best_scaled = take_b ? b.best_scaled : a.best_scaled;
        out.best_params = take_b ? b.best_params : a.best_params;
        return out;
    };
    ParabolicAcc acc = parallel_reduce(samples, jobs, ParabolicAcc{}, body, merge);

    // Local refinement of the best generic sample by compass search inside the box.
    if (!acc.best_params.empty()) {
        std::vector<double> p = acc.best_params;
        auto score = [&](const std::vector<double>& q) {
            try {
                return parabolic_residual(parabolic_config(ctx, q, n));
            } catch (const SingularityError&) {
                ResidualReport r;
                r.norm = r.scaled_norm = std::numeric_limits<double>::infinity();
                return r;
            }
        };
        ResidualReport best = score(p);
        for (double step = 0.25; step > 1e-6; step *= 0.5) {
            bool improved = true;
            while (improved) {
                improved = false;
                for (std::size_t i = 0; i < p.size(); ++i) {
                    const std::size_t g = i / n;
                    for (double dir : {1.0, -1.0}) {
                        std::vector<double> q = p;
                        q[i] = std::clamp(q[i] + dir * step * (hi[g] - lo[g]), lo[g], hi[g]);
                        const ResidualReport r = score(q);
                        if (r.scaled_norm < best.scaled_norm) {
                            best = r;
                            p = std::move(q);
                            improved = true;
                        }
                    }
                }
            }
        }
        acc.min = merge_min(acc.min, MinPair{best.norm, best.scaled_norm});
    }

    ParabolicCertificate c;
    c.n = n;
    c.samples = samples;
    c.excluded_noncollinear = acc.excluded;
    c.stacks_with_contradiction = acc.contradictions;
    c.min_norm = acc.min.norm;
    c.min_scaled_norm = acc.min.scaled;
    c.holds = acc.excluded == samples && acc.contradictions == samples && c.min_scaled_norm > 0.0;
    return c;
}

// ---- closed-form orbits ----

const char* family_name(FamilyTag tag) noexcept {
    switch (tag) {
        case FamilyTag::elliptic2: return "elliptic2";
        case FamilyTag::euler3: return "euler3";
        case FamilyTag::lagrange3: return "lagrange3";
        case FamilyTag::hyperbolic2: return "hyperbolic2";
        case FamilyTag::hyperbolic3: return "hyperbolic3";
        case FamilyTag::parabolic: return "parabolic";
    }
    return "unknown";
}

REClass family_class(FamilyTag tag) noexcept {
    switch (tag) {
        case FamilyTag::elliptic2:
        case FamilyTag::euler3:
        case FamilyTag::lagrange3: return REClass::elliptic;
        case FamilyTag::hyperbolic2:
        case FamilyTag::hyperbolic3: return REClass::hyperbolic;
        case FamilyTag::parabolic: return REClass::parabolic;
    }
    return REClass::elliptic;
}

REFamily make_family(FamilyTag tag, const PlanarConfiguration& cfg, double tol) {
    REFamily f{tag, cfg, 0.0, false};
    f.residual_norm = residual(family_class(tag), cfg).norm;
    f.verified = f.residual_norm < tol;
    return f;
}

Trajectory re_trajectory(const REFamily& family, std::span<const double> t_grid) {
    if (!family.verified) throw UsageError("relative-equilibrium family has not been verified");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw UsageError("time grid must be strictly increasing");
    }
    const REClass cls = family_class(family.tag);
    Trajectory traj;
    for (double t : t_grid) {
        PlanarConfiguration cfg = family.cfg;
        for (auto& b : cfg.bodies) {
            switch (cls) {
                case REClass::elliptic:
                    b.pos = b.pos * std::polar(1.0, -0.5 * t);
                    b.vel = -0.5 * I * b.pos;
                    break;
                case REClass::hyperbolic:
                    b.pos = b.pos * std::exp(-0.5 * t);
                    b.vel = -0.5 * b.pos;
                    break;
                case REClass::parabolic:
                    b.pos = b.pos - 0.5 * t;
                    b.vel = cplx(-0.5, 0.0);
                    break;
            }
        }
        traj.integrals.push_back(first_integrals(cfg));
        traj.times.push_back(t);
        traj.states.push_back(std::move(cfg));
    }
    traj.termination = Termination::completed;
    return traj;
}

}  // namespace hnb
