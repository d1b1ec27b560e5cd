// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hnb/integrator.hpp"
#include "hnb/invariants.hpp"
#include "hnb/isometries.hpp"
#include "hnb/relequil.hpp"
#include "support.hpp"

using namespace hnb;

namespace {

constexpr double pi = std::numbers::pi;
int failures = 0;

void verdict(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<double> grid(double t0, double t1, int n) {
    std::vector<double> out;
    for (int i = 0; i <= n; ++i) out.push_back(t0 + (t1 - t0) * i / n);
    return out;
}

double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(a)); }

const PlanarConfiguration generic_pair{Curvature(1.0), Chart::disk,
                                       {{1.0, {0.3, 0.1}, {0.0, 0.4}}, {1.5, {-0.2, -0.25}, {0.1, -0.3}}}};

IntegratorSettings sampled(double tol, std::vector<double> ts) {
    IntegratorSettings s;
    s.rel_tol = tol;
    s.abs_tol = tol * 1e-2;
    s.sample_times = std::move(ts);
    return s;
}

struct ChartRuns {
    Trajectory disk, half;
    SpatialTrajectory sheet;
};

ChartRuns run_all_charts(double tol, const std::vector<double>& ts) {
    const auto s = sampled(tol, ts);
    return {integrate(generic_pair, s, 5.0), integrate(to_halfplane(generic_pair), s, 5.0),
            integrate(to_hyperboloid(generic_pair), s, 5.0)};
}

double chart_drift(const ChartRuns& r) {
    return std::max({drift_report(r.disk.integrals).max(), drift_report(r.half.integrals).max(),
                     drift_report(r.sheet.integrals).max()});
}

void cross_chart_and_conservation() {
    const auto ts = grid(0.0, 5.0, 50);
    const auto t0 = std::chrono::steady_clock::now();
    const ChartRuns runs = run_all_charts(1e-10, ts);
    const double elapsed = seconds_since(t0);

    bool completed = runs.disk.termination == Termination::completed &&
                     runs.half.termination == Termination::completed &&
                     runs.sheet.termination == Termination::completed;
    double worst = 0.0;
    for (double t : ts) {
        const auto& d = runs.disk.states[runs.disk.index_of(t)];
        const auto& h = runs.half.states[runs.half.index_of(t)];
        const auto& q = runs.sheet.states[runs.sheet.index_of(t)];
        for (std::size_t k = 0; k < 2; ++k) {
            const DiskPoint pd{d.bodies[k].pos};
            worst = std::max(worst, geodesic_distance(d.ctx, pd, HalfPlanePoint{h.bodies[k].pos}));
            worst = std::max(worst, geodesic_distance(d.ctx, pd, HyperboloidPoint{q.bodies[k].pos}));
        }
    }
    verdict(1, "cross-chart equivalence", completed && worst < 1e-6 && elapsed < 10.0,
            fmt("max pointwise distance %.3g (< 1e-6), runtime %.3f s (< 10 s)", worst, elapsed));

    const double drift = chart_drift(runs);
    const ChartRuns halved = run_all_charts(0.5e-10, ts);
    const double drift_half = chart_drift(halved);
    const double ratio = drift / drift_half;
    verdict(2, "conservation", drift < 1e-7 && ratio >= 4.0,
            fmt("max relative drift %.3g (< 1e-7); halving tolerances: %.3g -> %.3g, ratio %.2f (>= 4), "
                "observed order in tolerance %.2f",
                drift, drift, drift_half, ratio, std::log2(ratio)));
}

void integral_equality() {
    std::mt19937_64 rng(1003);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto cfg = hnb::testing::random_configuration(rng, Chart::disk, 3, 1.0 + 0.01 * i);
        const auto fd = first_integrals(cfg);
        const auto fh = first_integrals(to_halfplane(cfg));
        const auto fq = first_integrals(to_hyperboloid(cfg));
        for (const auto* f : {&fh, &fq}) {
            worst = std::max({worst, rel(fd.h, f->h), rel(fd.c1, f->c1), rel(fd.c2, f->c2), rel(fd.c3, f->c3)});
        }
    }
    verdict(3, "cross-chart first integrals", worst < 1e-9, fmt("max relative difference %.3g (< 1e-9)", worst));
}

void gradient_check() {
    std::mt19937_64 rng(1004);
    double worst = 0.0;
    for (Chart chart : {Chart::disk, Chart::halfplane}) {
        for (std::size_t n : {2u, 3u, 5u}) {
            for (int i = 0; i < 100; ++i) {
                const auto cfg = hnb::testing::random_configuration(rng, chart, n, 1.0);
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx g = chart == Chart::disk ? grad_potential_disk(cfg, k) : grad_potential_halfplane(cfg, k);
                    const double h = chart == Chart::disk ? 1e-4 : 1e-4 * cfg.bodies[k].pos.imag();
                    const cplx fd = hnb::testing::wirtinger_conj([](const auto& c) { return potential(c); }, cfg, k, h);
                    worst = std::max(worst, std::abs(g - fd) / std::abs(g));
                }
            }
        }
    }
    verdict(4, "potential gradients", worst < 1e-6,
            fmt("max relative error vs finite differences %.3g (< 1e-6), n in {2,3,5}, both charts", worst));
}

// Verified elliptic configurations collected for the dynamics check.
std::vector<REFamily> elliptic_families;

void elliptic_two_body() {
    const double R = 1.0, alpha = 0.4;
    double equal_err = 0.0;
    int sign_mismatch = 0, cert_fail = 0, unverified = 0;
    for (int i = 1; i <= 10; ++i) {
        for (int j = 1; j <= 10; ++j) {
            const double m1 = 0.25 * i, m2 = 0.25 * j;
            const auto sol = two_body_elliptic(m1, m2, alpha, R);
            if (i == j) {
                equal_err = std::max(equal_err, std::abs(sol.r - alpha));
            } else if ((sol.r > alpha) != (m1 > m2)) {
                ++sign_mismatch;
            }
            if (!two_body_no_double_roots_certificate(m1, m2, alpha, R).holds) ++cert_fail;
            auto fam = make_family(FamilyTag::elliptic2, sol.cfg);
            if (!fam.verified) ++unverified;
            elliptic_families.push_back(std::move(fam));
        }
    }
    verdict(5, "two-body elliptic family", equal_err <= 1e-12 && sign_mismatch == 0 && cert_fail == 0 && unverified == 0,
            fmt("|r - alpha| at equal masses %.3g (<= 1e-12); sign mismatches %d/90; certificate failures %d/100; "
                "unverified %d",
                equal_err, sign_mismatch, cert_fail, unverified));
}

void lagrange_triangle() {
    double worst = 0.0, weakest_perturbed = 1e300;
    for (double r : {0.2, 0.5, 0.8}) {
        const auto l = lagrange_elliptic_three(r, 1.0);
        worst = std::max(worst, elliptic_residual(l.cfg).norm);
        auto perturbed = l.cfg;
        perturbed.bodies[1].pos *= std::polar(1.0, 0.1);
        weakest_perturbed = std::min(weakest_perturbed, elliptic_residual(perturbed).norm);
        elliptic_families.push_back(make_family(FamilyTag::lagrange3, l.cfg));
    }
    verdict(6, "equilateral triangle", worst < 1e-10 && weakest_perturbed > 1e-3,
            fmt("residual %.3g (< 1e-10); after 0.1 rad perturbation %.3g (> 1e-3)", worst, weakest_perturbed));
}

void euler_collinear() {
    const double R = 1.0;
    const double shapes[] = {0.2, 0.35, 0.5, 0.65, 0.8};
    int wrong_accept = 0, accepted = 0;
    double worst = 0.0;
    for (double m3 : {1.0, 1.5}) {
        for (double alpha : shapes) {
            for (double r : shapes) {
                const auto e = euler_elliptic_three(1.0, m3, alpha, r, R);
                if (!e.feasible) continue;
                ++accepted;
                if (r != alpha || m3 != 1.0) ++wrong_accept;
                worst = std::max(worst, elliptic_residual(e.cfg).norm);
                elliptic_families.push_back(make_family(FamilyTag::euler3, e.cfg));
            }
        }
    }

    bool increasing = true;
    double prev = euler_shape_function(R / 1001.0, R);
    for (int i = 2; i <= 1000; ++i) {
        const double g = euler_shape_function(R * i / 1001.0, R);
        increasing = increasing && g > prev;
        prev = g;
    }

    int probe_wrong = 0;
    for (double alpha : shapes) {
        for (double beta : shapes) {
            for (double c : {0.0, 0.05, -0.1}) {
                const bool ok = restricted_euler_probe(1.0, 1.0, alpha, beta, c, R).feasible;
                if (ok != (alpha == beta && c == 0.0)) ++probe_wrong;
            }
        }
    }
    verdict(7, "collinear three-body", accepted > 0 && wrong_accept == 0 && worst < 1e-10 && increasing && probe_wrong == 0,
            fmt("accepted %d, off-diagonal acceptances %d, residual %.3g; g increasing on 1000 points: %s; "
                "probe misclassifications %d/75",
                accepted, wrong_accept, worst, increasing ? "yes" : "no", probe_wrong));
}

void elliptic_dynamics() {
    const auto ts = grid(0.0, 4 * pi, 800);
    double worst_defect = 0.0, worst_radius = 0.0;
    int unverified = 0;
    for (const auto& fam : elliptic_families) {
        if (!fam.verified) {
            ++unverified;
            continue;
        }
        const auto traj = re_trajectory(fam, ts);
        worst_defect = std::max(worst_defect, defect(traj));
        for (const auto& s : traj.states) {
            for (std::size_t k = 0; k < s.bodies.size(); ++k) {
                worst_radius = std::max(worst_radius, std::abs(std::abs(s.bodies[k].pos) - std::abs(fam.cfg.bodies[k].pos)));
            }
        }
    }
    verdict(8, "elliptic rigid rotations", unverified == 0 && worst_defect < 1e-7 && worst_radius < 1e-10,
            fmt("%zu configurations over one period: defect %.3g (< 1e-7), radius variation %.3g (< 1e-10)",
                elliptic_families.size(), worst_defect, worst_radius));
}

void hyperbolic_families() {
    const auto ts = grid(0.0, 4.0, 400);
    double worst_res = 0.0, worst_defect = 0.0;
    bool all_ok = true;
    auto check = [&](FamilyTag tag, bool feasible, const PlanarConfiguration& cfg) {
        if (!feasible) {
            all_ok = false;
            return;
        }
        const auto fam = make_family(tag, cfg);
        worst_res = std::max(worst_res, fam.residual_norm);
        if (!fam.verified) {
            all_ok = false;
            return;
        }
        worst_defect = std::max(worst_defect, defect(re_trajectory(fam, ts)));
    };
    for (double theta : {0.3, 0.8, 1.3}) {
        const auto pair = solve_two_body_hyperbolic(1.0, 1.0, theta, 1.0);
        check(FamilyTag::hyperbolic2, pair.feasible, pair.cfg);
        const auto triple = solve_three_body_hyperbolic(theta, 1.0);
        check(FamilyTag::hyperbolic3, triple.feasible, triple.cfg);
    }
    const auto axis = hyperbolic_nogo_sweep(NoGoKind::imaginary_axis, 1000, 1.0, 1009, jobs());
    const auto ray = hyperbolic_nogo_sweep(NoGoKind::common_ray, 1000, 1.0, 1010, jobs());
    verdict(9, "hyperbolic families",
            all_ok && worst_res < 1e-10 && worst_defect < 1e-7 && axis.min_norm > 1e-4 && ray.min_norm > 1e-4,
            fmt("residual %.3g (< 1e-10), defect on [0,4] %.3g (< 1e-7); no-go minimum residual: axis %.3g, "
                "common ray %.3g (> 1e-4, 1000 samples each)",
                worst_res, worst_defect, axis.min_norm, ray.min_norm));
}

void parabolic_nonexistence() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double min_norm = 1e300;
    std::string counts;
    for (std::size_t n = 2; n <= 5; ++n) {
        const auto c = parabolic_nonexistence_certificate(n, 1.0, 10000, 1000 + n, jobs());
        ok = ok && c.holds && c.min_norm > 1e-4 && c.excluded_noncollinear == c.samples &&
             c.stacks_with_contradiction == c.samples;
        min_norm = std::min(min_norm, c.min_norm);
        counts += fmt("%sn=%zu %zu/%zu", n == 2 ? "" : ", ", n, c.stacks_with_contradiction, c.samples);
    }
    const double elapsed = seconds_since(t0);
    verdict(10, "parabolic nonexistence", ok && elapsed < 60.0,
            fmt("stacks with a sign contradiction (checked at the top body) %s; minimum residual %.3g (> 1e-4); "
                "runtime %.2f s (< 60 s)",
                counts.c_str(), min_norm, elapsed));
}

void geometry_conformance() {
    std::mt19937_64 rng(1011);
    const double R = 1.3;
    const Curvature c(R);
    std::uniform_real_distribution<double> tdist(-1.5, 1.5);
    double roundtrip = 0.0, isometry = 0.0, group = 0.0;
    constexpr Subgroup disk_tags[] = {Subgroup::G1, Subgroup::G2, Subgroup::G3};
    constexpr Subgroup half_tags[] = {Subgroup::Phi1, Subgroup::Phi2, Subgroup::Phi3};
    for (int i = 0; i < 10000; ++i) {
        const cplx z = hnb::testing::random_disk_point(rng, R);
        const cplx w = hnb::testing::random_halfplane_point(rng, R);
        roundtrip = std::max({roundtrip,
                              std::abs(disk_from_halfplane(c, halfplane_from_disk(c, {z})).z - z) / R,
                              std::abs(disk_from_hyperboloid(c, hyperboloid_from_disk(c, {z})).z - z) / R,
                              std::abs(halfplane_from_disk(c, disk_from_halfplane(c, {w})).w - w) / std::abs(w)});

        const bool disk = i % 2 == 0;
        const Subgroup* tags = disk ? disk_tags : half_tags;
        const Mat2 m = subgroup_matrix(tags[i % 3], tdist(rng)) * subgroup_matrix(tags[(i + 1) % 3], tdist(rng));
        const cplx a = disk ? z : w;
        const cplx b = disk ? hnb::testing::random_disk_point(rng, R) : hnb::testing::random_halfplane_point(rng, R);
        const ChartPoint pa = disk ? ChartPoint{DiskPoint{a}} : ChartPoint{HalfPlanePoint{a}};
        const ChartPoint pb = disk ? ChartPoint{DiskPoint{b}} : ChartPoint{HalfPlanePoint{b}};
        const double before = geodesic_distance(c, pa, pb);
        const double after = geodesic_distance(c, mobius_apply(c, m, pa), mobius_apply(c, m, pb));
        isometry = std::max(isometry, std::abs(after - before) / (R + before));

        const Subgroup g = static_cast<Subgroup>(i % 6);
        const double s = 2 * tdist(rng), u = 2 * tdist(rng);
        const Mat2 sum = subgroup_matrix(g, s + u);
        const double scale = std::max({std::abs(sum.a), std::abs(sum.b), std::abs(sum.c), std::abs(sum.d)});
        group = std::max(group, max_abs_diff(subgroup_matrix(g, s) * subgroup_matrix(g, u), sum) / scale);
    }
    verdict(11, "geometry conformance", roundtrip < 1e-12 && isometry < 1e-12 && group < 1e-12,
            fmt("10000 samples: chart round trip %.3g, distance preservation %.3g, group law %.3g (all < 1e-12)",
                roundtrip, isometry, group));
}

}  // namespace

int main() {
    try {
        cross_chart_and_conservation();
        integral_equality();
        gradient_check();
        elliptic_two_body();
        lagrange_triangle();
        euler_collinear();
        elliptic_dynamics();
        hyperbolic_families();
        parabolic_nonexistence();
        geometry_conformance();
    } catch (const std::exception& e) {
        std::printf("FAIL aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
