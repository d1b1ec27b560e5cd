#include "hnb/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace hnb {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense output (Hairer and Wanner, dopri5).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

using State = std::vector<double>;

struct ChartExit {};

enum class Failure { none, singular, chart };

// State layout per body: Re pos, Im pos, Re vel, Im vel.
class PlanarSystem {
public:
    explicit PlanarSystem(const PlanarConfiguration& cfg) : cfg_(cfg), acc_(cfg.bodies.size()) {}

    State pack(const PlanarConfiguration& cfg) const {
        State y;
        y.reserve(4 * cfg.bodies.size());
        for (const auto& b : cfg.bodies) {
            y.insert(y.end(), {b.pos.real(), b.pos.imag(), b.vel.real(), b.vel.imag()});
        }
        return y;
    }

    PlanarConfiguration unpack(const State& y) const {
        PlanarConfiguration out = cfg_;
        load(y, out);
        return out;
    }

    void rhs(const State& y, State& dy) {
        load(y, cfg_);
        for (const auto& b : cfg_.bodies) {
            if (!inside(b.pos)) throw ChartExit{};
        }
        accelerations(cfg_, acc_);
        for (std::size_t k = 0; k < acc_.size(); ++k) {
            dy[4 * k] = y[4 * k + 2];
            dy[4 * k + 1] = y[4 * k + 3];
            dy[4 * k + 2] = acc_[k].real();
            dy[4 * k + 3] = acc_[k].imag();
        }
    }

    double min_distance(const State& y) const { return singularity_proximity(unpack(y)).min_distance; }

    // Smallest (R^2 - |z|^2) / R^2 over the bodies, measured on the disk image.
    double boundary_margin(const State& y) const {
        const double R = cfg_.ctx.radius();
        double m = 1.0;
        for (std::size_t k = 0; k < cfg_.bodies.size(); ++k) {
            const cplx p(y[4 * k], y[4 * k + 1]);
            m = std::min(m, cfg_.chart == Chart::disk ? 1.0 - std::norm(p) / (R * R)
                                                      : 4.0 * R * p.imag() / std::norm(p + cplx(0.0, R)));
        }
        return m;
    }

    double project(State&) const { return 0.0; }
    FirstIntegrals integrals(const PlanarConfiguration& c) const { return first_integrals(c); }
    double radius() const { return cfg_.ctx.radius(); }

private:
    static void load(const State& y, PlanarConfiguration& c) {
        for (std::size_t k = 0; k < c.bodies.size(); ++k) {
            c.bodies[k].pos = cplx(y[4 * k], y[4 * k + 1]);
            c.bodies[k].vel = cplx(y[4 * k + 2], y[4 * k + 3]);
        }
    }

    bool inside(cplx p) const {
        return cfg_.chart == Chart::disk ? in_disk(cfg_.ctx, p) : in_halfplane(cfg_.ctx, p);
    }

    PlanarConfiguration cfg_;
    std::vector<cplx> acc_;
};

// State layout per body: x, y, z, then the velocity triple.
class SpatialSystem {
public:
    explicit SpatialSystem(const SpatialConfiguration& cfg) : cfg_(cfg), acc_(cfg.bodies.size()) {}

    State pack(const SpatialConfiguration& cfg) const {
        State y;
        y.reserve(6 * cfg.bodies.size());
        for (const auto& b : cfg.bodies) {
            y.insert(y.end(), {b.pos.x, b.pos.y, b.pos.z, b.vel.x, b.vel.y, b.vel.z});
        }
        return y;
    }

    SpatialConfiguration unpack(const State& y) const {
        SpatialConfiguration out = cfg_;
        load(y, out);
        return out;
    }

    void rhs(const State& y, State& dy) {
        load(y, cfg_);
        for (const auto& b : cfg_.bodies) {
            if (!(b.pos.z > 0.0) || !std::isfinite(b.pos.z)) throw ChartExit{};
        }
        accelerations(cfg_, acc_);
        for (std::size_t k = 0; k < acc_.size(); ++k) {
            for (std::size_t i = 0; i < 3; ++i) dy[6 * k + i] = y[6 * k + 3 + i];
            dy[6 * k + 3] = acc_[k].x;
            dy[6 * k + 4] = acc_[k].y;
            dy[6 * k + 5] = acc_[k].z;
        }
    }

    double min_distance(const State& y) const { return singularity_proximity(unpack(y)).min_distance; }

    double boundary_margin(const State& y) const {
        const double R = cfg_.ctx.radius();
        double m = 1.0;
        for (std::size_t k = 0; k < cfg_.bodies.size(); ++k) m = std::min(m, 2.0 / (1.0 + y[6 * k + 2] / R));
        return m;
    }

    // Rescales each position onto the sheet and removes the normal part of its velocity.
    double project(State& y) const {
        const double R = cfg_.ctx.radius();
        double worst = 0.0;
        for (std::size_t k = 0; k < cfg_.bodies.size(); ++k) {
            double* s = &y[6 * k];
            const Vec3 q{s[0], s[1], s[2]};
            const Vec3 v{s[3], s[4], s[5]};
            const Vec3 qn = q * (R / std::sqrt(-lorentz_inner(q, q)));
            const Vec3 vn = v + (lorentz_inner(v, qn) / (R * R)) * qn;
            const Vec3 dq = qn - q, dv = vn - v;
            worst = std::max(worst, std::sqrt(dq.x * dq.x + dq.y * dq.y + dq.z * dq.z + dv.x * dv.x +
                                              dv.y * dv.y + dv.z * dv.z));
            s[0] = qn.x, s[1] = qn.y, s[2] = qn.z, s[3] = vn.x, s[4] = vn.y, s[5] = vn.z;
        }
        return worst;
    }

    FirstIntegrals integrals(const SpatialConfiguration& c) const { return first_integrals(c); }
    double radius() const { return cfg_.ctx.radius(); }

private:
    static void load(const State& y, SpatialConfiguration& c) {
        for (std::size_t k = 0; k < c.bodies.size(); ++k) {
            c.bodies[k].pos = Vec3{y[6 * k], y[6 * k + 1], y[6 * k + 2]};
            c.bodies[k].vel = Vec3{y[6 * k + 3], y[6 * k + 4], y[6 * k + 5]};
        }
    }

    SpatialConfiguration cfg_;
    std::vector<Vec3> acc_;
};

struct StepResult {
    Failure failure = Failure::none;
    double err = 0.0;
    State y_new;
    std::array<State, 7> k;
};

template <class System>
void attempt_step(System& sys, const State& y, double h, const IntegratorSettings& s, StepResult& r) {
    const std::size_t n = y.size();
    auto& k = r.k;
    for (auto& ki : k) ki.resize(n);
    State tmp(n);
    r.failure = Failure::none;
    try {
        sys.rhs(y, k[0]);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k[0][i];
        sys.rhs(tmp, k[1]);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
        sys.rhs(tmp, k[2]);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
        sys.rhs(tmp, k[3]);
        for (std::size_t i = 0; i < n; ++i) {
            tmp[i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
        }
        sys.rhs(tmp, k[4]);
        for (std::size_t i = 0; i < n; ++i) {
            tmp[i] = y[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] + a65 * k[4][i]);
        }
        sys.rhs(tmp, k[5]);
        r.y_new.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            r.y_new[i] = y[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i]);
        }
        sys.rhs(r.y_new, k[6]);
    } catch (const SingularityError&) {
        r.failure = Failure::singular;
        return;
    } catch (const ChartExit&) {
        r.failure = Failure::chart;
        return;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
        const double scale = s.abs_tol + s.rel_tol * std::max(std::abs(y[i]), std::abs(r.y_new[i]));
        sum += (e / scale) * (e / scale);
    }
    r.err = std::sqrt(sum / static_cast<double>(n));
    if (!std::isfinite(r.err)) r.failure = Failure::singular;
}

// Continuous extension of an accepted step at fraction theta of the step.
State dense(const State& y0, const StepResult& r, double h, double theta) {
    const auto& k = r.k;
    State out(y0.size());
    for (std::size_t i = 0; i < y0.size(); ++i) {
        const double r2 = r.y_new[i] - y0[i];
        const double r3 = h * k[0][i] - r2;
        const double r4 = r2 - h * k[6][i] - r3;
        const double r5 = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] + d6 * k[5][i] + d7 * k[6][i]);
        out[i] = y0[i] + theta * (r2 + (1.0 - theta) * (r3 + theta * (r4 + (1.0 - theta) * r5)));
    }
    return out;
}

template <class Config, class System>
BasicTrajectory<Config> run(const Config& cfg, const IntegratorSettings& settings, double t_end) {
    settings.validate();
    validate(cfg);
    if (!std::isfinite(t_end)) throw UsageError("end time must be finite");

    System sys(cfg);
    BasicTrajectory<Config> traj;
    const double dir = t_end >= 0.0 ? 1.0 : -1.0;
    const double threshold = collision_fraction * sys.radius();

    std::vector<double> targets;
    for (double t : settings.sample_times) {
        if (dir * t > 0.0 && dir * t < dir * t_end) targets.push_back(t);
    }
    std::sort(targets.begin(), targets.end(), [dir](double a, double b) { return dir * a < dir * b; });
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    targets.push_back(t_end);

    State y = sys.pack(cfg);
    double t = 0.0;
    auto record = [&](double time, const State& state) {
        Config c = sys.unpack(state);
        traj.integrals.push_back(sys.integrals(c));
        traj.times.push_back(time);
        traj.states.push_back(std::move(c));
    };
    record(t, y);
    if (t_end == 0.0) return traj;

    double h = std::clamp(1e-3 * std::abs(t_end), settings.min_step, settings.max_step);
    std::size_t target = 0;
    bool last_rejected = false;
    StepResult r;

    while (true) {
        if (traj.accepted_steps + traj.rejected_steps >= settings.max_steps) {
            traj.termination = Termination::step_limit;
            traj.message = "step budget exhausted";
            return traj;
        }
        const double gap = dir * (targets[target] - t);
        const bool clipped = h >= gap;
        const double h_used = clipped ? gap : h;
        attempt_step(sys, y, dir * h_used, settings, r);

        if (r.failure != Failure::none || r.err > 1.0) {
            ++traj.rejected_steps;
            const double fac = r.failure != Failure::none ? 0.25 : std::max(0.2, 0.9 * std::pow(r.err, -0.2));
            h = h_used * fac;
            last_rejected = true;
            if (h < settings.min_step) {
                if (r.failure == Failure::chart) {
                    traj.termination = Termination::boundary_escape;
                    traj.message = "a body left the chart domain";
                } else {
                    traj.termination = Termination::collision_approach;
                    traj.message = "step size underflow near a collision";
                }
                return traj;
            }
            continue;
        }

        ++traj.accepted_steps;
        const State y_prev = y;
        y = r.y_new;
        traj.max_projection_correction = std::max(traj.max_projection_correction, sys.project(y));
        t = clipped ? targets[target] : t + dir * h_used;

        if (sys.min_distance(y) < threshold) {
            double lo = 0.0, hi = 1.0;
            while ((hi - lo) * h_used > settings.event_tol) {
                const double mid = 0.5 * (lo + hi);
                if (sys.min_distance(dense(y_prev, r, dir * h_used, mid)) < threshold) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            State y_event = dense(y_prev, r, dir * h_used, hi);
            sys.project(y_event);
            const double t_event = t - dir * h_used * (1.0 - hi);
            record(t_event, y_event);
            traj.termination = Termination::collision_approach;
            traj.message = "pairwise distance fell below the collision tolerance";
            return traj;
        }

        record(t, y);
        if (sys.boundary_margin(y) < boundary_fraction) {
            traj.termination = Termination::boundary_escape;
            traj.message = "a body reached the chart boundary to working precision";
            return traj;
        }
        if (clipped) {
            if (target + 1 == targets.size()) {
                traj.termination = Termination::completed;
                return traj;
            }
            ++target;
        }
        double fac = std::clamp(0.9 * std::pow(std::max(r.err, 1e-10), -0.2), 0.2, 5.0);
        if (last_rejected) fac = std::min(fac, 1.0);
        last_rejected = false;
        const double h_next = std::min(h_used * fac, settings.max_step);
        // a short landing step should not shrink the controller's step
        h = clipped ? std::min(std::max(h_next, h), settings.max_step) : h_next;
    }
}

// Fornberg weights for derivatives 0..2 at x0 over nodes x.
std::array<std::vector<double>, 3> fornberg(double x0, const double* x, std::size_t n) {
    std::array<std::vector<double>, 3> c;
    for (auto& v : c) v.assign(n, 0.0);
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min<std::size_t>(i, 2);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k) {
                    c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k) {
                c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

}  // namespace

void IntegratorSettings::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw UsageError("tolerances must be positive");
    if (!(min_step > 0.0) || !(min_step <= max_step)) throw UsageError("need 0 < min_step <= max_step");
    if (!(event_tol > 0.0)) throw UsageError("event tolerance must be positive");
}

IntegratorSettings IntegratorSettings::with_tolerance_scale(double factor) const {
    IntegratorSettings out = *this;
    out.rel_tol *= factor;
    out.abs_tol *= factor;
    return out;
}

const char* termination_name(Termination t) noexcept {
    switch (t) {
        case Termination::completed: return "completed";
        case Termination::collision_approach: return "collision approach";
        case Termination::boundary_escape: return "boundary escape";
        case Termination::step_limit: return "step limit";
    }
    return "unknown";
}

Trajectory integrate(const PlanarConfiguration& cfg, const IntegratorSettings& settings, double t_end) {
    return run<PlanarConfiguration, PlanarSystem>(cfg, settings, t_end);
}

SpatialTrajectory integrate(const SpatialConfiguration& cfg, const IntegratorSettings& settings, double t_end) {
    return run<SpatialConfiguration, SpatialSystem>(cfg, settings, t_end);
}

double defect(const Trajectory& traj) {
    const std::size_t n = traj.times.size();
    if (n < 3) throw UsageError("defect needs at least three states");
    const std::size_t width = std::min<std::size_t>(7, n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t start = std::min(i >= width / 2 ? i - width / 2 : 0, n - width);
        const auto w = fornberg(traj.times[i], &traj.times[start], width);
        PlanarConfiguration cfg = traj.states[i];
        std::vector<cplx> second(cfg.bodies.size());
        for (std::size_t k = 0; k < cfg.bodies.size(); ++k) {
            cplx d1v{}, d2v{};
            for (std::size_t j = 0; j < width; ++j) {
                const cplx p = traj.states[start + j].bodies[k].pos;
                d1v += w[1][j] * p;
                d2v += w[2][j] * p;
            }
            cfg.bodies[k].vel = d1v;
            second[k] = d2v;
        }
        std::vector<cplx> acc(cfg.bodies.size());
        accelerations(cfg, acc);
        for (std::size_t k = 0; k < acc.size(); ++k) worst = std::max(worst, std::abs(second[k] - acc[k]));
    }
    return worst;
}

}  // namespace hnb
