#include "hnb/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "hnb/invariants.hpp"
#include "hnb/relequil.hpp"
#include "hnb/report.hpp"

namespace hnb {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Context {
    const RunConfig& cfg;
    const RunOptions& opts;
    fs::path out;
    std::ostream& log;
};

ordered_json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

ordered_json bodies_json(const PlanarConfiguration& cfg) {
    ordered_json out = ordered_json::array();
    for (const auto& b : cfg.bodies) {
        out.push_back({{"mass", b.mass}, {"pos", complex_json(b.pos)}, {"vel", complex_json(b.vel)}});
    }
    return out;
}

ordered_json integrals_json(const FirstIntegrals& f) {
    return {{"h", f.h}, {"c1", f.c1}, {"c2", f.c2}, {"c3", f.c3}};
}

ordered_json residual_json(const ResidualReport& r) {
    ordered_json res = ordered_json::array();
    for (const cplx& v : r.residuals) res.push_back(complex_json(v));
    return {{"class", re_class_name(r.cls)}, {"norm", r.norm}, {"scaled_norm", r.scaled_norm}, {"residuals", res}};
}

void write_json(const Context& ctx, const std::string& name, const ordered_json& doc) {
    std::ofstream out(ctx.out / name);
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + (ctx.out / name).string());
    ctx.log << "wrote " << (ctx.out / name).string() << '\n';
}

double param(const FamilyRequest& req, const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto it = req.params.find(key);
    if (it != req.params.end()) return it->second;
    if (fallback) return *fallback;
    throw ConfigError(std::string("family ") + family_name(req.tag) + " needs parameter '" + key + "'");
}

template <class Traj>
int finish_simulation(const Context& ctx, const Traj& traj, double elapsed) {
    {
        std::ofstream csv(ctx.out / "trajectory.csv");
        write_csv(csv, trajectory_rows(traj));
        if (!csv) throw std::runtime_error("cannot write trajectory.csv");
    }
    ctx.log << "wrote " << (ctx.out / "trajectory.csv").string() << '\n';
    const DriftReport d = drift_report(traj.integrals);
    ordered_json doc{{"termination", termination_name(traj.termination)},
                     {"message", traj.message},
                     {"t_final", traj.times.empty() ? 0.0 : traj.times.back()},
                     {"accepted_steps", traj.accepted_steps},
                     {"rejected_steps", traj.rejected_steps},
                     {"drift", {{"h", d.h}, {"c1", d.c1}, {"c2", d.c2}, {"c3", d.c3}, {"max", d.max()}}}};
    if (!traj.integrals.empty()) doc["initial_integrals"] = integrals_json(traj.integrals.front());
    if (!ctx.opts.deterministic) doc["elapsed_seconds"] = elapsed;
    write_json(ctx, "drift.json", doc);
    ctx.log << "termination: " << termination_name(traj.termination) << ", max drift " << format_double(d.max())
            << '\n';
    if (traj.termination == Termination::completed) return exit_code::ok;
    ctx.log << "error: run stopped early: " << traj.message << '\n';
    return exit_code::singularity;
}

int simulate(const Context& ctx) {
    IntegratorSettings settings = ctx.cfg.integrator;
    if (ctx.opts.tol) {
        settings.rel_tol = *ctx.opts.tol;
        settings.abs_tol = *ctx.opts.tol * 1e-2;
        settings.validate();
    }
    const auto start = std::chrono::steady_clock::now();
    auto seconds = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    if (ctx.cfg.chart == Chart::hyperboloid) {
        const auto traj = integrate(ctx.cfg.spatial_config(), settings, ctx.cfg.t_end);
        return finish_simulation(ctx, traj, seconds());
    }
    const auto traj = integrate(ctx.cfg.planar_config(), settings, ctx.cfg.t_end);
    return finish_simulation(ctx, traj, seconds());
}

int solve_re(const Context& ctx) {
    if (!ctx.cfg.family) throw ConfigError("solve-re needs a family section");
    const FamilyRequest& req = *ctx.cfg.family;
    const double R = ctx.cfg.radius;
    const double tol = ctx.opts.tol.value_or(1e-10);
    ordered_json params;
    PlanarConfiguration solved;
    switch (req.tag) {
        case FamilyTag::elliptic2: {
            const auto s = two_body_elliptic(param(req, "m1"), param(req, "m2"), param(req, "alpha"), R);
            params = {{"alpha", param(req, "alpha")}, {"r", s.r}, {"mass_scale", s.scale}};
            solved = s.cfg;
            ctx.log << "r = " << format_double(s.r) << '\n';
            break;
        }
        case FamilyTag::euler3: {
            const auto s = euler_elliptic_three(param(req, "m2"), param(req, "m3"), param(req, "alpha"),
                                                param(req, "r"), R);
            if (!s.feasible) throw InfeasibleError(s.reason);
            params = {{"alpha", param(req, "alpha")}, {"central_mass", s.central_mass}};
            solved = s.cfg;
            break;
        }
        case FamilyTag::lagrange3: {
            const auto s = lagrange_elliptic_three(param(req, "r"), R);
            params = {{"r", param(req, "r")}, {"mass", s.mass}};
            solved = s.cfg;
            break;
        }
        case FamilyTag::hyperbolic2: {
            const auto s = solve_two_body_hyperbolic(param(req, "m1"), param(req, "m2"), param(req, "theta1"), R);
            if (!s.feasible) throw InfeasibleError(s.reason);
            params = {{"theta1", s.theta1}, {"theta2", s.theta2}, {"mass_scale", s.scale}};
            solved = s.cfg;
            break;
        }
        case FamilyTag::hyperbolic3: {
            const auto s = solve_three_body_hyperbolic(param(req, "theta1"), R, param(req, "middle_ratio", 1.0));
            if (!s.feasible) throw InfeasibleError(s.reason);
            params = {{"theta1", s.theta1}, {"outer_mass", s.outer_mass}, {"middle_mass", s.middle_mass}};
            solved = s.cfg;
            break;
        }
        case FamilyTag::parabolic:
            throw InfeasibleError("no parabolic relative equilibrium exists for any masses");
    }
    const REFamily fam = make_family(req.tag, solved, tol);
    ordered_json doc{{"family", family_name(req.tag)},
                     {"class", re_class_name(family_class(req.tag))},
                     {"R", R},
                     {"parameters", params},
                     {"chart", chart_name(solved.chart)},
                     {"bodies", bodies_json(solved)},
                     {"residual_norm", fam.residual_norm},
                     {"verified", fam.verified}};
    write_json(ctx, "solution.json", doc);
    ctx.log << family_name(req.tag) << ": residual " << format_double(fam.residual_norm) << '\n';
    return fam.verified ? exit_code::ok : exit_code::infeasible;
}

int verify_re(const Context& ctx) {
    if (!ctx.cfg.re_class) throw ConfigError("verify-re needs a class");
    if (ctx.cfg.chart == Chart::hyperboloid) throw ConfigError("verify-re works in the disk or half-plane chart");
    const double tol = ctx.opts.tol.value_or(1e-10);
    const ResidualReport r = residual(*ctx.cfg.re_class, ctx.cfg.planar_config());
    ordered_json doc = residual_json(r);
    doc["tolerance"] = tol;
    doc["verified"] = r.norm < tol;
    write_json(ctx, "residual.json", doc);
    ctx.log << re_class_name(r.cls) << " residual norm " << format_double(r.norm)
            << (r.norm < tol ? " (verified)" : " (not an equilibrium)") << '\n';
    return exit_code::ok;
}

int certify(const Context& ctx) {
    const auto& req = ctx.cfg.certificate;
    const auto start = std::chrono::steady_clock::now();
    const ParabolicCertificate c =
        parabolic_nonexistence_certificate(req.n, ctx.cfg.radius, req.samples, req.seed, ctx.opts.jobs);
    ordered_json doc{{"n", c.n},
                     {"samples", c.samples},
                     {"seed", req.seed},
                     {"excluded_noncollinear", c.excluded_noncollinear},
                     {"stacks_with_contradiction", c.stacks_with_contradiction},
                     {"min_norm", c.min_norm},
                     {"min_scaled_norm", c.min_scaled_norm},
                     {"holds", c.holds},
                     {"verdict", c.holds ? "no solution found" : "certificate failed"}};
    if (!ctx.opts.deterministic) {
        doc["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    write_json(ctx, "certificate.json", doc);
    ctx.log << "parabolic n = " << c.n << ": " << (c.holds ? "no solution found" : "certificate failed") << '\n';
    return c.holds ? exit_code::ok : exit_code::failure;
}

int equivalence_report(const Context& ctx) {
    PlanarConfiguration disk;
    if (ctx.cfg.chart == Chart::hyperboloid) {
        disk = to_disk(ctx.cfg.spatial_config());
    } else {
        disk = to_disk(ctx.cfg.planar_config());
    }
    const PlanarConfiguration half = to_halfplane(disk);
    const SpatialConfiguration sheet = to_hyperboloid(disk);
    const FirstIntegrals fd = first_integrals(disk), fh = first_integrals(half), fs = first_integrals(sheet);
    auto spread = [](double a, double b, double c) { return std::max({a, b, c}) - std::min({a, b, c}); };
    const double pd = potential(disk), ph = potential(half), ps = potential(sheet);
    double distance_spread = 0.0;
    const Curvature& geo = disk.ctx;
    for (std::size_t i = 0; i < disk.bodies.size(); ++i) {
        for (std::size_t j = i + 1; j < disk.bodies.size(); ++j) {
            const double dd = geodesic_distance(geo, DiskPoint{disk.bodies[i].pos}, DiskPoint{disk.bodies[j].pos});
            const double dh =
                geodesic_distance(geo, HalfPlanePoint{half.bodies[i].pos}, HalfPlanePoint{half.bodies[j].pos});
            const double ds =
                geodesic_distance(geo, HyperboloidPoint{sheet.bodies[i].pos}, HyperboloidPoint{sheet.bodies[j].pos});
            distance_spread = std::max(distance_spread, spread(dd, dh, ds));
        }
    }
    ordered_json doc{
        {"bodies", disk.bodies.size()},
        {"integrals", {{"disk", integrals_json(fd)}, {"halfplane", integrals_json(fh)}, {"hyperboloid", integrals_json(fs)}}},
        {"potential", {{"disk", pd}, {"halfplane", ph}, {"hyperboloid", ps}}},
        {"max_spread",
         {{"h", spread(fd.h, fh.h, fs.h)},
          {"c1", spread(fd.c1, fh.c1, fs.c1)},
          {"c2", spread(fd.c2, fh.c2, fs.c2)},
          {"c3", spread(fd.c3, fh.c3, fs.c3)},
          {"potential", spread(pd, ph, ps)},
          {"pair_distance", distance_spread}}}};
    write_json(ctx, "equivalence.json", doc);
    return exit_code::ok;
}

fs::path output_dir(const RunConfig& cfg, const RunOptions& opts) {
    if (const char* env = std::getenv(out_dir_env); env != nullptr && *env != '\0') return env;
    if (opts.out_dir) return *opts.out_dir;
    return cfg.out_dir;
}

}  // namespace

int run(const RunConfig& config, const RunOptions& opts, std::ostream& log) {
    RunConfig cfg = config;
    if (opts.mode) cfg.mode = *opts.mode;
    try {
        const fs::path out = output_dir(cfg, opts);
        fs::create_directories(out);
        const Context ctx{cfg, opts, out, log};
        switch (cfg.mode) {
            case Mode::simulate: return simulate(ctx);
            case Mode::solve_re: return solve_re(ctx);
            case Mode::verify_re: return verify_re(ctx);
            case Mode::certify_parabolic: return certify(ctx);
            case Mode::report: return equivalence_report(ctx);
        }
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_code::parse_error;
    } catch (const SingularityError& e) {
        log << "singularity: " << e.what() << '\n';
        return exit_code::singularity;
    } catch (const InfeasibleError& e) {
        log << "infeasible: " << e.what() << '\n';
        return exit_code::infeasible;
    } catch (const std::logic_error& e) {
        log << "invalid input: " << e.what() << '\n';
        return exit_code::parse_error;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::failure;
    }
    return exit_code::failure;
}

int run(const RunOptions& opts, std::ostream& log) {
    RunConfig cfg;
    try {
        cfg = load_config(opts.config_path);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_code::parse_error;
    }
    return run(cfg, opts, log);
}

}  // namespace hnb
