#include "hnb/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace hnb {

namespace {

const std::map<std::string, FamilyTag> family_tags{
    {"elliptic2", FamilyTag::elliptic2},     {"euler3", FamilyTag::euler3},
    {"lagrange3", FamilyTag::lagrange3},     {"hyperbolic2", FamilyTag::hyperbolic2},
    {"hyperbolic3", FamilyTag::hyperbolic3}, {"parabolic", FamilyTag::parabolic},
};

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
    if (!node.IsMap()) throw ConfigError(where + " must be a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

double number(const YAML::Node& node, const std::string& where) {
    if (!node || !node.IsScalar()) throw ConfigError(where + " must be a number");
    try {
        const double v = node.as<double>();
        if (!std::isfinite(v)) throw ConfigError(where + " must be finite");
        return v;
    } catch (const YAML::Exception&) {
        throw ConfigError(where + " must be a number");
    }
}

double number_or(const YAML::Node& node, double fallback, const std::string& where) {
    return node ? number(node, where) : fallback;
}

cplx complex_field(const YAML::Node& node, const std::string& where) {
    if (!node) return {};
    check_keys(node, {"re", "im"}, where);
    return {number_or(node["re"], 0.0, where + ".re"), number_or(node["im"], 0.0, where + ".im")};
}

Vec3 triple_field(const YAML::Node& node, const std::string& where) {
    if (!node) return {};
    if (node.IsSequence()) {
        if (node.size() != 3) throw ConfigError(where + " must have three entries");
        return {number(node[0], where + "[0]"), number(node[1], where + "[1]"), number(node[2], where + "[2]")};
    }
    check_keys(node, {"x", "y", "z"}, where);
    return {number_or(node["x"], 0.0, where + ".x"), number_or(node["y"], 0.0, where + ".y"),
            number_or(node["z"], 0.0, where + ".z")};
}

void parse_integrator(const YAML::Node& node, RunConfig& cfg) {
    if (!node) return;
    check_keys(node, {"rel_tol", "abs_tol", "max_step", "min_step", "event_tol", "max_steps", "output_step",
                      "sample_times"},
               "integrator");
    auto& s = cfg.integrator;
    s.rel_tol = number_or(node["rel_tol"], s.rel_tol, "integrator.rel_tol");
    s.abs_tol = number_or(node["abs_tol"], s.abs_tol, "integrator.abs_tol");
    s.max_step = number_or(node["max_step"], s.max_step, "integrator.max_step");
    s.min_step = number_or(node["min_step"], s.min_step, "integrator.min_step");
    s.event_tol = number_or(node["event_tol"], s.event_tol, "integrator.event_tol");
    if (node["max_steps"]) {
        const double v = number(node["max_steps"], "integrator.max_steps");
        if (!(v >= 1.0)) throw ConfigError("integrator.max_steps must be positive");
        s.max_steps = static_cast<std::size_t>(v);
    }
    if (node["sample_times"]) {
        if (!node["sample_times"].IsSequence()) throw ConfigError("integrator.sample_times must be a list");
        for (const auto& t : node["sample_times"]) s.sample_times.push_back(number(t, "integrator.sample_times"));
    }
    if (node["output_step"]) {
        const double step = number(node["output_step"], "integrator.output_step");
        if (!(step > 0.0)) throw ConfigError("integrator.output_step must be positive");
        const double span = std::abs(cfg.t_end);
        const double dir = cfg.t_end < 0.0 ? -1.0 : 1.0;
        const auto count = static_cast<std::size_t>(std::floor(span / step + 1e-9));
        for (std::size_t i = 1; i <= count; ++i) s.sample_times.push_back(dir * std::min(span, i * step));
    }
    try {
        s.validate();
    } catch (const UsageError& e) {
        throw ConfigError(std::string("integrator: ") + e.what());
    }
}

void parse_bodies(const YAML::Node& node, RunConfig& cfg) {
    if (!node) return;
    if (!node.IsSequence()) throw ConfigError("bodies must be a list");
    for (std::size_t i = 0; i < node.size(); ++i) {
        const std::string where = "bodies[" + std::to_string(i) + "]";
        const YAML::Node b = node[i];
        check_keys(b, {"mass", "pos", "vel"}, where);
        const double mass = number_or(b["mass"], 1.0, where + ".mass");
        if (!b["pos"]) throw ConfigError(where + " needs a position");
        if (cfg.chart == Chart::hyperboloid) {
            cfg.spatial.push_back({mass, triple_field(b["pos"], where + ".pos"), triple_field(b["vel"], where + ".vel")});
        } else {
            cfg.planar.push_back({mass, complex_field(b["pos"], where + ".pos"), complex_field(b["vel"], where + ".vel")});
        }
    }
}

void parse_family(const YAML::Node& node, RunConfig& cfg) {
    if (!node) return;
    if (!node.IsMap() || !node["tag"]) throw ConfigError("family needs a tag");
    FamilyRequest req;
    const auto tag = node["tag"].as<std::string>();
    const auto it = family_tags.find(tag);
    if (it == family_tags.end()) throw ConfigError("unknown family tag '" + tag + "'");
    req.tag = it->second;
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (key == "tag") continue;
        req.params[key] = number(kv.second, "family." + key);
    }
    cfg.family = req;
}

void parse_certificate(const YAML::Node& node, RunConfig& cfg) {
    if (!node) return;
    check_keys(node, {"n", "samples", "seed"}, "certificate");
    auto count = [&](const char* key, double fallback) {
        const double v = number_or(node[key], fallback, std::string("certificate.") + key);
        if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError(std::string("certificate.") + key + " must be a count");
        return v;
    };
    cfg.certificate.n = static_cast<std::size_t>(count("n", 3));
    cfg.certificate.samples = static_cast<std::size_t>(count("samples", 10'000));
    cfg.certificate.seed = static_cast<std::uint64_t>(count("seed", 1));
    if (cfg.certificate.n < 2) throw ConfigError("certificate.n must be at least 2");
}

void check_bodies(const RunConfig& cfg) {
    try {
        if (cfg.chart == Chart::hyperboloid) {
            validate(cfg.spatial_config());
        } else {
            validate(cfg.planar_config());
        }
    } catch (const SingularityError& e) {
        throw ConfigError("bodies " + std::to_string(e.first()) + " and " + std::to_string(e.second()) +
                          " collide: " + e.what());
    } catch (const std::logic_error& e) {
        throw ConfigError(std::string("invalid body: ") + e.what());
    }
}

}  // namespace

const char* mode_name(Mode m) noexcept {
    switch (m) {
        case Mode::simulate: return "simulate";
        case Mode::solve_re: return "solve-re";
        case Mode::verify_re: return "verify-re";
        case Mode::certify_parabolic: return "certify-parabolic";
        case Mode::report: return "report";
    }
    return "unknown";
}

Mode mode_from_name(const std::string& name) {
    for (Mode m : {Mode::simulate, Mode::solve_re, Mode::verify_re, Mode::certify_parabolic, Mode::report}) {
        if (name == mode_name(m)) return m;
    }
    throw ConfigError("unknown mode '" + name + "'");
}

PlanarConfiguration RunConfig::planar_config() const {
    return PlanarConfiguration{Curvature(radius), chart, planar, restricted};
}

SpatialConfiguration RunConfig::spatial_config() const {
    return SpatialConfiguration{Curvature(radius), spatial, restricted};
}

RunConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("YAML syntax: ") + e.what());
    }
    RunConfig cfg;
    try {
        check_keys(root, {"mode", "chart", "R", "restricted", "t_end", "integrator", "bodies", "output", "class",
                          "family", "certificate"},
                   "config");
        if (root["mode"]) cfg.mode = mode_from_name(root["mode"].as<std::string>());
        if (root["chart"]) {
            try {
                cfg.chart = chart_from_name(root["chart"].as<std::string>().c_str());
            } catch (const UsageError& e) {
                throw ConfigError(e.what());
            }
        }
        cfg.radius = number_or(root["R"], 1.0, "R");
        if (!(cfg.radius > 0.0)) throw ConfigError("R must be positive");
        if (root["restricted"]) cfg.restricted = root["restricted"].as<bool>();
        cfg.t_end = number_or(root["t_end"], cfg.t_end, "t_end");
        parse_integrator(root["integrator"], cfg);
        parse_bodies(root["bodies"], cfg);
        if (root["output"]) {
            check_keys(root["output"], {"dir"}, "output");
            if (root["output"]["dir"]) cfg.out_dir = root["output"]["dir"].as<std::string>();
        }
        if (root["class"]) {
            const auto name = root["class"].as<std::string>();
            if (name == "elliptic") cfg.re_class = REClass::elliptic;
            else if (name == "hyperbolic") cfg.re_class = REClass::hyperbolic;
            else if (name == "parabolic") cfg.re_class = REClass::parabolic;
            else throw ConfigError("unknown class '" + name + "'");
        }
        parse_family(root["family"], cfg);
        parse_certificate(root["certificate"], cfg);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!cfg.planar.empty() || !cfg.spatial.empty()) check_bodies(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

}  // namespace hnb
