#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hnb/dynamics.hpp"
#include "hnb/integrator.hpp"
#include "hnb/relequil.hpp"

namespace hnb {

// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { simulate, solve_re, verify_re, certify_parabolic, report };

const char* mode_name(Mode m) noexcept;
Mode mode_from_name(const std::string& name);

struct FamilyRequest {
    FamilyTag tag = FamilyTag::elliptic2;
    std::map<std::string, double> params;
};

struct CertificateRequest {
    std::size_t n = 3;
    std::size_t samples = 10'000;
    std::uint64_t seed = 1;
};

struct RunConfig {
    Mode mode = Mode::simulate;
    Chart chart = Chart::disk;
    double radius = 1.0;
    bool restricted = false;
    // Disk and half-plane bodies, or hyperboloid bodies, depending on `chart`.
    std::vector<PlanarBody> planar;
    std::vector<SpatialBody> spatial;
    IntegratorSettings integrator;
    double t_end = 1.0;
    std::string out_dir = "out";
    std::optional<REClass> re_class;
    std::optional<FamilyRequest> family;
    CertificateRequest certificate;

    PlanarConfiguration planar_config() const;
    SpatialConfiguration spatial_config() const;
};

// Parses YAML text. Throws ConfigError on any syntax, schema, chart or collision problem.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace hnb
