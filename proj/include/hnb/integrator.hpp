#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hnb/dynamics.hpp"
#include "hnb/invariants.hpp"

namespace hnb {

struct IntegratorSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.25;
    double min_step = 1e-13;
    // Width to which a collision event time is localized.
    double event_tol = 1e-10;
    // Steps are shortened to land exactly on these times (must lie inside the run).
    std::vector<double> sample_times;
    std::size_t max_steps = 5'000'000;

    // Throws UsageError on nonpositive tolerances or min_step > max_step.
    void validate() const;
    IntegratorSettings with_tolerance_scale(double factor) const;
};

// A run stops with a boundary escape once some body's disk image satisfies
// R^2 - |z|^2 < boundary_fraction R^2 (about 24 R from the center), where the chart
// can no longer resolve its motion.
inline constexpr double boundary_fraction = 1e-10;

enum class Termination { completed, collision_approach, boundary_escape, step_limit };

const char* termination_name(Termination t) noexcept;

template <class Config>
struct BasicTrajectory {
    std::vector<double> times;
    std::vector<Config> states;
    std::vector<FirstIntegrals> integrals;
    Termination termination = Termination::completed;
    std::string message;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    // Largest change applied when pulling hyperboloid states back onto the sheet.
    double max_projection_correction = 0.0;

    // Index of the recorded state at exactly time t, or npos.
    std::size_t index_of(double t) const noexcept {
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (times[i] == t) return i;
        }
        return npos;
    }
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

using Trajectory = BasicTrajectory<PlanarConfiguration>;
using SpatialTrajectory = BasicTrajectory<SpatialConfiguration>;

// Dormand-Prince 5(4) with dense output. t_end may be negative to run backwards.
Trajectory integrate(const PlanarConfiguration& cfg, const IntegratorSettings& settings, double t_end);
SpatialTrajectory integrate(const SpatialConfiguration& cfg, const IntegratorSettings& settings, double t_end);

// Largest |acceleration(path) - second derivative of path| over the recorded states,
// with derivatives taken from local 7-point finite-difference stencils of the positions.
double defect(const Trajectory& traj);

}  // namespace hnb
