#pragma once

#include <span>

#include "hnb/dynamics.hpp"

namespace hnb {

// Energy h and the three angular momentum components.
struct FirstIntegrals {
    double h = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    // Largest imaginary part discarded from the complex chart expressions.
    double imag_residue = 0.0;
};

FirstIntegrals first_integrals(const PlanarConfiguration& cfg);
FirstIntegrals first_integrals(const SpatialConfiguration& cfg);
FirstIntegrals first_integrals_disk(const PlanarConfiguration& cfg);
FirstIntegrals first_integrals_halfplane(const PlanarConfiguration& cfg);
FirstIntegrals first_integrals_hyperboloid(const SpatialConfiguration& cfg);

// Below this magnitude an integral's relative drift is measured against the floor instead.
inline constexpr double drift_floor = 1e-6;

struct DriftReport {
    double h = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;

    double max() const noexcept;
};

// max_t |f(t) - f(0)| / max(|f(0)|, floor) for each integral.
DriftReport drift_report(std::span<const FirstIntegrals> samples, double floor = drift_floor);

}  // namespace hnb
