#pragma once

#include <complex>
#include <variant>

#include "hnb/errors.hpp"

namespace hnb {

using cplx = std::complex<double>;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

// Radius of curvature; the Gaussian curvature is -1/R^2.
class Curvature {
public:
    explicit Curvature(double radius = 1.0, double chart_tol = 1e-9);

    double radius() const noexcept { return radius_; }
    double kappa() const noexcept { return -1.0 / (radius_ * radius_); }
    // Relative tolerance used by chart membership tests.
    double chart_tol() const noexcept { return chart_tol_; }

private:
    double radius_;
    double chart_tol_;
};

struct HyperboloidPoint {
    Vec3 q;
};

struct DiskPoint {
    cplx z;
};

struct HalfPlanePoint {
    cplx w;
};

enum class Chart { hyperboloid, disk, halfplane };

const char* chart_name(Chart chart) noexcept;
Chart chart_from_name(const char* name);

using ChartPoint = std::variant<HyperboloidPoint, DiskPoint, HalfPlanePoint>;

Chart chart_of(const ChartPoint& p) noexcept;

// Position together with a tangent vector, in a complex chart or on the hyperboloid.
struct PlanarState {
    cplx pos;
    cplx vel;
};

struct SpatialState {
    Vec3 pos;
    Vec3 vel;
};

// Thrown when a flow leaves its chart; carries the last state that was still inside.
class BoundaryEscapeError : public DomainError {
public:
    BoundaryEscapeError(const std::string& what, PlanarState last)
        : DomainError(what), last_(last) {}
    const PlanarState& last_valid() const noexcept { return last_; }

private:
    PlanarState last_;
};

// Minkowski product x1 x2 + y1 y2 - z1 z2.
double lorentz_inner(const Vec3& a, const Vec3& b) noexcept;

bool on_upper_sheet(const Curvature& ctx, const Vec3& q) noexcept;
bool in_disk(const Curvature& ctx, cplx z) noexcept;
bool in_halfplane(const Curvature& ctx, cplx w) noexcept;
// Throws DomainError when the point violates its chart invariant.
void validate(const Curvature& ctx, const ChartPoint& p);

DiskPoint disk_from_hyperboloid(const Curvature& ctx, const HyperboloidPoint& p);
HyperboloidPoint hyperboloid_from_disk(const Curvature& ctx, const DiskPoint& p);
HalfPlanePoint halfplane_from_disk(const Curvature& ctx, const DiskPoint& p);
DiskPoint disk_from_halfplane(const Curvature& ctx, const HalfPlanePoint& p);

HyperboloidPoint to_hyperboloid(const Curvature& ctx, const ChartPoint& p);
DiskPoint to_disk(const Curvature& ctx, const ChartPoint& p);
HalfPlanePoint to_halfplane(const Curvature& ctx, const ChartPoint& p);

// Differentials of the chart maps, applied to a tangent vector at a point.
PlanarState halfplane_state_from_disk(const Curvature& ctx, const PlanarState& s);
PlanarState disk_state_from_halfplane(const Curvature& ctx, const PlanarState& s);
SpatialState hyperboloid_state_from_disk(const Curvature& ctx, const PlanarState& s);
PlanarState disk_state_from_hyperboloid(const Curvature& ctx, const SpatialState& s);

// Conformal factors: ds^2 = lambda |dz|^2 on the disk, mu |dw|^2 on the half plane.
double disk_metric_factor(const Curvature& ctx, cplx z) noexcept;
double halfplane_metric_factor(const Curvature& ctx, cplx w) noexcept;

// R acosh(-Q1.Q2 / R^2). Two points in the same complex chart use that chart's closed form;
// otherwise both are mapped to the hyperboloid.
double geodesic_distance(const Curvature& ctx, const ChartPoint& a, const ChartPoint& b);

// Disk Christoffel symbols, indexed as gamma<upper>_<lower><lower> with 1 = u, 2 = v.
struct ChristoffelSymbols {
    double g1_11, g1_12, g1_22;
    double g2_11, g2_12, g2_22;
};

ChristoffelSymbols christoffel_disk(const Curvature& ctx, const DiskPoint& p);

// Geodesic acceleration -2 conj(z) zdot^2 / (R^2 - |z|^2) on the disk
// and 2 wdot^2 / (w - conj(w)) on the half plane.
cplx geodesic_acceleration_disk(const Curvature& ctx, const PlanarState& s) noexcept;
cplx geodesic_acceleration_halfplane(const PlanarState& s) noexcept;

// Exact geodesic through s.pos with initial velocity s.vel, evaluated at parameter t.
PlanarState geodesic_flow_disk(const Curvature& ctx, const PlanarState& s, double t);
PlanarState geodesic_flow_halfplane(const Curvature& ctx, const PlanarState& s, double t);
SpatialState geodesic_flow_hyperboloid(const Curvature& ctx, const SpatialState& s, double t);

// Speed measured in the metric of each chart.
double metric_speed_disk(const Curvature& ctx, const PlanarState& s) noexcept;
double metric_speed_halfplane(const Curvature& ctx, const PlanarState& s) noexcept;

}  // namespace hnb
