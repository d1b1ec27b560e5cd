#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hnb/dynamics.hpp"
#include "hnb/integrator.hpp"

namespace hnb {

enum class REClass { elliptic, hyperbolic, parabolic };

const char* re_class_name(REClass c) noexcept;

// Left side minus right side of a relative-equilibrium system, one entry per body.
struct ResidualReport {
    REClass cls = REClass::elliptic;
    std::vector<cplx> residuals;
    std::vector<cplx> lhs;
    std::vector<cplx> rhs;
    // max_k |residual_k|
    double norm = 0.0;
    // max_k |residual_k| / (|lhs_k| + sum_j |term_kj|), dimensionless
    double scaled_norm = 0.0;
};

// Rigid rotation z(t) = z(0) exp(-i t / 2) in the disk.
ResidualReport elliptic_residual(const PlanarConfiguration& cfg);
// Dilatation w(t) = w(0) exp(-t / 2) in the half plane.
ResidualReport hyperbolic_residual(const PlanarConfiguration& cfg);
// Horizontal translation w(t) = w(0) - t / 2 in the half plane.
ResidualReport parabolic_residual(const PlanarConfiguration& cfg);
ResidualReport residual(REClass cls, const PlanarConfiguration& cfg);

// Every right-hand side is linear in the masses: the factor s that best closes the
// system when all masses are multiplied by s (least squares over bodies).
double fit_mass_scale(REClass cls, const PlanarConfiguration& cfg);
PlanarConfiguration scale_masses(PlanarConfiguration cfg, double s);

// ---- elliptic, two bodies on a diameter ----

// m1 alpha (R^2 + alpha^2)(R^2 - x^2)^2 - m2 x (R^2 + x^2)(R^2 - alpha^2)^2 and its derivative.
double two_body_shape_function(double m1, double m2, double alpha, double R, double x) noexcept;
double two_body_shape_derivative(double m1, double m2, double alpha, double R, double x) noexcept;

// The unique root r in (0, R) of the shape function, by bisection.
double solve_two_body_elliptic(double m1, double m2, double alpha, double R);

struct TwoBodyEllipticSolution {
    double r = 0.0;
    // z1 = alpha, z2 = -r, masses multiplied by `scale` so that the rotation rate is 1/2
    double scale = 0.0;
    PlanarConfiguration cfg;
};

TwoBodyEllipticSolution two_body_elliptic(double m1, double m2, double alpha, double R);

struct NoDoubleRootCertificate {
    bool holds = false;
    double root = 0.0;
    double derivative_at_root = 0.0;
    std::array<cplx, 4> quartic_roots{};
};

// x^4 + 6 R^2 x^2 + R^4 has no real roots and the derivative is nonzero at the root.
NoDoubleRootCertificate two_body_no_double_roots_certificate(double m1, double m2, double alpha, double R);

// ---- elliptic, three bodies ----

struct EulerThreeResult {
    bool feasible = false;
    std::string reason;
    // Determinant of the linear system for (m2, m3).
    double determinant = 0.0;
    double central_mass = 0.0;
    PlanarConfiguration cfg;
};

// (R^2 + x^2) x^3 / (R^2 - x^2)^4
double euler_shape_function(double x, double R) noexcept;

// Central body at the origin, others at alpha and -r on one diameter.
EulerThreeResult euler_elliptic_three(double m2, double m3, double alpha, double r, double R);

struct RestrictedProbeResult {
    bool feasible = false;
    std::string reason;
    // Residuals of the three bodies (massless probe first) in the rotation-rate normalization.
    std::array<cplx, 3> residuals{};
    double h_alpha = 0.0;
    double h_beta = 0.0;
    // Common mass of the primaries that closes the system when the shape is admissible.
    double primary_mass = 0.0;
};

// (R^2 + x^2) x / (R^2 - x^2)^2
double restricted_shape_function(double x, double R) noexcept;

// Massless probe at c, primaries of equal mass at alpha and -beta.
RestrictedProbeResult restricted_euler_probe(double m2, double m3, double alpha, double beta, double c, double R);

struct LagrangeResult {
    double mass = 0.0;
    PlanarConfiguration cfg;
    // Normalized residuals of the real and imaginary angle conditions at 2 pi / 3, 4 pi / 3.
    double angle_real_residual = 0.0;
    double angle_imag_residual = 0.0;
};

LagrangeResult lagrange_elliptic_three(double r, double R);

// Normalized residuals (real, imaginary) of the angle conditions for bodies at r e^{i theta}.
std::array<double, 2> lagrange_angle_conditions(double theta2, double theta3, double r, double R);

// Solutions in [0, 2 pi] of cos(theta) = cos(2 theta).
std::vector<double> lagrange_angle_candidates();

// ---- hyperbolic ----

struct TwoBodyHyperbolicResult {
    bool feasible = false;
    std::string reason;
    // Angles measured from the positive real axis.
    double theta1 = 0.0;
    double theta2 = 0.0;
    double scale = 0.0;
    PlanarConfiguration cfg;
};

// sin^2(theta) / cos(theta), the slope times height of a ray point at unit modulus.
double slope_height(double theta) noexcept;

TwoBodyHyperbolicResult solve_two_body_hyperbolic(double m1, double m2, double theta1, double R);

struct ThreeBodyHyperbolicResult {
    bool feasible = false;
    std::string reason;
    double theta1 = 0.0;
    double outer_mass = 0.0;
    double middle_mass = 0.0;
    PlanarConfiguration cfg;
};

// Bodies at i R e^{i theta1}, i R, i R e^{-i theta1}: angle measured from the imaginary axis.
// The middle body's equation holds by symmetry and the outer one fixes only a single
// real combination of the masses, so the middle-to-outer mass ratio is an input.
ThreeBodyHyperbolicResult solve_three_body_hyperbolic(double theta1, double R, double middle_ratio = 1.0);

// cos^3 x / sin^4 x, even and strictly decreasing on (0, pi / 2).
double three_body_angle_function(double x) noexcept;

// Whether outer angles (from the imaginary axis) can belong to a three-body solution.
bool three_body_angles_admissible(double theta1, double theta3);

enum class NoGoKind { imaginary_axis, common_ray };

struct SweepSummary {
    std::size_t samples = 0;
    double min_norm = 0.0;
    double min_scaled_norm = 0.0;
};

// Two-body configurations that cannot be hyperbolic equilibria, sampled at random.
SweepSummary hyperbolic_nogo_sweep(NoGoKind kind, std::size_t samples, double R, std::uint64_t seed,
                                   unsigned jobs = 1);

// ---- parabolic ----

struct ParabolicCertificate {
    std::size_t n = 0;
    std::size_t samples = 0;
    // Non-collinear samples whose imaginary residual at the rightmost body is nonzero.
    std::size_t excluded_noncollinear = 0;
    // Vertical stacks where the top body's two sides have opposite signs.
    std::size_t stacks_with_contradiction = 0;
    bool holds = false;
    // Smallest residual norms seen over random and locally refined configurations.
    double min_norm = 0.0;
    double min_scaled_norm = 0.0;
};

ParabolicCertificate parabolic_nonexistence_certificate(std::size_t n, double R, std::size_t samples,
                                                        std::uint64_t seed, unsigned jobs = 1);

// Sign of both sides of the real parabolic equation at body k of a vertical stack.
struct StackSigns {
    int lhs = 0;
    int rhs = 0;
};

StackSigns parabolic_stack_signs(const PlanarConfiguration& cfg, std::size_t k);

// ---- closed-form orbits ----

enum class FamilyTag { elliptic2, euler3, lagrange3, hyperbolic2, hyperbolic3, parabolic };

const char* family_name(FamilyTag tag) noexcept;
REClass family_class(FamilyTag tag) noexcept;

struct REFamily {
    FamilyTag tag = FamilyTag::elliptic2;
    PlanarConfiguration cfg;
    double residual_norm = 0.0;
    bool verified = false;
};

// Checks the configuration against its class residual (norm below tol marks it verified).
REFamily make_family(FamilyTag tag, const PlanarConfiguration& cfg, double tol = 1e-10);

// Samples the rigid motion of a verified family, with matching velocities and integrals.
Trajectory re_trajectory(const REFamily& family, std::span<const double> t_grid);

}  // namespace hnb
