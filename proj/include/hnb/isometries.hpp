#pragma once

#include <span>
#include <vector>

#include "hnb/geometry.hpp"

namespace hnb {

// 2x2 complex matrix [[a, b], [c, d]].
struct Mat2 {
    cplx a{1.0, 0.0};
    cplx b{};
    cplx c{};
    cplx d{1.0, 0.0};

    static Mat2 identity() { return Mat2{}; }
    cplx det() const { return a * d - b * c; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend Mat2 operator-(const Mat2& x) { return Mat2{-x.a, -x.b, -x.c, -x.d}; }
};

// Largest entrywise distance between two matrices.
double max_abs_diff(const Mat2& x, const Mat2& y) noexcept;

// Disk flavor: d = conj(a), c = conj(b), |a|^2 - |b|^2 = 1.
bool is_su11(const Mat2& m, double tol = 1e-12) noexcept;
// Half-plane flavor: real entries, ad - bc = 1.
bool is_sl2r(const Mat2& m, double tol = 1e-12) noexcept;

// G1, G2, G3 act on the disk; Phi1 (dilatation), Phi2 (shift), Phi3 (rotation) on the half plane.
enum class Subgroup { G1, G2, G3, Phi1, Phi2, Phi3 };

bool acts_on_disk(Subgroup tag) noexcept;
const char* subgroup_name(Subgroup tag) noexcept;

// Closed-form exp(t X) for the subgroup's Killing generator X.
Mat2 subgroup_matrix(Subgroup tag, double t);
// The generator X itself.
Mat2 subgroup_generator(Subgroup tag);

// z -> R f(z / R) with f(z) = (a z + b) / (c z + d), for an SU(1,1) matrix.
cplx mobius_disk(const Curvature& ctx, const Mat2& m, cplx z);
// w -> (a w + b) / (c w + d), for an SL(2,R) matrix.
cplx mobius_halfplane(const Mat2& m, cplx w);
// Dispatches on the chart of p and checks the matrix flavor.
ChartPoint mobius_apply(const Curvature& ctx, const Mat2& m, const ChartPoint& p);

// d/dt of the subgroup orbit through p at t = 0.
cplx killing_field(const Curvature& ctx, Subgroup tag, cplx p);

// Distance between the G2 Killing field at p and the pushforward of the hyperboloid
// rotation field (-y, x, 0) through the stereographic projection.
double killing_pushforward_check(const Curvature& ctx, Subgroup tag, cplx p);

std::vector<cplx> orbit(const Curvature& ctx, Subgroup tag, cplx p, std::span<const double> t_samples);

}  // namespace hnb
