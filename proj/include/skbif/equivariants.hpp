#pragma once

// Invariant and equivariant calculus on H_{k-1}: the cubic invariant C, its
// gradient Q, the bilinear form B, the cubic equivariants T1 and T2, and the
// phase vector field of Q on the unit sphere.

#include "skbif/rep_core.hpp"

namespace skbif {

/// C(x) = (1/3) sum x_i^3
double cubic_C(const HPoint& x);

/// Q(x)_i = x_i^2 - mean(x^2), the gradient of C on H_{k-1}.
HPoint quad_Q(const HPoint& x);

/// Ambient matrix of DQ_x restricted to H_{k-1}:
/// DQ_x h = 2 x_i h_i - (2/k) <x, h>.
Mat quad_Q_jacobian(const HPoint& x);

/// B(x, y) = (Q(x + y) - Q(x) - Q(y)) / 2
HPoint bilinear_B(const HPoint& x, const HPoint& y);

/// T1(x) = ||x||^2 x
HPoint cubic_T1(const HPoint& x);
/// T2(x)_i = x_i^3 - mean(x^3)
HPoint cubic_T2(const HPoint& x);

Mat cubic_T1_jacobian(const HPoint& x);
Mat cubic_T2_jacobian(const HPoint& x);

/// T2(eps_p) = alpha_p eps_p, alpha_p = (p/q + q/p - 1) / k.
double alpha_p(const Dim& dim, int p);

/// A cubic equivariant T = a1 T1 + a2 T2.
struct CubicParams {
    double a1 = 0.0;
    double a2 = 0.0;

    HPoint apply(const HPoint& x) const;
    Mat jacobian(const HPoint& x) const;

    /// T(eps_p) = beta_p eps_p.
    double beta(const Dim& dim, int p) const;
    /// Generic cubic: beta_l != 0.
    bool generic(const Dim& dim) const;
};

/// Tangential part of Q on the unit sphere: Q(u) - <Q(u), u> u.
/// Throws PreconditionError unless | ||u|| - 1 | <= 1e-10.
HPoint phase_field(const HPoint& u);

/// Jacobian of the phase field restricted to the tangent space at u,
/// expressed in an orthonormal tangent basis, (k-2) x (k-2).
Mat phase_jacobian(const HPoint& u);

/// Number of negative eigenvalues of the phase field Jacobian at eps_p
/// (or at -eps_p when `at_minus`).  Throws NonHyperbolicError if an
/// eigenvalue lies within 1e-9 of zero.
int phase_index(const Dim& dim, int p, bool at_minus);

} // namespace skbif
