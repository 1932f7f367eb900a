#pragma once

// Geometry of the standard representation of S_k on the sum-zero hyperplane
// H_{k-1} of R^k: points, the permutation action, axes of symmetry, and the
// isometric charts onto the two-dimensional fixed-point planes E_p.

#include "skbif/linalg.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace skbif {

/// Dimension data for S_k acting on H_{k-1}: k = 2l+1 or k = 2l.
class Dim {
public:
    explicit Dim(int k);

    int k() const { return k_; }
    int ell() const { return k_ / 2; }
    bool odd() const { return k_ % 2 == 1; }

    /// Largest plane index: l+1 for odd k, l for even k.
    int plane_max() const { return odd() ? ell() + 1 : ell(); }

private:
    int k_;
};

/// A point of H_{k-1}, stored in ambient coordinates.
class HPoint {
public:
    HPoint() = default;

    /// Checked construction: the coordinates must sum to zero within 1e-12.
    explicit HPoint(Vec coords);

    /// Subtract the mean, no check.
    static HPoint project(Vec coords);

    static HPoint zero(int k) { return project(Vec::Zero(k)); }

    const Vec& vec() const { return coords_; }
    int k() const { return int(coords_.size()); }
    double operator[](int i) const { return coords_(i); }
    double norm() const { return coords_.norm(); }
    double dot(const HPoint& other) const { return coords_.dot(other.coords_); }

    HPoint operator+(const HPoint& o) const { return project(coords_ + o.coords_); }
    HPoint operator-(const HPoint& o) const { return project(coords_ - o.coords_); }
    HPoint operator*(double s) const { return project(coords_ * s); }
    HPoint operator-() const { return project(-coords_); }

private:
    Vec coords_;
};

inline HPoint operator*(double s, const HPoint& x) { return x * s; }

/// Zero-based permutation: sigma[i] is the image of i.
using Permutation = std::vector<int>;

bool is_permutation(const Permutation& sigma, int k);
Permutation compose(const Permutation& a, const Permutation& b); // (a o b)(i) = a(b(i))
Permutation inverse(const Permutation& sigma);
Permutation transposition(int k, int i, int j);

/// The unit vector eps_p = (q^p, -p^q) / sqrt(pqk).
HPoint eps(const Dim& dim, int p);

/// Unit axis vector whose coordinates in `positive_set` carry the positive value.
HPoint axis_vector(int k, const std::vector<int>& positive_set);

/// (sigma x)_i = x_{sigma^{-1}(i)}.
HPoint act(const Permutation& sigma, const HPoint& x);

/// An axis of symmetry g L_p.  The block is canonical: the smaller of the two
/// coordinate subsets, or the one containing coordinate 0 when both have
/// size k/2.  The oriented direction is orientation * axis_vector(block).
class AxisRep {
public:
    AxisRep(int k, std::vector<int> block, int orientation);

    /// Canonicalize an arbitrary nonempty proper positive set.
    static AxisRep from_positive_set(int k, std::vector<int> positive_set);

    int k() const { return k_; }
    const std::vector<int>& block() const { return block_; }
    int orientation() const { return orientation_; }

    /// Isotropy class p = min(|S|, k - |S|).
    int p() const { return int(block_.size()); }

    std::vector<int> positive_set() const;
    HPoint direction() const;

    bool operator==(const AxisRep& o) const
    {
        return k_ == o.k_ && block_ == o.block_ && orientation_ == o.orientation_;
    }

private:
    int k_;
    std::vector<int> block_;
    int orientation_;
};

struct AxisClassCount {
    int p;
    std::uint64_t count;
};

/// Number of unoriented axes in each isotropy class p = 1..l.
/// Valid for any k >= 3; the total is 2^{k-1} - 1.
std::vector<AxisClassCount> axis_class_counts(const Dim& dim);

/// Explicit list of all 2^{k-1} - 1 unoriented axes (orientation +1), grouped
/// by p.  Throws PreconditionError for k > 24; use axis_class_counts instead.
std::vector<AxisRep> enumerate_axes(const Dim& dim);

/// Equal-coordinate blocks of a nonzero point, in decreasing value order.
struct IsotropySignature {
    std::vector<int> blocks;
    std::vector<double> values;
    /// Largest coordinate gap that was merged into a block (0 if none).
    double merge_distance = 0.0;

    bool operator==(const std::vector<int>& b) const { return blocks == b; }
};

inline constexpr double kBlockMergeTolerance = 1e-9;

IsotropySignature isotropy_class(const HPoint& x, double tol = kBlockMergeTolerance);

/// Isometric chart U_p : R^2 -> E_p, 2 <= p <= plane_max().
/// For odd k and p = l + 1 the image is F_l.
class PlaneChart {
public:
    PlaneChart(const Dim& dim, int p);

    int k() const { return k_; }
    int p() const { return p_; }
    int q() const { return k_ - p_; }

    /// True when E_p = F_l (k odd, p = l + 1): v -> -v is then an S_{k-1} symmetry.
    bool is_F_ell() const { return k_ % 2 == 1 && p_ == k_ / 2 + 1; }

    const HPoint& basis_u() const { return basis_u_; }
    const HPoint& basis_v() const { return basis_v_; }

    /// k x 2 matrix [basis_u basis_v].
    Mat matrix() const;

    HPoint map(double u, double v) const;
    std::pair<double, double> coords(const HPoint& x) const;

    /// Chart slope of L_p: U_p^{-1}(L_p) = {(u, m_p u)}, m_p = sqrt(k(p-1)/q).
    double slope_Lp() const;
    /// Chart slope of L*_{p-1} in the (u, slope * u) form: -sqrt(qk/(p-1)).
    double slope_Lstar() const;

    /// eps_p and eps*_{p-1} = (1 p) eps_{p-1}, the oriented axis points of the plane.
    HPoint eps_p() const;
    HPoint eps_star() const;

private:
    int k_;
    int p_;
    HPoint basis_u_;
    HPoint basis_v_;
};

PlaneChart plane_chart(const Dim& dim, int p);

/// arccos(<a, b>) for the stored orientations.
double axis_angle(const AxisRep& a, const AxisRep& b);

/// Closed-form cosines of the three axis pairs inside E_p:
/// (L_1, L_p), (L*_{p-1}, L_p), (L*_{p-1}, L_1).
struct PlaneAxisCosines {
    double l1_lp;
    double lstar_lp;
    double lstar_l1;
};
PlaneAxisCosines plane_axis_cosines(const Dim& dim, int p);

/// Number of planes in the S_{k-1}-orbit of E_p counted as C(k-1, p-1).
std::uint64_t orbit_plane_count(const Dim& dim, int p);

/// S_{k-1}-orbit size of a zero of E_p off L_1, when zeros are collected from
/// one labelled chart including both signs of v.  Equals orbit_plane_count,
/// halved for F_l where (u, v) and (u, -v) lie in the same orbit.
std::uint64_t plane_zero_multiplicity(const Dim& dim, int p);

} // namespace skbif
