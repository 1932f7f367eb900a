#include "skbif/equivariants.hpp"

#include "skbif/error.hpp"

#include <cmath>
#include <sstream>

namespace skbif {

namespace {

Mat sum_zero_projector(int k)
{
    return Mat::Identity(k, k) - Mat::Constant(k, k, 1.0 / k);
}

} // namespace

double cubic_C(const HPoint& x)
{
    return x.vec().array().cube().sum() / 3.0;
}

HPoint quad_Q(const HPoint& x)
{
    return HPoint::project(x.vec().array().square().matrix());
}

Mat quad_Q_jacobian(const HPoint& x)
{
    const int k = x.k();
    Mat d = Mat(2.0 * x.vec().asDiagonal());
    return sum_zero_projector(k) * d * sum_zero_projector(k);
}

HPoint bilinear_B(const HPoint& x, const HPoint& y)
{
    return (quad_Q(x + y) - quad_Q(x) - quad_Q(y)) * 0.5;
}

HPoint cubic_T1(const HPoint& x)
{
    return x * x.vec().squaredNorm();
}

HPoint cubic_T2(const HPoint& x)
{
    return HPoint::project(x.vec().array().cube().matrix());
}

Mat cubic_T1_jacobian(const HPoint& x)
{
    const int k = x.k();
    const Vec& v = x.vec();
    Mat j = v.squaredNorm() * Mat::Identity(k, k) + 2.0 * v * v.transpose();
    return j * sum_zero_projector(k);
}

Mat cubic_T2_jacobian(const HPoint& x)
{
    const int k = x.k();
    Mat d = Mat(3.0 * x.vec().array().square().matrix().asDiagonal());
    return sum_zero_projector(k) * d * sum_zero_projector(k);
}

double alpha_p(const Dim& dim, int p)
{
    require(p >= 1 && p <= dim.k() - 1, "alpha_p: p must lie in [1, k-1]");
    const double k = dim.k();
    const double q = k - p;
    return (p / q + q / p - 1.0) / k;
}

HPoint CubicParams::apply(const HPoint& x) const
{
    return cubic_T1(x) * a1 + cubic_T2(x) * a2;
}

Mat CubicParams::jacobian(const HPoint& x) const
{
    return a1 * cubic_T1_jacobian(x) + a2 * cubic_T2_jacobian(x);
}

double CubicParams::beta(const Dim& dim, int p) const
{
    return a1 + a2 * alpha_p(dim, p);
}

bool CubicParams::generic(const Dim& dim) const
{
    return beta(dim, dim.ell()) != 0.0;
}

HPoint phase_field(const HPoint& u)
{
    if (std::abs(u.norm() - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "phase_field: input must be a unit vector (norm " << u.norm() << ")";
        throw PreconditionError(os.str());
    }
    const HPoint q = quad_Q(u);
    return q - u * q.dot(u);
}

Mat phase_jacobian(const HPoint& u)
{
    if (std::abs(u.norm() - 1.0) > 1e-10) {
        throw PreconditionError("phase_jacobian: input must be a unit vector");
    }
    const int k = u.k();
    const Vec& uv = u.vec();
    const Vec qu = quad_Q(u).vec();
    const Mat dq = quad_Q_jacobian(u);
    // D P(u) h = DQ h - <DQ h, u> u - <Q(u), h> u - <Q(u), u> h
    Mat dp = dq - uv * (uv.transpose() * dq) - uv * qu.transpose()
             - qu.dot(uv) * Mat::Identity(k, k);
    Mat u_col = uv;
    const Mat tangent = complement_basis(sum_zero_basis(k), u_col);
    return tangent.transpose() * dp * tangent;
}

int phase_index(const Dim& dim, int p, bool at_minus)
{
    require(p >= 1 && p <= dim.k() - 1, "phase_index: p must lie in [1, k-1]");
    HPoint u = eps(dim, p);
    if (at_minus) {
        u = -u;
    }
    Mat m = phase_jacobian(u);
    // Q is a gradient, so the tangential Jacobian at a zero is symmetric.
    const double asym = relative_asymmetry(m);
    if (asym > 1e-10) {
        std::ostringstream os;
        os << "phase_index: projected Jacobian asymmetric (" << asym << ")";
        throw NumericalError(os.str());
    }
    return negative_count(0.5 * (m + m.transpose()));
}

} // namespace skbif
