#include "skbif/symbreak.hpp"

#include "skbif/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace skbif {

// ---------------------------------------------------------------- planar system

PlanarSystem planar_system(int k, int p, double eta, bool cubic)
{
    const Dim dim(k);
    require(p >= 2 && p <= dim.plane_max(), "planar_system: p must lie in [2, plane_max]");
    require(eta >= 0.0, "planar_system: eta must be non-negative");
    PlanarSystem s;
    s.k = k;
    s.p = p;
    s.eta = eta;
    s.cubic = cubic;
    const double q = k - p;
    s.B = 1.0 / std::sqrt(double(k) * (k - 1));
    s.A = (k - 2) * s.B;
    s.alpha = 2.0 * s.B;
    s.F_ell = dim.odd() && p == dim.ell() + 1;
    s.cv = s.F_ell ? 0.0 : (q - p + 1.0) / std::sqrt(q * (k - 1) * (p - 1));
    return s;
}

std::array<double, 2> PlanarSystem::rhs(double u, double v, double lambda) const
{
    const double c = cubic ? 1.0 : 0.0;
    const double r2 = u * u + v * v;
    return {lambda * u - B * ((k - 2) * u * u - v * v) - eta - c * r2 * u,
            lambda * v + alpha * u * v - cv * v * v - c * r2 * v};
}

Eigen::Matrix2d PlanarSystem::jac(double u, double v, double lambda) const
{
    const double c = cubic ? 1.0 : 0.0;
    Eigen::Matrix2d J;
    J(0, 0) = lambda - 2.0 * A * u - c * (3.0 * u * u + v * v);
    J(0, 1) = 2.0 * B * v - 2.0 * c * u * v;
    J(1, 0) = alpha * v - 2.0 * c * u * v;
    J(1, 1) = lambda + alpha * u - 2.0 * cv * v - c * (u * u + 3.0 * v * v);
    return J;
}

std::array<double, 2> planar_rhs(const PlanarSystem& sys, double u, double v, double lambda)
{
    return sys.rhs(u, v, lambda);
}

Eigen::Matrix2d planar_jac(const PlanarSystem& sys, double u, double v, double lambda)
{
    return sys.jac(u, v, lambda);
}

EquilibriumProblem planar_system_problem(const PlanarSystem& sys)
{
    EquilibriumProblem p;
    p.n = 2;
    p.name = "planar-E" + std::to_string(sys.p);
    const PlaneChart chart = sys.chart();
    p.f = [sys](const Vec& y, double lam) {
        const auto r = sys.rhs(y(0), y(1), lam);
        Vec out(2);
        out << r[0], r[1];
        return out;
    };
    p.jac = [sys](const Vec& y, double lam) { return Mat(sys.jac(y(0), y(1), lam)); };
    p.dlam = [](const Vec& y, double) { return Vec(y); };
    p.lift = [chart](const Vec& y) { return chart.map(y(0), y(1)); };
    return p;
}

namespace {

// Second derivatives: d/du and d/dv of the planar Jacobian.
std::pair<Eigen::Matrix2d, Eigen::Matrix2d> planar_jac_derivs(const PlanarSystem& s, double u,
                                                              double v)
{
    const double c = s.cubic ? 1.0 : 0.0;
    Eigen::Matrix2d Ju, Jv;
    Ju(0, 0) = -2.0 * s.A - 6.0 * c * u;
    Ju(0, 1) = -2.0 * c * v;
    Ju(1, 0) = -2.0 * c * v;
    Ju(1, 1) = s.alpha - 2.0 * c * u;
    Jv(0, 0) = -2.0 * c * v;
    Jv(0, 1) = 2.0 * s.B - 2.0 * c * u;
    Jv(1, 0) = s.alpha - 2.0 * c * u;
    Jv(1, 1) = -2.0 * s.cv - 6.0 * c * v;
    return {Ju, Jv};
}

double det_derivative(const Eigen::Matrix2d& J, const Eigen::Matrix2d& dJ)
{
    return dJ(0, 0) * J(1, 1) + J(0, 0) * dJ(1, 1) - dJ(0, 1) * J(1, 0) - J(0, 1) * dJ(1, 0);
}

// Real roots of a2 x^2 + a1 x + a0; `near_double` set when the discriminant
// is within tol of zero (a single fold-adjacent root is returned).
std::vector<double> quadratic_roots(double a2, double a1, double a0, bool& near_double,
                                    double tol = 1e-12)
{
    near_double = false;
    std::vector<double> out;
    if (a2 == 0.0) {
        if (a1 != 0.0) {
            out.push_back(-a0 / a1);
        }
        return out;
    }
    const double disc = a1 * a1 - 4.0 * a2 * a0;
    const double scale = std::max({a1 * a1, std::abs(4.0 * a2 * a0), 1e-300});
    if (std::abs(disc) <= tol * std::max(1.0, scale) && std::abs(disc) <= tol) {
        near_double = true;
        out.push_back(-a1 / (2.0 * a2));
        return out;
    }
    if (disc < 0) {
        return out;
    }
    const double sq = std::sqrt(disc);
    const double qv = -0.5 * (a1 + (a1 >= 0 ? sq : -sq));
    if (qv != 0.0) {
        out.push_back(qv / a2);
        out.push_back(a0 / qv);
    } else {
        out.push_back(0.0);
        out.push_back(0.0);
    }
    return out;
}

std::vector<double> cubic_real_roots(double a3, double a2, double a1, double a0)
{
    if (a3 == 0.0) {
        bool nd = false;
        return quadratic_roots(a2, a1, a0, nd);
    }
    Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
    C(0, 0) = -a2 / a3;
    C(0, 1) = -a1 / a3;
    C(0, 2) = -a0 / a3;
    C(1, 0) = 1.0;
    C(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(C, false);
    std::vector<double> out;
    for (int i = 0; i < 3; ++i) {
        const auto z = es.eigenvalues()(i);
        if (std::abs(z.imag()) <= 1e-7 * std::max(1.0, std::abs(z))) {
            out.push_back(z.real());
        }
    }
    return out;
}

bool polish(const PlanarSystem& s, double& u, double& v, double lambda, double& res)
{
    for (int it = 0; it < 40; ++it) {
        const auto r = s.rhs(u, v, lambda);
        res = std::hypot(r[0], r[1]);
        if (res < 1e-15) {
            return true;
        }
        const Eigen::Matrix2d J = s.jac(u, v, lambda);
        const double det = J.determinant();
        if (std::abs(det) < 1e-14) {
            return res < 1e-12;
        }
        const Eigen::Vector2d d = J.inverse() * Eigen::Vector2d(r[0], r[1]);
        u -= d(0);
        v -= d(1);
        if (d.norm() < 1e-16 * (1.0 + std::hypot(u, v))) {
            const auto r2 = s.rhs(u, v, lambda);
            res = std::hypot(r2[0], r2[1]);
            return res < 1e-12;
        }
    }
    const auto r = s.rhs(u, v, lambda);
    res = std::hypot(r[0], r[1]);
    return res < 1e-12;
}

struct Candidate {
    double u, v;
    bool fold_adjacent;
};

void off_axis_candidates(const PlanarSystem& s, double lambda, std::vector<Candidate>& out)
{
    const double B = s.B, A = s.A, al = s.alpha, cv = s.cv, eta = s.eta;
    if (!s.cubic) {
        if (s.F_ell) {
            // v-equation forces u = -lambda / alpha.
            const double u = -lambda / al;
            const double v2 = (eta + A * u * u - lambda * u) / B;
            if (v2 > 0) {
                const double v = std::sqrt(v2);
                out.push_back({u, v, false});
                out.push_back({u, -v, false});
            }
            return;
        }
        // v = (lambda + alpha u) / cv substituted into the u-equation.
        const double c2 = cv * cv;
        const double a2 = -A + B * al * al / c2;
        const double a1 = lambda * (1.0 + 2.0 * B * al / c2);
        const double a0 = B * lambda * lambda / c2 - eta;
        bool nd = false;
        for (double u : quadratic_roots(a2, a1, a0, nd)) {
            out.push_back({u, (lambda + al * u) / cv, nd});
        }
        return;
    }
    // Cubic: the v-equation gives the circle u^2 + v^2 = lambda + alpha u - cv v,
    // and the combination gives the conic -(A+alpha) u^2 + cv u v + B v^2 = eta.
    if (eta == 0.0) {
        bool nd = false;
        for (double t : quadratic_roots(-(A + al), cv, B, nd)) {
            const double n = std::sqrt(1.0 + t * t);
            const double du = t / n, dv = 1.0 / n;
            const double m = al * du - cv * dv;
            bool nd2 = false;
            for (double r : quadratic_roots(1.0, -m, -lambda, nd2)) {
                if (r != 0.0) {
                    out.push_back({r * du, r * dv, nd2});
                }
            }
        }
        return;
    }
    constexpr int N = 8192;
    auto g = [&](double th, bool& ok) {
        const double c = std::cos(th), sn = std::sin(th);
        const double Qt = -(A + al) * c * c + cv * c * sn + B * sn * sn;
        ok = Qt > 1e-14;
        if (!ok) {
            return 0.0;
        }
        const double r = std::sqrt(eta / Qt);
        return lambda + r * (al * c - cv * sn) - r * r;
    };
    auto point = [&](double th) {
        const double c = std::cos(th), sn = std::sin(th);
        const double Qt = -(A + al) * c * c + cv * c * sn + B * sn * sn;
        const double r = std::sqrt(eta / Qt);
        return std::pair<double, double>{r * c, r * sn};
    };
    const double two_pi = 2.0 * M_PI;
    bool ok_prev = false;
    double g_prev = g(0.0, ok_prev);
    for (int i = 1; i <= N; ++i) {
        const double th = two_pi * i / N;
        bool ok = false;
        const double gv = g(th, ok);
        if (ok && ok_prev && (g_prev == 0.0 || g_prev * gv < 0)) {
            double lo = two_pi * (i - 1) / N, hi = th, glo = g_prev;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                bool okm = false;
                const double gm = g(mid, okm);
                if (gm * glo <= 0) {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            const auto [u, v] = point(0.5 * (lo + hi));
            out.push_back({u, v, false});
        }
        ok_prev = ok;
        g_prev = gv;
    }
}

void axis_candidates(const PlanarSystem& s, double lambda, std::vector<Candidate>& out)
{
    if (s.eta == 0.0) {
        out.push_back({0.0, 0.0, lambda == 0.0});
    }
    if (!s.cubic) {
        if (s.eta == 0.0) {
            if (lambda != 0.0) {
                out.push_back({lambda / s.A, 0.0, false});
            }
            return;
        }
        bool nd = false;
        for (double u : quadratic_roots(s.A, -lambda, s.eta, nd)) {
            out.push_back({u, 0.0, nd});
        }
        return;
    }
    // -u^3 - A u^2 + lambda u - eta = 0
    for (double u : cubic_real_roots(-1.0, -s.A, lambda, -s.eta)) {
        if (s.eta == 0.0 && std::abs(u) < 1e-14) {
            continue;
        }
        out.push_back({u, 0.0, false});
    }
}

} // namespace

std::vector<PlanarZero> planar_zeros(const PlanarSystem& sys, double lambda)
{
    std::vector<Candidate> cands;
    axis_candidates(sys, lambda, cands);
    std::vector<Candidate> off;
    off_axis_candidates(sys, lambda, off);
    for (const auto& c : off) {
        if (std::abs(c.v) > 1e-12) {
            cands.push_back(c);
        }
    }
    std::vector<PlanarZero> out;
    for (auto c : cands) {
        PlanarZero z;
        z.u = c.u;
        z.v = c.v;
        z.fold_adjacent = c.fold_adjacent;
        const bool on_axis = c.v == 0.0;
        if (!z.fold_adjacent) {
            double u = c.u, v = c.v, res = 0.0;
            if (polish(sys, u, v, lambda, res)) {
                z.u = u;
                z.v = on_axis ? 0.0 : v;
            }
        }
        const auto r = sys.rhs(z.u, z.v, lambda);
        z.residual = std::hypot(r[0], r[1]);
        if (!z.fold_adjacent) {
            try {
                z.index = negative_count(Mat(sys.jac(z.u, z.v, lambda)));
            } catch (const NonHyperbolicError&) {
                z.fold_adjacent = true;
            }
        }
        if (z.fold_adjacent) {
            z.index = -1;
        }
        bool dup = false;
        for (const auto& o : out) {
            if (std::hypot(o.u - z.u, o.v - z.v) < 1e-9) {
                dup = true;
            }
        }
        if (!dup) {
            out.push_back(z);
        }
    }
    std::sort(out.begin(), out.end(), [](const PlanarZero& a, const PlanarZero& b) {
        return a.u < b.u || (a.u == b.u && a.v < b.v);
    });
    return out;
}

double gamma_closed(int k, int p, double eta)
{
    const Dim dim(k);
    require(p >= 1 && 2 * p <= k, "gamma_closed: p must lie in [1, k/2]");
    require(eta > 0.0, "gamma_closed: eta must be positive");
    if (2 * p == k) {
        return 0.0;
    }
    const double kk = k;
    const double g1 = 2.0 * std::sqrt(eta) * std::sqrt(kk - 2.0) / std::pow(kk * (kk - 1.0), 0.25);
    if (p == 1) {
        return g1;
    }
    const double q = k - p;
    const double w = q - p + 1.0;
    return g1 * (w / (kk - 1.0)) * std::sqrt(1.0 - 4.0 * q * (p - 1.0) / (w * w * kk * (kk - 2.0)));
}

namespace {

int regular_count(const PlanarSystem& sys, double lambda)
{
    int n = 0;
    for (const auto& z : planar_zeros(sys, lambda)) {
        if (!z.fold_adjacent) {
            ++n;
        }
    }
    return n;
}

std::optional<FoldEvent> extended_newton(const PlanarSystem& sys, double u, double v, double lam)
{
    for (int it = 0; it < 60; ++it) {
        const auto r = sys.rhs(u, v, lam);
        const Eigen::Matrix2d J = sys.jac(u, v, lam);
        const double det = J.determinant();
        Eigen::Vector3d G(r[0], r[1], det);
        if (G.norm() < 1e-15) {
            break;
        }
        const auto [Ju, Jv] = planar_jac_derivs(sys, u, v);
        Eigen::Matrix3d M;
        M(0, 0) = J(0, 0);
        M(0, 1) = J(0, 1);
        M(1, 0) = J(1, 0);
        M(1, 1) = J(1, 1);
        M(0, 2) = u;
        M(1, 2) = v;
        M(2, 0) = det_derivative(J, Ju);
        M(2, 1) = det_derivative(J, Jv);
        M(2, 2) = J.trace();
        const Eigen::Vector3d d = M.fullPivLu().solve(G);
        if (!d.allFinite()) {
            return std::nullopt;
        }
        u -= d(0);
        v -= d(1);
        lam -= d(2);
        if (d.norm() < 1e-17 * (1.0 + std::abs(lam) + std::hypot(u, v))) {
            break;
        }
    }
    const auto r = sys.rhs(u, v, lam);
    const double det = sys.jac(u, v, lam).determinant();
    if (std::hypot(r[0], r[1]) > 1e-12 || std::abs(det) > 1e-10) {
        return std::nullopt;
    }
    FoldEvent fe;
    fe.lambda_star = lam;
    fe.y = Vec(2);
    fe.y << u, v;
    fe.x = sys.chart().map(u, v);
    fe.plane = std::abs(v) < 1e-9 ? 1 : sys.p;
    const auto spec = spectrum_real_parts(Mat(sys.jac(u, v, lam)));
    fe.min_abs_eigenvalue = std::min(std::abs(spec.front()), std::abs(spec.back()));
    return fe;
}

void bracket_folds(const PlanarSystem& sys, double lo, double hi, int n_lo, int n_hi, int depth,
                   std::vector<std::pair<double, double>>& out)
{
    if (n_lo == n_hi) {
        return;
    }
    if (std::abs(n_lo - n_hi) <= 2) {
        out.push_back({lo, hi});
        return;
    }
    if (depth >= 5) {
        throw NumericalError("fold_detect: grid refinement floor reached");
    }
    constexpr int sub = 16;
    double a = lo;
    int na = n_lo;
    for (int i = 1; i <= sub; ++i) {
        const double b = lo + (hi - lo) * i / sub;
        const int nb = i == sub ? n_hi : regular_count(sys, b);
        bracket_folds(sys, a, b, na, nb, depth + 1, out);
        a = b;
        na = nb;
    }
}

} // namespace

std::vector<FoldEvent> fold_detect(const PlanarSystem& sys, double lambda_lo, double lambda_hi,
                                   int grid)
{
    require(lambda_lo < lambda_hi, "fold_detect: need lambda_lo < lambda_hi");
    require(grid >= 2, "fold_detect: grid must have at least two points");
    std::vector<std::pair<double, double>> brackets;
    double prev = lambda_lo;
    int n_prev = regular_count(sys, prev);
    for (int i = 1; i <= grid; ++i) {
        const double lam = lambda_lo + (lambda_hi - lambda_lo) * i / grid;
        const int n = regular_count(sys, lam);
        bracket_folds(sys, prev, lam, n_prev, n, 0, brackets);
        prev = lam;
        n_prev = n;
    }
    std::vector<FoldEvent> out;
    for (auto [lo, hi] : brackets) {
        int n_lo = regular_count(sys, lo);
        int n_hi = regular_count(sys, hi);
        if (n_lo == n_hi) {
            continue;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            const int nm = regular_count(sys, mid);
            if (nm == n_lo) {
                lo = mid;
            } else {
                hi = mid;
                n_hi = nm;
            }
        }
        const double lam_more = n_lo > n_hi ? lo : hi;
        std::vector<PlanarZero> zs;
        for (const auto& z : planar_zeros(sys, lam_more)) {
            if (!z.fold_adjacent) {
                zs.push_back(z);
            }
        }
        // The merging pair is the closest pair of zeros.
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < zs.size(); ++i) {
            for (std::size_t j = i + 1; j < zs.size(); ++j) {
                const double d = std::hypot(zs[i].u - zs[j].u, zs[i].v - zs[j].v);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (zs.size() < 2) {
            throw NumericalError("fold_detect: could not identify the merging pair");
        }
        const double u0 = 0.5 * (zs[bi].u + zs[bj].u);
        const double v0 = 0.5 * (zs[bi].v + zs[bj].v);
        auto fe = extended_newton(sys, u0, v0, lam_more);
        if (!fe) {
            throw NumericalError("fold_detect: extended-system Newton failed");
        }
        fe->index_before = std::min(zs[bi].index, zs[bj].index);
        fe->index_after = std::max(zs[bi].index, zs[bj].index);
        if (std::abs(fe->lambda_star - lam_more) > 1e-6 * std::max(1.0, std::abs(lam_more))) {
            throw NumericalError("fold_detect: polished fold drifted away from its bracket");
        }
        out.push_back(*fe);
    }
    std::sort(out.begin(), out.end(),
              [](const FoldEvent& a, const FoldEvent& b) { return a.lambda_star < b.lambda_star; });
    return out;
}

BPoint b_point(int k, int p, double eta)
{
    const Dim dim(k);
    require(p >= 1 && 2 * p < k, "b_point: requires 1 <= p < k/2");
    require(eta > 0.0, "b_point: eta must be positive");
    BPoint b;
    b.lambda = gamma_closed(k, p, eta);
    if (p == 1) {
        const double A = (k - 2.0) / std::sqrt(double(k) * (k - 1));
        b.u = b.lambda / (2.0 * A);
        b.v = 0.0;
        b.x = eps(dim, 1) * b.u;
    } else {
        const PlanarSystem s = planar_system(k, p, eta);
        const double c2 = s.cv * s.cv;
        const double a2 = -s.A + s.B * s.alpha * s.alpha / c2;
        const double a1 = b.lambda * (1.0 + 2.0 * s.B * s.alpha / c2);
        b.u = -a1 / (2.0 * a2);
        b.v = (b.lambda + s.alpha * b.u) / s.cv;
        b.x = s.chart().map(b.u, b.v);
    }
    b.norm = b.x.norm();
    return b;
}

bool gamma_monotone(int k, double eta)
{
    require(k >= 3, "gamma_monotone: k must be at least 3");
    const double kk = k;
    const double g_hi = 2.0 * std::sqrt(eta) * std::sqrt(kk - 2.0) / std::pow(kk * (kk - 1.0), 0.25);
    const double g_lo = 2.0 * std::sqrt(eta) * std::sqrt(3.0) / (std::sqrt(kk) * std::pow(kk * (kk - 1.0), 0.25));
    double prev = std::numeric_limits<double>::infinity();
    for (int p = 1; 2 * p < k; ++p) {
        const double g = gamma_closed(k, p, eta);
        if (!(g < prev) || g <= 0.0 || g > 2.0 * std::sqrt(eta)) {
            return false;
        }
        if (g < g_lo * (1.0 - 1e-12) || g > g_hi * (1.0 + 1e-12)) {
            return false;
        }
        prev = g;
    }
    return true;
}

double decompose_alpha(int k)
{
    const Dim dim(k);
    const HPoint e1 = eps(dim, 1);
    Mat e1c = e1.vec();
    const Mat W = complement_basis(sum_zero_basis(k), e1c);
    const int m = int(W.cols());
    Mat M(m, m);
    for (int j = 0; j < m; ++j) {
        const HPoint w = HPoint::project(W.col(j));
        HPoint b = bilinear_B(e1, w) * 2.0;
        b = b - e1 * b.dot(e1);
        M.col(j) = W.transpose() * b.vec();
    }
    // 2 pi_2 B(eps_1, .) = -alpha I; alpha is the coefficient of x y in the y-equation.
    const double c = M.trace() / m;
    const double err = (M - c * Mat::Identity(m, m)).norm();
    if (err > 1e-10) {
        std::ostringstream os;
        os << "decompose_alpha: 2 pi_2 B(eps_1, .) is not a multiple of the identity (" << err << ")";
        throw NumericalError(os.str());
    }
    return -c;
}

std::int64_t chi(int k, int p)
{
    require(k >= 3 && p >= 0 && p <= k, "chi: need k >= 3 and 0 <= p <= k");
    std::int64_t s = 0;
    for (int j = 0; j <= p; ++j) {
        const auto c = std::int64_t(binomial(k, j));
        s += (j % 2 == 0) ? c : -c;
    }
    return (p % 2 == 0) ? s : -s;
}

PredictedCounts predicted_counts(int k)
{
    require(k >= 3 && k <= 62, "predicted_counts: k must lie in [3, 62]");
    PredictedCounts c;
    c.crossings = binomial(k - 1, k / 2);
    c.folds = (std::uint64_t(1) << (k - 1)) - c.crossings;
    return c;
}

std::uint64_t staircase_count(int k, double eta, double lambda)
{
    require(k % 2 == 1, "staircase_count: k must be odd");
    std::uint64_t n = std::uint64_t(1) << (k - 1);
    for (int p = 1; 2 * p < k; ++p) {
        if (gamma_closed(k, p, eta) > std::abs(lambda)) {
            n -= 2 * binomial(k - 1, p - 1);
        }
    }
    return n;
}

// ---------------------------------------------------------------- enumeration

std::vector<HPoint> expand_orbit(const HPoint& x, double tol)
{
    const int k = x.k();
    std::vector<std::pair<double, int>> vals;
    for (int i = 1; i < k; ++i) {
        vals.push_back({x[i], i});
    }
    std::sort(vals.begin(), vals.end(), [](auto a, auto b) { return a.first > b.first; });
    // Label equal-value blocks.
    std::vector<int> labels(k - 1);
    std::vector<double> block_values;
    int label = -1;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i == 0 || vals[i - 1].first - vals[i].first > tol) {
            ++label;
            block_values.push_back(vals[i].first);
        }
        labels[i] = label;
    }
    std::vector<HPoint> out;
    std::sort(labels.begin(), labels.end());
    do {
        Vec v(k);
        v(0) = x[0];
        for (int i = 1; i < k; ++i) {
            v(i) = block_values[labels[i - 1]];
        }
        out.push_back(HPoint::project(v));
    } while (std::next_permutation(labels.begin(), labels.end()));
    return out;
}

std::uint64_t total_count(const std::vector<Equilibrium>& eqs)
{
    std::uint64_t n = 0;
    for (const auto& e : eqs) {
        n += e.multiplicity;
    }
    return n;
}

std::vector<Vec> seeded_zeros(const EquilibriumProblem& prob, double lambda, double R)
{
    std::vector<Vec> seeds;
    if (prob.n == 1) {
        constexpr int N = 600;
        for (int i = 0; i <= N; ++i) {
            Vec s(1);
            s(0) = -R + 2.0 * R * i / N;
            seeds.push_back(s);
        }
    } else {
        constexpr int NR = 40, NA = 72;
        seeds.push_back(Vec::Zero(2));
        for (int i = 1; i <= NR; ++i) {
            const double r = R * std::pow(double(i) / NR, 1.5);
            for (int j = 0; j < NA; ++j) {
                const double th = 2.0 * M_PI * (j + 0.5 * (i % 2)) / NA;
                Vec s(2);
                s << r * std::cos(th), r * std::sin(th);
                seeds.push_back(s);
            }
        }
    }
    std::vector<Vec> out;
    for (const auto& s : seeds) {
        try {
            const auto res = newton_solve(prob, s, lambda, 1e-12, 40);
            if (res.y.norm() > 4.0 * R) {
                continue;
            }
            bool dup = false;
            for (const auto& o : out) {
                if ((o - res.y).norm() < 1e-8) {
                    dup = true;
                    break;
                }
            }
            if (!dup) {
                out.push_back(res.y);
            }
        } catch (const NumericalError&) {
        }
    }
    return out;
}

double seed_radius(const FamilySpec& spec, double lambda)
{
    double r = std::sqrt(std::abs(lambda));
    for (int p = 1; 2 * p < spec.k; ++p) {
        const double q = spec.k - p;
        r = std::max(r, std::abs(lambda) * std::sqrt(p * q * spec.k) / (q - p));
    }
    return 1.5 * r + 4.0 * std::sqrt(spec.eta);
}

namespace {

bool closed_form_family(const FamilySpec& spec)
{
    return spec.kind == FamilyKind::PerturbedOdd && !spec.localization;
}

void check_fold_distance(const FamilySpec& spec, double lambda)
{
    for (int p = 1; 2 * p < spec.k; ++p) {
        const double g = gamma_closed(spec.k, p, spec.eta);
        if (std::abs(std::abs(lambda) - g) < 1e-8) {
            std::ostringstream os;
            os << "enumerate_equilibria: lambda = " << lambda << " is within 1e-8 of the fold value gamma_{"
               << spec.k << "," << p << "} = " << g;
            throw PreconditionError(os.str());
        }
    }
}

int ambient_index(const FamilySpec& spec, const HPoint& x, double lambda)
{
    const double res = eval(spec, x, lambda).norm();
    if (res > 1e-10) {
        std::ostringstream os;
        os << "enumerate_equilibria: lifted zero has ambient residual " << res;
        throw NumericalError(os.str());
    }
    return equilibrium_index(spec, x, lambda);
}

} // namespace

std::vector<Equilibrium> enumerate_equilibria(const FamilySpec& spec, double lambda)
{
    spec.validate();
    require(spec.kind == FamilyKind::PerturbedOdd || spec.kind == FamilyKind::PerturbedEven,
            "enumerate_equilibria: family must be perturbed-odd or perturbed-even");
    const Dim dim = spec.dim();
    std::vector<Equilibrium> out;

    if (closed_form_family(spec)) {
        check_fold_distance(spec, lambda);
        const PlanarSystem base = planar_system(spec.k, 2, spec.eta);
        for (const auto& z : planar_zeros(base, lambda)) {
            if (z.v == 0.0) {
                if (z.fold_adjacent) {
                    throw PreconditionError("enumerate_equilibria: lambda is at a fold on L_1");
                }
                const HPoint x = eps(dim, 1) * z.u;
                out.push_back({x, ambient_index(spec, x, lambda), 1, 1});
            }
        }
        for (int p = 2; p <= dim.plane_max(); ++p) {
            const PlanarSystem s = planar_system(spec.k, p, spec.eta);
            const PlaneChart chart = s.chart();
            for (const auto& z : planar_zeros(s, lambda)) {
                if (z.v == 0.0) {
                    continue;
                }
                if (z.fold_adjacent) {
                    throw PreconditionError("enumerate_equilibria: lambda is at a fold");
                }
                if (s.F_ell && z.v < 0) {
                    continue; // (u, -v) is in the S_{k-1}-orbit of (u, v)
                }
                const HPoint x = chart.map(z.u, z.v);
                out.push_back({x, ambient_index(spec, x, lambda), orbit_plane_count(dim, p), p});
            }
        }
    } else {
        const double R = seed_radius(spec, lambda);
        const EquilibriumProblem ax = axis_problem(spec);
        for (const auto& y : seeded_zeros(ax, lambda, R)) {
            const HPoint x = ax.lift(y);
            out.push_back({x, ambient_index(spec, x, lambda), 1, 1});
        }
        for (int p = 2; p <= dim.plane_max(); ++p) {
            const PlaneChart chart(dim, p);
            const EquilibriumProblem pr = planar_problem(spec, chart);
            for (const auto& y : seeded_zeros(pr, lambda, R)) {
                if (std::abs(y(1)) < 1e-9) {
                    continue;
                }
                if (chart.is_F_ell() && y(1) < 0) {
                    continue;
                }
                const HPoint x = pr.lift(y);
                out.push_back({x, ambient_index(spec, x, lambda), orbit_plane_count(dim, p), p});
            }
        }
    }

    // Only points of L_1 may be shared between planes.
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t j = i + 1; j < out.size(); ++j) {
            if (out[i].plane != 1 && out[j].plane != 1 && out[i].plane != out[j].plane &&
                (out[i].x - out[j].x).norm() < 1e-8) {
                throw NumericalError("enumerate_equilibria: duplicate zero across planes off L_1");
            }
        }
    }
    return out;
}

std::vector<Equilibrium> enumerate_equilibria(int k, double eta, double lambda)
{
    if (k % 2 == 1) {
        return enumerate_equilibria(FamilySpec::perturbed_odd(k, eta), lambda);
    }
    return enumerate_equilibria(localized_family(k, eta, 4.0 * eta, -1), lambda);
}

std::int64_t poincare_hopf(int k, double eta, double lambda)
{
    require(k % 2 == 1, "poincare_hopf: k must be odd");
    require(eta > 0.0, "poincare_hopf: eta must be positive");
    for (int p = 1; 2 * p < k; ++p) {
        const double g = gamma_closed(k, p, eta);
        if (std::abs(std::abs(lambda) - g) < 1e-6) {
            throw PreconditionError("poincare_hopf: lambda within 1e-6 of a fold value");
        }
    }
    std::int64_t s = 0;
    for (const auto& e : enumerate_equilibria(FamilySpec::perturbed_odd(k, eta), lambda)) {
        const auto m = std::int64_t(e.multiplicity);
        s += (e.index % 2 == 0) ? m : -m;
    }
    return s;
}

std::int64_t poincare_hopf_predicted(int k)
{
    require(k % 2 == 1, "poincare_hopf_predicted: k must be odd");
    const int ell = k / 2;
    const auto c = std::int64_t(binomial(2 * ell, ell));
    return (ell % 2 == 0) ? -c : c;
}

Localization make_localization(int k, double eta0)
{
    require(eta0 > 0.0, "make_localization: eta0 must be positive");
    Localization L;
    L.eta0 = eta0;
    L.rho = 4.0 * std::sqrt(eta0);
    L.delta1 = L.rho / 2.0;
    L.delta2 = std::sqrt(k / 3.0) * L.rho;
    return L;
}

FamilySpec localized_family(int k, double eta, double eta0, int even_sign)
{
    require(eta > 0.0 && eta <= eta0, "localized_family: need 0 < eta <= eta0");
    const Localization L = make_localization(k, eta0);
    if (k % 2 == 1) {
        return FamilySpec::perturbed_odd(k, eta, L);
    }
    return FamilySpec::perturbed_even(k, even_sign, eta, L);
}

bool in_W(const Localization& loc, const HPoint& x, double lambda, double scale)
{
    const HPoint e1 = eps(Dim(x.k()), 1);
    const double x1 = x.dot(e1);
    const double y = (x - e1 * x1).norm();
    return std::abs(lambda) < scale * loc.rho && std::abs(x1) < scale * loc.delta1 &&
           y < scale * loc.delta2;
}

// ---------------------------------------------------------------- verification

namespace {

struct Ctx {
    int p = 1;
    EquilibriumProblem prob;
    std::uint64_t mult = 1;
    std::optional<PlanarSystem> sys;
};

std::vector<Vec> end_zeros(const Ctx& c, const FamilySpec& spec, double lambda)
{
    std::vector<Vec> out;
    if (c.sys) {
        for (const auto& z : planar_zeros(*c.sys, lambda)) {
            if (z.fold_adjacent) {
                throw NumericalError("verify_minimal_model: window end sits on a fold");
            }
            if (c.p == 1) {
                if (z.v == 0.0) {
                    Vec y(1);
                    y(0) = z.u;
                    out.push_back(y);
                }
            } else if (z.v != 0.0) {
                Vec y(2);
                y << z.u, z.v;
                out.push_back(y);
            }
        }
        return out;
    }
    for (const auto& y : seeded_zeros(c.prob, lambda, seed_radius(spec, lambda))) {
        if (c.p == 1 || std::abs(y(1)) > 1e-9) {
            out.push_back(y);
        }
    }
    return out;
}

int match(const std::vector<Vec>& zs, const Vec& y)
{
    int best = -1;
    double bd = 1e-6 * (1.0 + y.norm());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const double d = (zs[i] - y).norm();
        if (d < bd) {
            bd = d;
            best = int(i);
        }
    }
    return best;
}

} // namespace

MinimalModelReport verify_minimal_model(const VerifyConfig& cfg)
{
    const Dim dim(cfg.k);
    const int k = cfg.k;
    const int ell = dim.ell();
    require(cfg.eta > 0.0, "verify_minimal_model: eta must be positive");
    MinimalModelReport rep;
    rep.k = k;
    rep.eta = cfg.eta;
    const double g1 = gamma_closed(k, 1, cfg.eta);
    rep.lambda_min = cfg.lambda_min.value_or(-2.0 * g1);
    rep.lambda_max = cfg.lambda_max.value_or(2.0 * g1);
    require(rep.lambda_min <= -2.0 * g1 * (1.0 - 1e-12) && rep.lambda_max >= 2.0 * g1 * (1.0 - 1e-12),
            "verify_minimal_model: window must contain [-2 gamma_{k,1}, 2 gamma_{k,1}]");
    const auto pred = predicted_counts(k);
    rep.expected_crossings = pred.crossings;
    rep.expected_folds = pred.folds;

    FamilySpec spec;
    if (dim.odd()) {
        spec = FamilySpec::perturbed_odd(k, cfg.eta);
        rep.eta0 = cfg.eta;
    } else {
        rep.eta0 = cfg.eta0.value_or(4.0 * cfg.eta);
        spec = localized_family(k, cfg.eta, rep.eta0, cfg.even_sign);
        // The perturbed L_l zeros sit at an angle of order eta / lambda off the
        // axis; kappa / 100 is too thin a tube for eta near 1e-2.
        spec.bump = make_bump(dim, cfg.tau.value_or(phase_zero_gap(dim) / 10.0));
        rep.tau = spec.bump.tau;
    }
    rep.family = to_string(spec.kind);

    ContinuationSettings st;
    st.lambda_min = rep.lambda_min;
    st.lambda_max = rep.lambda_max;
    st.max_step = cfg.max_step.value_or(std::min(1e-2, 0.05 * std::sqrt(cfg.eta)));
    st.initial_step = std::min(st.max_step, std::max(st.min_step, st.max_step / 10.0));
    st.max_norm = 1e3;

    std::vector<Ctx> ctxs;
    {
        Ctx c;
        c.p = 1;
        c.prob = axis_problem(spec);
        if (dim.odd()) {
            c.sys = planar_system(k, 2, cfg.eta);
        }
        ctxs.push_back(std::move(c));
    }
    for (int p = 2; p <= dim.plane_max(); ++p) {
        Ctx c;
        c.p = p;
        const PlaneChart chart(dim, p);
        c.prob = planar_problem(spec, chart);
        c.mult = plane_zero_multiplicity(dim, p);
        if (dim.odd()) {
            c.sys = planar_system(k, p, cfg.eta);
        }
        ctxs.push_back(std::move(c));
    }

    try {
        for (auto& c : ctxs) {
            PlaneTally tally;
            tally.p = c.p;
            tally.multiplicity = c.mult;
            std::vector<Vec> ends[2] = {end_zeros(c, spec, rep.lambda_min),
                                        end_zeros(c, spec, rep.lambda_max)};
            std::vector<char> seen[2] = {std::vector<char>(ends[0].size(), 0),
                                         std::vector<char>(ends[1].size(), 0)};
            // Classification of the curve through each end zero (for the pitchfork legs).
            std::vector<CurveClass> cls[2] = {std::vector<CurveClass>(ends[0].size(), CurveClass::Other),
                                              std::vector<CurveClass>(ends[1].size(), CurveClass::Other)};
            for (int side = 0; side < 2; ++side) {
                const double lam0 = side == 0 ? rep.lambda_min : rep.lambda_max;
                const int dir = side == 0 ? 1 : -1;
                for (std::size_t i = 0; i < ends[side].size(); ++i) {
                    if (seen[side][i]) {
                        continue;
                    }
                    seen[side][i] = 1;
                    const Curve curve = trace_branch(c.prob, ends[side][i], lam0, dir, st);
                    const Classification cl = classify(curve, rep.lambda_min, rep.lambda_max);
                    cls[side][i] = cl.kind;
                    const auto& last = curve.points.back();
                    const int other = std::abs(last.lambda - rep.lambda_min) < 1e-12 ? 0
                                      : std::abs(last.lambda - rep.lambda_max) < 1e-12 ? 1
                                                                                      : -1;
                    if (other >= 0) {
                        int j = match(ends[other], last.y);
                        if (j < 0) {
                            rep.notes.push_back("plane " + std::to_string(c.p) +
                                                ": curve ended at a zero missing from the end list");
                            ends[other].push_back(last.y);
                            seen[other].push_back(1);
                            cls[other].push_back(cl.kind);
                        } else {
                            if (seen[other][j] && !(other == side && std::size_t(j) == i)) {
                                rep.notes.push_back("plane " + std::to_string(c.p) +
                                                    ": two curves share an end zero");
                            }
                            seen[other][j] = 1;
                            cls[other][j] = cl.kind;
                        }
                    }
                    for (const auto& e : curve.events) {
                        if (e.kind == CurveEventKind::Fold) {
                            tally.fold_lambdas.push_back(e.lambda);
                        }
                    }
                    tally.folds += int(curve.fold_count());
                    switch (cl.kind) {
                    case CurveClass::Crossing: {
                        ++tally.crossing_curves;
                        const std::size_t n = curve.points.size();
                        const std::size_t stride = std::max<std::size_t>(1, n / 25);
                        for (std::size_t j = 0; j < n; j += stride) {
                            const auto& pt = curve.points[j];
                            const int idx = equilibrium_index(spec, c.prob.lift(pt.y), pt.lambda);
                            if (rep.crossing_index < 0) {
                                rep.crossing_index = idx;
                            }
                            if (idx != ell) {
                                rep.crossing_index_ok = false;
                            }
                        }
                        break;
                    }
                    case CurveClass::FoldTerminated: ++tally.fold_curves; break;
                    case CurveClass::Other: ++tally.other_curves; break;
                    }
                }
            }

            if (!dim.odd() && c.p == ell) {
                // Pitchfork legs +-sqrt(|lambda|) eps_l at the end where they exist.
                const int side = cfg.even_sign < 0 ? 1 : 0;
                const double lam = side == 1 ? rep.lambda_max : rep.lambda_min;
                const PlaneChart chart(dim, ell);
                for (int leg : {1, -1}) {
                    const HPoint xl = eps(dim, ell) * (leg * std::sqrt(std::abs(lam)));
                    const auto [u, v] = chart.coords(xl);
                    Vec y(2);
                    y << u, v;
                    int best = -1;
                    double bd = std::numeric_limits<double>::infinity();
                    for (std::size_t i = 0; i < ends[side].size(); ++i) {
                        const double d = (ends[side][i] - y).norm();
                        if (d < bd) {
                            bd = d;
                            best = int(i);
                        }
                    }
                    if (best >= 0 && bd < 0.25 * y.norm()) {
                        if (cls[side][best] == CurveClass::Crossing) {
                            rep.pitchfork_legs_crossing += c.mult;
                        } else if (cls[side][best] == CurveClass::FoldTerminated) {
                            rep.pitchfork_legs_fold += c.mult;
                        }
                    } else {
                        rep.notes.push_back("pitchfork leg not found among the window-end zeros");
                    }
                }
            }

            if (c.sys) {
                // Closed-form comparison for the odd family.
                std::vector<double> cf;
                if (c.p == 1) {
                    cf = {-g1, g1};
                } else if (!c.sys->F_ell) {
                    const double g = gamma_closed(k, c.p, cfg.eta);
                    cf = {-g, g};
                }
                tally.closed_form = cf;
                for (double l : tally.fold_lambdas) {
                    double best = std::numeric_limits<double>::infinity();
                    for (double g : cf) {
                        best = std::min(best, std::abs(l - g) / std::abs(g));
                    }
                    rep.max_fold_rel_error = std::max(rep.max_fold_rel_error, best);
                }
                const auto folds = fold_detect(*c.sys, rep.lambda_min, rep.lambda_max);
                for (const auto& fe : folds) {
                    if ((c.p == 1) != (fe.plane == 1)) {
                        continue;
                    }
                    double best = std::numeric_limits<double>::infinity();
                    for (double g : cf) {
                        best = std::min(best, std::abs(fe.lambda_star - g) / std::abs(g));
                    }
                    rep.max_fold_rel_error = std::max(rep.max_fold_rel_error, best);
                }
            } else if (c.p < ell || (c.p == 1)) {
                const double g = gamma_closed(k, c.p, cfg.eta);
                tally.closed_form = {-g, g};
            }

            rep.crossings += std::uint64_t(tally.crossing_curves) * c.mult;
            rep.folds += std::uint64_t(tally.folds) * c.mult;
            rep.planes.push_back(std::move(tally));
        }
    } catch (const NumericalError& e) {
        rep.numerical_failure = true;
        rep.notes.push_back(std::string("numerical failure: ") + e.what());
    }

    int others = 0;
    for (const auto& t : rep.planes) {
        others += t.other_curves;
    }
    rep.pass = !rep.numerical_failure && others == 0 && rep.crossings == rep.expected_crossings &&
               rep.folds == rep.expected_folds && rep.crossing_index_ok;
    if (dim.odd()) {
        rep.pass = rep.pass && rep.max_fold_rel_error < 1e-6;
    } else {
        const std::uint64_t legs = binomial(k - 1, ell - 1);
        rep.pass = rep.pass && rep.pitchfork_legs_crossing == legs && rep.pitchfork_legs_fold == legs;
    }
    return rep;
}

} // namespace skbif
