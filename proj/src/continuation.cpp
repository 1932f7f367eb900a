#include "skbif/continuation.hpp"

#include "skbif/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace skbif {

std::string to_string(CurveEventKind kind)
{
    switch (kind) {
    case CurveEventKind::Fold: return "fold";
    case CurveEventKind::WindowExit: return "window-exit";
    case CurveEventKind::Escape: return "escape";
    case CurveEventKind::StepUnderflow: return "step-underflow";
    case CurveEventKind::PointLimit: return "point-limit";
    }
    return "unknown";
}

std::string to_string(CurveClass c)
{
    switch (c) {
    case CurveClass::Crossing: return "crossing";
    case CurveClass::FoldTerminated: return "fold-terminated";
    case CurveClass::Other: return "other";
    }
    return "unknown";
}

namespace {

EquilibriumProblem pullback(const FamilySpec& spec, const Mat& U, std::string name)
{
    EquilibriumProblem p;
    p.n = int(U.cols());
    p.name = std::move(name);
    p.lift = [U](const Vec& y) { return HPoint::project(U * y); };
    p.f = [spec, U](const Vec& y, double lam) {
        return Vec(U.transpose() * eval(spec, HPoint::project(U * y), lam).vec());
    };
    p.jac = [spec, U](const Vec& y, double lam) {
        return Mat(U.transpose() * jac(spec, HPoint::project(U * y), lam) * U);
    };
    p.dlam = [spec, U](const Vec& y, double lam) {
        return Vec(U.transpose() * dlambda(spec, HPoint::project(U * y), lam).vec());
    };
    return p;
}

} // namespace

EquilibriumProblem ambient_problem(const FamilySpec& spec)
{
    spec.validate();
    return pullback(spec, sum_zero_basis(spec.k), "ambient");
}

EquilibriumProblem planar_problem(const FamilySpec& spec, const PlaneChart& chart)
{
    spec.validate();
    require(chart.k() == spec.k, "planar_problem: chart and family have different k");
    return pullback(spec, chart.matrix(), "E" + std::to_string(chart.p()));
}

EquilibriumProblem axis_problem(const FamilySpec& spec)
{
    spec.validate();
    Mat U = eps(spec.dim(), 1).vec();
    return pullback(spec, U, "L1");
}

void ContinuationSettings::validate() const
{
    require(min_step > 0.0 && min_step <= initial_step && initial_step <= max_step,
            "ContinuationSettings: need 0 < min_step <= initial_step <= max_step");
    require(lambda_min < lambda_max, "ContinuationSettings: empty lambda window");
    require(newton_tol > 0.0 && max_newton > 0, "ContinuationSettings: bad Newton settings");
    require(fold_tol > 0.0, "ContinuationSettings: fold_tol must be positive");
}

std::size_t Curve::fold_count() const
{
    return std::size_t(std::count_if(events.begin(), events.end(), [](const CurveEvent& e) {
        return e.kind == CurveEventKind::Fold;
    }));
}

NewtonResult newton_solve(const EquilibriumProblem& prob, const Vec& y0, double lambda, double tol,
                          int max_iter)
{
    require(int(y0.size()) == prob.n, "newton_solve: starting point has wrong dimension");
    NewtonResult out;
    Vec y = y0;
    for (int it = 0; it <= max_iter; ++it) {
        const Vec F = prob.f(y, lambda);
        const double res = F.norm();
        if (!std::isfinite(res)) {
            throw ConvergenceError("newton_solve: residual is not finite");
        }
        const Mat J = prob.jac(y, lambda);
        if (res < tol) {
            out.y = y;
            out.residual = res;
            out.iterations = it;
            out.spectrum = spectrum_real_parts(J);
            return out;
        }
        if (it == max_iter) {
            break;
        }
        Eigen::JacobiSVD<Mat> svd(J);
        const auto& sv = svd.singularValues();
        if (sv.size() == 0 || sv(sv.size() - 1) <= 1e-12 * std::max(1.0, sv(0))) {
            throw SingularJacobianError("newton_solve: Jacobian is singular");
        }
        y -= J.fullPivLu().solve(F);
    }
    std::ostringstream os;
    os << "newton_solve: no convergence after " << max_iter << " iterations";
    throw ConvergenceError(os.str());
}

namespace {

struct State {
    Vec y;
    double lambda = 0.0;
};

Vec pack(const State& s)
{
    Vec z(s.y.size() + 1);
    z.head(s.y.size()) = s.y;
    z(s.y.size()) = s.lambda;
    return z;
}

State unpack(const Vec& z)
{
    const int n = int(z.size()) - 1;
    return {z.head(n), z(n)};
}

// Unit null vector of [J | F_lambda], oriented along `ref` (or lambda-sign
// `dir` when ref is empty).
Vec tangent(const EquilibriumProblem& prob, const State& s, const Vec& ref, int dir)
{
    const int n = prob.n;
    Mat M(n, n + 1);
    M.leftCols(n) = prob.jac(s.y, s.lambda);
    M.col(n) = prob.dlam(s.y, s.lambda);
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
    Vec t = svd.matrixV().col(n);
    t.normalize();
    if (ref.size() > 0) {
        if (t.dot(ref) < 0) {
            t = -t;
        }
    } else if (t(n) * dir < 0) {
        t = -t;
    }
    return t;
}

// Newton on [F; t^T (z - z_pred)] = 0.
bool correct(const EquilibriumProblem& prob, const Vec& z_pred, const Vec& t, double tol,
             int max_iter, Vec& z_out)
{
    const int n = prob.n;
    Vec z = z_pred;
    for (int it = 0; it < max_iter; ++it) {
        const State s = unpack(z);
        const Vec F = prob.f(s.y, s.lambda);
        if (!F.allFinite()) {
            return false;
        }
        Vec G(n + 1);
        G.head(n) = F;
        G(n) = t.dot(z - z_pred);
        Mat A(n + 1, n + 1);
        A.topLeftCorner(n, n) = prob.jac(s.y, s.lambda);
        A.block(0, n, n, 1) = prob.dlam(s.y, s.lambda);
        A.row(n) = t.transpose();
        const Vec dz = A.fullPivLu().solve(G);
        if (!dz.allFinite()) {
            return false;
        }
        z -= dz;
        const double step = dz.norm();
        const State s2 = unpack(z);
        const double res = prob.f(s2.y, s2.lambda).norm();
        if (res < tol && step < 1e-9 * (1.0 + z.norm())) {
            z_out = z;
            return true;
        }
        if (step < 1e-15 * (1.0 + z.norm()) && res < 1e3 * tol) {
            z_out = z;
            return true;
        }
    }
    return false;
}

CurvePoint make_point(const EquilibriumProblem& prob, const State& s, const Vec& t)
{
    CurvePoint p;
    p.lambda = s.lambda;
    p.y = s.y;
    p.tangent_lambda = t(t.size() - 1);
    const Mat J = prob.jac(s.y, s.lambda);
    const double det = J.determinant();
    p.det_sign = det > 0 ? 1 : (det < 0 ? -1 : 0);
    try {
        p.index = negative_count(J);
    } catch (const NonHyperbolicError&) {
        p.index = -1;
    }
    return p;
}

// Point at arclength sigma along t from z0, corrected on the orthogonal hyperplane.
bool point_at(const EquilibriumProblem& prob, const Vec& z0, const Vec& t, double sigma,
              const ContinuationSettings& st, Vec& z)
{
    return correct(prob, z0 + sigma * t, t, st.newton_tol, st.max_newton, z);
}

FoldEvent refine_fold(const EquilibriumProblem& prob, const Vec& z0, const Vec& t0, double h,
                      const ContinuationSettings& st)
{
    const int n = prob.n;
    const double sign0 = tangent(prob, unpack(z0), t0, 0)(n) > 0 ? 1.0 : -1.0;
    double lo = 0.0;
    double hi = h;
    Vec z_mid = z0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + h); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!point_at(prob, z0, t0, mid, st, z_mid)) {
            throw ConvergenceError("locate_fold: corrector failed during bisection");
        }
        const Vec tm = tangent(prob, unpack(z_mid), t0, 0);
        if (tm(n) * sign0 > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Vec z;
    if (!point_at(prob, z0, t0, 0.5 * (lo + hi), st, z)) {
        throw ConvergenceError("locate_fold: corrector failed at the fold");
    }
    const State s = unpack(z);
    FoldEvent ev;
    ev.lambda_star = s.lambda;
    ev.y = s.y;
    ev.x = prob.lift ? prob.lift(s.y) : HPoint();
    const auto spec = spectrum_real_parts(prob.jac(s.y, s.lambda));
    double m = std::numeric_limits<double>::infinity();
    for (double mu : spec) {
        m = std::min(m, std::abs(mu));
    }
    ev.min_abs_eigenvalue = m;
    return ev;
}

} // namespace

Curve trace_branch(const EquilibriumProblem& prob, const Vec& y0, double lambda0, int dir,
                   const ContinuationSettings& st)
{
    st.validate();
    require(dir == 1 || dir == -1, "trace_branch: dir must be +1 or -1");
    require(int(y0.size()) == prob.n, "trace_branch: start point has wrong dimension");
    const int n = prob.n;
    const double r0 = prob.f(y0, lambda0).norm();
    if (!(r0 < 1e-8)) {
        std::ostringstream os;
        os << "trace_branch: start point is not an equilibrium (residual " << r0 << ")";
        throw PreconditionError(os.str());
    }

    Curve curve;
    State cur{y0, lambda0};
    // Polish the start point at fixed lambda.
    try {
        cur.y = newton_solve(prob, y0, lambda0, st.newton_tol, st.max_newton).y;
    } catch (const NumericalError&) {
    }
    Vec t = tangent(prob, cur, Vec(), dir);
    curve.points.push_back(make_point(prob, cur, t));

    auto outside = [&](double lam) { return lam < st.lambda_min || lam > st.lambda_max; };

    double h = st.initial_step;
    int clean = 0;
    Vec z = pack(cur);
    Vec z_prev;
    while (true) {
        if (int(curve.points.size()) >= st.max_points) {
            curve.events.push_back({CurveEventKind::PointLimit, curve.points.size() - 1, cur.lambda, {}});
            break;
        }
        // Secant predictor once two points exist, tangent predictor otherwise.
        Vec dir_vec = t;
        if (z_prev.size() > 0) {
            Vec sec = z - z_prev;
            if (sec.norm() > 0) {
                sec.normalize();
                if (sec.dot(t) > 0.9) {
                    dir_vec = sec;
                }
            }
        }
        Vec z_new;
        bool ok = correct(prob, z + h * dir_vec, dir_vec, st.newton_tol, 8, z_new);
        Vec t_new;
        if (ok) {
            const double dist = (z_new - z).norm();
            ok = dist <= 2.0 * h && dist > 0.1 * h;
            if (ok) {
                t_new = tangent(prob, unpack(z_new), t, 0);
                ok = t_new.dot(t) > 0.95;
            }
        }
        if (!ok) {
            h *= 0.5;
            clean = 0;
            if (h < st.min_step) {
                curve.events.push_back(
                    {CurveEventKind::StepUnderflow, curve.points.size() - 1, cur.lambda, {}});
                break;
            }
            continue;
        }

        const State next = unpack(z_new);
        if (outside(next.lambda)) {
            // Clip to the boundary by Newton at fixed lambda from the interpolated point.
            const double lb = next.lambda < st.lambda_min ? st.lambda_min : st.lambda_max;
            const double w = (lb - cur.lambda) / (next.lambda - cur.lambda);
            const Vec yg = cur.y + w * (next.y - cur.y);
            State edge{yg, lb};
            try {
                edge.y = newton_solve(prob, yg, lb, st.newton_tol, st.max_newton).y;
            } catch (const NumericalError&) {
                // keep the interpolated point; the residual is second order in h
            }
            const Vec te = tangent(prob, edge, t, 0);
            curve.points.push_back(make_point(prob, edge, te));
            curve.events.push_back({CurveEventKind::WindowExit, curve.points.size() - 1, lb, {}});
            break;
        }

        if (t(n) * t_new(n) < 0) {
            FoldEvent fe = refine_fold(prob, z, dir_vec, (z_new - z).dot(dir_vec), st);
            fe.index_before = curve.points.back().index;
            curve.points.push_back(make_point(prob, next, t_new));
            fe.index_after = curve.points.back().index;
            curve.events.push_back({CurveEventKind::Fold, curve.points.size() - 1, fe.lambda_star, fe});
        } else {
            curve.points.push_back(make_point(prob, next, t_new));
        }

        z_prev = z;
        z = z_new;
        cur = next;
        t = t_new;
        if (cur.y.norm() > st.max_norm) {
            curve.events.push_back({CurveEventKind::Escape, curve.points.size() - 1, cur.lambda, {}});
            break;
        }
        if (++clean >= 3) {
            h = std::min(h * 1.3, st.max_step);
            clean = 0;
        }
    }
    return curve;
}

Curve trace_curve(const EquilibriumProblem& prob, const Vec& y0, double lambda0,
                  const ContinuationSettings& st)
{
    const Curve back = trace_branch(prob, y0, lambda0, -1, st);
    const Curve fwd = trace_branch(prob, y0, lambda0, 1, st);
    Curve out;
    const std::size_t m = back.points.size() - 1;
    // The backward half is traversed in reverse, so its tangents flip.
    for (std::size_t j = back.points.size(); j-- > 1;) {
        CurvePoint p = back.points[j];
        p.tangent_lambda = -p.tangent_lambda;
        out.points.push_back(std::move(p));
    }
    for (const auto& p : fwd.points) {
        out.points.push_back(p);
    }
    for (auto it = back.events.rbegin(); it != back.events.rend(); ++it) {
        CurveEvent e = *it;
        if (e.kind == CurveEventKind::Fold) {
            e.at = m - e.at + 1;
            std::swap(e.fold->index_before, e.fold->index_after);
        } else {
            e.at = m - e.at;
        }
        out.events.push_back(e);
    }
    for (CurveEvent e : fwd.events) {
        e.at += m;
        out.events.push_back(e);
    }
    return out;
}

FoldEvent locate_fold(const EquilibriumProblem& prob, const Curve& curve,
                      const ContinuationSettings& st)
{
    const int n = prob.n;
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const auto& a = curve.points[i];
        const auto& b = curve.points[i + 1];
        if (a.tangent_lambda * b.tangent_lambda < 0) {
            Vec za(n + 1), zb(n + 1);
            za << a.y, a.lambda;
            zb << b.y, b.lambda;
            Vec t = tangent(prob, {a.y, a.lambda}, zb - za, 0);
            FoldEvent fe = refine_fold(prob, za, t, (zb - za).dot(t), st);
            fe.index_before = a.index;
            fe.index_after = b.index;
            return fe;
        }
    }
    throw PreconditionError("locate_fold: curve has no lambda reversal");
}

Classification classify(const Curve& curve, double lambda_min, double lambda_max)
{
    Classification c;
    if (curve.points.empty()) {
        return c;
    }
    const double tol = 1e-12 * std::max(1.0, lambda_max - lambda_min);
    auto at_min = [&](double l) { return std::abs(l - lambda_min) <= tol; };
    auto at_max = [&](double l) { return std::abs(l - lambda_max) <= tol; };
    const double l0 = curve.points.front().lambda;
    const double l1 = curve.points.back().lambda;
    const std::size_t folds = curve.fold_count();
    bool bad_event = std::any_of(curve.events.begin(), curve.events.end(), [](const CurveEvent& e) {
        return e.kind == CurveEventKind::Escape || e.kind == CurveEventKind::StepUnderflow ||
               e.kind == CurveEventKind::PointLimit;
    });
    int idx = curve.points.front().index;
    c.index_constant = idx >= 0;
    for (const auto& p : curve.points) {
        if (p.index != idx) {
            c.index_constant = false;
        }
    }
    if (bad_event) {
        return c;
    }
    if (folds == 0 && ((at_min(l0) && at_max(l1)) || (at_max(l0) && at_min(l1)))) {
        c.kind = CurveClass::Crossing;
        c.index = c.index_constant ? idx : -1;
    } else if (folds > 0 && ((at_min(l0) && at_min(l1)) || (at_max(l0) && at_max(l1)))) {
        c.kind = CurveClass::FoldTerminated;
    }
    return c;
}

} // namespace skbif
