#include "skbif/dynamics.hpp"

#include "skbif/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace skbif {

void FlowSettings::validate() const
{
    require(initial_step > 0.0 && min_step > 0.0 && max_step >= min_step,
            "FlowSettings: steps must be positive with max_step >= min_step");
    require(horizon > 0.0, "FlowSettings: horizon must be positive");
    require(rtol > 0.0 && atol > 0.0, "FlowSettings: tolerances must be positive");
    require(escape_radius > 0.0 && max_steps > 0, "FlowSettings: escape radius and max steps must be positive");
}

std::string to_string(FlowOutcome o)
{
    switch (o) {
    case FlowOutcome::Equilibrium: return "equilibrium";
    case FlowOutcome::Stationary: return "stationary";
    case FlowOutcome::Escaped: return "escaped";
    case FlowOutcome::Timeout: return "timeout";
    }
    return "?";
}

OdeTrace integrate(const std::function<Vec(const Vec&)>& rhs, const Vec& y0,
                   const FlowSettings& st,
                   const std::function<bool(double, const Vec&)>& observer)
{
    st.validate();
    // Dormand-Prince 5(4) tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2;
    (void)c3;
    (void)c4;
    (void)c5;

    OdeTrace tr;
    Vec y = y0;
    double t = 0.0;
    double h = std::min(st.initial_step, st.max_step);
    tr.t.push_back(t);
    tr.y.push_back(y);
    if (observer(t, y)) {
        tr.stopped = true;
        return tr;
    }
    Vec k1 = rhs(y);
    while (t < st.horizon) {
        if (tr.steps + tr.rejected >= st.max_steps) {
            break;
        }
        h = std::min(h, st.horizon - t);
        const Vec k2 = rhs(y + h * a21 * k1);
        const Vec k3 = rhs(y + h * (a31 * k1 + a32 * k2));
        const Vec k4 = rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec k5 = rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec k6 = rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec k7 = rhs(yn);
        const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        if (!yn.allFinite() || !err.allFinite()) {
            throw NumericalError("integrate: NaN or infinity in the state");
        }
        double en = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sc = st.atol + st.rtol * std::max(std::abs(y(i)), std::abs(yn(i)));
            en = std::max(en, std::abs(err(i)) / sc);
        }
        if (en <= 1.0) {
            t += h;
            y = yn;
            k1 = k7;
            ++tr.steps;
            tr.t.push_back(t);
            tr.y.push_back(y);
            if (observer(t, y)) {
                tr.stopped = true;
                return tr;
            }
        } else {
            ++tr.rejected;
        }
        const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        h = std::min(st.max_step, h * fac);
        if (h < st.min_step && t < st.horizon) {
            throw ConvergenceError("integrate: step size underflow");
        }
    }
    return tr;
}

namespace {

int nearest(const std::vector<Vec>& eqs, const Vec& y, double& dist)
{
    int best = -1;
    dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        const double d = (eqs[i] - y).norm();
        if (d < dist) {
            dist = d;
            best = int(i);
        }
    }
    return best;
}

FlowResult run_flow(const std::function<Vec(const Vec&)>& rhs, const Vec& y0,
                    const FlowSettings& st, const std::vector<Vec>& eqs,
                    const std::function<std::optional<double>(const Vec&)>& energy_of)
{
    FlowResult res;
    bool escaped = false;
    bool stationary = false;
    const double etol = 1e-12;
    auto observer = [&](double, const Vec& y) {
        if (const auto e = energy_of(y)) {
            if (!res.energy.empty() &&
                *e > res.energy.back() + etol * (1.0 + std::abs(res.energy.back()))) {
                res.energy_monotone = false;
            }
            res.energy.push_back(*e);
        }
        if (st.fixed_horizon) {
            return false;
        }
        if (y.norm() > st.escape_radius) {
            escaped = true;
            return true;
        }
        double d = 0.0;
        if (nearest(eqs, y, d) >= 0 && d < st.converge_radius) {
            return true;
        }
        if (rhs(y).norm() < st.stationary_tol) {
            stationary = true;
            return true;
        }
        return false;
    };
    OdeTrace tr = integrate(rhs, y0, st, observer);
    res.t = std::move(tr.t);
    res.y = std::move(tr.y);
    res.steps = tr.steps;
    res.rejected = tr.rejected;
    const Vec& end = res.y.back();
    double d = 0.0;
    const int j = nearest(eqs, end, d);
    if (escaped) {
        res.outcome = FlowOutcome::Escaped;
    } else if (j >= 0 && d < st.match_radius) {
        res.outcome = FlowOutcome::Equilibrium;
        res.equilibrium = j;
        res.distance = d;
    } else if (stationary) {
        res.outcome = FlowOutcome::Stationary;
    } else {
        res.outcome = FlowOutcome::Timeout;
    }
    return res;
}

} // namespace

std::vector<HPoint> known_equilibria(const FamilySpec& spec, double lambda)
{
    spec.validate();
    const Dim dim = spec.dim();
    std::vector<HPoint> out;
    auto add = [&](const HPoint& x) {
        for (const auto& o : out) {
            if ((o - x).norm() < 1e-9) {
                return;
            }
        }
        out.push_back(x);
    };
    if (spec.kind == FamilyKind::PerturbedOdd || spec.kind == FamilyKind::PerturbedEven) {
        for (const auto& e : enumerate_equilibria(spec, lambda)) {
            for (const auto& x : expand_orbit(e.x)) {
                add(x);
            }
        }
        return out;
    }
    require(spec.eta == 0.0, "known_equilibria: unperturbed kinds need eta = 0");
    require(spec.k <= 12, "known_equilibria: k must be at most 12");
    add(HPoint::zero(spec.k));
    // Radial zeros along every axis: sign changes of <F(t d), d> refined by bisection.
    const double T = 50.0 * (1.0 + std::abs(lambda)) * std::sqrt(double(spec.k));
    constexpr int N = 8000;
    for (const auto& ax : enumerate_axes(dim)) {
        const HPoint d = ax.direction() * (1.0 / ax.direction().norm());
        auto g = [&](double t) { return eval(spec, d * t, lambda).dot(d); };
        // Axes are lines: scan both half-lines away from the origin.
        for (const double side : {1.0, -1.0}) {
            double t0 = side * 1e-9 * T, g0 = g(t0);
            for (int i = 1; i <= N; ++i) {
                const double t1 = side * T * i / N;
                const double g1 = g(t1);
                if (g0 * g1 < 0) {
                    double lo = t0, hi = t1, glo = g0;
                    for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-16 * std::abs(hi); ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const double gm = g(mid);
                        if (gm * glo <= 0) {
                            hi = mid;
                        } else {
                            lo = mid;
                            glo = gm;
                        }
                    }
                    const HPoint x = d * (0.5 * (lo + hi));
                    if (eval(spec, x, lambda).norm() < 1e-8 * (1.0 + x.norm())) {
                        add(x);
                    }
                }
                t0 = t1;
                g0 = g1;
            }
        }
    }
    return out;
}

FlowResult flow(const FamilySpec& spec, const HPoint& x0, double lambda,
                const FlowSettings& settings, std::optional<std::vector<HPoint>> eqs)
{
    require(x0.k() == spec.k, "flow: dimension mismatch");
    const std::vector<HPoint> list = eqs ? *eqs : known_equilibria(spec, lambda);
    std::vector<Vec> ev;
    for (const auto& e : list) {
        ev.push_back(e.vec());
    }
    auto rhs = [&](const Vec& y) {
        return eval(spec, HPoint::project(y), lambda).vec();
    };
    auto en = [&](const Vec& y) { return energy(spec, HPoint::project(y), lambda); };
    return run_flow(rhs, x0.vec(), settings, ev, en);
}

FlowResult flow_problem(const EquilibriumProblem& prob, const Vec& y0, double lambda,
                        const FlowSettings& settings, const std::vector<Vec>& eqs, int time_sign)
{
    require(time_sign == 1 || time_sign == -1, "flow_problem: time_sign must be +1 or -1");
    require(int(y0.size()) == prob.n, "flow_problem: dimension mismatch");
    auto rhs = [&](const Vec& y) { return Vec(double(time_sign) * prob.f(y, lambda)); };
    auto en = [](const Vec&) { return std::optional<double>{}; };
    return run_flow(rhs, y0, settings, eqs, en);
}

// ---------------------------------------------------------------- connections

namespace {

struct PlanarEq {
    std::string name;
    Vec y;
};

struct Eig2 {
    Eigen::Vector2d values;
    Eigen::Matrix2d vectors;
};

Eig2 eig2(const PlanarSystem& s, const Vec& y, double lambda)
{
    const Eigen::Matrix2d J = s.jac(y(0), y(1), lambda);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (J + J.transpose()));
    return {es.eigenvalues(), es.eigenvectors()};
}

int matched(const FlowResult& r, const std::vector<Vec>& eqs, const Vec& target)
{
    if (r.outcome != FlowOutcome::Equilibrium) {
        return 0;
    }
    return (eqs[r.equilibrium] - target).norm() < 1e-12 ? 1 : 0;
}

Connection connects(const PlanarSystem& s, const EquilibriumProblem& prob, double lambda,
                    const PlanarEq& from, const PlanarEq& to, const std::vector<Vec>& eqs,
                    const FlowSettings& st)
{
    Connection c{from.name, to.name, false, ""};
    const double delta = 1e-5 * std::max(1.0, from.y.norm());
    const Eig2 ef = eig2(s, from.y, lambda);
    const Eig2 et = eig2(s, to.y, lambda);
    auto unstable = [](const Eig2& e) {
        std::vector<Eigen::Vector2d> out;
        for (int i = 0; i < 2; ++i) {
            if (e.values(i) > kHyperbolicThreshold) {
                out.push_back(e.vectors.col(i));
            }
        }
        return out;
    };
    auto stable = [](const Eig2& e) {
        std::vector<Eigen::Vector2d> out;
        for (int i = 0; i < 2; ++i) {
            if (e.values(i) < -kHyperbolicThreshold) {
                out.push_back(e.vectors.col(i));
            }
        }
        return out;
    };
    const auto uf = unstable(ef);
    const auto stt = stable(et);
    if (uf.size() == 1) {
        for (double sg : {1.0, -1.0}) {
            const Vec y0 = from.y + sg * delta * Vec(uf[0]);
            if (matched(flow_problem(prob, y0, lambda, st, eqs, 1), eqs, to.y)) {
                c.found = true;
                c.method = "unstable-manifold";
                return c;
            }
        }
    }
    if (stt.size() == 1) {
        const double dt = 1e-5 * std::max(1.0, to.y.norm());
        for (double sg : {1.0, -1.0}) {
            const Vec y0 = to.y + sg * dt * Vec(stt[0]);
            if (matched(flow_problem(prob, y0, lambda, st, eqs, -1), eqs, from.y)) {
                c.found = true;
                c.method = "stable-manifold";
                return c;
            }
        }
    }
    if (uf.size() == 2) {
        constexpr int N = 72;
        for (int i = 0; i < N; ++i) {
            const double th = 2.0 * M_PI * i / N;
            Vec y0 = from.y;
            y0(0) += delta * std::cos(th);
            y0(1) += delta * std::sin(th);
            if (matched(flow_problem(prob, y0, lambda, st, eqs, 1), eqs, to.y)) {
                c.found = true;
                c.method = "source-ring";
                return c;
            }
        }
    }
    return c;
}

double a_coeff(int k, int p)
{
    const double q = k - p;
    return (q - p) / std::sqrt(p * q * k);
}

Vec chart_point(const PlaneChart& chart, const HPoint& x)
{
    const auto [u, v] = chart.coords(x);
    Vec y(2);
    y << u, v;
    return y;
}

} // namespace

ConnectionReport connection_check(int k, int p, double lambda, const FlowSettings& settings)
{
    const Dim dim(k);
    require(p >= 2 && p <= dim.ell(), "connection_check: need 2 <= p <= l");
    require(2 * p < k, "connection_check: E_p must not contain a pitchfork axis (2p < k)");
    require(lambda != 0.0, "connection_check: lambda must be nonzero");
    const PlanarSystem s = planar_system(k, p, 0.0);
    const PlaneChart chart = s.chart();
    const EquilibriumProblem prob = planar_system_problem(s);

    ConnectionReport rep;
    rep.k = k;
    rep.p = p;
    rep.lambda = lambda;
    const Vec c1 = chart_point(chart, eps(dim, 1) * (lambda / a_coeff(k, 1)));
    const Vec cp = chart_point(chart, chart.eps_p() * (lambda / a_coeff(k, p)));
    const Vec cs = chart_point(chart, chart.eps_star() * (lambda / a_coeff(k, p - 1)));
    rep.c1 = {c1(0), c1(1)};
    rep.cp = {cp(0), cp(1)};
    rep.cstar = {cs(0), cs(1)};

    std::vector<Vec> eqs;
    for (const auto& z : planar_zeros(s, lambda)) {
        Vec y(2);
        y << z.u, z.v;
        eqs.push_back(y);
    }
    // Snap the closed-form points onto the polished zero list.
    auto snap = [&](const Vec& y) {
        double d = 0.0;
        const int j = nearest(eqs, y, d);
        if (j < 0 || d > 1e-9 * (1.0 + y.norm())) {
            throw NumericalError("connection_check: closed-form axis zero not found in E_p");
        }
        return eqs[j];
    };
    const PlanarEq E1{"c_1", snap(c1)};
    const PlanarEq Ep{"c_" + std::to_string(p), snap(cp)};
    const PlanarEq Es{"c*_" + std::to_string(p - 1), snap(cs)};
    int slot = 0;
    for (const auto* e : {&E1, &Ep, &Es}) {
        rep.in_plane_index[slot++] = negative_count(Mat(s.jac(e->y(0), e->y(1), lambda)));
    }

    FlowSettings st = settings;
    double maxn = 0.0;
    for (const auto& e : eqs) {
        maxn = std::max(maxn, e.norm());
    }
    st.escape_radius = std::max(st.escape_radius, 100.0 * maxn);

    if (lambda < 0) {
        rep.connections.push_back(connects(s, prob, lambda, Ep, E1, eqs, st));
        rep.connections.push_back(connects(s, prob, lambda, Ep, Es, eqs, st));
    } else {
        rep.connections.push_back(connects(s, prob, lambda, E1, Ep, eqs, st));
        rep.connections.push_back(connects(s, prob, lambda, Es, Ep, eqs, st));
    }
    rep.pass = std::all_of(rep.connections.begin(), rep.connections.end(),
                           [](const Connection& c) { return c.found; });
    return rep;
}

FellReport fell_report(int k, double lambda, const FlowSettings& settings)
{
    require(k % 2 == 1 && k >= 3, "fell_report: k must be odd and at least 3");
    require(lambda != 0.0, "fell_report: lambda must be nonzero");
    const Dim dim(k);
    const PlanarSystem s = planar_system(k, dim.ell() + 1, 0.0);
    const EquilibriumProblem prob = planar_system_problem(s);
    FellReport rep;
    rep.k = k;
    rep.lambda = lambda;
    std::vector<Vec> eqs;
    double maxn = 0.0;
    for (const auto& z : planar_zeros(s, lambda)) {
        Vec y(2);
        y << z.u, z.v;
        eqs.push_back(y);
        if (std::hypot(z.u, z.v) > 1e-12) {
            rep.zeros.push_back({z.u, z.v});
            rep.indices.push_back(z.index);
            maxn = std::max(maxn, std::hypot(z.u, z.v));
        }
    }
    FlowSettings st = settings;
    st.escape_radius = 3.0 * maxn;
    bool ok = true;
    for (const auto& z : rep.zeros) {
        Vec y(2);
        y << z[0], z[1];
        const Eig2 e = eig2(s, y, lambda);
        for (int i = 0; i < 2; ++i) {
            if (e.values(i) <= kHyperbolicThreshold) {
                continue;
            }
            for (double sg : {1.0, -1.0}) {
                const Vec y0 = y + sg * 1e-5 * std::max(1.0, y.norm()) * Vec(e.vectors.col(i));
                const FlowResult r = flow_problem(prob, y0, lambda, st, eqs, 1);
                const bool to_origin = r.outcome == FlowOutcome::Equilibrium &&
                                       eqs[r.equilibrium].norm() < 1e-12;
                if (!(to_origin || r.outcome == FlowOutcome::Escaped)) {
                    ok = false;
                }
            }
        }
    }
    rep.no_connections = ok;
    rep.pass = rep.zeros.size() == 3 && ok &&
               std::all_of(rep.indices.begin(), rep.indices.end(), [](int i) { return i == 1; });
    return rep;
}

bool fell_index_check(int k, double lambda)
{
    return fell_report(k, lambda).pass;
}

} // namespace skbif
