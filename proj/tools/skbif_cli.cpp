// skbif: command-line front end.
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical failure.

#include "report.hpp"

#include "skbif/error.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

using namespace skbif;
namespace rp = skbif::report;

namespace {

struct RunConfig {
    int k = 5;
    double eta = 1e-2;
    std::optional<double> eta0;
    std::string kind;
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
    std::optional<double> lambda;
    std::optional<double> tau;
    int grid = 41;
    std::optional<int> p;
    std::string out;
    std::string format;
    std::uint64_t seed = 1;
    double radius = 0.1;
};

struct VerificationFailed {};

FamilySpec make_family(const RunConfig& c, const std::string& fallback)
{
    const std::string kind = c.kind.empty() ? fallback : c.kind;
    const Dim dim(c.k);
    std::optional<BumpParams> bump;
    if (c.tau) {
        bump = make_bump(dim, *c.tau);
    }
    FamilySpec s;
    if (kind == "odd") {
        s = FamilySpec::odd_quadratic(c.k);
    } else if (kind == "even-minus") {
        s = FamilySpec::even_model(c.k, -1, bump);
    } else if (kind == "even-plus") {
        s = FamilySpec::even_model(c.k, +1, bump);
    } else if (kind == "perturbed-odd") {
        s = c.eta0 ? localized_family(c.k, c.eta, *c.eta0) : FamilySpec::perturbed_odd(c.k, c.eta);
    } else if (kind == "perturbed-even") {
        s = localized_family(c.k, c.eta, c.eta0.value_or(4.0 * c.eta), -1);
        if (bump) {
            s.bump = *bump;
        }
    } else {
        throw PreconditionError("unknown kind '" + kind + "'");
    }
    s.validate();
    return s;
}

std::string default_perturbed_kind(int k)
{
    return k % 2 == 1 ? "perturbed-odd" : "perturbed-even";
}

std::pair<double, double> window(const RunConfig& c, double eta)
{
    const double half = eta > 0.0 ? 2.0 * gamma_closed(c.k, 1, eta) : 1.0;
    const double lo = c.lambda_min.value_or(-half);
    const double hi = c.lambda_max.value_or(half);
    require(lo < hi, "--lambda-min must be below --lambda-max");
    return {lo, hi};
}

void emit(const RunConfig& c, const std::string& text)
{
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
        throw PreconditionError("cannot open output file '" + c.out + "'");
    }
    f << text;
}

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed)
{
    for (const char* a : allowed) {
        if (c.format == a) {
            return;
        }
    }
    throw PreconditionError("format '" + c.format + "' is not supported by this command");
}

// ---------------------------------------------------------------- commands

void cmd_axes(RunConfig c)
{
    if (c.format.empty()) {
        c.format = "json";
    }
    require_format(c, {"json", "csv"});
    const Dim dim(c.k);
    if (c.format == "json") {
        emit(c, rp::dump(rp::axes_json(dim)));
        return;
    }
    std::string s = "p,block,direction\n";
    for (const auto& a : enumerate_axes(dim)) {
        std::string block, dir;
        for (int i : a.block()) {
            block += (block.empty() ? "" : " ") + std::to_string(i);
        }
        const Vec d = a.direction().vec();
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            dir += (i ? " " : "") + rp::g17(d(i));
        }
        s += std::to_string(a.p()) + "," + block + "," + dir + "\n";
    }
    emit(c, s);
}

void cmd_pattern(RunConfig c)
{
    if (c.format.empty()) {
        c.format = "json";
    }
    require_format(c, {"json", "csv"});
    const FamilySpec spec = make_family(c, c.k % 2 == 1 ? "odd" : "even-minus");
    const auto pat = pattern_catalog(spec);
    if (c.format == "json") {
        emit(c, rp::dump(rp::pattern_json(spec, pat)));
        return;
    }
    std::string s = "p,sign,index,multiplicity\n";
    for (const auto& e : pat.entries) {
        s += std::to_string(e.record.axis.p()) + "," + to_string(e.record.sign) + "," +
             std::to_string(e.record.index) + "," + std::to_string(e.multiplicity) + "\n";
    }
    emit(c, s);
}

void cmd_planar(RunConfig c)
{
    if (c.format.empty()) {
        c.format = "csv";
    }
    require_format(c, {"csv", "json"});
    require(c.grid >= 2, "--grid must be at least 2");
    const Dim dim(c.k);
    const auto [lo, hi] = window(c, c.eta);
    std::vector<int> planes;
    if (c.p) {
        require(*c.p >= 2 && *c.p <= dim.plane_max(), "--p must lie in [2, plane_max]");
        planes.push_back(*c.p);
    } else {
        for (int p = 2; p <= dim.plane_max(); ++p) {
            planes.push_back(p);
        }
    }
    std::string csv = "lambda,u,v,index,plane_p\n";
    rp::json rows = rp::json::array();
    for (int i = 0; i < c.grid; ++i) {
        const double lam = lo + (hi - lo) * i / (c.grid - 1);
        for (int p : planes) {
            const PlanarSystem sys = planar_system(c.k, p, c.eta);
            for (const auto& z : planar_zeros(sys, lam)) {
                csv += rp::g17(lam) + "," + rp::g17(z.u) + "," + rp::g17(z.v) + "," +
                       std::to_string(z.index) + "," + std::to_string(p) + "\n";
                rows.push_back({{"lambda", lam}, {"u", z.u}, {"v", z.v}, {"index", z.index}, {"plane_p", p}});
            }
        }
    }
    if (c.format == "csv") {
        emit(c, csv);
    } else {
        rp::json j;
        j["k"] = c.k;
        j["eta"] = c.eta;
        j["zeros"] = rows;
        emit(c, rp::dump(j));
    }
}

void cmd_gamma(RunConfig c)
{
    if (c.format.empty()) {
        c.format = "json";
    }
    require_format(c, {"json", "csv"});
    require(c.eta > 0.0, "--eta must be positive");
    const Dim dim(c.k);
    const double g1 = gamma_closed(c.k, 1, c.eta);
    const double lo = c.lambda_min.value_or(-1.5 * g1);
    const double hi = c.lambda_max.value_or(1.5 * g1);
    const int grid = std::max(c.grid, 400);
    std::vector<rp::GammaRow> rows;
    for (int p = 1; 2 * p < c.k; ++p) {
        rp::GammaRow r;
        r.p = p;
        r.closed = gamma_closed(c.k, p, c.eta);
        r.numeric = std::nan("");
        const PlanarSystem sys = planar_system(c.k, std::max(p, 2), c.eta);
        for (const auto& f : fold_detect(sys, lo, hi, grid)) {
            if (f.plane == p && f.lambda_star > 0) {
                r.numeric = f.lambda_star;
            }
        }
        r.rel_error = std::abs(r.numeric - r.closed) / r.closed;
        rows.push_back(r);
    }
    emit(c, c.format == "json" ? rp::dump(rp::gamma_json(c.k, c.eta, rows)) : rp::gamma_csv(rows));
    for (const auto& r : rows) {
        if (!(r.rel_error < 1e-8)) {
            throw VerificationFailed{};
        }
    }
}

void cmd_verify(RunConfig c)
{
    if (c.format.empty()) {
        c.format = "json";
    }
    require_format(c, {"json"});
    VerifyConfig v;
    v.k = c.k;
    v.eta = c.eta;
    v.eta0 = c.eta0;
    v.lambda_min = c.lambda_min;
    v.lambda_max = c.lambda_max;
    v.tau = c.tau;
    if (c.kind == "even-plus") {
        v.even_sign = +1;
    } else if (!c.kind.empty() && c.kind != "even-minus" && c.kind != default_perturbed_kind(c.k)) {
        throw PreconditionError("verify supports --kind " + default_perturbed_kind(c.k) +
                                (c.k % 2 == 0 ? ", even-minus or even-plus" : ""));
    }
    const auto rep = verify_minimal_model(v);
    emit(c, rp::dump(rp::report_json(rep)));
    if (rep.numerical_failure) {
        throw NumericalError("verification sweep hit a numerical failure");
    }
    if (!rep.pass) {
        throw VerificationFailed{};
    }
}

EquilibriumProblem chart_problem(const FamilySpec& spec, int p)
{
    if (p == 1) {
        return axis_problem(spec);
    }
    return planar_problem(spec, PlaneChart(spec.dim(), p));
}

std::vector<Curve> sweep_chart(const FamilySpec& spec, const EquilibriumProblem& prob, double lo,
                               double hi)
{
    ContinuationSettings st;
    st.lambda_min = lo;
    st.lambda_max = hi;
    st.max_step = std::min(1e-2, (hi - lo) / 100.0);
    st.initial_step = st.max_step / 10.0;
    st.max_norm = 1e3;
    std::vector<Curve> curves;
    std::vector<Vec> reached;
    auto seen = [&](const Vec& y) {
        for (const auto& r : reached) {
            if ((r - y).norm() < 1e-6 * (1.0 + y.norm())) {
                return true;
            }
        }
        return false;
    };
    for (int side = 0; side < 2; ++side) {
        const double lam = side == 0 ? lo : hi;
        for (const auto& y : seeded_zeros(prob, lam, seed_radius(spec, lam))) {
            if (prob.n == 2 && std::abs(y(1)) < 1e-9) {
                continue; // L_1 is traced on its own
            }
            if (side == 1 && seen(y)) {
                continue;
            }
            Curve cv = trace_branch(prob, y, lam, side == 0 ? 1 : -1, st);
            if (side == 0 && std::abs(cv.points.back().lambda - hi) < 1e-12) {
                reached.push_back(cv.points.back().y);
            }
            curves.push_back(std::move(cv));
        }
    }
    return curves;
}

void cmd_continue(RunConfig c)
{
    if (c.format.empty()) {
        c.format = "csv";
    }
    require_format(c, {"csv", "json"});
    const FamilySpec spec = make_family(c, default_perturbed_kind(c.k));
    const int p = c.p.value_or(1);
    require(p >= 1 && p <= spec.dim().plane_max(), "--p must lie in [1, plane_max]");
    const auto [lo, hi] = window(c, spec.eta);
    const EquilibriumProblem prob = chart_problem(spec, p);
    const auto curves = sweep_chart(spec, prob, lo, hi);
    std::string csv = "curve,lambda,u,v,norm,index\n";
    rp::json jc = rp::json::array();
    for (std::size_t i = 0; i < curves.size(); ++i) {
        rp::json pts = rp::json::array();
        for (const auto& pt : curves[i].points) {
            const double u = pt.y(0);
            const double v = prob.n == 2 ? pt.y(1) : 0.0;
            csv += std::to_string(i) + "," + rp::g17(pt.lambda) + "," + rp::g17(u) + "," + rp::g17(v) + "," +
                   rp::g17(pt.y.norm()) + "," + std::to_string(pt.index) + "\n";
            pts.push_back({pt.lambda, u, v, pt.index});
        }
        const auto cl = classify(curves[i], lo, hi);
        rp::json folds = rp::json::array();
        for (const auto& e : curves[i].events) {
            if (e.kind == CurveEventKind::Fold) {
                folds.push_back(e.lambda);
            }
        }
        jc.push_back({{"class", to_string(cl.kind)}, {"folds", folds}, {"points", pts}});
    }
    if (c.format == "csv") {
        emit(c, csv);
    } else {
        rp::json j;
        j["k"] = c.k;
        j["kind"] = to_string(spec.kind);
        j["p"] = p;
        j["curves"] = jc;
        emit(c, rp::dump(j));
    }
}

void cmd_flow(RunConfig c)
{
    if (c.format.empty()) {
        c.format = "csv";
    }
    require_format(c, {"csv", "json"});
    const FamilySpec spec = make_family(c, c.k % 2 == 1 ? "odd" : "even-minus");
    const double lam = c.lambda.value_or(-1.0);
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> nd;
    Vec x(c.k);
    for (int i = 0; i < c.k; ++i) {
        x(i) = nd(rng);
    }
    HPoint x0 = HPoint::project(x);
    x0 = x0 * (c.radius / x0.norm());
    const auto eqs = known_equilibria(spec, lam);
    FlowSettings st;
    const FlowResult r = flow(spec, x0, lam, st, eqs);
    if (c.format == "json") {
        rp::json j = rp::flow_json(r, eqs);
        j["x0"] = rp::vec_json(x0.vec());
        j["lambda"] = lam;
        emit(c, rp::dump(j));
        return;
    }
    std::string s = "t";
    for (int i = 0; i < c.k; ++i) {
        s += ",x" + std::to_string(i);
    }
    s += ",energy\n";
    for (std::size_t n = 0; n < r.t.size(); ++n) {
        s += rp::g17(r.t[n]);
        for (int i = 0; i < c.k; ++i) {
            s += "," + rp::g17(r.y[n](i));
        }
        s += "," + (n < r.energy.size() ? rp::g17(r.energy[n]) : std::string("null")) + "\n";
    }
    s += "# outcome=" + to_string(r.outcome) + " equilibrium=" + std::to_string(r.equilibrium) +
         " energy_monotone=" + (r.energy_monotone ? "true" : "false") + "\n";
    emit(c, s);
}

void cmd_diagram(RunConfig c)
{
    if (c.format.empty()) {
        c.format = "svg";
    }
    require_format(c, {"svg"});
    const FamilySpec spec = make_family(c, default_perturbed_kind(c.k));
    const auto [lo, hi] = window(c, spec.eta);
    const Dim dim = spec.dim();
    const HPoint e1 = eps(dim, 1);
    std::vector<rp::DiagramCurve> out;
    for (int p = 1; p <= dim.plane_max(); ++p) {
        if (c.p && *c.p != p) {
            continue;
        }
        const EquilibriumProblem prob = chart_problem(spec, p);
        for (const auto& cv : sweep_chart(spec, prob, lo, hi)) {
            rp::DiagramCurve d;
            d.plane = p;
            for (const auto& pt : cv.points) {
                const HPoint x = prob.lift(pt.y);
                d.lambda.push_back(pt.lambda);
                d.signed_norm.push_back(x.dot(e1) < 0 ? -x.norm() : x.norm());
            }
            for (const auto& e : cv.events) {
                if (e.kind == CurveEventKind::Fold && e.at < d.lambda.size()) {
                    d.folds.push_back({e.lambda, d.signed_norm[e.at]});
                }
            }
            out.push_back(std::move(d));
        }
    }
    std::ostringstream title;
    title << to_string(spec.kind) << ", k = " << c.k << ", eta = " << rp::g17(spec.eta);
    emit(c, rp::diagram_svg(out, lo, hi, title.str()));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"skbif: S_k-equivariant bifurcation and forced symmetry breaking toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sc) {
        sc->add_option("--k", cfg.k, "dimension parameter k (S_k acts on H_{k-1})")->check(CLI::Range(3, 64));
        sc->add_option("--eta", cfg.eta, "symmetry-breaking amplitude")->check(CLI::NonNegativeNumber);
        sc->add_option("--eta0", cfg.eta0, "localization scale (rho = 4 sqrt(eta0))");
        sc->add_option("--kind", cfg.kind, "family kind")
            ->check(CLI::IsMember({"odd", "even-minus", "even-plus", "perturbed-odd", "perturbed-even"}));
        sc->add_option("--lambda-min", cfg.lambda_min, "lower end of the lambda window");
        sc->add_option("--lambda-max", cfg.lambda_max, "upper end of the lambda window");
        sc->add_option("--lambda", cfg.lambda, "parameter value (flow)");
        sc->add_option("--tau", cfg.tau, "bump tube radius for even kinds");
        sc->add_option("--grid", cfg.grid, "grid resolution");
        sc->add_option("--p", cfg.p, "isotropy class / chart");
        sc->add_option("--out", cfg.out, "output path (default stdout)");
        sc->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv", "svg"}));
        sc->add_option("--seed", cfg.seed, "random seed");
        sc->add_option("--radius", cfg.radius, "initial radius for random flow starts");
    };

    std::map<std::string, void (*)(RunConfig)> handlers = {
        {"axes", cmd_axes},       {"pattern", cmd_pattern}, {"planar", cmd_planar},
        {"gamma", cmd_gamma},     {"verify", cmd_verify},   {"continue", cmd_continue},
        {"flow", cmd_flow},       {"diagram", cmd_diagram},
    };
    const std::map<std::string, std::string> help = {
        {"axes", "list the axes of symmetry"},
        {"pattern", "signed indexed branching pattern"},
        {"planar", "planar zeros on the charts E_p over a lambda grid"},
        {"gamma", "closed-form vs numeric fold values"},
        {"verify", "count crossing curves and folds of the minimal model"},
        {"continue", "continue equilibrium curves in one chart"},
        {"flow", "integrate the flow from a random start"},
        {"diagram", "SVG bifurcation diagram"},
    };
    for (const auto& [name, _] : handlers) {
        add_common(app.add_subcommand(name, help.at(name)));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const auto& [name, fn] : handlers) {
            if (app.got_subcommand(name)) {
                fn(cfg);
            }
        }
    } catch (const VerificationFailed&) {
        return 1;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
