#include "skbif/family.hpp"

#include "skbif/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace skbif {

std::string to_string(FamilyKind kind)
{
    switch (kind) {
    case FamilyKind::OddQuadratic: return "odd";
    case FamilyKind::EvenModelMinus: return "even-minus";
    case FamilyKind::EvenModelPlus: return "even-plus";
    case FamilyKind::PerturbedOdd: return "perturbed-odd";
    case FamilyKind::PerturbedEven: return "perturbed-even";
    case FamilyKind::GlobalCubic: return "global-cubic";
    }
    return "unknown";
}

std::string to_string(BranchSign sign)
{
    return sign == BranchSign::Forward ? "forward" : "backward";
}

// ---------------------------------------------------------------- bumps

namespace {

double plateau_g(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double plateau_g_prime(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }

Mat projector(int k) { return Mat::Identity(k, k) - Mat::Constant(k, k, 1.0 / k); }

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

} // namespace

double bump_phi(double t)
{
    if (t <= 1.0) {
        return 1.0;
    }
    if (t >= 2.0) {
        return 0.0;
    }
    const double a = plateau_g(2.0 - t);
    const double b = plateau_g(t - 1.0);
    return a / (a + b);
}

double bump_phi_prime(double t)
{
    if (t <= 1.0 || t >= 2.0) {
        return 0.0;
    }
    const double a = plateau_g(2.0 - t);
    const double b = plateau_g(t - 1.0);
    const double da = -plateau_g_prime(2.0 - t);
    const double db = plateau_g_prime(t - 1.0);
    const double s = a + b;
    return (da * b - a * db) / (s * s);
}

std::pair<double, double> lambda0_R0(const Dim& dim)
{
    require(!dim.odd() && dim.k() >= 4, "lambda0_R0: k must be even and at least 4");
    const double k = dim.k();
    const double lambda0 = 4.0 / (k * (k * k - 4.0));
    return {lambda0, std::sqrt(lambda0)};
}

double phase_zero_gap(const Dim& dim)
{
    require(dim.k() <= 20, "phase_zero_gap: k > 20 is too large for exhaustive search");
    const auto axes = enumerate_axes(dim);
    std::vector<Vec> points;
    points.reserve(2 * axes.size());
    for (const auto& a : axes) {
        points.push_back(a.direction().vec());
        points.push_back(-a.direction().vec());
    }
    // The zero set is one S_k-orbit per (p, sign), so it suffices to measure
    // from one representative of each orbit.
    double best_cos = -1.0;
    for (int p = 1; p <= dim.ell(); ++p) {
        for (int s : {1, -1}) {
            const Vec rep = eps(dim, p).vec() * double(s);
            for (const auto& x : points) {
                const double c = rep.dot(x);
                if (c < 1.0 - 1e-12) {
                    best_cos = std::max(best_cos, c);
                }
            }
        }
    }
    return std::acos(std::clamp(best_cos, -1.0, 1.0));
}

BumpParams make_bump(const Dim& dim, std::optional<double> tau)
{
    const double kappa = phase_zero_gap(dim);
    BumpParams b;
    b.tau = tau.value_or(kappa / 100.0);
    if (!(b.tau > 0.0) || b.tau >= kappa / 2.0) {
        std::ostringstream os;
        os << "make_bump: tau = " << b.tau << " must lie in (0, kappa/2), kappa = " << kappa;
        throw PreconditionError(os.str());
    }
    std::tie(b.lambda0, b.R0) = lambda0_R0(dim);
    return b;
}

namespace {

struct PsiData {
    double value = 0.0;
    Vec grad; // gradient with respect to x (not u), zero when psi is flat
};

// Nearest point of the orbit S_k eps_l to u: +1/sqrt(k) on the l largest
// coordinates.  Returns the cosine and that point.
std::pair<double, Vec> nearest_ell_axis(const Vec& u)
{
    const int k = int(u.size());
    const int ell = k / 2;
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return u(a) > u(b); });
    Vec w = Vec::Constant(k, -1.0 / std::sqrt(double(k)));
    for (int i = 0; i < ell; ++i) {
        w(order[i]) = 1.0 / std::sqrt(double(k));
    }
    return {std::clamp(u.dot(w), -1.0, 1.0), w};
}

PsiData psi_data(const Vec& x, double tau, bool want_grad)
{
    PsiData out;
    const int k = int(x.size());
    out.grad = Vec::Zero(k);
    const double R = x.norm();
    if (R == 0.0) {
        return out;
    }
    const Vec u = x / R;
    auto [c, w] = nearest_ell_axis(u);
    const double d = std::acos(c);
    const double t = 4.0 * d / tau - 1.0;
    out.value = bump_phi(t);
    if (want_grad) {
        const double dphi = bump_phi_prime(t);
        if (dphi != 0.0) {
            const double s = std::sqrt(std::max(1.0 - c * c, 1e-300));
            // d(acos c)/dx = -(1/s) (w - c u) / R
            const Vec dc = (w - c * u) / R;
            out.grad = dphi * (4.0 / tau) * (-1.0 / s) * dc;
        }
    }
    return out;
}

struct HData {
    double H = 0.0;
    Vec grad;     // dH/dx
    double dlam;  // dH/dlambda
};

HData h_data(const Vec& x, double lambda, const BumpParams& b, bool want_grad)
{
    HData out;
    const int k = int(x.size());
    out.grad = Vec::Zero(k);
    out.dlam = 0.0;
    const double R = x.norm();
    const double tr = 2.0 * R / b.R0;
    const double tl = 2.0 * std::abs(lambda) / b.lambda0;
    const double fr = bump_phi(tr);
    const double fl = bump_phi(tl);
    const double Phi = fr * fl;
    const PsiData psi = psi_data(x, b.tau, want_grad);
    out.H = Phi + (1.0 - Phi) * psi.value;
    if (want_grad) {
        Vec dPhi = Vec::Zero(k);
        if (R > 0.0) {
            dPhi = bump_phi_prime(tr) * (2.0 / b.R0) * fl * (x / R);
        }
        const double dPhi_dlam = fr * bump_phi_prime(tl) * (2.0 * sgn(lambda) / b.lambda0);
        out.grad = (1.0 - psi.value) * dPhi + (1.0 - Phi) * psi.grad;
        out.dlam = (1.0 - psi.value) * dPhi_dlam;
    }
    return out;
}

struct EtaData {
    double value = 0.0;
    Vec grad;
    double dlam = 0.0;
};

EtaData eta_data(const FamilySpec& spec, const Vec& x, double lambda, bool want_grad)
{
    EtaData out;
    const int k = spec.k;
    out.grad = Vec::Zero(k);
    if (!(spec.eta > 0.0)) {
        return out;
    }
    if (!spec.localization) {
        out.value = spec.eta;
        return out;
    }
    const Localization& L = *spec.localization;
    const Vec e1 = eps(Dim(k), 1).vec();
    const double x1 = x.dot(e1);
    const Vec y = x - x1 * e1;
    const double ny = y.norm();
    const double ta = 2.0 * std::abs(lambda) / L.rho;
    const double tb = 2.0 * std::abs(x1) / L.delta1;
    const double tc = 2.0 * ny / L.delta2;
    const double a = bump_phi(ta);
    const double b = bump_phi(tb);
    const double c = bump_phi(tc);
    out.value = spec.eta * a * b * c;
    if (want_grad) {
        const double db = bump_phi_prime(tb) * 2.0 * sgn(x1) / L.delta1;
        Vec g = db * c * e1;
        if (ny > 0.0) {
            g += b * bump_phi_prime(tc) * (2.0 / L.delta2) * (y / ny);
        }
        out.grad = spec.eta * a * g;
        out.dlam = spec.eta * bump_phi_prime(ta) * (2.0 * sgn(lambda) / L.rho) * b * c;
    }
    return out;
}

} // namespace

double bump_psi(const Dim& dim, const HPoint& u, double tau)
{
    require(!dim.odd(), "bump_psi: k must be even");
    require(u.k() == dim.k(), "bump_psi: dimension mismatch");
    require(std::abs(u.norm() - 1.0) <= 1e-10, "bump_psi: u must be a unit vector");
    require(tau > 0.0, "bump_psi: tau must be positive");
    return psi_data(u.vec(), tau, false).value;
}

HPoint radial_S(const Dim& dim, const HPoint& x, double lambda, const BumpParams& bump)
{
    require(!dim.odd(), "radial_S: k must be even");
    const HData h = h_data(x.vec(), lambda, bump, false);
    return cubic_T1(x) * h.H;
}

// ---------------------------------------------------------------- FamilySpec

FamilySpec FamilySpec::odd_quadratic(int k)
{
    FamilySpec s;
    s.k = k;
    s.kind = FamilyKind::OddQuadratic;
    s.validate();
    return s;
}

FamilySpec FamilySpec::even_model(int k, int sign, std::optional<BumpParams> bump)
{
    require(sign == 1 || sign == -1, "even_model: sign must be +1 or -1");
    FamilySpec s;
    s.k = k;
    s.kind = sign < 0 ? FamilyKind::EvenModelMinus : FamilyKind::EvenModelPlus;
    require(k % 2 == 0, "even_model: k must be even");
    s.bump = bump ? *bump : make_bump(Dim(k));
    s.validate();
    return s;
}

FamilySpec FamilySpec::perturbed_odd(int k, double eta, std::optional<Localization> loc)
{
    FamilySpec s;
    s.k = k;
    s.kind = FamilyKind::PerturbedOdd;
    s.eta = eta;
    s.localization = loc;
    s.validate();
    return s;
}

FamilySpec FamilySpec::perturbed_even(int k, int sign, double eta, std::optional<Localization> loc,
                                      std::optional<BumpParams> bump)
{
    require(sign == 1 || sign == -1, "perturbed_even: sign must be +1 or -1");
    require(k % 2 == 0, "perturbed_even: k must be even");
    FamilySpec s;
    s.k = k;
    s.kind = FamilyKind::PerturbedEven;
    s.eta = eta;
    s.localization = loc;
    s.bump = bump ? *bump : make_bump(Dim(k));
    s.even_sign = sign;
    s.validate();
    return s;
}

FamilySpec FamilySpec::global_cubic(int k, CubicParams cubic, double eta)
{
    FamilySpec s;
    s.k = k;
    s.kind = FamilyKind::GlobalCubic;
    s.cubic = cubic;
    s.eta = eta;
    s.validate();
    return s;
}

bool FamilySpec::has_S() const
{
    return kind == FamilyKind::EvenModelMinus || kind == FamilyKind::EvenModelPlus ||
           kind == FamilyKind::PerturbedEven;
}

int FamilySpec::model_sign() const
{
    switch (kind) {
    case FamilyKind::EvenModelMinus: return -1;
    case FamilyKind::EvenModelPlus: return 1;
    case FamilyKind::PerturbedEven: return even_sign;
    default: return 0;
    }
}

bool FamilySpec::quadratic_only() const
{
    return kind == FamilyKind::OddQuadratic ||
           (kind == FamilyKind::PerturbedOdd && !localization);
}

bool FamilySpec::gradient() const
{
    if (has_S() || localization) {
        return false;
    }
    return true;
}

void FamilySpec::validate() const
{
    require(k >= 3, "FamilySpec: k must be at least 3");
    if (has_S()) {
        require(k % 2 == 0, "FamilySpec: even-model kinds require even k");
        require(bump.tau > 0.0 && bump.lambda0 > 0.0 && bump.R0 > 0.0,
                "FamilySpec: bump parameters must be positive");
    }
    const bool perturbed_kind = kind == FamilyKind::PerturbedOdd || kind == FamilyKind::PerturbedEven;
    if (perturbed_kind) {
        require(eta > 0.0, "FamilySpec: perturbed kinds require eta > 0");
    } else if (kind != FamilyKind::GlobalCubic) {
        require(eta == 0.0, "FamilySpec: unperturbed kinds carry eta = 0");
    } else {
        require(eta >= 0.0, "FamilySpec: eta must be non-negative");
    }
    if (kind == FamilyKind::PerturbedEven) {
        require(even_sign == 1 || even_sign == -1, "FamilySpec: perturbed even sign must be +-1");
    }
    if (localization) {
        const auto& L = *localization;
        require(L.rho > 0.0 && L.delta1 > 0.0 && L.delta2 > 0.0,
                "FamilySpec: localization radii must be positive");
        require(eta <= L.eta0, "FamilySpec: eta must not exceed eta0");
    }
}

// ---------------------------------------------------------------- evaluation

double eta_hat(const FamilySpec& spec, const HPoint& x, double lambda)
{
    return eta_data(spec, x.vec(), lambda, false).value;
}

HPoint eval(const FamilySpec& spec, const HPoint& x, double lambda)
{
    require(x.k() == spec.k, "eval: dimension mismatch");
    HPoint f = x * lambda - quad_Q(x);
    if (spec.kind == FamilyKind::GlobalCubic) {
        f = f + spec.cubic.apply(x);
    }
    if (spec.has_S()) {
        const HData h = h_data(x.vec(), lambda, spec.bump, false);
        f = f + cubic_T1(x) * (spec.model_sign() * h.H);
    }
    if (spec.eta > 0.0) {
        const double e = eta_data(spec, x.vec(), lambda, false).value;
        if (e != 0.0) {
            f = f - eps(Dim(spec.k), 1) * e;
        }
    }
    return f;
}

Mat jac(const FamilySpec& spec, const HPoint& x, double lambda)
{
    require(x.k() == spec.k, "jac: dimension mismatch");
    const int k = spec.k;
    const Mat P = projector(k);
    Mat J = lambda * P - quad_Q_jacobian(x);
    if (spec.kind == FamilyKind::GlobalCubic) {
        J += spec.cubic.jacobian(x);
    }
    if (spec.has_S()) {
        const HData h = h_data(x.vec(), lambda, spec.bump, true);
        const Vec t1 = cubic_T1(x).vec();
        // D(H T1) = T1 grad(H)^T + H DT1, all restricted to H_{k-1}
        Mat dS = t1 * h.grad.transpose() * P + h.H * cubic_T1_jacobian(x);
        J += spec.model_sign() * dS;
    }
    if (spec.eta > 0.0 && spec.localization) {
        const EtaData e = eta_data(spec, x.vec(), lambda, true);
        J -= eps(Dim(k), 1).vec() * e.grad.transpose() * P;
    }
    return J;
}

HPoint dlambda(const FamilySpec& spec, const HPoint& x, double lambda)
{
    HPoint d = x;
    if (spec.has_S()) {
        const HData h = h_data(x.vec(), lambda, spec.bump, true);
        if (h.dlam != 0.0) {
            d = d + cubic_T1(x) * (spec.model_sign() * h.dlam);
        }
    }
    if (spec.eta > 0.0 && spec.localization) {
        const EtaData e = eta_data(spec, x.vec(), lambda, true);
        if (e.dlam != 0.0) {
            d = d - eps(Dim(spec.k), 1) * e.dlam;
        }
    }
    return d;
}

Mat reduced_jac(const FamilySpec& spec, const HPoint& x, double lambda)
{
    const Mat V = sum_zero_basis(spec.k);
    return V.transpose() * jac(spec, x, lambda) * V;
}

std::optional<double> energy(const FamilySpec& spec, const HPoint& x, double lambda)
{
    if (!spec.gradient()) {
        return std::nullopt;
    }
    const double R2 = x.vec().squaredNorm();
    double e = cubic_C(x) - 0.5 * lambda * R2;
    if (spec.eta > 0.0) {
        e += spec.eta * x.dot(eps(Dim(spec.k), 1));
    }
    if (spec.kind == FamilyKind::GlobalCubic) {
        e -= spec.cubic.a1 * R2 * R2 / 4.0;
        e -= spec.cubic.a2 * x.vec().array().pow(4).sum() / 4.0;
    }
    return e;
}

int equilibrium_index(const FamilySpec& spec, const HPoint& x, double lambda)
{
    Mat J = reduced_jac(spec, x, lambda);
    if (spec.gradient()) {
        const double asym = relative_asymmetry(J);
        if (asym > 1e-10) {
            std::ostringstream os;
            os << "equilibrium_index: Jacobian of a gradient family is asymmetric (" << asym << ")";
            throw NumericalError(os.str());
        }
        J = 0.5 * (J + J.transpose());
    }
    return negative_count(J);
}

double trace_check(const FamilySpec& spec, const HPoint& x, double lambda)
{
    require(spec.quadratic_only(), "trace_check: family must have a purely quadratic nonlinearity");
    return reduced_jac(spec, x, lambda).trace();
}

// ---------------------------------------------------------------- branches

namespace {

double quad_speed(const Dim& dim, int p)
{
    const double k = dim.k();
    const double q = k - p;
    return std::sqrt(double(p) * q * k) / (q - p);
}

// Radial coefficient a_p with Q(eps_p) = a_p eps_p.
double radial_a(const Dim& dim, int p)
{
    const double k = dim.k();
    const double q = k - p;
    return (q - p) / std::sqrt(double(p) * q * k);
}

// Nontrivial root r of <F(r u, lambda), u> = 0 near r0.
double radial_root(const FamilySpec& spec, const HPoint& u, double lambda, double r0)
{
    double r = r0;
    for (int it = 0; it < 60; ++it) {
        const HPoint x = u * r;
        const double f = eval(spec, x, lambda).dot(u);
        const double df = u.vec().dot(jac(spec, x, lambda) * u.vec());
        if (std::abs(f) < 1e-15 * std::max(1.0, std::abs(r))) {
            return r;
        }
        if (df == 0.0) {
            throw SingularJacobianError("radial_root: zero radial derivative");
        }
        const double step = f / df;
        r -= step;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(r))) {
            return r;
        }
    }
    if (std::abs(eval(spec, u * r, lambda).dot(u)) < 1e-13) {
        return r;
    }
    throw ConvergenceError("radial_root: Newton did not converge along the axis");
}

} // namespace

BranchPoint branch_point(const Dim& dim, int p, BranchSign sign, double s)
{
    require(p >= 1 && 2 * p < dim.k(), "branch_point: requires 1 <= p < k/2 (use pitchfork_branch for p = k/2)");
    require(s >= 0.0, "branch_point: s must be non-negative");
    const double r = s * quad_speed(dim, p);
    const HPoint e = eps(dim, p);
    if (sign == BranchSign::Forward) {
        return {e * r, s};
    }
    return {e * (-r), -s};
}

BranchPoint model_branch_point(const FamilySpec& spec, int p, BranchSign sign, double s)
{
    const Dim dim = spec.dim();
    require(p >= 1 && 2 * p < dim.k(), "model_branch_point: requires 1 <= p < k/2");
    require(s > 0.0, "model_branch_point: s must be positive");
    require(spec.eta == 0.0, "model_branch_point: axes are not invariant under the perturbation");
    const BranchPoint guess = branch_point(dim, p, sign, s);
    if (spec.kind == FamilyKind::OddQuadratic) {
        return guess;
    }
    const HPoint e = eps(dim, p);
    const double r = radial_root(spec, e, guess.lambda, guess.x.dot(e));
    return {e * r, guess.lambda};
}

PitchforkPoint pitchfork_branch(const FamilySpec& spec, double t, int leg)
{
    require(spec.kind == FamilyKind::EvenModelMinus || spec.kind == FamilyKind::EvenModelPlus,
            "pitchfork_branch: requires an even model");
    require(leg == 1 || leg == -1, "pitchfork_branch: leg must be +1 or -1");
    require(t >= 0.0, "pitchfork_branch: t must be non-negative");
    const Dim dim = spec.dim();
    PitchforkPoint out;
    out.x = eps(dim, dim.ell()) * (leg * t);
    out.lambda = -spec.model_sign() * t * t;
    out.residual = eval(spec, out.x, out.lambda).norm();
    out.on_plateau = t <= spec.bump.R0 / 2.0 && std::abs(out.lambda) <= spec.bump.lambda0 / 2.0;
    return out;
}

BranchIndex branch_index(const FamilySpec& spec, const BranchRecord& record, double s)
{
    require(s > 0.0, "branch_index: s must be positive");
    const BranchParam& bp = record.param;
    const HPoint& u = bp.direction;
    require(std::abs(u.norm() - 1.0) < 1e-12, "branch_index: branch direction must be a unit vector");
    const double lambda = bp.lambda_sign * std::pow(s, bp.lambda_exponent);
    double r = s * bp.speed;
    if (spec.kind != FamilyKind::OddQuadratic && !(spec.has_S() && bp.lambda_exponent == 2)) {
        r = radial_root(spec, u, lambda, r);
    }
    const HPoint x = u * r;
    const double res = eval(spec, x, lambda).norm();
    if (res > 1e-10) {
        std::ostringstream os;
        os << "branch_index: branch point residual " << res << " too large";
        throw NumericalError(os.str());
    }
    BranchIndex out;
    out.index = equilibrium_index(spec, x, lambda);
    out.radial_eigenvalue = u.vec().dot(jac(spec, x, lambda) * u.vec());
    return out;
}

std::uint64_t BranchingPattern::total() const
{
    std::uint64_t n = 0;
    for (const auto& e : entries) {
        n += e.multiplicity;
    }
    return n;
}

BranchingPattern pattern_catalog(const FamilySpec& spec)
{
    const bool even_model =
        spec.kind == FamilyKind::EvenModelMinus || spec.kind == FamilyKind::EvenModelPlus;
    require(spec.kind == FamilyKind::OddQuadratic || even_model,
            "pattern_catalog: kind must be odd, even-minus or even-plus");
    const Dim dim = spec.dim();
    const int k = dim.k();
    BranchingPattern pat;

    auto add = [&](BranchRecord rec, std::uint64_t mult, double s) {
        rec.index = branch_index(spec, rec, s).index;
        pat.totals[{rec.sign, rec.index}] += mult;
        pat.entries.push_back({std::move(rec), mult});
    };

    for (int p = 1; 2 * p < k; ++p) {
        std::vector<int> block(p);
        std::iota(block.begin(), block.end(), 0);
        // Stay well inside the cubic plateau for the even models.
        double s = 0.1;
        if (even_model) {
            const double a = radial_a(dim, p);
            s = 0.05 * std::min(spec.bump.lambda0, a * spec.bump.R0);
        }
        for (BranchSign sign : {BranchSign::Forward, BranchSign::Backward}) {
            const int orient = sign == BranchSign::Forward ? 1 : -1;
            BranchRecord rec{AxisRep(k, block, orient), sign, -1,
                             BranchParam{eps(dim, p) * double(orient), quad_speed(dim, p), 1, orient}};
            add(std::move(rec), binomial(k, p), s);
        }
    }
    if (even_model) {
        const int ell = dim.ell();
        std::vector<int> block(ell);
        std::iota(block.begin(), block.end(), 0);
        const int lam_sign = -spec.model_sign();
        const BranchSign sign = lam_sign > 0 ? BranchSign::Forward : BranchSign::Backward;
        const double t = 0.1 * spec.bump.R0;
        // Both legs +-t eps_l over C(k,l)/2 unoriented axes: C(k,l) branches.
        BranchRecord rec{AxisRep(k, block, 1), sign, -1, BranchParam{eps(dim, ell), 1.0, 2, lam_sign}};
        add(std::move(rec), binomial(k, ell), t);
    }
    return pat;
}

double cubic_fold_t(const Dim& dim, int p, double beta)
{
    require(beta != 0.0, "cubic_fold_t: beta must be nonzero");
    require(beta < 0.0, "cubic_fold_t: beta must be negative");
    require(p >= 1 && 2 * p < dim.k(), "cubic_fold_t: requires 1 <= p < k/2");
    const double k = dim.k();
    const double q = k - p;
    return -(q - p) * (q - p) / (4.0 * p * q * k * beta);
}

bool box_check(const Dim& dim, double rho, bool include_ell)
{
    require(rho > 0.0, "box_check: rho must be positive");
    const int k = dim.k();
    const double delta = 0.5 * k * std::sqrt(double(k) + 1.0) * rho;
    constexpr int samples = 64;
    for (int p = 1; 2 * p < k; ++p) {
        for (BranchSign sign : {BranchSign::Forward, BranchSign::Backward}) {
            for (int i = 0; i <= samples; ++i) {
                const double s = rho * i / samples;
                if (branch_point(dim, p, sign, s).x.norm() > delta) {
                    return false;
                }
            }
        }
    }
    if (include_ell && !dim.odd()) {
        // x = t eps_l with lambda = t^2 in [0, rho].
        for (int i = 0; i <= samples; ++i) {
            const double lam = rho * i / samples;
            if (std::sqrt(lam) > delta) {
                return false;
            }
        }
    }
    return true;
}

} // namespace skbif
