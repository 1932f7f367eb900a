#pragma once

// One-parameter families x' = F(x, lambda) on H_{k-1}: the quadratic family
// lambda x - Q(x), the even-k localized models F^{+-} = lambda x - Q(x) +- S,
// their S_{k-1}-equivariant perturbations by -eta_hat eps_1, and the global
// cubic lambda x - Q(x) + T(x).  Everything here has an analytic Jacobian.

#include "skbif/equivariants.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace skbif {

enum class FamilyKind {
    OddQuadratic,   // lambda x - Q(x)
    EvenModelMinus, // lambda x - Q(x) - S(x, lambda)
    EvenModelPlus,  // lambda x - Q(x) + S(x, lambda)
    PerturbedOdd,   // lambda x - Q(x) - eta_hat eps_1
    PerturbedEven,  // F^{sign} - eta_hat eps_1
    GlobalCubic,    // lambda x - Q(x) + T(x) - eta eps_1
};

std::string to_string(FamilyKind kind);

/// Smooth step: 1 for t <= 1, 0 for t >= 2, strictly decreasing in between.
/// Built from exp(-1/s) plateaus.
double bump_phi(double t);
double bump_phi_prime(double t);

/// Plateau parameters of the radial field S.
struct BumpParams {
    double tau = 0.0;     // angular radius of the psi-bump around S_k eps_l
    double lambda0 = 0.0; // lambda half-width of the cubic plateau
    double R0 = 0.0;      // radius of the cubic plateau
};

/// lambda0 = 4 / (k (k^2 - 4)), R0 = sqrt(lambda0).  k even, k >= 4.
std::pair<double, double> lambda0_R0(const Dim& dim);

/// Minimum spherical distance between zeros of the phase field (k <= 12).
double phase_zero_gap(const Dim& dim);

/// Bump parameters with tau = kappa / 100 unless given; throws if tau >= kappa / 2.
BumpParams make_bump(const Dim& dim, std::optional<double> tau = std::nullopt);

/// S_k-invariant plateau bump around the orbit of eps_l: 1 within tau/2,
/// 0 beyond 3 tau / 4 (spherical distance).  k even, u a unit vector.
double bump_psi(const Dim& dim, const HPoint& u, double tau);

/// S(x, lambda) = [Phi + (1 - Phi) psi(u)] T1(x), Phi = phi(2R/R0) phi(2|lambda|/lambda0).
HPoint radial_S(const Dim& dim, const HPoint& x, double lambda, const BumpParams& bump);

/// Support geometry of the localized perturbation eta_hat.
struct Localization {
    double eta0 = 0.0;
    double rho = 0.0;    // 4 sqrt(eta0)
    double delta1 = 0.0; // rho / 2
    double delta2 = 0.0; // sqrt(k / 3) rho
};

struct FamilySpec {
    int k = 3;
    FamilyKind kind = FamilyKind::OddQuadratic;
    double eta = 0.0;
    /// Sign of S for PerturbedEven (+1 for F^+, -1 for F^-).
    int even_sign = -1;
    std::optional<Localization> localization;
    BumpParams bump;
    CubicParams cubic;

    static FamilySpec odd_quadratic(int k);
    /// sign = -1 for F^-, +1 for F^+.
    static FamilySpec even_model(int k, int sign, std::optional<BumpParams> bump = std::nullopt);
    static FamilySpec perturbed_odd(int k, double eta,
                                    std::optional<Localization> loc = std::nullopt);
    static FamilySpec perturbed_even(int k, int sign, double eta,
                                     std::optional<Localization> loc = std::nullopt,
                                     std::optional<BumpParams> bump = std::nullopt);
    static FamilySpec global_cubic(int k, CubicParams cubic, double eta = 0.0);

    Dim dim() const { return Dim(k); }
    bool has_S() const;
    /// +1 for F^+, -1 for F^-, 0 when S is absent.
    int model_sign() const;
    bool perturbed() const { return eta > 0.0; }
    /// Purely quadratic nonlinearity (trace identity holds).
    bool quadratic_only() const;
    /// F = -grad E everywhere (no bumps, no localization).
    bool gradient() const;

    /// Throws PreconditionError if the invariants are violated.
    void validate() const;
};

/// Scalar eta_hat(x, lambda): eta on W_{rho/2}, 0 outside W_rho.  Without a
/// localization it is the constant eta.
double eta_hat(const FamilySpec& spec, const HPoint& x, double lambda);

HPoint eval(const FamilySpec& spec, const HPoint& x, double lambda);
/// Ambient k x k matrix of DF restricted to H_{k-1}.
Mat jac(const FamilySpec& spec, const HPoint& x, double lambda);
/// dF / dlambda.
HPoint dlambda(const FamilySpec& spec, const HPoint& x, double lambda);
/// Jacobian in the sum_zero_basis coordinates, (k-1) x (k-1).
Mat reduced_jac(const FamilySpec& spec, const HPoint& x, double lambda);

/// Energy E with F = -grad E; only for gradient() families.
std::optional<double> energy(const FamilySpec& spec, const HPoint& x, double lambda);

/// Number of negative eigenvalues of DF at an equilibrium.
int equilibrium_index(const FamilySpec& spec, const HPoint& x, double lambda);

/// trace DF = (k - 1) lambda for purely quadratic families.
double trace_check(const FamilySpec& spec, const HPoint& x, double lambda);

enum class BranchSign { Forward, Backward };
std::string to_string(BranchSign sign);

/// x(s) = s * speed * direction, lambda(s) = lambda_sign * s^lambda_exponent.
struct BranchParam {
    HPoint direction;
    double speed = 1.0;
    int lambda_exponent = 1;
    int lambda_sign = 1;
};

struct BranchRecord {
    AxisRep axis;
    BranchSign sign;
    int index = -1;
    BranchParam param;
};

struct BranchPoint {
    HPoint x;
    double lambda;
};

/// Closed-form branches of lambda x - Q(x) along L_p, 1 <= p < k/2:
/// forward x = s sqrt(pqk)/(q-p) eps_p, lambda = s; backward is the negative.
BranchPoint branch_point(const Dim& dim, int p, BranchSign sign, double s);

/// Point of a branch of an arbitrary axial family at |lambda| = s (p < k/2),
/// solved from the scalar radial equation along the axis.
BranchPoint model_branch_point(const FamilySpec& spec, int p, BranchSign sign, double s);

struct PitchforkPoint {
    HPoint x;
    double lambda;
    double residual;
    bool on_plateau; // (R, lambda) inside the cubic plateau of S
};

/// Pitchfork legs along L_l of the even model: x = leg * t eps_l,
/// lambda = t^2 for F^- and -t^2 for F^+.
PitchforkPoint pitchfork_branch(const FamilySpec& spec, double t, int leg);

struct BranchIndex {
    int index;
    double radial_eigenvalue;
};

/// Index of a branch at parameter s, plus the eigenvalue along the axis.
BranchIndex branch_index(const FamilySpec& spec, const BranchRecord& record, double s);

struct PatternEntry {
    BranchRecord record;
    std::uint64_t multiplicity;
};

struct BranchingPattern {
    std::vector<PatternEntry> entries;
    /// (sign, index) -> number of branches.
    std::map<std::pair<BranchSign, int>, std::uint64_t> totals;

    std::uint64_t total() const;
};

/// Signed indexed branching pattern of OddQuadratic or an even model.
BranchingPattern pattern_catalog(const FamilySpec& spec);

/// Saddle-node parameter of the backward L_p branch of lambda x - Q(x) + T(x)
/// with T(eps_p) = beta eps_p, beta < 0:  t* = -(q-p)^2 / (4 pqk beta).
double cubic_fold_t(const Dim& dim, int p, double beta);

/// Every forward and backward quadratic branch sampled on s in [0, rho] stays
/// in the ball of radius (k/2) sqrt(k+1) rho.  When `include_ell` (k even) the
/// pitchfork legs t eps_l, lambda = t^2 of the unit cubic are sampled too.
bool box_check(const Dim& dim, double rho, bool include_ell = false);

} // namespace skbif
