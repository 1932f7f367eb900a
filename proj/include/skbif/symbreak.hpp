#pragma once

// Forced symmetry breaking S_k -> S_{k-1} by -eta eps_1: planar reductions on
// the fixed-point planes E_p, closed-form saddle-node data, equilibrium
// enumeration by orbit expansion, and the numeric count of crossing curves
// and folds of the minimal model.

#include "skbif/continuation.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace skbif {

/// x' = lambda x - Q(x) - eta eps_1 (optionally - ||x||^2 x) pulled back to
/// the chart U_p:
///   u' = lambda u - B((k-2)u^2 - v^2) - eta - c (u^2+v^2) u
///   v' = lambda v + alpha u v - cv v^2   - c (u^2+v^2) v
/// with B = 1/sqrt(k(k-1)), alpha = 2B, cv = (q-p+1)/sqrt(q(k-1)(p-1)), c = cubic ? 1 : 0.
struct PlanarSystem {
    int k = 3;
    int p = 2;
    double eta = 0.0;
    bool cubic = false;

    double A = 0.0;     // (k-2) B
    double B = 0.0;
    double alpha = 0.0;
    double cv = 0.0;    // zero on F_l
    bool F_ell = false;

    std::array<double, 2> rhs(double u, double v, double lambda) const;
    Eigen::Matrix2d jac(double u, double v, double lambda) const;
    PlaneChart chart() const { return PlaneChart(Dim(k), p); }
};

PlanarSystem planar_system(int k, int p, double eta, bool cubic = false);
std::array<double, 2> planar_rhs(const PlanarSystem& sys, double u, double v, double lambda);
Eigen::Matrix2d planar_jac(const PlanarSystem& sys, double u, double v, double lambda);

/// The planar system as a continuation problem; lift goes through the chart.
EquilibriumProblem planar_system_problem(const PlanarSystem& sys);

struct PlanarZero {
    double u = 0.0;
    double v = 0.0;
    int index = -1;          // in-plane index; -1 when fold-adjacent
    bool fold_adjacent = false;
    double residual = 0.0;
};

/// All zeros of the planar system at lambda, Newton-polished.
std::vector<PlanarZero> planar_zeros(const PlanarSystem& sys, double lambda);

/// gamma_{k,p}; zero for k even and p = l.
double gamma_closed(int k, int p, double eta);

/// Numeric folds in [lambda_lo, lambda_hi] from zero-count changes on a grid,
/// bisection on the count and Newton on (F = 0, det DF = 0).
/// plane = 1 marks folds on L_1 (v = 0), otherwise plane = sys.p.
std::vector<FoldEvent> fold_detect(const PlanarSystem& sys, double lambda_lo, double lambda_hi,
                                   int grid = 400);

struct BPoint {
    HPoint x;
    double norm = 0.0;
    double lambda = 0.0; // +gamma_{k,p}
    double u = 0.0;
    double v = 0.0;
};

/// Fold point b_p = c_p(+gamma_{k,p}) in H_{k-1}, 1 <= p < k/2.
BPoint b_point(int k, int p, double eta);

/// gamma_{k,1} > gamma_{k,2} > ... over p < k/2, inside the printed bounds.
bool gamma_monotone(int k, double eta);

/// alpha > 0 with y' = (lambda + alpha x) y - Q_2(y) in the (x, y) splitting
/// along eps_1.  Computed from 2 pi_2 B(eps_1, y) = -alpha y on an orthonormal
/// basis of eps_1^perp.
double decompose_alpha(int k);

/// chi(p) = (-1)^p sum_{j <= p} (-1)^j C(k, j).
std::int64_t chi(int k, int p);

struct PredictedCounts {
    std::uint64_t crossings = 0;
    std::uint64_t folds = 0;
};
PredictedCounts predicted_counts(int k);

/// Number of equilibria of lambda x - Q(x) - eta eps_1 at lambda (k odd),
/// from the fold staircase.
std::uint64_t staircase_count(int k, double eta, double lambda);

struct Equilibrium {
    HPoint x;
    int index = -1;
    std::uint64_t multiplicity = 1;
    int plane = 1; // 1 for L_1, otherwise the chart p
};

/// Equilibria of a perturbed family at lambda as S_{k-1}-orbit representatives.
/// Polynomial families use the closed-form planar zeros; bump or localized
/// families use seeded Newton on each chart.
std::vector<Equilibrium> enumerate_equilibria(const FamilySpec& spec, double lambda);
std::vector<Equilibrium> enumerate_equilibria(int k, double eta, double lambda);

/// Distinct zeros of a 1- or 2-coordinate problem found by Newton from a
/// uniform (1-d) or polar (2-d) grid of seeds within radius R.
std::vector<Vec> seeded_zeros(const EquilibriumProblem& prob, double lambda, double R);
/// Seed radius covering every axial zero of a perturbed family at lambda.
double seed_radius(const FamilySpec& spec, double lambda);

std::uint64_t total_count(const std::vector<Equilibrium>& eqs);

/// All points of the S_{k-1}-orbit of x (permutations fixing coordinate 0).
std::vector<HPoint> expand_orbit(const HPoint& x, double tol = kBlockMergeTolerance);

/// Sum of (-1)^index over all equilibria of the perturbed odd family.
std::int64_t poincare_hopf(int k, double eta, double lambda);
/// (-1)^(l+1) C(2l, l).
std::int64_t poincare_hopf_predicted(int k);

/// PerturbedOdd (k odd) or PerturbedEven with the given sign (k even),
/// localized on W_rho with rho = 4 sqrt(eta0).
FamilySpec localized_family(int k, double eta, double eta0, int even_sign = -1);
Localization make_localization(int k, double eta0);

/// (x, lambda) in W_{scale rho}: |lambda| < scale rho, |x_1| < scale delta1,
/// ||y|| < scale delta2.
bool in_W(const Localization& loc, const HPoint& x, double lambda, double scale);

struct VerifyConfig {
    int k = 5;
    double eta = 1e-2;
    std::optional<double> eta0;        // even k; defaults to 4 eta
    std::optional<double> lambda_min;  // defaults to -2 gamma_{k,1}
    std::optional<double> lambda_max;
    int even_sign = -1;
    std::optional<double> max_step;
    std::optional<double> tau;         // even k; bump tube radius, defaults to kappa/10
};

struct PlaneTally {
    int p = 1; // 1 for L_1
    std::uint64_t multiplicity = 1;
    int crossing_curves = 0;
    int fold_curves = 0;
    int folds = 0;
    int other_curves = 0;
    std::vector<double> fold_lambdas;
    std::vector<double> closed_form;
};

struct MinimalModelReport {
    int k = 0;
    double eta = 0.0;
    double eta0 = 0.0;
    double tau = 0.0; // even k
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::string family;
    std::uint64_t crossings = 0;
    std::uint64_t folds = 0;
    std::uint64_t expected_crossings = 0;
    std::uint64_t expected_folds = 0;
    std::vector<PlaneTally> planes;
    bool crossing_index_ok = true;
    int crossing_index = -1;
    double max_fold_rel_error = 0.0; // numeric vs closed form (odd k)
    std::uint64_t pitchfork_legs_crossing = 0;
    std::uint64_t pitchfork_legs_fold = 0;
    std::vector<std::string> notes;
    bool numerical_failure = false;
    bool pass = false;
};

MinimalModelReport verify_minimal_model(const VerifyConfig& cfg);

} // namespace skbif
