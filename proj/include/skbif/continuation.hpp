#pragma once

// Pseudo-arclength continuation of equilibria F(y, lambda) = 0 in a fixed
// coordinate space, with fold location by bisection on arclength and index
// tracking along the curve.

#include "skbif/family.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace skbif {

/// An equilibrium problem in n coordinates.  `lift` maps coordinates to the
/// ambient H_{k-1} point they represent.
struct EquilibriumProblem {
    int n = 0;
    std::function<Vec(const Vec&, double)> f;
    std::function<Mat(const Vec&, double)> jac;
    std::function<Vec(const Vec&, double)> dlam;
    std::function<HPoint(const Vec&)> lift;
    std::string name;
};

/// F on H_{k-1} in the sum_zero_basis coordinates.
EquilibriumProblem ambient_problem(const FamilySpec& spec);

/// Pull-back U^T F(U y) through a plane chart.  The plane must be invariant
/// under F, which holds for every family here since all are S_{k-1}-equivariant.
EquilibriumProblem planar_problem(const FamilySpec& spec, const PlaneChart& chart);

/// F restricted to L_1: y = s, x = s eps_1.
EquilibriumProblem axis_problem(const FamilySpec& spec);

struct ContinuationSettings {
    double initial_step = 1e-3;
    double min_step = 1e-6;
    double max_step = 1e-2;
    double newton_tol = 1e-12;
    int max_newton = 50;
    double lambda_min = -1.0;
    double lambda_max = 1.0;
    double fold_tol = 1e-10;
    int max_points = 200000;
    /// Stop when ||y|| exceeds this (curve escaping to infinity).
    double max_norm = 1e6;

    void validate() const;
};

struct NewtonResult {
    Vec y;
    double residual = 0.0;
    int iterations = 0;
    std::vector<double> spectrum; // real parts, ascending
};

/// Newton's method at fixed lambda.  Throws ConvergenceError or
/// SingularJacobianError (smallest singular value below 1e-12 relative).
NewtonResult newton_solve(const EquilibriumProblem& prob, const Vec& y0, double lambda,
                          double tol = 1e-12, int max_iter = 50);

struct CurvePoint {
    double lambda = 0.0;
    Vec y;
    int index = -1;   // -1 when the spectrum is inside the zero band
    int det_sign = 0;
    double tangent_lambda = 0.0; // lambda-component of the unit tangent
};

enum class CurveEventKind { Fold, WindowExit, Escape, StepUnderflow, PointLimit };
std::string to_string(CurveEventKind kind);

struct FoldEvent {
    double lambda_star = 0.0;
    Vec y;             // problem coordinates
    HPoint x;          // ambient point
    int plane = 0;     // chart p, 1 for L_1, 0 for the ambient space
    bool closed_form = false;
    double min_abs_eigenvalue = 0.0;
    int index_before = -1;
    int index_after = -1;
};

struct CurveEvent {
    CurveEventKind kind;
    std::size_t at = 0; // index into Curve::points (the point after the event for folds)
    double lambda = 0.0;
    std::optional<FoldEvent> fold;
};

struct Curve {
    std::vector<CurvePoint> points;
    std::vector<CurveEvent> events;

    std::size_t fold_count() const;
};

/// Continue from an equilibrium (y0, lambda0) in the direction where lambda
/// initially increases (dir = +1) or decreases (dir = -1).  Stops at a window
/// boundary (the last point lies exactly on it), on escape, or at the point limit.
Curve trace_branch(const EquilibriumProblem& prob, const Vec& y0, double lambda0, int dir,
                   const ContinuationSettings& settings);

/// Both directions from (y0, lambda0), merged into one curve ordered along arclength.
Curve trace_curve(const EquilibriumProblem& prob, const Vec& y0, double lambda0,
                  const ContinuationSettings& settings);

/// Refine the first lambda reversal between points i and i+1 of the curve.
/// Throws PreconditionError if there is no reversal.
FoldEvent locate_fold(const EquilibriumProblem& prob, const Curve& curve,
                      const ContinuationSettings& settings);

enum class CurveClass { Crossing, FoldTerminated, Other };
std::string to_string(CurveClass c);

struct Classification {
    CurveClass kind = CurveClass::Other;
    int index = -1;            // constant index for crossings, -1 otherwise
    bool index_constant = false;
};

/// Crossing iff the two ends lie on opposite window boundaries with no fold.
Classification classify(const Curve& curve, double lambda_min, double lambda_max);

} // namespace skbif
