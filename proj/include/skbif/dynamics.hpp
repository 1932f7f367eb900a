#pragma once

// Gradient-flow integration on H_{k-1} and on chart planes (Dormand-Prince
// 5(4) with embedded error control), endpoint classification against known
// equilibria, and connection checks inside the fixed-point planes.

#include "skbif/symbreak.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace skbif {

struct FlowSettings {
    double initial_step = 1e-3;
    double min_step = 1e-12;
    double max_step = 1.0;
    double horizon = 200.0;
    double rtol = 1e-8;
    double atol = 1e-8;
    /// Stop once within this distance of a listed equilibrium.
    double converge_radius = 1e-8;
    /// Distance below which the endpoint is identified with an equilibrium.
    double match_radius = 1e-6;
    /// Stop once ||F|| falls below this (stationary, possibly unlisted).
    double stationary_tol = 1e-12;
    double escape_radius = 1e3;
    long max_steps = 2000000;
    /// Integrate the whole horizon regardless of convergence.
    bool fixed_horizon = false;

    void validate() const;
};

enum class FlowOutcome { Equilibrium, Stationary, Escaped, Timeout };
std::string to_string(FlowOutcome o);

struct FlowResult {
    std::vector<double> t;
    std::vector<Vec> y;           // integration coordinates
    FlowOutcome outcome = FlowOutcome::Timeout;
    int equilibrium = -1;         // index into the supplied list, -1 if none
    double distance = 0.0;        // to that equilibrium
    std::vector<double> energy;   // per accepted step, empty when no energy exists
    bool energy_monotone = true;
    long steps = 0;
    long rejected = 0;
};

/// Explicit Dormand-Prince 5(4).  `rhs` is the vector field; the observer runs
/// after every accepted step and returns true to stop.  Throws NumericalError
/// on NaN and ConvergenceError on step underflow.
struct OdeTrace {
    std::vector<double> t;
    std::vector<Vec> y;
    long steps = 0;
    long rejected = 0;
    bool stopped = false;
};
OdeTrace integrate(const std::function<Vec(const Vec&)>& rhs, const Vec& y0,
                   const FlowSettings& settings,
                   const std::function<bool(double, const Vec&)>& observer);

/// Equilibria the flow endpoints are matched against: for perturbed families
/// the expanded orbits of enumerate_equilibria, otherwise the origin plus the
/// nonzero radial zeros along every axis (k <= 12).
std::vector<HPoint> known_equilibria(const FamilySpec& spec, double lambda);

/// x' = F(x, lambda) on H_{k-1}, ambient coordinates.  `eqs` defaults to
/// known_equilibria.
FlowResult flow(const FamilySpec& spec, const HPoint& x0, double lambda,
                const FlowSettings& settings,
                std::optional<std::vector<HPoint>> eqs = std::nullopt);

/// Flow of an equilibrium problem in its own coordinates; `time_sign` = -1
/// integrates backward in time.
FlowResult flow_problem(const EquilibriumProblem& prob, const Vec& y0, double lambda,
                        const FlowSettings& settings, const std::vector<Vec>& eqs,
                        int time_sign = 1);

struct Connection {
    std::string from;
    std::string to;
    bool found = false;
    std::string method; // "unstable-manifold", "stable-manifold", "source-ring", ""
};

struct ConnectionReport {
    int k = 0;
    int p = 0;
    double lambda = 0.0;
    /// Chart coordinates of c_1, c_p and c*_{p-1} in E_p.
    std::array<double, 2> c1{}, cp{}, cstar{};
    std::array<int, 3> in_plane_index{}; // c_1, c_p, c*_{p-1}
    std::vector<Connection> connections;
    bool pass = false;
};

/// Connections inside E_p for lambda x - Q(x): for lambda < 0 from c_p to c_1
/// and to c*_{p-1}; for lambda > 0 the reversed pair into c_p.
ConnectionReport connection_check(int k, int p, double lambda,
                                  const FlowSettings& settings = FlowSettings{});

struct FellReport {
    int k = 0;
    double lambda = 0.0;
    std::vector<std::array<double, 2>> zeros; // chart coordinates, origin excluded
    std::vector<int> indices;                  // in-plane
    /// Every unstable half-manifold reaches the origin or leaves radius 3 max ||zero||.
    bool no_connections = false;
    bool pass = false;
};

/// Zeros of lambda x - Q(x) in F_l (k odd): three nonzero zeros of in-plane
/// index 1 with no connections between them.
FellReport fell_report(int k, double lambda, const FlowSettings& settings = FlowSettings{});
bool fell_index_check(int k, double lambda);

} // namespace skbif
