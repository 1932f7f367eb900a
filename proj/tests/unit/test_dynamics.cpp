#include "support.hpp"

using namespace skbif;
using namespace skbif::testing;

TEST_SUITE("dynamics")
{
    TEST_CASE("Dormand-Prince on linear problems")
    {
        FlowSettings st;
        st.horizon = 1.0;
        st.rtol = st.atol = 1e-10;
        Vec y0(1);
        y0 << 1.0;
        const auto tr = integrate([](const Vec& y) { return Vec(-y); }, y0, st, [](double, const Vec&) { return false; });
        CHECK(tr.t.back() == doctest::Approx(1.0));
        CHECK(std::abs(tr.y.back()(0) - std::exp(-1.0)) < 1e-8);
        // Harmonic oscillator conserves the radius.
        Vec z0(2);
        z0 << 1.0, 0.0;
        st.horizon = 20.0;
        const auto osc = integrate([](const Vec& y) { Vec d(2); d << y(1), -y(0); return d; }, z0, st,
                                   [](double, const Vec&) { return false; });
        CHECK(std::abs(osc.y.back().norm() - 1.0) < 1e-7);
        CHECK(std::abs(osc.y.back()(0) - std::cos(20.0)) < 1e-7);
    }

    TEST_CASE("settings validation and NaN guard")
    {
        FlowSettings st;
        st.horizon = -1.0;
        CHECK_THROWS_AS(st.validate(), PreconditionError);
        FlowSettings ok;
        Vec y0 = Vec::Ones(1);
        CHECK_THROWS_AS(integrate([](const Vec& y) { return Vec(y.array() / 0.0 * 0.0); }, y0, ok,
                                  [](double, const Vec&) { return false; }),
                        NumericalError);
    }

    TEST_CASE("known equilibria")
    {
        CHECK(known_equilibria(FamilySpec::odd_quadratic(5), -1.0).size() == 16);
        // k = 4: Q vanishes on the eps_2 axes, which carry no nonzero zeros.
        CHECK(known_equilibria(FamilySpec::odd_quadratic(4), 0.5).size() == 5);
        for (double lam : {-0.2, 0.0, 0.1}) {
            CHECK(known_equilibria(FamilySpec::perturbed_odd(5, 0.01), lam).size() ==
                  total_count(enumerate_equilibria(5, 0.01, lam)));
        }
    }

    TEST_CASE("a trajectory started at an equilibrium stays there")
    {
        const auto spec = FamilySpec::odd_quadratic(5);
        const BranchPoint b = branch_point(Dim(5), 2, BranchSign::Backward, 1.0);
        const auto r = flow(spec, b.x, b.lambda, FlowSettings{});
        CHECK(r.outcome == FlowOutcome::Equilibrium);
        CHECK(r.distance < 1e-10);
        CHECK(r.steps == 0);
        FlowSettings fixed;
        fixed.fixed_horizon = true;
        fixed.horizon = 5.0;
        const auto rf = flow(spec, b.x, b.lambda, fixed);
        for (const auto& y : rf.y) {
            CHECK((y - b.x.vec()).norm() < 1e-10);
        }
    }

    TEST_CASE("energy decreases along gradient trajectories")
    {
        Gen g(61);
        FlowSettings st;
        st.horizon = 20.0;
        st.escape_radius = 50.0;
        for (int trial = 0; trial < 50; ++trial) {
            const int k = g.integer(3, 7);
            const double lam = g.uniform(-0.5, 0.5);
            const FamilySpec spec = trial % 2 ? FamilySpec::perturbed_odd(k, g.uniform(0, 0.05))
                                              : FamilySpec::global_cubic(k, CubicParams{-1.0, 0.2}, 0.01);
            const auto r = flow(spec, g.hpoint(k, g.uniform(0.05, 1.0)), lam, st, std::vector<HPoint>{});
            REQUIRE(r.energy.size() == r.y.size());
            CHECK(r.energy_monotone);
            CHECK(r.energy.back() <= r.energy.front());
        }
    }

    TEST_CASE("planes are invariant and the planar flow agrees with the ambient flow")
    {
        Gen g(62);
        FlowSettings st;
        st.fixed_horizon = true;
        st.horizon = 2.0;
        st.rtol = st.atol = 1e-11;
        for (int trial = 0; trial < 10; ++trial) {
            const int k = 2 * g.integer(2, 4) + 1;
            const int p = g.integer(2, Dim(k).plane_max());
            const double eta = g.uniform(0, 0.02), lam = g.uniform(-0.3, 0.3);
            const PlanarSystem sys = planar_system(k, p, eta);
            const PlaneChart ch(Dim(k), p);
            const double u = g.uniform(-0.3, 0.3), v = g.uniform(-0.3, 0.3);
            Vec y0(2);
            y0 << u, v;
            const auto pl = flow_problem(planar_system_problem(sys), y0, lam, st, {});
            const auto amb = flow(FamilySpec::perturbed_odd(k, eta), ch.map(u, v), lam, st, std::vector<HPoint>{});
            REQUIRE(pl.y.back().norm() < 10.0);
            const HPoint lifted = ch.map(pl.y.back()(0), pl.y.back()(1));
            CHECK((lifted.vec() - amb.y.back()).norm() < 1e-8);
            for (const auto& y : amb.y) {
                const Vec normal = y - ch.matrix() * (ch.matrix().transpose() * y);
                CHECK(normal.norm() < 1e-10);
            }
        }
    }

    TEST_CASE("leaving c_2 along its weak unstable direction ends at the origin")
    {
        const auto spec = FamilySpec::odd_quadratic(5);
        const BranchPoint b = branch_point(Dim(5), 2, BranchSign::Backward, 1.0);
        // Radial eigenvalue -lambda = 1 along L_2; moving inward reaches the sink at 0.
        const auto r = flow(spec, b.x * (1.0 - 1e-4), b.lambda, FlowSettings{});
        CHECK(r.outcome == FlowOutcome::Equilibrium);
        CHECK(r.y.back().norm() < 1e-6);
        const auto out = flow(spec, b.x * (1.0 + 1e-4), b.lambda, FlowSettings{});
        CHECK(out.outcome == FlowOutcome::Escaped);
    }

    TEST_CASE("connections inside E_p")
    {
        for (int k : {5, 7}) {
            for (double lam : {-1.0, 1.0}) {
                const auto rep = connection_check(k, 2, lam);
                CAPTURE(k);
                CAPTURE(lam);
                CHECK(rep.pass);
                CHECK(rep.connections.size() == 2);
                for (const auto& c : rep.connections) {
                    CHECK(c.found);
                }
                CHECK(rep.in_plane_index[0] == 1);
                CHECK(rep.in_plane_index[1] == (lam < 0 ? 0 : 2));
                CHECK(rep.in_plane_index[2] == 1);
            }
        }
        CHECK(connection_check(7, 3, -1.0).pass);
        CHECK_THROWS_AS(connection_check(5, 3, -1.0), PreconditionError);
    }

    TEST_CASE("no connections between the F_l zeros")
    {
        for (int k : {3, 5, 7}) {
            for (double lam : {-1.0, 1.0}) {
                const auto rep = fell_report(k, lam);
                CHECK(rep.zeros.size() == 3);
                for (int idx : rep.indices) {
                    CHECK(idx == 1);
                }
                CHECK(rep.no_connections);
                CHECK(rep.pass);
                CHECK(fell_index_check(k, lam));
            }
        }
    }
}
