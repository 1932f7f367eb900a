#include "support.hpp"

using namespace skbif;
using namespace skbif::testing;

namespace {

// Independent construction of eps_p: p coordinates equal to q, k - p equal
// to -p, normalized.
Vec eps_oracle(int k, int p)
{
    Vec v(k);
    for (int i = 0; i < k; ++i) {
        v(i) = i < p ? double(k - p) : -double(p);
    }
    return v / v.norm();
}

} // namespace

TEST_SUITE("rep_core")
{
    TEST_CASE("eps_p matches the block construction")
    {
        const Vec e31 = eps(Dim(3), 1).vec();
        CHECK(e31(0) == doctest::Approx(2.0 / std::sqrt(6.0)));
        CHECK(e31(1) == doctest::Approx(-1.0 / std::sqrt(6.0)));
        CHECK(e31(2) == doctest::Approx(-1.0 / std::sqrt(6.0)));
        const Vec e42 = eps(Dim(4), 2).vec();
        for (int i = 0; i < 4; ++i) {
            CHECK(e42(i) == doctest::Approx(i < 2 ? 0.5 : -0.5));
        }
        for (int k = 3; k <= 12; ++k) {
            for (int p = 1; p <= k / 2; ++p) {
                const HPoint e = eps(Dim(k), p);
                CHECK((e.vec() - eps_oracle(k, p)).norm() < 1e-14);
                CHECK(e.norm() == doctest::Approx(1.0));
                CHECK(std::abs(e.vec().sum()) < 1e-14);
            }
        }
    }

    TEST_CASE("HPoint rejects points off the hyperplane")
    {
        Vec v(3);
        v << 1.0, 0.0, 0.0;
        CHECK_THROWS_AS(HPoint{v}, PreconditionError);
        CHECK(std::abs(HPoint::project(v).vec().sum()) < 1e-15);
        CHECK_THROWS_AS(Dim(2), PreconditionError);
    }

    TEST_CASE("permutation action")
    {
        const HPoint e = eps(Dim(3), 1);
        const HPoint s = act(transposition(3, 0, 1), e);
        CHECK(s[0] == doctest::Approx(-1.0 / std::sqrt(6.0)));
        CHECK(s[1] == doctest::Approx(2.0 / std::sqrt(6.0)));
        CHECK(s[2] == doctest::Approx(-1.0 / std::sqrt(6.0)));

        Gen g(1);
        for (int trial = 0; trial < 100; ++trial) {
            const int k = g.integer(3, 10);
            const HPoint x = g.hpoint(k, g.uniform(0.1, 3.0));
            const Permutation a = g.perm(k), b = g.perm(k);
            CHECK(act(a, x).norm() == doctest::Approx(x.norm()));
            // Left action: a(b x) = (a o b) x.
            CHECK((act(a, act(b, x)) - act(compose(a, b), x)).norm() < 1e-13);
            CHECK((act(inverse(a), act(a, x)) - x).norm() < 1e-13);
            CHECK(act(a, x).dot(act(a, eps(Dim(k), 1))) == doctest::Approx(x.dot(eps(Dim(k), 1))));
        }
    }

    TEST_CASE("axis enumeration counts")
    {
        CHECK(enumerate_axes(Dim(3)).size() == 3);
        CHECK(enumerate_axes(Dim(5)).size() == 15);
        for (int k = 3; k <= 12; ++k) {
            const auto axes = enumerate_axes(Dim(k));
            CHECK(axes.size() == (std::size_t(1) << (k - 1)) - 1);
            std::uint64_t sum = 0;
            for (const auto& c : axis_class_counts(Dim(k))) {
                const std::uint64_t expect = 2 * c.p == k ? pascal(k, c.p) / 2 : pascal(k, c.p);
                CHECK(c.count == expect);
                sum += c.count;
                std::uint64_t listed = 0;
                for (const auto& a : axes) {
                    listed += a.p() == c.p ? 1 : 0;
                }
                CHECK(listed == c.count);
            }
            CHECK(sum == (std::uint64_t(1) << (k - 1)) - 1);
        }
        for (const auto& c : axis_class_counts(Dim(6))) {
            if (c.p == 3) {
                CHECK(c.count == 10);
            }
        }
    }

    TEST_CASE("axes are pairwise distinct lines")
    {
        const auto axes = enumerate_axes(Dim(7));
        for (std::size_t i = 0; i < axes.size(); ++i) {
            for (std::size_t j = i + 1; j < axes.size(); ++j) {
                const double c = axes[i].direction().dot(axes[j].direction());
                CHECK(std::abs(std::abs(c) - 1.0) > 1e-6);
            }
        }
    }

    TEST_CASE("isotropy classes")
    {
        const auto sig = isotropy_class(eps(Dim(5), 2));
        CHECK(sig == std::vector<int>{2, 3});
        Gen g(2);
        for (int trial = 0; trial < 50; ++trial) {
            const int k = g.integer(3, 9);
            const auto r = isotropy_class(g.hpoint(k));
            CHECK(r.blocks == std::vector<int>(k, 1));
        }
        // A generic point of E_2 for k = 5 has blocks {1, 1, 3}.
        const PlaneChart ch(Dim(5), 2);
        auto b = isotropy_class(ch.map(0.3, 0.7)).blocks;
        std::sort(b.begin(), b.end());
        CHECK(b == std::vector<int>{1, 1, 3});
        // Isotropy is invariant under the action.
        for (int trial = 0; trial < 20; ++trial) {
            const Permutation s = g.perm(5);
            auto bs = isotropy_class(act(s, ch.map(0.3, 0.7))).blocks;
            std::sort(bs.begin(), bs.end());
            CHECK(bs == b);
        }
    }

    TEST_CASE("plane charts are isometries onto invariant planes")
    {
        Gen g(3);
        for (int k = 3; k <= 12; ++k) {
            const Dim d(k);
            for (int p = 2; p <= d.plane_max(); ++p) {
                const PlaneChart ch(d, p);
                const Mat U = ch.matrix();
                CHECK(max_abs(U.transpose() * U - Mat::Identity(2, 2)) < 1e-14);
                CHECK(max_abs(Vec::Ones(k).transpose() * U) < 1e-14);
                for (int trial = 0; trial < 5; ++trial) {
                    const double u = g.uniform(-2, 2), v = g.uniform(-2, 2);
                    CHECK(ch.map(u, v).norm() == doctest::Approx(std::hypot(u, v)));
                    const auto [uu, vv] = ch.coords(ch.map(u, v));
                    CHECK(uu == doctest::Approx(u));
                    CHECK(vv == doctest::Approx(v));
                }
                // Axis points sit on the stated slopes.
                const auto [ue, ve] = ch.coords(ch.eps_p());
                CHECK(ve == doctest::Approx(ch.slope_Lp() * ue));
                CHECK(ch.slope_Lp() == doctest::Approx(std::sqrt(double(k) * (p - 1) / (k - p))));
                const auto [us, vs] = ch.coords(ch.eps_star());
                CHECK(vs == doctest::Approx(ch.slope_Lstar() * us));
                CHECK(ch.basis_u().dot(eps(d, 1)) == doctest::Approx(1.0));
            }
        }
        CHECK(PlaneChart(Dim(5), 2).slope_Lp() == doctest::Approx(1.2909944).epsilon(1e-7));
        CHECK(PlaneChart(Dim(5), 3).is_F_ell());
        CHECK_FALSE(PlaneChart(Dim(6), 3).is_F_ell());
        CHECK_THROWS_AS(PlaneChart(Dim(5), 4), PreconditionError);
    }

    TEST_CASE("two distinct planes meet exactly in L_1")
    {
        for (int k = 5; k <= 11; ++k) {
            const Dim d(k);
            for (int p = 2; p <= d.plane_max(); ++p) {
                for (int pp = p + 1; pp <= d.plane_max(); ++pp) {
                    Mat M(k, 4);
                    M << PlaneChart(d, p).matrix(), PlaneChart(d, pp).matrix();
                    Eigen::FullPivLU<Mat> lu(M);
                    lu.setThreshold(1e-10);
                    CHECK(lu.rank() == 3);
                }
            }
        }
    }

    TEST_CASE("axis angles and plane cosines")
    {
        const double c12 = eps(Dim(4), 1).dot(eps(Dim(4), 2));
        CHECK(c12 == doctest::Approx(0.5773503).epsilon(1e-7));
        const AxisRep a1 = AxisRep::from_positive_set(5, {0});
        const AxisRep a2 = AxisRep::from_positive_set(5, {0, 1});
        CHECK(std::cos(axis_angle(a1, a2)) == doctest::Approx(std::sqrt(3.0 / 8.0)));
        for (int k = 4; k <= 12; ++k) {
            const Dim d(k);
            for (int p = 2; p <= d.plane_max(); ++p) {
                const PlaneChart ch(d, p);
                const auto pc = plane_axis_cosines(d, p);
                const HPoint e1 = eps(d, 1), ep = ch.eps_p(), es = ch.eps_star();
                CHECK(e1.dot(ep) == doctest::Approx(pc.l1_lp).epsilon(1e-12));
                CHECK(es.dot(ep) == doctest::Approx(pc.lstar_lp).epsilon(1e-12));
                CHECK(es.dot(e1) == doctest::Approx(pc.lstar_l1).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("the L_1, L_2 angle at k = 4 lies below pi/3")
    {
        // arccos(1/sqrt 3) ~ 0.9553, so a uniform pi/3 lower bound on axis
        // angles fails in this case.
        const double th = axis_angle(AxisRep::from_positive_set(4, {0}), AxisRep::from_positive_set(4, {0, 1}));
        CHECK(th == doctest::Approx(std::acos(1.0 / std::sqrt(3.0))));
        CHECK(th < M_PI / 3);
    }

    TEST_CASE("orbit plane counts")
    {
        CHECK(orbit_plane_count(Dim(5), 2) == 4);
        CHECK(orbit_plane_count(Dim(6), 3) == 10);
        for (int k = 4; k <= 14; ++k) {
            CHECK(orbit_plane_count(Dim(k), 2) == std::uint64_t(k - 1));
        }
        CHECK(plane_zero_multiplicity(Dim(5), 3) == 3);
        CHECK(plane_zero_multiplicity(Dim(5), 2) == 4);
    }
}
