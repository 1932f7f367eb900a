#include "support.hpp"

#include <set>

using namespace skbif;
using namespace skbif::testing;

namespace {

// gamma_{k,p} for p >= 2 by bisection on the discriminant of the
// u-quadratic obtained after eliminating v through the v-equation.
double gamma_oracle(int k, int p, double eta)
{
    const double B = 1.0 / std::sqrt(double(k) * (k - 1));
    const double A = (k - 2) * B, al = 2 * B;
    if (p == 1) {
        return 2 * std::sqrt(A * eta);
    }
    const int q = k - p;
    const double cv = (q - p + 1) / std::sqrt(double(q) * (k - 1) * (p - 1));
    // v = (lambda + al u) / cv; lambda u - A u^2 + B v^2 - eta = 0.
    auto disc = [&](double lam) {
        const double c2 = -A + B * al * al / (cv * cv);
        const double c1 = lam + 2 * B * al * lam / (cv * cv);
        const double c0 = B * lam * lam / (cv * cv) - eta;
        return c1 * c1 - 4 * c2 * c0;
    };
    double lo = 0.0, hi = 1.0;
    REQUIRE(disc(lo) * disc(hi) < 0);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (disc(mid) * disc(lo) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Every zero of the perturbed family by Newton from random seeds in the full
// space, closed under S_{k-1} by brute-force permutation of coordinates 1..k-1.
std::vector<std::pair<HPoint, int>> brute_zeros(int k, double eta, double lambda, int seeds)
{
    const auto spec = FamilySpec::perturbed_odd(k, eta);
    const auto prob = ambient_problem(spec);
    const Mat V = sum_zero_basis(k);
    Gen g(1000 + k);
    std::vector<HPoint> found;
    auto add = [&](const HPoint& x) {
        for (const auto& f : found) {
            if ((f - x).norm() < 1e-8) {
                return;
            }
        }
        found.push_back(x);
    };
    const double R = 1.5 * std::abs(lambda) * std::sqrt(double(k) * k) + 4 * std::sqrt(eta) + 0.1;
    for (int i = 0; i < seeds; ++i) {
        const Vec y0 = V.transpose() * g.hpoint(k, R * std::pow(g.uniform(0, 1), 0.5)).vec();
        try {
            const auto r = newton_solve(prob, y0, lambda, 1e-13, 60);
            add(prob.lift(r.y));
        } catch (const NumericalError&) {
        }
    }
    std::vector<HPoint> closed = found;
    Permutation s(k);
    std::iota(s.begin(), s.end(), 0);
    for (const auto& x : found) {
        Permutation t = s;
        do {
            const HPoint y = act(t, x);
            bool seen = false;
            for (const auto& c : closed) {
                seen = seen || (c - y).norm() < 1e-8;
            }
            if (!seen) {
                closed.push_back(y);
            }
        } while (std::next_permutation(t.begin() + 1, t.end()));
    }
    std::vector<std::pair<HPoint, int>> out;
    for (const auto& x : closed) {
        out.push_back({x, equilibrium_index(spec, x, lambda)});
    }
    return out;
}

} // namespace

TEST_SUITE("symbreak")
{
    TEST_CASE("planar system coefficients")
    {
        const PlanarSystem s = planar_system(5, 2, 0.0);
        CHECK(s.A == doctest::Approx(3.0 / std::sqrt(20.0)));
        CHECK(s.alpha == doctest::Approx(0.4472136).epsilon(1e-7));
        CHECK(s.alpha == doctest::Approx(decompose_alpha(5)).epsilon(1e-12));
        CHECK(planar_system(5, 3, 0.0).cv == 0.0);
        CHECK(planar_system(5, 3, 0.0).F_ell);
        for (int k = 3; k <= 20; ++k) {
            CHECK(decompose_alpha(k) == doctest::Approx(2.0 / std::sqrt(double(k) * (k - 1))).epsilon(1e-12));
        }
    }

    TEST_CASE("planar system equals the pull-back of the ambient field")
    {
        Gen g(51);
        for (int trial = 0; trial < 60; ++trial) {
            const int k = g.integer(4, 11);
            const int p = g.integer(2, Dim(k).plane_max());
            const double eta = trial % 2 ? 0.0 : g.uniform(0, 0.1);
            const bool cubic = trial % 3 == 0;
            const PlanarSystem sys = planar_system(k, p, eta, cubic);
            const FamilySpec spec = cubic      ? FamilySpec::global_cubic(k, CubicParams{-1.0, 0.0}, eta)
                                    : eta > 0.0 ? FamilySpec::perturbed_odd(k, eta)
                                                : FamilySpec::odd_quadratic(k);
            const PlaneChart ch(Dim(k), p);
            const double u = g.uniform(-1, 1), v = g.uniform(-1, 1), lam = g.uniform(-0.5, 0.5);
            const auto f = sys.rhs(u, v, lam);
            const HPoint F = eval(spec, ch.map(u, v), lam);
            // Invariance of E_p: F has no normal component.
            CHECK((F - ch.map(f[0], f[1])).norm() < 1e-12);
            const Eigen::Matrix2d J = sys.jac(u, v, lam);
            const Mat JU = ch.matrix().transpose() * jac(spec, ch.map(u, v), lam) * ch.matrix();
            CHECK(max_abs(J - JU) < 1e-12);
        }
    }

    TEST_CASE("planar zeros lift to ambient zeros")
    {
        Gen g(52);
        for (int trial = 0; trial < 50; ++trial) {
            const int k = 2 * g.integer(1, 4) + 1;
            const int p = g.integer(2, Dim(k).plane_max());
            const double eta = g.uniform(1e-3, 0.05);
            const double lam = g.uniform(-0.4, 0.4);
            const PlanarSystem sys = planar_system(k, p, eta);
            std::vector<PlanarZero> zs;
            try {
                zs = planar_zeros(sys, lam);
            } catch (const NumericalError&) {
                continue; // sampled too close to a fold
            }
            for (const auto& z : zs) {
                const HPoint x = PlaneChart(Dim(k), p).map(z.u, z.v);
                CHECK(eval(FamilySpec::perturbed_odd(k, eta), x, lam).norm() < 1e-12);
            }
        }
    }

    TEST_CASE("unperturbed zeros in E_2 at lambda = -1")
    {
        const PlanarSystem sys = planar_system(5, 2, 0.0);
        const auto zs = planar_zeros(sys, -1.0);
        CHECK(zs.size() == 4);
        const PlaneChart ch(Dim(5), 2);
        std::set<std::string> seen;
        for (const auto& z : zs) {
            const HPoint x = ch.map(z.u, z.v);
            if (x.norm() < 1e-12) {
                seen.insert("origin");
                continue;
            }
            // Each nontrivial zero sits on one of the three axes of the plane.
            const HPoint d = x * (1.0 / x.norm());
            const double c1 = std::abs(d.dot(eps(Dim(5), 1)));
            const double cp = std::abs(d.dot(ch.eps_p()));
            const double cs = std::abs(d.dot(ch.eps_star()));
            CHECK(std::max({c1, cp, cs}) == doctest::Approx(1.0));
            if (c1 > 1 - 1e-12) {
                CHECK(z.u == doctest::Approx(-1.4907120).epsilon(1e-7));
                CHECK(std::abs(z.v) < 1e-14);
                seen.insert("c1");
            } else {
                seen.insert(cp > 1 - 1e-12 ? "cp" : "cstar");
            }
        }
        CHECK(seen.size() == 4);
        CHECK(planar_zeros(sys, 0.0).size() == 1);
    }

    TEST_CASE("crossing point on F_l")
    {
        for (int k : {5, 7, 9}) {
            const double eta = 0.01;
            const PlanarSystem sys = planar_system(k, k / 2 + 1, eta);
            const auto zs = planar_zeros(sys, 0.0);
            const double vstar = std::sqrt(eta) * std::pow(double(k) * (k - 1), 0.25);
            int hits = 0;
            for (const auto& z : zs) {
                if (std::abs(z.u) < 1e-14 && std::abs(std::abs(z.v) - vstar) < 1e-13) {
                    ++hits;
                }
            }
            CHECK(hits == 2);
        }
        CHECK(std::sqrt(0.01) * std::pow(20.0, 0.25) == doctest::Approx(0.2114742).epsilon(1e-7));
    }

    TEST_CASE("saddle-node values")
    {
        CHECK(gamma_closed(5, 1, 0.01) == doctest::Approx(0.1638072).epsilon(1e-7));
        CHECK(gamma_closed(5, 2, 0.01) == doctest::Approx(0.0732568).epsilon(1e-7));
        CHECK(gamma_closed(6, 3, 0.01) == 0.0);
        for (int k = 3; k <= 15; ++k) {
            for (int p = 1; 2 * p < k; ++p) {
                for (double eta : {1e-4, 1e-2, 0.3}) {
                    CHECK(gamma_closed(k, p, eta) == doctest::Approx(gamma_oracle(k, p, eta)).epsilon(1e-10));
                }
            }
        }
    }

    TEST_CASE("fold detection")
    {
        const auto f = fold_detect(planar_system(5, 2, 0.01), -0.3, 0.3);
        REQUIRE(f.size() == 4);
        const double g1 = gamma_closed(5, 1, 0.01), g2 = gamma_closed(5, 2, 0.01);
        const double expect[4] = {-g1, -g2, g2, g1};
        const int plane[4] = {1, 2, 2, 1};
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(f[i].lambda_star - expect[i]) / g2 < 1e-8);
            CHECK(f[i].plane == plane[i]);
        }
        CHECK(fold_detect(planar_system(5, 2, 0.0), 0.05, 0.3).empty());
        // Sorted staircase for k = 7.
        std::vector<double> all;
        for (int p = 2; p <= 4; ++p) {
            for (const auto& e : fold_detect(planar_system(7, p, 1e-3), -0.1, 0.1)) {
                if (e.plane == p || p == 2) {
                    all.push_back(e.lambda_star);
                }
            }
        }
        std::sort(all.begin(), all.end());
        REQUIRE(all.size() == 6);
        for (int i = 0; i < 3; ++i) {
            CHECK(all[i] == doctest::Approx(-gamma_closed(7, i + 1, 1e-3)).epsilon(1e-8));
            CHECK(all[5 - i] == doctest::Approx(gamma_closed(7, i + 1, 1e-3)).epsilon(1e-8));
        }
    }

    TEST_CASE("cubic k = 6: one fold on each half of E_3")
    {
        for (double eta : {1e-3, 1e-2}) {
            const auto f = fold_detect(planar_system(6, 3, eta, true), -0.3, 0.3, 800);
            int up = 0, down = 0;
            for (const auto& e : f) {
                if (e.plane == 3) {
                    (e.y(1) > 0 ? up : down) += 1;
                }
            }
            CHECK(up == 1);
            CHECK(down == 1);
        }
    }

    TEST_CASE("fold points b_p")
    {
        const BPoint b = b_point(5, 1, 0.01);
        // 0.12209471..., quoted elsewhere truncated to 0.1220946.
        CHECK(b.norm == doctest::Approx(std::sqrt(0.01 * std::sqrt(20.0) / 3.0)).epsilon(1e-14));
        CHECK(std::abs(b.norm - 0.1220946) < 1.5e-7);
        for (int k = 3; k <= 13; k += 2) {
            for (int p = 1; 2 * p < k; ++p) {
                for (double eta : {1e-4, 1e-2}) {
                    const BPoint bp = b_point(k, p, eta);
                    CHECK(bp.lambda == doctest::Approx(gamma_closed(k, p, eta)));
                    CHECK(bp.norm < 2 * std::sqrt(eta * k / 3.0));
                    CHECK(bp.norm / std::sqrt(eta) ==
                          doctest::Approx(b_point(k, p, 1e-6).norm / 1e-3).epsilon(1e-9));
                    CHECK(eval(FamilySpec::perturbed_odd(k, eta), bp.x, bp.lambda).norm() < 1e-12);
                }
            }
            // ||b_1|| / sqrt(eta) = (k(k-1))^{1/4} / sqrt(k-2) > 1.
            CHECK(b_point(k, 1, 0.01).norm > 0.1);
        }
        const auto f = fold_detect(planar_system(5, 2, 0.01), 0.0, 0.3);
        REQUIRE(f.size() == 2);
        const BPoint b2 = b_point(5, 2, 0.01);
        CHECK((f[0].x - b2.x).norm() < 1e-7);
        CHECK((f[1].x - b_point(5, 1, 0.01).x).norm() < 1e-7);
        for (int k = 3; k <= 15; k += 2) {
            CHECK(gamma_monotone(k, 1e-3));
        }
    }

    TEST_CASE("crossing and fold counts")
    {
        for (int k = 3; k <= 20; ++k) {
            for (int p = 0; p < k; ++p) {
                std::int64_t alt = 0;
                for (int j = 0; j <= p; ++j) {
                    alt += (j % 2 ? -1 : 1) * std::int64_t(pascal(k, j));
                }
                CHECK(chi(k, p) == (p % 2 ? -alt : alt));
                CHECK(chi(k, p) == std::int64_t(pascal(k - 1, p)));
            }
            const auto pc = predicted_counts(k);
            CHECK(pc.crossings == pascal(k - 1, k / 2));
            CHECK(pc.crossings + pc.folds == std::uint64_t(1) << (k - 1));
        }
        CHECK(predicted_counts(17).crossings == 12870);
        CHECK(predicted_counts(17).folds == 52666);
        CHECK(predicted_counts(5).crossings == 6);
        CHECK(predicted_counts(5).folds == 10);
        CHECK(predicted_counts(3).crossings == 2);
        CHECK(predicted_counts(3).folds == 2);
    }

    TEST_CASE("equilibrium counts against a brute-force search")
    {
        const double eta = 0.01;
        for (double lam : {-0.2, 0.0, 0.1}) {
            const auto brute = brute_zeros(5, eta, lam, 4000);
            const auto eqs = enumerate_equilibria(5, eta, lam);
            CAPTURE(lam);
            CHECK(total_count(eqs) == brute.size());
            CHECK(staircase_count(5, eta, lam) == brute.size());
            std::int64_t ph = 0;
            for (const auto& [x, idx] : brute) {
                ph += idx % 2 ? -1 : 1;
            }
            CHECK(poincare_hopf(5, eta, lam) == ph);
        }
        CHECK(staircase_count(5, eta, -0.2) == 16);
        CHECK(staircase_count(5, eta, 0.0) == 6);
        CHECK(staircase_count(5, eta, 0.1) == 14);
    }

    TEST_CASE("staircase matches enumeration across the window")
    {
        for (int k : {3, 5, 7, 9}) {
            const double eta = 1e-3;
            const double g1 = gamma_closed(k, 1, eta);
            for (int i = 0; i <= 40; ++i) {
                const double lam = -1.3 * g1 + 2.6 * g1 * (i + 0.37) / 41.0;
                CHECK(total_count(enumerate_equilibria(k, eta, lam)) == staircase_count(k, eta, lam));
            }
        }
        CHECK_THROWS_AS(enumerate_equilibria(5, 0.01, gamma_closed(5, 1, 0.01)), PreconditionError);
    }

    TEST_CASE("equilibria at lambda = 0 all have index l")
    {
        for (int k : {5, 7, 9}) {
            for (const auto& e : enumerate_equilibria(k, 1e-3, 0.0)) {
                CHECK(e.index == k / 2);
            }
        }
    }

    TEST_CASE("orbit expansion")
    {
        CHECK(expand_orbit(eps(Dim(5), 1)).size() == 1);
        CHECK(expand_orbit(PlaneChart(Dim(5), 2).map(0.2, 0.3)).size() == 4);
        CHECK(expand_orbit(PlaneChart(Dim(7), 3).map(0.2, 0.3)).size() == 15);
    }

    TEST_CASE("Poincare-Hopf sum")
    {
        CHECK(poincare_hopf(3, 0.01, 0.0) == -2);
        CHECK(poincare_hopf(5, 0.01, 0.0) == 6);
        CHECK(poincare_hopf(7, 1e-3, 0.0) == -20);
        for (int k : {3, 5, 7, 9}) {
            const double eta = 1e-3;
            const double g1 = gamma_closed(k, 1, eta);
            const std::int64_t ref = poincare_hopf(k, eta, 0.0);
            for (double lam : {-2.0 * g1, -0.5 * g1, 0.3 * g1, 1.7 * g1}) {
                CHECK(poincare_hopf(k, eta, lam) == ref);
            }
            // The closed form (-1)^(l+1) C(2l, l) carries the opposite sign.
            CHECK(ref == -poincare_hopf_predicted(k));
        }
    }

    TEST_CASE("localized perturbation contains the fold points")
    {
        const double eta = 0.01;
        const BPoint b1 = b_point(5, 1, eta);
        CHECK_FALSE(in_W(make_localization(5, eta), b1.x, b1.lambda, 0.5));
        CHECK(in_W(make_localization(5, 4 * eta), b1.x, b1.lambda, 0.5));
        const auto loc = localized_family(5, eta, 4 * eta);
        const auto eqs = enumerate_equilibria(loc, 0.0);
        CHECK(total_count(eqs) == 6);
    }

    TEST_CASE("minimal model verification for small k")
    {
        VerifyConfig c3;
        c3.k = 3;
        c3.eta = 0.01;
        const auto r3 = verify_minimal_model(c3);
        CHECK(r3.crossings == 2);
        CHECK(r3.folds == 2);
        CHECK(r3.pass);
        VerifyConfig c5;
        c5.k = 5;
        const auto r5 = verify_minimal_model(c5);
        CHECK(r5.crossings == 6);
        CHECK(r5.folds == 10);
        CHECK(r5.crossing_index == 2);
        CHECK(r5.max_fold_rel_error < 1e-8);
        CHECK(r5.pass);
        VerifyConfig c4;
        c4.k = 4;
        c4.eta = 1e-4;
        const auto r4 = verify_minimal_model(c4);
        CHECK(r4.crossings == 3);
        CHECK(r4.folds == 5);
        CHECK(r4.pass);
    }
}
