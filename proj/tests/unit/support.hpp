#pragma once

// Shared generators and numerical oracles for the unit tests.

#include "skbif/dynamics.hpp"
#include "skbif/error.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace skbif::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    /// Gaussian point of H_{k-1} scaled to the given norm.
    HPoint hpoint(int k, double norm = 1.0)
    {
        std::normal_distribution<double> n(0.0, 1.0);
        Vec v(k);
        for (int i = 0; i < k; ++i) {
            v(i) = n(rng_);
        }
        HPoint x = HPoint::project(v);
        return x * (norm / x.norm());
    }

    Permutation perm(int k)
    {
        Permutation s(k);
        std::iota(s.begin(), s.end(), 0);
        std::shuffle(s.begin(), s.end(), rng_);
        return s;
    }

    /// Random permutation fixing coordinate 0.
    Permutation perm_fixing_first(int k)
    {
        Permutation s(k);
        std::iota(s.begin(), s.end(), 0);
        std::shuffle(s.begin() + 1, s.end(), rng_);
        return s;
    }

private:
    std::mt19937_64 rng_;
};

/// Central-difference Jacobian of a map on H_{k-1}, applied on the sum-zero
/// basis and returned in ambient form J V V^T.
inline Mat fd_jacobian(const std::function<HPoint(const HPoint&)>& f, const HPoint& x, double h = 1e-6)
{
    const int k = x.k();
    const Mat V = sum_zero_basis(k);
    Mat cols(k, k - 1);
    for (int j = 0; j < k - 1; ++j) {
        const HPoint d = HPoint::project(V.col(j));
        cols.col(j) = (f(x + d * h).vec() - f(x - d * h).vec()) / (2 * h);
    }
    return cols * V.transpose();
}

/// Gradient of a scalar on H_{k-1} by central differences, as a point of H_{k-1}.
inline HPoint fd_gradient(const std::function<double(const HPoint&)>& g, const HPoint& x, double h = 1e-6)
{
    const int k = x.k();
    const Mat V = sum_zero_basis(k);
    Vec out = Vec::Zero(k);
    for (int j = 0; j < k - 1; ++j) {
        const HPoint d = HPoint::project(V.col(j));
        out += V.col(j) * ((g(x + d * h) - g(x - d * h)) / (2 * h));
    }
    return HPoint::project(out);
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

/// Brute-force binomial coefficient from Pascal's triangle.
inline std::uint64_t pascal(int n, int r)
{
    if (r < 0 || r > n) {
        return 0;
    }
    std::vector<std::uint64_t> row(n + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i) {
        for (int j = i; j > 0; --j) {
            row[j] += row[j - 1];
        }
    }
    return row[r];
}

} // namespace skbif::testing
