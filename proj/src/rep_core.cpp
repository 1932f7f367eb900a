#include "skbif/rep_core.hpp"

#include "skbif/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace skbif {

Dim::Dim(int k) : k_(k)
{
    require(k >= 3, "Dim: k must be at least 3");
}

HPoint::HPoint(Vec coords) : coords_(std::move(coords))
{
    const double sum = coords_.sum();
    if (std::abs(sum) > 1e-12) {
        std::ostringstream os;
        os << "HPoint: coordinates sum to " << sum << ", not zero";
        throw PreconditionError(os.str());
    }
}

HPoint HPoint::project(Vec coords)
{
    HPoint out;
    const double mean = coords.size() ? coords.mean() : 0.0;
    coords.array() -= mean;
    out.coords_ = std::move(coords);
    return out;
}

bool is_permutation(const Permutation& sigma, int k)
{
    if (int(sigma.size()) != k) {
        return false;
    }
    std::vector<char> seen(k, 0);
    for (int v : sigma) {
        if (v < 0 || v >= k || seen[v]) {
            return false;
        }
        seen[v] = 1;
    }
    return true;
}

Permutation compose(const Permutation& a, const Permutation& b)
{
    Permutation out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        out[i] = a[b[i]];
    }
    return out;
}

Permutation inverse(const Permutation& sigma)
{
    Permutation out(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        out[sigma[i]] = int(i);
    }
    return out;
}

Permutation transposition(int k, int i, int j)
{
    Permutation out(k);
    std::iota(out.begin(), out.end(), 0);
    std::swap(out[i], out[j]);
    return out;
}

HPoint eps(const Dim& dim, int p)
{
    const int k = dim.k();
    require(p >= 1 && p <= k - 1, "eps: p must lie in [1, k-1]");
    std::vector<int> set(p);
    std::iota(set.begin(), set.end(), 0);
    return axis_vector(k, set);
}

HPoint axis_vector(int k, const std::vector<int>& positive_set)
{
    const int p = int(positive_set.size());
    require(p >= 1 && p <= k - 1, "axis_vector: positive set must be a nonempty proper subset");
    const int q = k - p;
    const double scale = 1.0 / std::sqrt(double(p) * q * k);
    Vec v = Vec::Constant(k, -double(p) * scale);
    for (int i : positive_set) {
        require(i >= 0 && i < k, "axis_vector: index out of range");
        v(i) = double(q) * scale;
    }
    return HPoint::project(std::move(v));
}

HPoint act(const Permutation& sigma, const HPoint& x)
{
    require(is_permutation(sigma, x.k()), "act: sigma is not a permutation of {0..k-1}");
    Vec out(x.k());
    for (int j = 0; j < x.k(); ++j) {
        out(sigma[j]) = x[j];
    }
    return HPoint::project(std::move(out));
}

namespace {

std::vector<int> complement(int k, const std::vector<int>& set)
{
    std::vector<char> in(k, 0);
    for (int i : set) {
        in[i] = 1;
    }
    std::vector<int> out;
    for (int i = 0; i < k; ++i) {
        if (!in[i]) {
            out.push_back(i);
        }
    }
    return out;
}

} // namespace

AxisRep::AxisRep(int k, std::vector<int> block, int orientation)
    : k_(k), block_(std::move(block)), orientation_(orientation)
{
    std::sort(block_.begin(), block_.end());
    require(orientation == 1 || orientation == -1, "AxisRep: orientation must be +1 or -1");
    const int p = int(block_.size());
    require(p >= 1 && 2 * p <= k, "AxisRep: block must be the smaller coordinate subset");
    require(2 * p < k || block_.front() == 0, "AxisRep: half-size block must contain coordinate 0");
}

AxisRep AxisRep::from_positive_set(int k, std::vector<int> positive_set)
{
    std::sort(positive_set.begin(), positive_set.end());
    positive_set.erase(std::unique(positive_set.begin(), positive_set.end()), positive_set.end());
    const int p = int(positive_set.size());
    require(p >= 1 && p <= k - 1, "AxisRep: positive set must be a nonempty proper subset");
    auto rest = complement(k, positive_set);
    bool keep = 2 * p < k || (2 * p == k && positive_set.front() == 0);
    if (keep) {
        return AxisRep(k, positive_set, 1);
    }
    return AxisRep(k, rest, -1);
}

std::vector<int> AxisRep::positive_set() const
{
    return orientation_ > 0 ? block_ : complement(k_, block_);
}

HPoint AxisRep::direction() const
{
    return axis_vector(k_, block_) * double(orientation_);
}

std::vector<AxisClassCount> axis_class_counts(const Dim& dim)
{
    std::vector<AxisClassCount> out;
    const int k = dim.k();
    for (int p = 1; p <= dim.ell(); ++p) {
        std::uint64_t c = binomial(k, p);
        if (2 * p == k) {
            c /= 2;
        }
        out.push_back({p, c});
    }
    return out;
}

std::vector<AxisRep> enumerate_axes(const Dim& dim)
{
    const int k = dim.k();
    if (k > 24) {
        throw PreconditionError("enumerate_axes: k > 24 is too large for explicit enumeration; "
                                "use axis_class_counts");
    }
    std::vector<AxisRep> out;
    for (int p = 1; p <= dim.ell(); ++p) {
        // Lexicographic p-subsets of {0..k-1}.
        std::vector<int> idx(p);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            if (2 * p < k || idx.front() == 0) {
                out.emplace_back(k, idx, 1);
            }
            int i = p - 1;
            while (i >= 0 && idx[i] == k - p + i) {
                --i;
            }
            if (i < 0) {
                break;
            }
            ++idx[i];
            for (int j = i + 1; j < p; ++j) {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    return out;
}

IsotropySignature isotropy_class(const HPoint& x, double tol)
{
    require(x.norm() > 0.0, "isotropy_class: x must be nonzero");
    std::vector<double> c(x.vec().data(), x.vec().data() + x.k());
    std::sort(c.begin(), c.end(), std::greater<>());
    IsotropySignature sig;
    int count = 1;
    double first = c[0];
    for (std::size_t i = 1; i < c.size(); ++i) {
        const double gap = c[i - 1] - c[i];
        if (gap <= tol) {
            ++count;
            sig.merge_distance = std::max(sig.merge_distance, gap);
        } else {
            sig.blocks.push_back(count);
            sig.values.push_back(first);
            count = 1;
            first = c[i];
        }
    }
    sig.blocks.push_back(count);
    sig.values.push_back(first);
    return sig;
}

PlaneChart::PlaneChart(const Dim& dim, int p) : k_(dim.k()), p_(p)
{
    require(p >= 2 && p <= dim.plane_max(), "plane_chart: p must lie in [2, plane_max]");
    const int k = k_;
    const int q = k - p;
    Vec bu = Vec::Constant(k, -1.0 / std::sqrt(double(k) * (k - 1)));
    bu(0) = double(k - 1) / std::sqrt(double(k) * (k - 1));
    Vec bv = Vec::Zero(k);
    const double sv = 1.0 / std::sqrt(double(k - 1) * (p - 1) * q);
    for (int i = 1; i < p; ++i) {
        bv(i) = q * sv;
    }
    for (int i = p; i < k; ++i) {
        bv(i) = -double(p - 1) * sv;
    }
    basis_u_ = HPoint::project(bu);
    basis_v_ = HPoint::project(bv);
}

PlaneChart plane_chart(const Dim& dim, int p) { return PlaneChart(dim, p); }

Mat PlaneChart::matrix() const
{
    Mat m(k_, 2);
    m.col(0) = basis_u_.vec();
    m.col(1) = basis_v_.vec();
    return m;
}

HPoint PlaneChart::map(double u, double v) const
{
    return HPoint::project(u * basis_u_.vec() + v * basis_v_.vec());
}

std::pair<double, double> PlaneChart::coords(const HPoint& x) const
{
    return {x.dot(basis_u_), x.dot(basis_v_)};
}

double PlaneChart::slope_Lp() const { return std::sqrt(double(k_) * (p_ - 1) / q()); }

double PlaneChart::slope_Lstar() const { return -std::sqrt(double(q()) * k_ / (p_ - 1)); }

HPoint PlaneChart::eps_p() const { return eps(Dim(k_), p_); }

HPoint PlaneChart::eps_star() const
{
    return act(transposition(k_, 0, p_ - 1), eps(Dim(k_), p_ - 1));
}

double axis_angle(const AxisRep& a, const AxisRep& b)
{
    require(a.k() == b.k(), "axis_angle: axes belong to different k");
    const double c = std::clamp(a.direction().dot(b.direction()), -1.0, 1.0);
    return std::acos(c);
}

PlaneAxisCosines plane_axis_cosines(const Dim& dim, int p)
{
    require(p >= 2 && p <= dim.plane_max(), "plane_axis_cosines: p out of range");
    const double k = dim.k();
    const double q = k - p;
    return {std::sqrt(q / ((k - 1) * p)), std::sqrt(q * (p - 1) / ((q + 1) * p)),
            -std::sqrt((p - 1) / ((k - 1) * (q + 1)))};
}

std::uint64_t orbit_plane_count(const Dim& dim, int p)
{
    require(p >= 2 && p <= dim.plane_max(), "orbit_plane_count: p out of range");
    return binomial(dim.k() - 1, p - 1);
}

std::uint64_t plane_zero_multiplicity(const Dim& dim, int p)
{
    const auto n = orbit_plane_count(dim, p);
    return PlaneChart(dim, p).is_F_ell() ? n / 2 : n;
}

} // namespace skbif
