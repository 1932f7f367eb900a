#include "skbif/linalg.hpp"

#include "skbif/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace skbif {

Mat sum_zero_basis(int k)
{
    require(k >= 2, "sum_zero_basis: k must be at least 2");
    Mat basis = Mat::Zero(k, k - 1);
    for (int j = 1; j < k; ++j) {
        const double scale = 1.0 / std::sqrt(double(j) * double(j + 1));
        for (int i = 0; i < j; ++i) {
            basis(i, j - 1) = scale;
        }
        basis(j, j - 1) = -double(j) * scale;
    }
    return basis;
}

Mat complement_basis(const Mat& basis, const Mat& dirs)
{
    // Project the basis onto the complement of span(dirs), then orthonormalize.
    Mat q = dirs;
    if (q.cols() > 0) {
        Eigen::HouseholderQR<Mat> qr(dirs);
        q = qr.householderQ() * Mat::Identity(dirs.rows(), dirs.cols());
    }
    Mat projected = basis - q * (q.transpose() * basis);
    Eigen::JacobiSVD<Mat> svd(projected, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > 1e-10) {
            ++rank;
        }
    }
    return svd.matrixU().leftCols(rank);
}

double relative_asymmetry(const Mat& m)
{
    const double norm = m.norm();
    return (m - m.transpose()).norm() / std::max(1.0, norm);
}

std::vector<double> spectrum_real_parts(const Mat& m)
{
    std::vector<double> out;
    if (m.rows() == 0) {
        return out;
    }
    if (relative_asymmetry(m) < 1e-10) {
        Mat sym = 0.5 * (m + m.transpose());
        Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            out.push_back(es.eigenvalues()(i));
        }
    } else {
        Eigen::EigenSolver<Mat> es(m, false);
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            out.push_back(es.eigenvalues()(i).real());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int negative_count(const Mat& m, double threshold)
{
    int count = 0;
    for (double mu : spectrum_real_parts(m)) {
        if (std::abs(mu) < threshold) {
            std::ostringstream os;
            os << "non-hyperbolic spectrum: eigenvalue " << mu << " within " << threshold
               << " of zero";
            throw NonHyperbolicError(os.str());
        }
        if (mu < 0) {
            ++count;
        }
    }
    return count;
}

std::uint64_t binomial(int n, int r)
{
    if (r < 0 || r > n) {
        return 0;
    }
    r = std::min(r, n - r);
    std::uint64_t result = 1;
    for (int i = 1; i <= r; ++i) {
        result = result * std::uint64_t(n - r + i) / std::uint64_t(i);
    }
    return result;
}

} // namespace skbif
