#include "lsvv/spectral_prox.hpp"

#include <fmt/format.h>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lsvv {

namespace {

// argmin over the grid and closed-form candidates of 1/2 (w - s)^2 + penalty * w, w >= 0
double best_scalar(double s, double penalty, double step, double tau) {
    std::vector<double> candidates{s, std::max(s - tau, 0.0), 0.0};
    const double top = std::max(s, 0.0) + step;
    const auto points = static_cast<long>(std::ceil(top / step));
    for (long g = 0; g <= points; ++g) {
        candidates.push_back(static_cast<double>(g) * step);
    }
    double best = candidates.front();
    double best_value = std::numeric_limits<double>::infinity();
    for (const double w : candidates) {
        const double value = 0.5 * (w - s) * (w - s) + penalty * w;
        if (value < best_value) {
            best_value = value;
            best = w;
        }
    }
    return best;
}

}  // namespace

Matrix prox_oracle(const Matrix& Q, double tau, Index theta, double grid_resolution) {
    const Index r = std::min(Q.rows(), Q.cols());
    if (r > 6) {
        throw parameter_error(fmt::format("prox_oracle is limited to min(S, K) <= 6, got {}", r));
    }
    if (!(grid_resolution > 0.0) || tau < 0.0 || theta < 0) {
        throw parameter_error("prox_oracle: invalid parameters");
    }
    if (r == 0) {
        return Q;
    }
    Eigen::JacobiSVD<Matrix> svd(Q, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector sigma = svd.singularValues();
    const Index keep = std::min(theta, r);

    Matrix best = Q;
    double best_value = std::numeric_limits<double>::infinity();
    // every subset of `keep` indices, encoded as a bitmask
    for (unsigned subset = 0; subset < (1U << r); ++subset) {
        if (static_cast<Index>(__builtin_popcount(subset)) != keep) {
            continue;
        }
        Vector w(r);
        for (Index j = 0; j < r; ++j) {
            const bool unpenalized = ((subset >> j) & 1U) != 0;
            w(j) = best_scalar(sigma(j), unpenalized ? 0.0 : tau, grid_resolution, tau);
        }
        const Matrix candidate = svd.matrixU() * w.asDiagonal() * svd.matrixV().transpose();
        const double value = svt_objective(candidate, Q, tau, theta);
        if (value < best_value) {
            best_value = value;
            best = candidate;
        }
    }
    return best;
}

}  // namespace lsvv
