#include "lsvv/graph.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace lsvv {

namespace {

Matrix squared_distances(const Matrix& X) {
    const Vector norms = X.rowwise().squaredNorm();
    Matrix D = -2.0 * (X * X.transpose());
    D.colwise() += norms;
    D.rowwise() += norms.transpose();
    // cancellation can leave tiny negatives
    return D.cwiseMax(0.0);
}

}  // namespace

Matrix knn_similarity(const Matrix& X, Index k) {
    const Index n = X.rows();
    if (k < 1 || k >= n) {
        throw parameter_error(fmt::format("k-NN graph needs 1 <= k < n, got k = {}, n = {}", k, n));
    }
    const Matrix D = squared_distances(X);
    Matrix S = Matrix::Zero(n, n);
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        std::iota(order.begin(), order.end(), Index{0});
        order.erase(order.begin() + i);
        std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](Index a, Index b) {
            return D(i, a) < D(i, b) || (D(i, a) == D(i, b) && a < b);
        });
        for (Index r = 0; r < k; ++r) {
            const Index j = order[static_cast<std::size_t>(r)];
            S(i, j) = 1.0;
            S(j, i) = 1.0;
        }
        order.resize(static_cast<std::size_t>(n));
    }
    return S;
}

Matrix heat_kernel_similarity(const Matrix& X, double sigma_g) {
    if (!(sigma_g > 0.0)) {
        throw parameter_error(fmt::format("heat kernel width must be positive, got {}", sigma_g));
    }
    Matrix S = (-squared_distances(X) / (sigma_g * sigma_g)).array().exp().matrix();
    S = 0.5 * (S + S.transpose());
    S.diagonal().setZero();
    return S;
}

Matrix laplacian(const Matrix& S) {
    if (S.rows() != S.cols()) {
        throw dimension_error("similarity matrix must be square");
    }
    const double scale = S.size() > 0 ? std::max(1.0, S.cwiseAbs().maxCoeff()) : 1.0;
    if (S.size() > 0 && (S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw error("similarity matrix is not symmetric");
    }
    Matrix L = -S;
    L.diagonal() = S.rowwise().sum() - S.diagonal();
    return L;
}

Matrix manifold_matrix(const Matrix& phi_rows, const Matrix& L) {
    if (L.rows() != L.cols() || L.rows() != phi_rows.rows()) {
        throw dimension_error(fmt::format("manifold matrix: Laplacian {}x{} vs {} feature rows", L.rows(), L.cols(),
                                          phi_rows.rows()));
    }
    const Matrix M = phi_rows.transpose() * (L * phi_rows);
    return 0.5 * (M + M.transpose());
}

GraphLaplacian build_graph(const Matrix& X_all, const Matrix& phi_all, const GraphOptions& options) {
    if (X_all.rows() != phi_all.rows()) {
        throw dimension_error("build_graph: input rows and feature rows disagree");
    }
    GraphLaplacian g;
    const Index n = X_all.rows();
    if (options.weighting == GraphOptions::Weighting::Knn) {
        const Index k = std::min(options.k, n - 1);
        g.similarity = k >= 1 ? knn_similarity(X_all, k) : Matrix::Zero(n, n);
    } else {
        g.similarity = heat_kernel_similarity(X_all, options.sigma_g);
    }
    g.laplacian = laplacian(g.similarity);
    g.manifold = manifold_matrix(phi_all, g.laplacian);
    return g;
}

}  // namespace lsvv
