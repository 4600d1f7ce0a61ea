#pragma once

#include "lsvv/core.hpp"

namespace lsvv {

/// Binary k-NN similarity over the rows of `X`, symmetrized by union; zero diagonal.
/// Distance ties are broken by the lower row index.
[[nodiscard]] Matrix knn_similarity(const Matrix& X, Index k);

/// Dense heat-kernel similarity exp(-|x_i - x_j|^2 / sigma_g^2) with zero diagonal.
[[nodiscard]] Matrix heat_kernel_similarity(const Matrix& X, double sigma_g);

/// L = diag(S 1) - S. Throws if `S` is not symmetric.
[[nodiscard]] Matrix laplacian(const Matrix& S);

/// Phi^T L Phi for features stored one sample per row, i.e. the S_feat x S_feat matrix whose
/// quadratic form trace(W^T M W) is the manifold penalty of h(x) = W^T phi(x).
[[nodiscard]] Matrix manifold_matrix(const Matrix& phi_rows, const Matrix& L);

struct GraphOptions {
    enum class Weighting { Knn, HeatKernel };
    Weighting weighting = Weighting::Knn;
    Index k = 10;
    double sigma_g = 1.0;
};

struct GraphLaplacian {
    Matrix similarity;
    Matrix laplacian;
    Matrix manifold;
};

/// Similarity on the input rows `X_all`, manifold matrix on their mapped rows `phi_all`.
/// `k` is clamped to n - 1 for tiny sample sets.
[[nodiscard]] GraphLaplacian build_graph(const Matrix& X_all, const Matrix& phi_all, const GraphOptions& options);

}  // namespace lsvv
