#pragma once

#include "lsvv/core.hpp"
#include "lsvv/dataset.hpp"
#include "lsvv/features.hpp"
#include "lsvv/graph.hpp"
#include "lsvv/losses.hpp"
#include "lsvv/spectral_prox.hpp"

#include <functional>
#include <span>

namespace lsvv {

struct Hyperparams {
    double tau_A = 0.0;  ///< Frobenius penalty
    double tau_I = 0.0;  ///< manifold penalty
    double tau_S = 0.0;  ///< tail-sum (local Rademacher) penalty
    Index theta = 0;     ///< number of leading singular values left unpenalized
    Index batch_size = 64;
    Index max_iters = 2000;
    double xi = 0.95;   ///< Adadelta forget factor
    double eps = 1e-6;  ///< Adadelta conditioner
    std::uint64_t seed = 0;
    SvtMode svt_mode = SvtMode::TailShrink;

    // Early stop once the full objective, evaluated every `eval_every` iterations, has improved
    // by less than `tolerance` (relative) for `patience` consecutive evaluations.
    bool early_stop = true;
    Index eval_every = 10;
    Index patience = 50;
    double tolerance = 1e-7;

    void validate(Index feature_dim, Index outputs) const;
};

struct AdadeltaState {
    double grad_accum = 0.0;    // G
    double update_accum = 0.0;  // M
};

struct AdadeltaStep {
    double eta;
    AdadeltaState state;
};

/// Scalar Adadelta: G <- xi G + (1 - xi) |g|^2, eta = sqrt((M + eps) / (G + eps)),
/// M <- xi M + (1 - xi) eta^2 |g|^2.
[[nodiscard]] AdadeltaStep adadelta_step(const AdadeltaState& state, double grad_norm_sq, double xi, double eps);

/// Feature-mapped labeled samples, one per row.
struct LabeledSamples {
    Matrix phi;
    Matrix y;
    Mask mask;

    [[nodiscard]] Index size() const noexcept { return phi.rows(); }
};

/// Rows of `data` that carry at least one observed label, paired with their mapped features.
[[nodiscard]] LabeledSamples labeled_samples(const Dataset& data, const Matrix& phi_rows);

[[nodiscard]] LossKind loss_for_task(TaskKind task) noexcept;

/**
 * @brief Gradient of the differentiable part of the objective on a mini-batch:
 *        (1/m) sum_i dl_i/dW + 2 tau_A W + 2 tau_I M W.
 * @details `manifold` may be empty when tau_I is zero. Zero penalties are skipped, not multiplied.
 */
[[nodiscard]] Matrix grad_g(const Matrix& W, const LabeledSamples& data, std::span<const Index> batch, LossKind loss,
                            double tau_A, double tau_I, const Matrix& manifold);

/// Mean loss over all labeled samples + tau_A |W|_F^2 + tau_I tr(W^T M W) + tau_S tail_sum(W, theta).
[[nodiscard]] double objective_value(const Matrix& W, const LabeledSamples& data, const Matrix& manifold,
                                     LossKind loss, const Hyperparams& hp);

struct IterationInfo {
    Index iteration;  // 1-based
    double eta;
    const Matrix& weights;  // W_{t+1}
    const LabeledSamples& samples;
    const Matrix& manifold;
    LossKind loss;
};

using IterationCallback = std::function<void(const IterationInfo&)>;

struct TrainResult {
    Matrix weights;
    Index iterations = 0;
    bool stopped_early = false;
};

/**
 * @brief Mini-batch proximal gradient descent with scalar Adadelta rates.
 * @details Starting from W = 0, each iteration samples a batch uniformly with replacement,
 *          takes Q = W - eta grad_g(W) and sets W = partial_svt(Q, eta tau_S, theta).
 *          A single RNG seeded with `hp.seed` drives the batches, so runs are reproducible.
 */
[[nodiscard]] TrainResult train(const LabeledSamples& data, const Matrix& manifold, LossKind loss,
                                const Hyperparams& hp, const IterationCallback& on_iteration = {});

/// Dataset-level entry point; `graph` must be built over the rows of `labeled` followed by `unlabeled`.
[[nodiscard]] TrainResult train(const Dataset& labeled, const Dataset& unlabeled, const FeatureMap& map,
                                const GraphLaplacian& graph, LossKind loss, const Hyperparams& hp);

}  // namespace lsvv
