#include "lsvv/trainer.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <random>

namespace lsvv {

void Hyperparams::validate(Index feature_dim, Index outputs) const {
    if (tau_A < 0.0 || tau_I < 0.0 || tau_S < 0.0) {
        throw parameter_error("regularization parameters must be non-negative");
    }
    if (theta < 0 || theta > std::min(feature_dim, outputs)) {
        throw parameter_error(fmt::format("theta = {} outside [0, {}]", theta, std::min(feature_dim, outputs)));
    }
    if (batch_size < 1 || max_iters < 0) {
        throw parameter_error("batch size must be >= 1 and the iteration budget >= 0");
    }
    if (!(xi > 0.0 && xi < 1.0) || !(eps > 0.0)) {
        throw parameter_error(fmt::format("Adadelta needs 0 < xi < 1 and eps > 0, got xi = {}, eps = {}", xi, eps));
    }
    if (early_stop && (eval_every < 1 || patience < 1)) {
        throw parameter_error("early stopping needs eval_every >= 1 and patience >= 1");
    }
}

AdadeltaStep adadelta_step(const AdadeltaState& state, double grad_norm_sq, double xi, double eps) {
    AdadeltaStep step{};
    step.state.grad_accum = xi * state.grad_accum + (1.0 - xi) * grad_norm_sq;
    step.eta = std::sqrt((state.update_accum + eps) / (step.state.grad_accum + eps));
    step.state.update_accum = xi * state.update_accum + (1.0 - xi) * step.eta * step.eta * grad_norm_sq;
    return step;
}

LabeledSamples labeled_samples(const Dataset& data, const Matrix& phi_rows) {
    if (phi_rows.rows() != data.size()) {
        throw dimension_error("labeled_samples: feature rows and dataset rows disagree");
    }
    const auto rows = data.labeled_rows();
    LabeledSamples out;
    out.phi.resize(static_cast<Index>(rows.size()), phi_rows.cols());
    out.y.resize(static_cast<Index>(rows.size()), data.outputs());
    out.mask.resize(static_cast<Index>(rows.size()), data.outputs());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto i = static_cast<Index>(r);
        out.phi.row(i) = phi_rows.row(rows[r]);
        out.y.row(i) = data.Y.row(rows[r]);
        out.mask.row(i) = data.mask.row(rows[r]);
    }
    return out;
}

LossKind loss_for_task(TaskKind task) noexcept {
    return task == TaskKind::MultiClass ? LossKind::MultiClassHinge : LossKind::MultiLabelSquared;
}

Matrix grad_g(const Matrix& W, const LabeledSamples& data, std::span<const Index> batch, LossKind loss, double tau_A,
              double tau_I, const Matrix& manifold) {
    if (batch.empty()) {
        throw error("grad_g: empty batch");
    }
    if (W.rows() != data.phi.cols() || W.cols() != data.y.cols()) {
        throw dimension_error(fmt::format("grad_g: W is {}x{}, data needs {}x{}", W.rows(), W.cols(), data.phi.cols(),
                                          data.y.cols()));
    }
    const auto m = static_cast<Index>(batch.size());
    Matrix phi_batch(m, W.rows());
    for (Index b = 0; b < m; ++b) {
        phi_batch.row(b) = data.phi.row(batch[static_cast<std::size_t>(b)]);
    }
    const Matrix scores = phi_batch * W;
    Matrix coeff(m, W.cols());
    for (Index b = 0; b < m; ++b) {
        const Index i = batch[static_cast<std::size_t>(b)];
        coeff.row(b) = loss_output_gradient(loss, scores.row(b).transpose(), data.y.row(i).transpose(),
                                            data.mask.row(i).transpose())
                           .transpose();
    }
    Matrix grad = (phi_batch.transpose() * coeff) / static_cast<double>(m);
    if (tau_A != 0.0) {
        grad += (2.0 * tau_A) * W;
    }
    if (tau_I != 0.0) {
        if (manifold.rows() != W.rows() || manifold.cols() != W.rows()) {
            throw dimension_error("grad_g: manifold matrix does not match the feature dimension");
        }
        for (Index k = 0; k < W.cols(); ++k) {
            grad.col(k).noalias() += (2.0 * tau_I) * (manifold * W.col(k));
        }
    }
    return grad;
}

double objective_value(const Matrix& W, const LabeledSamples& data, const Matrix& manifold, LossKind loss,
                       const Hyperparams& hp) {
    if (W.rows() != data.phi.cols() || W.cols() != data.y.cols()) {
        throw dimension_error("objective_value: W does not match the data");
    }
    double empirical = 0.0;
    if (data.size() > 0) {
        const Matrix scores = data.phi * W;
        for (Index i = 0; i < data.size(); ++i) {
            empirical += sample_loss(loss, scores.row(i).transpose(), data.y.row(i).transpose(),
                                     data.mask.row(i).transpose());
        }
        empirical /= static_cast<double>(data.size());
    }
    double value = empirical + hp.tau_A * W.squaredNorm();
    if (hp.tau_I != 0.0) {
        double smooth = 0.0;
        for (Index k = 0; k < W.cols(); ++k) {
            smooth += W.col(k).dot(manifold * W.col(k));
        }
        value += hp.tau_I * smooth;
    }
    if (hp.tau_S != 0.0) {
        value += hp.tau_S * tail_sum(W, hp.theta);
    }
    return value;
}

TrainResult train(const LabeledSamples& data, const Matrix& manifold, LossKind loss, const Hyperparams& hp,
                  const IterationCallback& on_iteration) {
    const Index features = data.phi.cols();
    const Index outputs = data.y.cols();
    hp.validate(features, outputs);
    if (data.size() == 0) {
        throw error("train: no labeled samples");
    }
    if (hp.tau_I != 0.0 && (manifold.rows() != features || manifold.cols() != features)) {
        throw dimension_error("train: manifold matrix does not match the feature dimension");
    }

    TrainResult result;
    result.weights = Matrix::Zero(features, outputs);
    Matrix& W = result.weights;
    AdadeltaState state;
    std::mt19937_64 rng(hp.seed);
    std::uniform_int_distribution<Index> pick(0, data.size() - 1);
    std::vector<Index> batch(static_cast<std::size_t>(std::min(hp.batch_size, data.size())));

    double best = std::numeric_limits<double>::infinity();
    Index stalled = 0;
    for (Index t = 1; t <= hp.max_iters; ++t) {
        for (auto& i : batch) {
            i = pick(rng);
        }
        const Matrix grad = grad_g(W, data, batch, loss, hp.tau_A, hp.tau_I, manifold);
        const double grad_norm_sq = grad.squaredNorm();
        if (!std::isfinite(grad_norm_sq)) {
            throw numerical_error(fmt::format("non-finite gradient at iteration {}", t));
        }
        const auto step = adadelta_step(state, grad_norm_sq, hp.xi, hp.eps);
        state = step.state;
        const Matrix Q = W - step.eta * grad;
        W = partial_svt(Q, step.eta * hp.tau_S, hp.theta, hp.svt_mode);
        if (!W.allFinite()) {
            throw numerical_error(fmt::format("non-finite weights at iteration {}", t));
        }
        result.iterations = t;
        if (on_iteration) {
            on_iteration(IterationInfo{t, step.eta, W, data, manifold, loss});
        }
        if (hp.early_stop && t % hp.eval_every == 0) {
            const double value = objective_value(W, data, manifold, loss, hp);
            if (std::isfinite(best) && best - value < hp.tolerance * std::abs(best)) {
                ++stalled;
            } else {
                stalled = 0;
            }
            best = std::min(best, value);
            if (stalled >= hp.patience) {
                result.stopped_early = true;
                break;
            }
        }
    }
    return result;
}

TrainResult train(const Dataset& labeled, const Dataset& unlabeled, const FeatureMap& map, const GraphLaplacian& graph,
                  LossKind loss, const Hyperparams& hp) {
    if (graph.similarity.rows() != labeled.size() + unlabeled.size()) {
        throw dimension_error(fmt::format("graph has {} vertices but {} labeled + {} unlabeled samples were given",
                                          graph.similarity.rows(), labeled.size(), unlabeled.size()));
    }
    const auto samples = labeled_samples(labeled, map.apply(labeled.X));
    return train(samples, graph.manifold, loss, hp);
}

}  // namespace lsvv
