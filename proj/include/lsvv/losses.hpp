#pragma once

#include "lsvv/core.hpp"

#include <string_view>

namespace lsvv {

enum class LossKind { MultiClassHinge, MultiLabelSquared };

[[nodiscard]] std::string_view to_string(LossKind kind) noexcept;

/// Index of the single 1 in a one-hot vector; throws otherwise.
[[nodiscard]] Index one_hot_class(const Vector& y);

/// Best competing class (highest score other than the true class, lowest index on ties).
[[nodiscard]] Index best_competitor(const Vector& scores, Index true_class);

/// True-class score minus the best competitor score.
[[nodiscard]] double mc_margin(const Vector& scores, const Vector& y);

/// max(0, 1 - margin).
[[nodiscard]] double mc_hinge_loss(const Vector& scores, const Vector& y);

/// Zero when margin >= 1, otherwise phi (e_competitor - e_true)^T.
[[nodiscard]] Matrix mc_hinge_subgrad(const Vector& phi_x, const Vector& scores, const Vector& y);

/// Sum over observed entries of (pred_k - y_k)^2.
[[nodiscard]] double ml_sq_loss(const Vector& pred, const Vector& y, const MaskRow& mask);

/// 2 phi (masked residual)^T.
[[nodiscard]] Matrix ml_sq_grad(const Vector& phi_x, const Vector& pred, const Vector& y, const MaskRow& mask);

/// Per-sample loss for either kind. The mask is ignored by the hinge loss.
[[nodiscard]] double sample_loss(LossKind kind, const Vector& scores, const Vector& y, const MaskRow& mask);

/**
 * @brief Output-side factor of the per-sample (sub)gradient.
 * @details Both losses have gradients of the form phi(x) c^T with a length-K vector c;
 *          this returns c so batches can be accumulated as Phi_batch^T C.
 */
[[nodiscard]] Vector loss_output_gradient(LossKind kind, const Vector& scores, const Vector& y, const MaskRow& mask);

}  // namespace lsvv
