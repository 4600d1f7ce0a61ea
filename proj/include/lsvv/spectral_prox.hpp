#pragma once

#include "lsvv/core.hpp"

#include <string_view>

namespace lsvv {

/**
 * Which singular values the partial thresholding shrinks.
 *
 * TailShrink keeps the leading `theta` values and soft-thresholds the rest; it is the exact
 * minimizer of 1/2 |W - Q|_F^2 + tau * sum_{j > theta} sigma_j(W).
 * HeadShrinkPaperLiteral soft-thresholds the leading `theta` values and keeps the rest.
 */
enum class SvtMode { TailShrink, HeadShrinkPaperLiteral };

[[nodiscard]] std::string_view to_string(SvtMode mode) noexcept;
[[nodiscard]] SvtMode parse_svt_mode(std::string_view name);

/// Singular values below this are treated as zero when deciding whether a tail is empty.
inline constexpr double singular_value_floor = 1e-12;

/// Singular values in nonincreasing order.
[[nodiscard]] Vector singular_values(const Matrix& A);

/// sum_{j > theta} sigma_j(A) (1-based j).
[[nodiscard]] double tail_sum(const Matrix& A, Index theta);

/**
 * @brief Partial singular value thresholding U Sigma' V^T of `Q`.
 * @details Returns `Q` itself, bit for bit, whenever the step cannot change it: tau == 0,
 *          an empty shrink range, or (TailShrink) a tail that is numerically zero.
 */
[[nodiscard]] Matrix partial_svt(const Matrix& Q, double tau, Index theta, SvtMode mode = SvtMode::TailShrink);

/// 1/2 |W - Q|_F^2 + tau * sum_{j > theta} sigma_j(W).
[[nodiscard]] double svt_objective(const Matrix& W, const Matrix& Q, double tau, Index theta);

/**
 * @brief Brute-force minimizer of svt_objective for small matrices (min(S, K) <= 6).
 * @details Searches over matrices sharing the singular vectors of `Q`. Since the tail sum equals
 *          the minimum over index sets T with |T| = theta of sum_{j not in T} w_j, every such T is
 *          enumerated and each singular value is chosen independently from a uniform grid of
 *          spacing `grid_resolution` plus the candidates {sigma_j, max(sigma_j - tau, 0)}. The
 *          best candidate under the exact objective is returned. Independent of partial_svt.
 */
[[nodiscard]] Matrix prox_oracle(const Matrix& Q, double tau, Index theta, double grid_resolution);

}  // namespace lsvv
