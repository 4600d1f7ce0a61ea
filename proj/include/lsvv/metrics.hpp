#pragma once

#include "lsvv/core.hpp"
#include "lsvv/dataset.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lsvv {

struct EvalResult {
    std::string metric_name;
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
    std::vector<double> per_run;
};

/// Prediction for one mapped sample: one-hot argmax (MC), indicator of score > 0.5 (MLC) or raw scores (MLR).
[[nodiscard]] Vector predict(const Matrix& W, const Vector& phi_x, TaskKind task);
/// Row-wise version for mapped samples stored one per row.
[[nodiscard]] Matrix predict(const Matrix& W, const Matrix& phi_rows, TaskKind task);

/// Fraction of rows whose argmax differs.
[[nodiscard]] double mc_error(const Matrix& preds, const Matrix& labels);
/// Mean XOR over all entries of two binary matrices.
[[nodiscard]] double hamming_loss(const Matrix& preds, const Matrix& labels);
/**
 * Sum of per-sample Euclidean residual norms divided by n K. This is not the classical
 * root-mean-square error; the n K normalization is kept so values compare with published tables.
 */
[[nodiscard]] double rmse(const Matrix& preds, const Matrix& labels);

[[nodiscard]] std::string_view metric_name(TaskKind task) noexcept;
/// The evaluation metric of `task` on fully observed labels.
[[nodiscard]] double task_metric(TaskKind task, const Matrix& preds, const Matrix& labels);
/// The same metric restricted to observed label entries (used on validation folds).
[[nodiscard]] double task_metric(TaskKind task, const Matrix& preds, const Matrix& labels, const Mask& mask);

/// Mean and population standard deviation. Throws on an empty list.
[[nodiscard]] EvalResult aggregate(std::span<const double> per_run, std::string metric_name = "");

}  // namespace lsvv
