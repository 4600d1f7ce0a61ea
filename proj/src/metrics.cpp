#include "lsvv/metrics.hpp"

#include <fmt/format.h>

#include <cmath>

namespace lsvv {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, std::string_view what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw dimension_error(fmt::format("{}: {}x{} vs {}x{}", what, a.rows(), a.cols(), b.rows(), b.cols()));
    }
}

Index argmax(const auto& row) {
    Index best = 0;
    for (Index k = 1; k < row.size(); ++k) {
        if (row(k) > row(best)) {
            best = k;
        }
    }
    return best;
}

}  // namespace

Vector predict(const Matrix& W, const Vector& phi_x, TaskKind task) {
    if (W.rows() != phi_x.size()) {
        throw dimension_error("predict: feature length does not match W");
    }
    const Vector scores = W.transpose() * phi_x;
    switch (task) {
        case TaskKind::MultiClass: {
            Vector out = Vector::Zero(scores.size());
            if (scores.size() > 0) {
                out(argmax(scores)) = 1.0;
            }
            return out;
        }
        case TaskKind::MultiLabelClassification:
            return (scores.array() > 0.5).cast<double>().matrix();
        case TaskKind::MultiLabelRegression:
            return scores;
    }
    return scores;
}

Matrix predict(const Matrix& W, const Matrix& phi_rows, TaskKind task) {
    Matrix out(phi_rows.rows(), W.cols());
    for (Index i = 0; i < phi_rows.rows(); ++i) {
        out.row(i) = predict(W, Vector(phi_rows.row(i).transpose()), task).transpose();
    }
    return out;
}

double mc_error(const Matrix& preds, const Matrix& labels) {
    require_same_shape(preds, labels, "mc_error");
    if (preds.rows() == 0) {
        return 0.0;
    }
    Index wrong = 0;
    for (Index i = 0; i < preds.rows(); ++i) {
        wrong += argmax(preds.row(i)) != argmax(labels.row(i)) ? 1 : 0;
    }
    return static_cast<double>(wrong) / static_cast<double>(preds.rows());
}

double hamming_loss(const Matrix& preds, const Matrix& labels) {
    require_same_shape(preds, labels, "hamming_loss");
    if (preds.size() == 0) {
        return 0.0;
    }
    const auto disagree = ((preds.array() != 0.0) != (labels.array() != 0.0)).count();
    return static_cast<double>(disagree) / static_cast<double>(preds.size());
}

double rmse(const Matrix& preds, const Matrix& labels) {
    require_same_shape(preds, labels, "rmse");
    if (preds.size() == 0) {
        return 0.0;
    }
    return (preds - labels).rowwise().norm().sum() / static_cast<double>(preds.size());
}

std::string_view metric_name(TaskKind task) noexcept {
    switch (task) {
        case TaskKind::MultiClass: return "error";
        case TaskKind::MultiLabelClassification: return "hamming";
        case TaskKind::MultiLabelRegression: return "rmse";
    }
    return "error";
}

double task_metric(TaskKind task, const Matrix& preds, const Matrix& labels) {
    switch (task) {
        case TaskKind::MultiClass: return mc_error(preds, labels);
        case TaskKind::MultiLabelClassification: return hamming_loss(preds, labels);
        case TaskKind::MultiLabelRegression: return rmse(preds, labels);
    }
    return mc_error(preds, labels);
}

double task_metric(TaskKind task, const Matrix& preds, const Matrix& labels, const Mask& mask) {
    require_same_shape(preds, labels, "task_metric");
    if (mask.rows() != labels.rows() || mask.cols() != labels.cols()) {
        throw dimension_error("task_metric: mask shape mismatch");
    }
    if (task == TaskKind::MultiClass || mask.all()) {
        return task_metric(task, preds, labels);
    }
    if (task == TaskKind::MultiLabelClassification) {
        const auto observed = mask.count();
        if (observed == 0) {
            return 0.0;
        }
        const auto disagree = (mask && ((preds.array() != 0.0) != (labels.array() != 0.0))).count();
        return static_cast<double>(disagree) / static_cast<double>(observed);
    }
    const Matrix residual = (preds - labels).cwiseProduct(mask.cast<double>().matrix());
    return residual.rowwise().norm().sum() / static_cast<double>(std::max<Index>(preds.size(), 1));
}

EvalResult aggregate(std::span<const double> per_run, std::string metric_name) {
    if (per_run.empty()) {
        throw error("aggregate: no runs");
    }
    EvalResult result;
    result.metric_name = std::move(metric_name);
    result.per_run.assign(per_run.begin(), per_run.end());
    double sum = 0.0;
    for (const double v : per_run) {
        sum += v;
    }
    result.mean = sum / static_cast<double>(per_run.size());
    double sq = 0.0;
    for (const double v : per_run) {
        sq += (v - result.mean) * (v - result.mean);
    }
    result.std = std::sqrt(sq / static_cast<double>(per_run.size()));
    return result;
}

}  // namespace lsvv
