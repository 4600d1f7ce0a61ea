#include "lsvv/losses.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace lsvv {

std::string_view to_string(LossKind kind) noexcept {
    return kind == LossKind::MultiClassHinge ? "hinge" : "squared";
}

Index one_hot_class(const Vector& y) {
    Index hot = -1;
    for (Index k = 0; k < y.size(); ++k) {
        if (y(k) == 1.0) {
            if (hot >= 0) {
                throw error("label vector has more than one active class");
            }
            hot = k;
        } else if (y(k) != 0.0) {
            throw error(fmt::format("label vector is not one-hot (entry {} = {})", k, y(k)));
        }
    }
    if (hot < 0) {
        throw error("label vector has no active class");
    }
    return hot;
}

Index best_competitor(const Vector& scores, Index true_class) {
    Index best = -1;
    for (Index k = 0; k < scores.size(); ++k) {
        if (k != true_class && (best < 0 || scores(k) > scores(best))) {
            best = k;
        }
    }
    if (best < 0) {
        throw dimension_error("multi-class margin needs at least two classes");
    }
    return best;
}

double mc_margin(const Vector& scores, const Vector& y) {
    if (scores.size() != y.size()) {
        throw dimension_error("scores and label differ in length");
    }
    const Index truth = one_hot_class(y);
    return scores(truth) - scores(best_competitor(scores, truth));
}

double mc_hinge_loss(const Vector& scores, const Vector& y) {
    return std::max(0.0, 1.0 - mc_margin(scores, y));
}

Matrix mc_hinge_subgrad(const Vector& phi_x, const Vector& scores, const Vector& y) {
    const Vector c = loss_output_gradient(LossKind::MultiClassHinge, scores, y, MaskRow::Constant(y.size(), true));
    return phi_x * c.transpose();
}

double ml_sq_loss(const Vector& pred, const Vector& y, const MaskRow& mask) {
    if (pred.size() != y.size() || mask.size() != y.size()) {
        throw dimension_error("prediction, label and mask differ in length");
    }
    return (mask.cast<double>() * (pred - y).array().square()).sum();
}

Matrix ml_sq_grad(const Vector& phi_x, const Vector& pred, const Vector& y, const MaskRow& mask) {
    return phi_x * loss_output_gradient(LossKind::MultiLabelSquared, pred, y, mask).transpose();
}

double sample_loss(LossKind kind, const Vector& scores, const Vector& y, const MaskRow& mask) {
    return kind == LossKind::MultiClassHinge ? mc_hinge_loss(scores, y) : ml_sq_loss(scores, y, mask);
}

Vector loss_output_gradient(LossKind kind, const Vector& scores, const Vector& y, const MaskRow& mask) {
    if (scores.size() != y.size() || mask.size() != y.size()) {
        throw dimension_error("scores, label and mask differ in length");
    }
    if (kind == LossKind::MultiLabelSquared) {
        return 2.0 * (mask.cast<double>() * (scores - y).array()).matrix();
    }
    const Index truth = one_hot_class(y);
    const Index rival = best_competitor(scores, truth);
    Vector c = Vector::Zero(y.size());
    // margin exactly 1 sits on the kink; the zero subgradient is used there
    if (scores(truth) - scores(rival) < 1.0) {
        c(rival) = 1.0;
        c(truth) = -1.0;
    }
    return c;
}

}  // namespace lsvv
