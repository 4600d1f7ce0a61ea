#include "lsvv/spectral_prox.hpp"

#include <fmt/format.h>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace lsvv {

std::string_view to_string(SvtMode mode) noexcept {
    return mode == SvtMode::TailShrink ? "tail" : "head";
}

SvtMode parse_svt_mode(std::string_view name) {
    if (name == "tail" || name == "TailShrink") {
        return SvtMode::TailShrink;
    }
    if (name == "head" || name == "HeadShrinkPaperLiteral") {
        return SvtMode::HeadShrinkPaperLiteral;
    }
    throw parameter_error(fmt::format("unknown SVT mode '{}'", name));
}

Vector singular_values(const Matrix& A) {
    if (A.size() == 0) {
        return Vector{};
    }
    return Eigen::BDCSVD<Matrix>(A).singularValues();
}

double tail_sum(const Matrix& A, Index theta) {
    const Vector sv = singular_values(A);
    return theta >= sv.size() ? 0.0 : sv.tail(sv.size() - theta).sum();
}

Matrix partial_svt(const Matrix& Q, double tau, Index theta, SvtMode mode) {
    const Index rank_cap = std::min(Q.rows(), Q.cols());
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw parameter_error(fmt::format("threshold tau must be finite and >= 0, got {}", tau));
    }
    if (theta < 0 || theta > rank_cap) {
        throw parameter_error(fmt::format("theta = {} outside [0, {}]", theta, rank_cap));
    }
    if (!Q.allFinite()) {
        throw numerical_error("partial_svt: input has non-finite entries");
    }
    const bool tail = mode == SvtMode::TailShrink;
    if (tau == 0.0 || (tail && theta == rank_cap) || (!tail && theta == 0)) {
        return Q;
    }

    Eigen::BDCSVD<Matrix> svd(Q, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vector sv = svd.singularValues();
    const Index first = tail ? theta : 0;
    const Index last = tail ? rank_cap : theta;
    if (tail && sv.tail(rank_cap - theta).maxCoeff() <= singular_value_floor) {
        return Q;
    }
    for (Index j = first; j < last; ++j) {
        sv(j) = std::max(sv(j) - tau, 0.0);
    }
    return svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
}

double svt_objective(const Matrix& W, const Matrix& Q, double tau, Index theta) {
    if (W.rows() != Q.rows() || W.cols() != Q.cols()) {
        throw dimension_error("svt_objective: W and Q differ in shape");
    }
    return 0.5 * (W - Q).squaredNorm() + tau * tail_sum(W, theta);
}

}  // namespace lsvv
