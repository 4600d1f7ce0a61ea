#include "lsvv/complexity.hpp"

#include "lsvv/spectral_prox.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace lsvv {

std::vector<double> tail_sums(std::span<const double> values, bool squared) {
    std::vector<double> sums(values.size() + 1, 0.0);
    for (std::size_t t = values.size(); t-- > 0;) {
        const double v = squared ? values[t] * values[t] : values[t];
        sums[t] = sums[t + 1] + v;
    }
    return sums;
}

namespace {

SpectrumReport make_report(std::vector<double> values) {
    SpectrumReport report;
    report.values = std::move(values);
    report.tail_sums = tail_sums(report.values);
    report.squared_tail_sums = tail_sums(report.values, true);
    return report;
}

}  // namespace

SpectrumReport eigen_tail_sums(const Matrix& gram) {
    if (gram.rows() != gram.cols()) {
        throw dimension_error("Gram matrix must be square");
    }
    const double scale = gram.size() > 0 ? std::max(1.0, gram.cwiseAbs().maxCoeff()) : 1.0;
    if (gram.size() > 0 && (gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw error("Gram matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
    const Vector ascending = solver.eigenvalues();
    std::vector<double> values(static_cast<std::size_t>(ascending.size()));
    for (Index i = 0; i < ascending.size(); ++i) {
        const double lambda = ascending(ascending.size() - 1 - i);
        if (lambda < -1e-8) {
            throw error(fmt::format("Gram matrix is not positive semi-definite (eigenvalue {})", lambda));
        }
        values[static_cast<std::size_t>(i)] = std::max(lambda, 0.0);
    }
    return make_report(std::move(values));
}

SpectrumReport singular_tail_sums(const Matrix& W) {
    const Vector sv = singular_values(W);
    return make_report(std::vector<double>(sv.data(), sv.data() + sv.size()));
}

Index suggest_theta(std::span<const double> values, double r, double lipschitz) {
    if (!(r > 0.0) || !(lipschitz > 0.0)) {
        throw parameter_error(fmt::format("suggest_theta needs r > 0 and L > 0, got r = {}, L = {}", r, lipschitz));
    }
    const auto sums = tail_sums(values);
    const double slope = r / (4.0 * lipschitz * lipschitz);
    Index best = 0;
    double best_gap = std::abs(sums[0]);
    for (std::size_t t = 1; t < sums.size(); ++t) {
        const double gap = std::abs(static_cast<double>(t) * slope - sums[t]);
        if (gap < best_gap) {
            best_gap = gap;
            best = static_cast<Index>(t);
        }
    }
    return best;
}

void write_spectrum_csv(std::ostream& out, const SpectrumReport& report) {
    out << "theta,value,tail_sum,squared_tail_sum\n";
    for (std::size_t t = 0; t < report.tail_sums.size(); ++t) {
        const std::string value = t == 0 ? std::string{} : fmt::format("{}", report.values[t - 1]);
        out << fmt::format("{},{},{},{}\n", t, value, report.tail_sums[t], report.squared_tail_sums[t]);
    }
}

}  // namespace lsvv
