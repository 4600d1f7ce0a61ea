#pragma once

#include "lsvv/core.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace lsvv {

/// A nonincreasing spectrum and its suffix sums: tail_sums[t] = sum_{j > t} values_j (1-based j),
/// so tail_sums has values.size() + 1 entries and ends with 0.
struct SpectrumReport {
    std::vector<double> values;
    std::vector<double> tail_sums;
    std::vector<double> squared_tail_sums;
    std::optional<Index> suggested_theta;
};

/// Suffix sums of `values` (or of their squares).
[[nodiscard]] std::vector<double> tail_sums(std::span<const double> values, bool squared = false);

/// Eigenvalues of a normalized Gram matrix. Throws on asymmetric input or eigenvalues below -1e-8;
/// small negative eigenvalues are clamped to 0.
[[nodiscard]] SpectrumReport eigen_tail_sums(const Matrix& gram);

/// Singular values of a weight matrix with plain and squared tail sums.
[[nodiscard]] SpectrumReport singular_tail_sums(const Matrix& W);

/// Threshold balancing theta r / (4 L^2) against the tail sum of `values`: the argmin over
/// theta in [0, len] of the absolute difference, smallest theta on ties.
[[nodiscard]] Index suggest_theta(std::span<const double> values, double r, double lipschitz);

/// CSV with header `theta,value,tail_sum,squared_tail_sum`; row t carries values[t-1] (empty for t = 0).
void write_spectrum_csv(std::ostream& out, const SpectrumReport& report);

}  // namespace lsvv
