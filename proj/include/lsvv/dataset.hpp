#pragma once

#include "lsvv/core.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lsvv {

enum class TaskKind { MultiClass, MultiLabelClassification, MultiLabelRegression };

[[nodiscard]] std::string_view to_string(TaskKind task) noexcept;
[[nodiscard]] TaskKind parse_task_kind(std::string_view name);

/**
 * @brief Feature matrix, label matrix and label mask for a set of samples.
 * @details Rows are samples. A row whose mask is entirely false is an unlabeled sample.
 *          For classification tasks `label_values` holds the original label id of each
 *          column of `Y`; it is empty for regression.
 */
struct Dataset {
    Matrix X;
    Matrix Y;
    Mask mask;
    TaskKind task = TaskKind::MultiClass;
    std::vector<long> label_values;

    [[nodiscard]] Index size() const noexcept { return X.rows(); }
    [[nodiscard]] Index dim() const noexcept { return X.cols(); }
    [[nodiscard]] Index outputs() const noexcept { return Y.cols(); }
    [[nodiscard]] bool is_labeled(Index row) const { return mask.row(row).any(); }
    [[nodiscard]] std::vector<Index> labeled_rows() const;
    [[nodiscard]] Index labeled_count() const;

    /// Copy of the given rows, in the given order.
    [[nodiscard]] Dataset rows(std::span<const Index> indices) const;

    /// Throws if shapes disagree or a task invariant is violated on an observed row.
    void validate() const;

    friend bool operator==(const Dataset& a, const Dataset& b);
};

struct SplitSpec {
    double train_fraction = 0.70;
    double labeled_fraction_of_train = 0.10;
    double missing_label_fraction = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Sparse text formats, one sample per line, 1-based feature indices:
//   multi-class   `<label> <idx>:<val> ...`
//   multi-label   `<l1>,<l2>,... <idx>:<val> ...`   (label list may be empty)
//   regression    `<y1>,<y2>,...,<yK> <idx>:<val> ...`  (K identical on every line)
[[nodiscard]] Dataset parse_sparse_multiclass(std::istream& in);
[[nodiscard]] Dataset parse_sparse_multiclass(std::string_view text);
[[nodiscard]] Dataset parse_sparse_multilabel(std::istream& in);
[[nodiscard]] Dataset parse_sparse_multilabel(std::string_view text);
[[nodiscard]] Dataset parse_sparse_regression(std::istream& in);
[[nodiscard]] Dataset parse_sparse_regression(std::string_view text);

/// Dispatches to the parser matching `task`.
[[nodiscard]] Dataset parse_sparse(std::istream& in, TaskKind task);
[[nodiscard]] Dataset load_dataset(const std::string& path, TaskKind task);

/// Writes `data` in the sparse format of its task. Masks are not serialized.
void write_sparse(std::ostream& out, const Dataset& data);
[[nodiscard]] std::string to_sparse_text(const Dataset& data);

/// Re-orders label columns of `data` to follow `label_values`; labels unknown to
/// `label_values` raise, labels missing from `data` become all-zero columns.
[[nodiscard]] Dataset align_labels(const Dataset& data, const std::vector<long>& label_values);

/// Column min-max scaling to [0,1] followed by division by the largest row norm,
/// with all statistics taken from the fitting data.
struct FeatureScaler {
    Vector column_min;
    Vector column_range;  // 0 marks a constant column
    double row_scale = 1.0;

    [[nodiscard]] static FeatureScaler fit(const Matrix& X);
    [[nodiscard]] Matrix transform(const Matrix& X) const;
};

/// Column min-max scaling of regression targets.
struct LabelScaler {
    Vector column_min;
    Vector column_range;

    [[nodiscard]] static LabelScaler fit(const Matrix& Y, const Mask& mask);
    [[nodiscard]] Matrix transform(const Matrix& Y) const;
    [[nodiscard]] Matrix inverse(const Matrix& Y) const;
};

/// Normalizes `data` using its own statistics.
[[nodiscard]] Dataset normalize_features(const Dataset& data);
/// Normalizes both sets with statistics from `train` only.
[[nodiscard]] std::pair<Dataset, Dataset> normalize_features(const Dataset& train, const Dataset& test);

[[nodiscard]] Dataset scale_labels_unit(const Dataset& data);
[[nodiscard]] std::pair<Dataset, Dataset> scale_labels_unit(const Dataset& train, const Dataset& test);

struct Split {
    Dataset train;
    Dataset test;
    std::vector<Index> train_indices;  // rows of the source dataset
    std::vector<Index> test_indices;
};

/**
 * @brief Random train/test partition with labeled sub-sampling of the training part.
 * @details `round(train_fraction * n)` rows go to training. Within training exactly
 *          `ceil(labeled_fraction_of_train * n_train)` rows keep their labels. For multi-label
 *          tasks `missing_label_fraction` of the remaining observed entries is then masked.
 *          Deterministic for a given seed.
 */
[[nodiscard]] Split make_split(const Dataset& data, const SplitSpec& spec);

}  // namespace lsvv
