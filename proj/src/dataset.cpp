#include "lsvv/dataset.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace lsvv {

std::string_view to_string(TaskKind task) noexcept {
    switch (task) {
        case TaskKind::MultiClass: return "multiclass";
        case TaskKind::MultiLabelClassification: return "multilabel";
        case TaskKind::MultiLabelRegression: return "regression";
    }
    return "unknown";
}

TaskKind parse_task_kind(std::string_view name) {
    if (name == "multiclass" || name == "MC") {
        return TaskKind::MultiClass;
    }
    if (name == "multilabel" || name == "MLC") {
        return TaskKind::MultiLabelClassification;
    }
    if (name == "regression" || name == "MLR") {
        return TaskKind::MultiLabelRegression;
    }
    throw parameter_error(fmt::format("unknown task kind '{}'", name));
}

std::vector<Index> Dataset::labeled_rows() const {
    std::vector<Index> out;
    for (Index i = 0; i < size(); ++i) {
        if (is_labeled(i)) {
            out.push_back(i);
        }
    }
    return out;
}

Index Dataset::labeled_count() const {
    return static_cast<Index>(labeled_rows().size());
}

Dataset Dataset::rows(std::span<const Index> indices) const {
    Dataset out;
    out.task = task;
    out.label_values = label_values;
    const auto n = static_cast<Index>(indices.size());
    out.X.resize(n, dim());
    out.Y.resize(n, outputs());
    out.mask.resize(n, outputs());
    for (Index r = 0; r < n; ++r) {
        const Index src = indices[static_cast<std::size_t>(r)];
        if (src < 0 || src >= size()) {
            throw dimension_error(fmt::format("row index {} out of range [0, {})", src, size()));
        }
        out.X.row(r) = X.row(src);
        out.Y.row(r) = Y.row(src);
        out.mask.row(r) = mask.row(src);
    }
    return out;
}

void Dataset::validate() const {
    if (Y.rows() != X.rows() || mask.rows() != X.rows() || mask.cols() != Y.cols()) {
        throw dimension_error("dataset: X, Y and mask disagree in shape");
    }
    if (!X.allFinite() || !Y.allFinite()) {
        throw numerical_error("dataset: non-finite feature or label value");
    }
    for (Index i = 0; i < size(); ++i) {
        if (task == TaskKind::MultiClass && mask.row(i).all()) {
            const auto row = Y.row(i);
            const Index ones = (row.array() == 1.0).count();
            const Index zeros = (row.array() == 0.0).count();
            if (ones != 1 || zeros != outputs() - 1) {
                throw error(fmt::format("dataset: row {} is not one-hot", i));
            }
        }
        if (task == TaskKind::MultiLabelClassification) {
            for (Index k = 0; k < outputs(); ++k) {
                if (Y(i, k) != 0.0 && Y(i, k) != 1.0) {
                    throw error(fmt::format("dataset: row {} has a non-binary label", i));
                }
            }
        }
    }
}

bool operator==(const Dataset& a, const Dataset& b) {
    return a.task == b.task && a.label_values == b.label_values && a.X.rows() == b.X.rows() &&
           a.X.cols() == b.X.cols() && a.Y.cols() == b.Y.cols() && a.X == b.X && a.Y == b.Y &&
           (a.mask == b.mask).all();
}

void SplitSpec::validate() const {
    for (const double f : {train_fraction, labeled_fraction_of_train, missing_label_fraction}) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw parameter_error(fmt::format("split fraction {} outside [0, 1]", f));
        }
    }
}

namespace {

struct RawSample {
    std::vector<std::pair<Index, double>> features;
    std::vector<double> labels;
};

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) {
            ++pos;
        }
        const std::size_t start = pos;
        while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) {
            ++pos;
        }
        if (pos > start) {
            tokens.push_back(line.substr(start, pos - start));
        }
    }
    return tokens;
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc{} && ptr == last && !token.empty();
}

std::pair<Index, double> parse_feature(std::string_view token, std::size_t line_no) {
    const auto colon = token.find(':');
    if (colon == std::string_view::npos) {
        throw parse_error(fmt::format("expected <index>:<value>, got '{}'", token), line_no);
    }
    long index = 0;
    double value = 0.0;
    if (!parse_number(token.substr(0, colon), index) || index < 1) {
        throw parse_error(fmt::format("invalid feature index in '{}'", token), line_no);
    }
    if (!parse_number(token.substr(colon + 1), value) || !std::isfinite(value)) {
        throw parse_error(fmt::format("invalid feature value in '{}'", token), line_no);
    }
    return {static_cast<Index>(index - 1), value};
}

enum class LabelSyntax { Single, IntegerList, RealList };

std::vector<double> parse_label_token(std::string_view token, LabelSyntax syntax, std::size_t line_no) {
    std::vector<double> labels;
    if (syntax == LabelSyntax::Single) {
        long label = 0;
        if (!parse_number(token, label)) {
            throw parse_error(fmt::format("label '{}' is not an integer", token), line_no);
        }
        labels.push_back(static_cast<double>(label));
        return labels;
    }
    std::size_t start = 0;
    while (start <= token.size()) {
        const auto comma = token.find(',', start);
        const auto piece = token.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        if (syntax == LabelSyntax::IntegerList) {
            long label = 0;
            if (!parse_number(piece, label)) {
                throw parse_error(fmt::format("label '{}' is not an integer", piece), line_no);
            }
            labels.push_back(static_cast<double>(label));
        } else {
            double value = 0.0;
            if (!parse_number(piece, value) || !std::isfinite(value)) {
                throw parse_error(fmt::format("target '{}' is not a real number", piece), line_no);
            }
            labels.push_back(value);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return labels;
}

std::vector<RawSample> read_samples(std::istream& in, LabelSyntax syntax) {
    std::vector<RawSample> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto tokens = split_whitespace(line);
        if (tokens.empty() || tokens.front().front() == '#') {
            continue;
        }
        RawSample sample;
        std::size_t first_feature = 0;
        const bool leading_space = std::isspace(static_cast<unsigned char>(line.front())) != 0;
        const bool first_is_feature = tokens.front().find(':') != std::string_view::npos;
        if (syntax == LabelSyntax::Single) {
            if (first_is_feature) {
                throw parse_error("missing class label", line_no);
            }
            sample.labels = parse_label_token(tokens.front(), syntax, line_no);
            first_feature = 1;
        } else if (!leading_space && !first_is_feature) {
            sample.labels = parse_label_token(tokens.front(), syntax, line_no);
            first_feature = 1;
        }
        for (std::size_t t = first_feature; t < tokens.size(); ++t) {
            sample.features.push_back(parse_feature(tokens[t], line_no));
        }
        std::sort(sample.features.begin(), sample.features.end());
        const auto dup = std::adjacent_find(sample.features.begin(), sample.features.end(),
                                            [](const auto& a, const auto& b) { return a.first == b.first; });
        if (dup != sample.features.end()) {
            throw parse_error(fmt::format("duplicate feature index {}", dup->first + 1), line_no);
        }
        samples.push_back(std::move(sample));
    }
    if (samples.empty()) {
        throw parse_error("no samples", 0);
    }
    return samples;
}

Matrix assemble_features(const std::vector<RawSample>& samples) {
    Index dim = 0;
    for (const auto& s : samples) {
        if (!s.features.empty()) {
            dim = std::max(dim, s.features.back().first + 1);
        }
    }
    Matrix X = Matrix::Zero(static_cast<Index>(samples.size()), dim);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (const auto& [j, v] : samples[i].features) {
            X(static_cast<Index>(i), j) = v;
        }
    }
    return X;
}

Dataset assemble_indicator(const std::vector<RawSample>& samples, TaskKind task) {
    std::set<long> distinct;
    for (const auto& s : samples) {
        for (const double l : s.labels) {
            distinct.insert(static_cast<long>(l));
        }
    }
    Dataset out;
    out.task = task;
    out.label_values.assign(distinct.begin(), distinct.end());
    std::map<long, Index> column;
    for (std::size_t k = 0; k < out.label_values.size(); ++k) {
        column[out.label_values[k]] = static_cast<Index>(k);
    }
    out.X = assemble_features(samples);
    const auto n = static_cast<Index>(samples.size());
    const auto K = static_cast<Index>(out.label_values.size());
    out.Y = Matrix::Zero(n, K);
    out.mask = Mask::Constant(n, K, true);
    for (Index i = 0; i < n; ++i) {
        for (const double l : samples[static_cast<std::size_t>(i)].labels) {
            out.Y(i, column.at(static_cast<long>(l))) = 1.0;
        }
    }
    return out;
}

}  // namespace

Dataset parse_sparse_multiclass(std::istream& in) {
    return assemble_indicator(read_samples(in, LabelSyntax::Single), TaskKind::MultiClass);
}

Dataset parse_sparse_multiclass(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_sparse_multiclass(in);
}

Dataset parse_sparse_multilabel(std::istream& in) {
    return assemble_indicator(read_samples(in, LabelSyntax::IntegerList), TaskKind::MultiLabelClassification);
}

Dataset parse_sparse_multilabel(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_sparse_multilabel(in);
}

Dataset parse_sparse_regression(std::istream& in) {
    const auto samples = read_samples(in, LabelSyntax::RealList);
    const std::size_t K = samples.front().labels.size();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].labels.size() != K || K == 0) {
            throw parse_error(fmt::format("expected {} regression targets, got {}", K, samples[i].labels.size()), 0);
        }
    }
    Dataset out;
    out.task = TaskKind::MultiLabelRegression;
    out.X = assemble_features(samples);
    out.Y.resize(static_cast<Index>(samples.size()), static_cast<Index>(K));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            out.Y(static_cast<Index>(i), static_cast<Index>(k)) = samples[i].labels[k];
        }
    }
    out.mask = Mask::Constant(out.Y.rows(), out.Y.cols(), true);
    return out;
}

Dataset parse_sparse_regression(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_sparse_regression(in);
}

Dataset parse_sparse(std::istream& in, TaskKind task) {
    switch (task) {
        case TaskKind::MultiClass: return parse_sparse_multiclass(in);
        case TaskKind::MultiLabelClassification: return parse_sparse_multilabel(in);
        case TaskKind::MultiLabelRegression: return parse_sparse_regression(in);
    }
    throw parameter_error("unknown task kind");
}

Dataset load_dataset(const std::string& path, TaskKind task) {
    std::ifstream in(path);
    if (!in) {
        throw error(fmt::format("cannot open dataset '{}'", path));
    }
    try {
        return parse_sparse(in, task);
    } catch (const parse_error& e) {
        throw parse_error(fmt::format("{}: {}", path, e.what()), 0);
    }
}

void write_sparse(std::ostream& out, const Dataset& data) {
    for (Index i = 0; i < data.size(); ++i) {
        std::string line;
        if (data.task == TaskKind::MultiClass) {
            Index k = 0;
            data.Y.row(i).maxCoeff(&k);
            line = fmt::format("{}", data.label_values.at(static_cast<std::size_t>(k)));
        } else {
            std::vector<std::string> parts;
            for (Index k = 0; k < data.outputs(); ++k) {
                if (data.task == TaskKind::MultiLabelRegression) {
                    parts.push_back(fmt::format("{}", data.Y(i, k)));
                } else if (data.Y(i, k) == 1.0) {
                    parts.push_back(fmt::format("{}", data.label_values.at(static_cast<std::size_t>(k))));
                }
            }
            line = fmt::format("{}", fmt::join(parts, ","));
        }
        for (Index j = 0; j < data.dim(); ++j) {
            // the last column is always written on the first row so the dimension survives a round trip
            if (data.X(i, j) != 0.0 || (i == 0 && j == data.dim() - 1)) {
                line += fmt::format(" {}:{}", j + 1, data.X(i, j));
            }
        }
        out << line << '\n';
    }
}

std::string to_sparse_text(const Dataset& data) {
    std::ostringstream out;
    write_sparse(out, data);
    return out.str();
}

Dataset align_labels(const Dataset& data, const std::vector<long>& label_values) {
    if (data.task == TaskKind::MultiLabelRegression) {
        if (static_cast<Index>(label_values.size()) != 0 && static_cast<Index>(label_values.size()) != data.outputs()) {
            throw dimension_error("align_labels: regression target count mismatch");
        }
        return data;
    }
    std::map<long, Index> column;
    for (std::size_t k = 0; k < label_values.size(); ++k) {
        column[label_values[k]] = static_cast<Index>(k);
    }
    Dataset out = data;
    out.label_values = label_values;
    const auto K = static_cast<Index>(label_values.size());
    out.Y = Matrix::Zero(data.size(), K);
    out.mask = Mask::Constant(data.size(), K, false);
    for (Index k = 0; k < data.outputs(); ++k) {
        const long label = data.label_values.at(static_cast<std::size_t>(k));
        const auto it = column.find(label);
        if (it == column.end()) {
            throw error(fmt::format("label {} was not seen during training", label));
        }
        out.Y.col(it->second) = data.Y.col(k);
    }
    for (Index i = 0; i < data.size(); ++i) {
        out.mask.row(i).setConstant(data.is_labeled(i));
    }
    return out;
}

FeatureScaler FeatureScaler::fit(const Matrix& X) {
    FeatureScaler s;
    if (X.rows() == 0) {
        s.column_min = Vector::Zero(X.cols());
        s.column_range = Vector::Zero(X.cols());
        return s;
    }
    s.column_min = X.colwise().minCoeff().transpose();
    s.column_range = X.colwise().maxCoeff().transpose() - s.column_min;
    s.row_scale = 1.0;
    const Matrix scaled = s.transform(X);
    const double max_norm = scaled.rowwise().norm().maxCoeff();
    s.row_scale = max_norm > 0.0 ? max_norm : 1.0;
    return s;
}

Matrix FeatureScaler::transform(const Matrix& X) const {
    if (X.cols() != column_min.size()) {
        throw dimension_error(fmt::format("feature scaler fitted on {} columns, got {}", column_min.size(), X.cols()));
    }
    Matrix out(X.rows(), X.cols());
    for (Index j = 0; j < X.cols(); ++j) {
        if (column_range(j) > 0.0) {
            out.col(j) = (X.col(j).array() - column_min(j)) / column_range(j);
        } else {
            out.col(j).setZero();
        }
    }
    return out / row_scale;
}

LabelScaler LabelScaler::fit(const Matrix& Y, const Mask& mask) {
    LabelScaler s;
    s.column_min = Vector::Zero(Y.cols());
    s.column_range = Vector::Zero(Y.cols());
    for (Index k = 0; k < Y.cols(); ++k) {
        bool seen = false;
        double lo = 0.0;
        double hi = 0.0;
        for (Index i = 0; i < Y.rows(); ++i) {
            if (!mask(i, k)) {
                continue;
            }
            lo = seen ? std::min(lo, Y(i, k)) : Y(i, k);
            hi = seen ? std::max(hi, Y(i, k)) : Y(i, k);
            seen = true;
        }
        s.column_min(k) = lo;
        s.column_range(k) = hi - lo;
    }
    return s;
}

Matrix LabelScaler::transform(const Matrix& Y) const {
    if (Y.cols() != column_min.size()) {
        throw dimension_error("label scaler column count mismatch");
    }
    Matrix out(Y.rows(), Y.cols());
    for (Index k = 0; k < Y.cols(); ++k) {
        if (column_range(k) > 0.0) {
            out.col(k) = (Y.col(k).array() - column_min(k)) / column_range(k);
        } else {
            out.col(k).setZero();
        }
    }
    return out;
}

Matrix LabelScaler::inverse(const Matrix& Y) const {
    Matrix out(Y.rows(), Y.cols());
    for (Index k = 0; k < Y.cols(); ++k) {
        out.col(k) = Y.col(k).array() * column_range(k) + column_min(k);
    }
    return out;
}

Dataset normalize_features(const Dataset& data) {
    Dataset out = data;
    out.X = FeatureScaler::fit(data.X).transform(data.X);
    return out;
}

std::pair<Dataset, Dataset> normalize_features(const Dataset& train, const Dataset& test) {
    const auto scaler = FeatureScaler::fit(train.X);
    Dataset a = train;
    Dataset b = test;
    a.X = scaler.transform(train.X);
    b.X = scaler.transform(test.X);
    return {std::move(a), std::move(b)};
}

Dataset scale_labels_unit(const Dataset& data) {
    return scale_labels_unit(data, data).first;
}

std::pair<Dataset, Dataset> scale_labels_unit(const Dataset& train, const Dataset& test) {
    if (train.task != TaskKind::MultiLabelRegression || test.task != TaskKind::MultiLabelRegression) {
        throw parameter_error("scale_labels_unit applies to multi-label regression only");
    }
    const auto scaler = LabelScaler::fit(train.Y, train.mask);
    Dataset a = train;
    Dataset b = test;
    a.Y = scaler.transform(train.Y);
    b.Y = scaler.transform(test.Y);
    return {std::move(a), std::move(b)};
}

Split make_split(const Dataset& data, const SplitSpec& spec) {
    spec.validate();
    if (data.task == TaskKind::MultiClass && spec.missing_label_fraction > 0.0) {
        throw parameter_error("missing_label_fraction applies to multi-label tasks only");
    }
    const Index n = data.size();
    const auto n_train = static_cast<Index>(std::llround(spec.train_fraction * static_cast<double>(n)));
    // the epsilon guards products such as 0.1 * 150 that land just above an integer
    const auto n_labeled =
        static_cast<Index>(std::ceil(spec.labeled_fraction_of_train * static_cast<double>(n_train) - 1e-9));
    if (n_labeled <= 0) {
        throw parameter_error(fmt::format("split leaves no labeled samples (n_train = {})", n_train));
    }

    std::mt19937_64 rng(spec.seed);
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);

    Split split;
    split.train_indices.assign(order.begin(), order.begin() + n_train);
    split.test_indices.assign(order.begin() + n_train, order.end());
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.test_indices.begin(), split.test_indices.end());
    split.train = data.rows(split.train_indices);
    split.test = data.rows(split.test_indices);

    std::vector<Index> positions(static_cast<std::size_t>(n_train));
    std::iota(positions.begin(), positions.end(), Index{0});
    std::shuffle(positions.begin(), positions.end(), rng);
    for (auto it = positions.begin() + n_labeled; it != positions.end(); ++it) {
        split.train.mask.row(*it).setConstant(false);
    }

    if (spec.missing_label_fraction > 0.0) {
        std::vector<std::pair<Index, Index>> observed;
        for (Index i = 0; i < split.train.size(); ++i) {
            for (Index k = 0; k < split.train.outputs(); ++k) {
                if (split.train.mask(i, k)) {
                    observed.emplace_back(i, k);
                }
            }
        }
        const auto n_hidden = static_cast<std::size_t>(
            std::llround(spec.missing_label_fraction * static_cast<double>(observed.size())));
        std::shuffle(observed.begin(), observed.end(), rng);
        for (std::size_t e = 0; e < n_hidden; ++e) {
            split.train.mask(observed[e].first, observed[e].second) = false;
        }
    }
    return split;
}

}  // namespace lsvv
