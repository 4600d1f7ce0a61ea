#pragma once

#include "lsvv/core.hpp"
#include "lsvv/dataset.hpp"
#include "lsvv/features.hpp"
#include "lsvv/graph.hpp"
#include "lsvv/trainer.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string_view>

namespace lsvv {

/// Hypothesis space: the input space itself or an approximate Gaussian-kernel space.
enum class Space { Linear, ApproxKernel };

[[nodiscard]] std::string_view to_string(Space space) noexcept;
[[nodiscard]] Space parse_space(std::string_view name);

void to_json(nlohmann::json& j, const Hyperparams& hp);
void from_json(const nlohmann::json& j, Hyperparams& hp);

struct FitOptions {
    Space space = Space::ApproxKernel;
    Index rff_features = 100;
    double sigma = 1.0;
    std::uint64_t map_seed = 0;
    GraphOptions graph;
    Hyperparams hp;
};

/// Everything needed to predict on raw (unnormalized) inputs.
struct Model {
    TaskKind task = TaskKind::MultiClass;
    std::vector<long> label_values;
    FeatureScaler scaler;
    std::optional<LabelScaler> label_scaler;  // regression only
    FeatureMap map = FeatureMap::identity(0);
    Matrix weights;
    Hyperparams hp;

    /// Predictions for raw inputs; regression outputs stay in the unit-scaled label space.
    [[nodiscard]] Matrix predict(const Matrix& X_raw) const;
    /// Task metric on a raw labeled dataset (labels aligned and scaled like the training data).
    [[nodiscard]] double evaluate(const Dataset& raw) const;
};

/**
 * @brief Normalizes `raw_train`, maps it, builds the graph over all of its rows and trains.
 * @details Rows with an all-false mask act as unlabeled samples; `unlabeled` adds more of them.
 */
[[nodiscard]] Model fit_model(const Dataset& raw_train, const FitOptions& options,
                              const Dataset* unlabeled = nullptr, const IterationCallback& on_iteration = {});

void to_json(nlohmann::json& j, const Model& model);
[[nodiscard]] Model model_from_json(const nlohmann::json& j);

}  // namespace lsvv
