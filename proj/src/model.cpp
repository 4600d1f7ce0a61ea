#include "lsvv/model.hpp"

#include "json_eigen.hpp"
#include "lsvv/metrics.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace lsvv {

std::string_view to_string(Space space) noexcept {
    return space == Space::Linear ? "linear" : "kernel";
}

Space parse_space(std::string_view name) {
    if (name == "linear" || name == "Linear") {
        return Space::Linear;
    }
    if (name == "kernel" || name == "ApproxKernel" || name == "rff") {
        return Space::ApproxKernel;
    }
    throw parameter_error(fmt::format("unknown space '{}'", name));
}

void to_json(nlohmann::json& j, const Hyperparams& hp) {
    j = {{"tau_A", hp.tau_A},
         {"tau_I", hp.tau_I},
         {"tau_S", hp.tau_S},
         {"theta", hp.theta},
         {"batch_size", hp.batch_size},
         {"max_iters", hp.max_iters},
         {"xi", hp.xi},
         {"eps", hp.eps},
         {"seed", hp.seed},
         {"svt_mode", std::string(to_string(hp.svt_mode))},
         {"early_stop", hp.early_stop}};
}

void from_json(const nlohmann::json& j, Hyperparams& hp) {
    hp.tau_A = j.value("tau_A", hp.tau_A);
    hp.tau_I = j.value("tau_I", hp.tau_I);
    hp.tau_S = j.value("tau_S", hp.tau_S);
    hp.theta = j.value("theta", hp.theta);
    hp.batch_size = j.value("batch_size", hp.batch_size);
    hp.max_iters = j.value("max_iters", hp.max_iters);
    hp.xi = j.value("xi", hp.xi);
    hp.eps = j.value("eps", hp.eps);
    hp.seed = j.value("seed", hp.seed);
    hp.svt_mode = parse_svt_mode(j.value("svt_mode", std::string(to_string(hp.svt_mode))));
    hp.early_stop = j.value("early_stop", hp.early_stop);
}

Matrix Model::predict(const Matrix& X_raw) const {
    return lsvv::predict(weights, map.apply(scaler.transform(X_raw)), task);
}

double Model::evaluate(const Dataset& raw) const {
    if (raw.task != task) {
        throw parameter_error("evaluate: dataset task differs from the model task");
    }
    Dataset aligned = align_labels(raw, label_values);
    if (label_scaler) {
        aligned.Y = label_scaler->transform(aligned.Y);
    }
    if (aligned.outputs() != weights.cols()) {
        throw dimension_error("evaluate: label count differs from the model outputs");
    }
    return task_metric(task, predict(aligned.X), aligned.Y);
}

Model fit_model(const Dataset& raw_train, const FitOptions& options, const Dataset* unlabeled,
                const IterationCallback& on_iteration) {
    raw_train.validate();
    Model model;
    model.task = raw_train.task;
    model.label_values = raw_train.label_values;
    model.hp = options.hp;

    Matrix X_all = raw_train.X;
    if (unlabeled != nullptr) {
        if (unlabeled->dim() != raw_train.dim()) {
            throw dimension_error("unlabeled samples have a different feature dimension");
        }
        X_all.conservativeResize(raw_train.size() + unlabeled->size(), Eigen::NoChange);
        X_all.bottomRows(unlabeled->size()) = unlabeled->X;
    }
    model.scaler = FeatureScaler::fit(X_all);
    const Matrix X_norm = model.scaler.transform(X_all);

    Dataset prepared = raw_train;
    prepared.X = X_norm.topRows(raw_train.size());
    if (prepared.task == TaskKind::MultiLabelRegression) {
        model.label_scaler = LabelScaler::fit(prepared.Y, prepared.mask);
        prepared.Y = model.label_scaler->transform(prepared.Y);
    }

    model.map = options.space == Space::Linear
                    ? FeatureMap::identity(X_norm.cols())
                    : build_rff(X_norm.cols(), options.rff_features, options.sigma, options.map_seed);
    const Matrix phi_all = model.map.apply(X_norm);
    Matrix manifold;
    if (options.hp.tau_I != 0.0) {
        manifold = build_graph(X_norm, phi_all, options.graph).manifold;
    }
    const auto samples = labeled_samples(prepared, phi_all.topRows(raw_train.size()));
    model.weights = train(samples, manifold, loss_for_task(prepared.task), options.hp, on_iteration).weights;
    return model;
}

void to_json(nlohmann::json& j, const Model& model) {
    j = nlohmann::json::object();
    j["task"] = std::string(to_string(model.task));
    j["label_values"] = model.label_values;
    j["scaler"] = {{"column_min", detail::vector_to_json(model.scaler.column_min)},
                   {"column_range", detail::vector_to_json(model.scaler.column_range)},
                   {"row_scale", model.scaler.row_scale}};
    if (model.label_scaler) {
        j["label_scaler"] = {{"column_min", detail::vector_to_json(model.label_scaler->column_min)},
                             {"column_range", detail::vector_to_json(model.label_scaler->column_range)}};
    }
    j["feature_map"] = model.map;
    j["weights"] = detail::matrix_to_json(model.weights);
    j["hyperparams"] = model.hp;
}

Model model_from_json(const nlohmann::json& j) {
    Model model;
    model.task = parse_task_kind(j.at("task").get<std::string>());
    model.label_values = j.at("label_values").get<std::vector<long>>();
    const auto& s = j.at("scaler");
    model.scaler.column_min = detail::vector_from_json(s.at("column_min"));
    model.scaler.column_range = detail::vector_from_json(s.at("column_range"));
    model.scaler.row_scale = s.at("row_scale").get<double>();
    if (j.contains("label_scaler")) {
        LabelScaler ls;
        ls.column_min = detail::vector_from_json(j["label_scaler"].at("column_min"));
        ls.column_range = detail::vector_from_json(j["label_scaler"].at("column_range"));
        model.label_scaler = std::move(ls);
    }
    model.map = feature_map_from_json(j.at("feature_map"));
    model.weights = detail::matrix_from_json(j.at("weights"));
    model.hp = j.at("hyperparams").get<Hyperparams>();
    if (model.weights.rows() != model.map.output_dim()) {
        throw parse_error("model weights do not match the feature map", 0);
    }
    return model;
}

}  // namespace lsvv
