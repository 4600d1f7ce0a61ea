#include "lsvv/config.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>

namespace lsvv {

using nlohmann::json;

const std::vector<ConfigField>& config_fields() {
    static const std::vector<ConfigField> fields{
        {"dataset", FieldKind::String, "sparse-format data file"},
        {"name", FieldKind::String, "dataset label in the CSV (default: file stem)"},
        {"task", FieldKind::String, "multiclass | multilabel | regression"},
        {"space", FieldKind::String, "linear | kernel"},
        {"rff_features", FieldKind::Integer, "random Fourier feature count D"},
        {"train_fraction", FieldKind::Real, "fraction of samples used for training"},
        {"labeled_fraction", FieldKind::Real, "labeled fraction of the training split"},
        {"missing_label_fraction", FieldKind::Real, "hidden fraction of observed label entries"},
        {"seed", FieldKind::Unsigned, "base seed"},
        {"repetitions", FieldKind::Integer, "number of random partitions"},
        {"grid", FieldKind::String, "reduced | paper"},
        {"tau_A", FieldKind::RealList, "ambient penalty candidates"},
        {"tau_I", FieldKind::RealList, "manifold penalty candidates"},
        {"tau_S", FieldKind::RealList, "tail penalty candidates"},
        {"theta_fraction", FieldKind::RealList, "theta candidates as fractions of min(K, D)"},
        {"sigma", FieldKind::RealList, "kernel bandwidth candidates"},
        {"cv_folds", FieldKind::Integer, "cross-validation folds"},
        {"baselines", FieldKind::StringList, "subset of SRM_VV, LRC_VV, SS_VV, LSVV"},
        {"svt_mode", FieldKind::String, "tail | head"},
        {"output", FieldKind::String, "CSV output path (default: stdout)"},
        {"graph", FieldKind::String, "knn | heat"},
        {"graph_k", FieldKind::Integer, "neighbours per node"},
        {"graph_sigma", FieldKind::Real, "heat kernel width"},
        {"batch_size", FieldKind::Integer, "mini-batch size"},
        {"max_iters", FieldKind::Integer, "iteration cap T"},
        {"xi", FieldKind::Real, "Adadelta decay"},
        {"eps", FieldKind::Real, "Adadelta epsilon"},
        {"early_stop", FieldKind::Boolean, "stop when the objective plateaus"},
        {"workers", FieldKind::Integer, "worker threads (0: all cores)"},
        {"label_rates", FieldKind::RealList, "labeled fractions for the label-rate sweep"},
        {"theta_sweep_fractions", FieldKind::RealList, "theta fractions for the theta sweep"},
    };
    return fields;
}

namespace {

const ConfigField& find_field(std::string_view name) {
    const auto& fields = config_fields();
    const auto it = std::find_if(fields.begin(), fields.end(), [&](const ConfigField& f) { return f.name == name; });
    if (it == fields.end()) {
        throw parameter_error(fmt::format("unknown configuration key '{}'", name));
    }
    return *it;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

template <typename T>
T parse_number(std::string_view name, std::string_view text) {
    text = trim(text);
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
        throw parameter_error(fmt::format("{}: '{}' is not a valid number", name, text));
    }
    return value;
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto comma = text.find(',');
        parts.push_back(trim(text.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return parts;
}

std::vector<double> real_list(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_number()) {
        return {v.get<double>()};
    }
    return v.get<std::vector<double>>();
}

GraphOptions::Weighting parse_weighting(std::string_view name) {
    if (name == "knn") {
        return GraphOptions::Weighting::Knn;
    }
    if (name == "heat") {
        return GraphOptions::Weighting::HeatKernel;
    }
    throw parameter_error(fmt::format("unknown graph weighting '{}'", name));
}

}  // namespace

void apply_override(json& j, std::string_view name, std::string_view text) {
    const auto& field = find_field(name);
    const std::string key(name);
    switch (field.kind) {
        case FieldKind::String: j[key] = std::string(text); break;
        case FieldKind::Integer: j[key] = parse_number<long long>(name, text); break;
        case FieldKind::Unsigned: j[key] = parse_number<std::uint64_t>(name, text); break;
        case FieldKind::Real: j[key] = parse_number<double>(name, text); break;
        case FieldKind::Boolean: {
            const auto t = trim(text);
            if (t == "true" || t == "1" || t == "on") {
                j[key] = true;
            } else if (t == "false" || t == "0" || t == "off") {
                j[key] = false;
            } else {
                throw parameter_error(fmt::format("{}: '{}' is not a boolean", name, text));
            }
            break;
        }
        case FieldKind::RealList: {
            std::vector<double> values;
            for (const auto part : split_list(text)) {
                values.push_back(parse_number<double>(name, part));
            }
            j[key] = values;
            break;
        }
        case FieldKind::StringList: {
            std::vector<std::string> values;
            for (const auto part : split_list(text)) {
                values.emplace_back(part);
            }
            j[key] = values;
            break;
        }
    }
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) {
        throw parameter_error("configuration must be a JSON object");
    }
    for (const auto& item : j.items()) {
        static_cast<void>(find_field(item.key()));
    }
    ExperimentConfig c;
    try {
        c.dataset = j.value("dataset", c.dataset);
        c.name = j.value("name", c.name);
        if (j.contains("task")) {
            c.task = parse_task_kind(j["task"].get<std::string>());
        }
        if (j.contains("space")) {
            c.space = parse_space(j["space"].get<std::string>());
        }
        c.rff_features = j.value("rff_features", c.rff_features);
        c.split.train_fraction = j.value("train_fraction", c.split.train_fraction);
        c.split.labeled_fraction_of_train = j.value("labeled_fraction", c.split.labeled_fraction_of_train);
        c.split.missing_label_fraction = j.value("missing_label_fraction", c.split.missing_label_fraction);
        c.split.seed = j.value("seed", c.split.seed);
        c.repetitions = j.value("repetitions", c.repetitions);
        if (j.contains("grid")) {
            const auto preset = j["grid"].get<std::string>();
            if (preset == "paper") {
                c.grids = Grids::paper();
            } else if (preset == "reduced") {
                c.grids = Grids::reduced();
            } else {
                throw parameter_error(fmt::format("unknown grid preset '{}'", preset));
            }
        }
        const std::pair<const char*, std::vector<double>*> grid_keys[] = {
            {"tau_A", &c.grids.tau_A},
            {"tau_I", &c.grids.tau_I},
            {"tau_S", &c.grids.tau_S},
            {"theta_fraction", &c.grids.theta_fraction},
            {"sigma", &c.grids.sigma},
            {"label_rates", &c.label_rates},
            {"theta_sweep_fractions", &c.theta_sweep_fractions},
        };
        for (const auto& [key, target] : grid_keys) {
            if (j.contains(key)) {
                *target = real_list(j, key);
            }
        }
        c.cv_folds = j.value("cv_folds", c.cv_folds);
        if (j.contains("baselines")) {
            c.baselines.clear();
            const auto& b = j["baselines"];
            for (const auto& name : b.is_string() ? std::vector<std::string>{b.get<std::string>()}
                                                  : b.get<std::vector<std::string>>()) {
                c.baselines.push_back(parse_baseline(name));
            }
        }
        if (j.contains("svt_mode")) {
            c.svt_mode = parse_svt_mode(j["svt_mode"].get<std::string>());
        }
        c.output = j.value("output", c.output);
        if (j.contains("graph")) {
            c.graph.weighting = parse_weighting(j["graph"].get<std::string>());
        }
        c.graph.k = j.value("graph_k", c.graph.k);
        c.graph.sigma_g = j.value("graph_sigma", c.graph.sigma_g);
        c.batch_size = j.value("batch_size", c.batch_size);
        c.max_iters = j.value("max_iters", c.max_iters);
        c.xi = j.value("xi", c.xi);
        c.eps = j.value("eps", c.eps);
        c.early_stop = j.value("early_stop", c.early_stop);
        c.workers = j.value("workers", c.workers);
    } catch (const json::exception& e) {
        throw parameter_error(fmt::format("configuration: {}", e.what()));
    }
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    std::vector<std::string> baselines;
    for (const auto b : c.baselines) {
        baselines.emplace_back(to_string(b));
    }
    return json{
        {"dataset", c.dataset},
        {"name", c.name},
        {"task", std::string(to_string(c.task))},
        {"space", std::string(to_string(c.space))},
        {"rff_features", c.rff_features},
        {"train_fraction", c.split.train_fraction},
        {"labeled_fraction", c.split.labeled_fraction_of_train},
        {"missing_label_fraction", c.split.missing_label_fraction},
        {"seed", c.split.seed},
        {"repetitions", c.repetitions},
        {"tau_A", c.grids.tau_A},
        {"tau_I", c.grids.tau_I},
        {"tau_S", c.grids.tau_S},
        {"theta_fraction", c.grids.theta_fraction},
        {"sigma", c.grids.sigma},
        {"cv_folds", c.cv_folds},
        {"baselines", baselines},
        {"svt_mode", std::string(to_string(c.svt_mode))},
        {"output", c.output},
        {"graph", c.graph.weighting == GraphOptions::Weighting::Knn ? "knn" : "heat"},
        {"graph_k", c.graph.k},
        {"graph_sigma", c.graph.sigma_g},
        {"batch_size", c.batch_size},
        {"max_iters", c.max_iters},
        {"xi", c.xi},
        {"eps", c.eps},
        {"early_stop", c.early_stop},
        {"workers", c.workers},
        {"label_rates", c.label_rates},
        {"theta_sweep_fractions", c.theta_sweep_fractions},
    };
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw error(fmt::format("cannot open '{}'", path));
    }
    try {
        return json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw parse_error(fmt::format("{}: {}", path, e.what()), 0);
    }
}

}  // namespace lsvv
