#include "lsvv/complexity.hpp"
#include "lsvv/config.hpp"
#include "lsvv/experiment.hpp"
#include "lsvv/metrics.hpp"
#include "lsvv/model.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include <bit>
#include <fstream>
#include <iostream>
#include <memory>
#include <utility>

namespace {

using lsvv::ExperimentConfig;
using nlohmann::json;

struct ConfigFlags {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
};

void add_config_flags(CLI::App* sub, ConfigFlags& flags) {
    sub->add_option("--config", flags.config_path, "JSON configuration file");
    for (const auto& field : lsvv::config_fields()) {
        const std::string name = field.name;
        sub->add_option_function<std::string>(
            "--" + name, [&flags, name](const std::string& text) { flags.overrides.emplace_back(name, text); },
            field.help);
    }
}

ExperimentConfig resolve(const ConfigFlags& flags) {
    json j = flags.config_path.empty() ? json::object() : lsvv::read_json_file(flags.config_path);
    for (const auto& [name, text] : flags.overrides) {
        lsvv::apply_override(j, name, text);
    }
    auto config = lsvv::config_from_json(j);
    if (config.dataset.empty()) {
        throw lsvv::parameter_error("no dataset given (--dataset)");
    }
    return config;
}

// Trailing all-zero columns are dropped by the sparse format; restore them.
void pad_features(lsvv::Dataset& data, lsvv::Index dim) {
    if (data.dim() > dim) {
        throw lsvv::dimension_error(fmt::format("dataset has {} features, the model expects {}", data.dim(), dim));
    }
    const auto old = data.dim();
    data.X.conservativeResize(Eigen::NoChange, dim);
    data.X.rightCols(dim - old).setZero();
}

double single(const std::vector<double>& values, std::string_view name) {
    if (values.size() != 1) {
        throw lsvv::parameter_error(fmt::format("train needs exactly one {} value, got {}", name, values.size()));
    }
    return values.front();
}

std::unique_ptr<std::ostream> open_output(const std::string& path) {
    if (path.empty() || path == "-") {
        return nullptr;
    }
    auto out = std::make_unique<std::ofstream>(path);
    if (!*out) {
        throw lsvv::error(fmt::format("cannot write '{}'", path));
    }
    return out;
}

void emit_report(const ExperimentConfig& config, const lsvv::ExperimentReport& report) {
    const auto file = open_output(config.output);
    lsvv::write_results_csv(file ? *file : std::cout, report.rows);
    for (const auto& row : report.rows) {
        fmt::print(stderr, "{:<10} {:<7} {:<28} {} = {:.4f} +- {:.4f}\n", row.dataset, row.space, row.baseline,
                   row.metric, row.mean, row.std);
    }
    fmt::print(stderr, "{} trainings\n", report.trainings);
}

int run_train(const ExperimentConfig& config, const std::string& model_path, const std::string& unlabeled_path,
              const std::string& trace_path) {
    auto data = lsvv::load_dataset(config.dataset, config.task);
    std::unique_ptr<lsvv::Dataset> unlabeled;
    if (!unlabeled_path.empty()) {
        // Labels in this file are ignored; the multi-label reader accepts empty label lists.
        unlabeled = std::make_unique<lsvv::Dataset>(lsvv::load_dataset(unlabeled_path, lsvv::TaskKind::MultiLabelClassification));
        const auto dim = std::max(data.dim(), unlabeled->dim());
        pad_features(data, dim);
        pad_features(*unlabeled, dim);
    }

    lsvv::FitOptions options;
    options.space = config.space;
    options.rff_features = config.rff_features;
    options.graph = config.graph;
    lsvv::GridPoint point{single(config.grids.tau_A, "tau_A"), single(config.grids.tau_I, "tau_I"),
                          single(config.grids.tau_S, "tau_S"), single(config.grids.theta_fraction, "theta_fraction"),
                          0.0};
    if (config.space == lsvv::Space::ApproxKernel) {
        point.sigma = single(config.grids.sigma, "sigma");
        options.sigma = point.sigma;
        options.map_seed = lsvv::stable_seed(config.split.seed, std::bit_cast<std::uint64_t>(point.sigma));
    }
    const auto feature_dim = config.space == lsvv::Space::Linear ? data.dim() : config.rff_features;
    options.hp = lsvv::make_hyperparams(point, config, feature_dim, data.outputs(), config.split.seed);

    std::unique_ptr<std::ofstream> trace;
    lsvv::IterationCallback callback;
    if (!trace_path.empty()) {
        trace = std::make_unique<std::ofstream>(trace_path);
        if (!*trace) {
            throw lsvv::error(fmt::format("cannot write '{}'", trace_path));
        }
        *trace << "iteration,eta,objective,tail_sum\n";
        callback = [&trace, hp = options.hp](const lsvv::IterationInfo& info) {
            fmt::print(*trace, "{},{},{},{}\n", info.iteration, info.eta,
                       lsvv::objective_value(info.weights, info.samples, info.manifold, info.loss, hp),
                       lsvv::tail_sum(info.weights, hp.theta));
        };
    }
    const auto model = lsvv::fit_model(data, options, unlabeled.get(), callback);

    const auto file = open_output(model_path);
    (file ? *file : std::cout) << json(model).dump() << '\n';
    fmt::print(stderr, "trained on {} samples ({} labeled), training {} = {:.6g}\n", data.size(), data.labeled_count(),
               lsvv::metric_name(data.task), model.evaluate(data));
    return 0;
}

int run_eval(const std::string& model_path, const std::string& data_path) {
    const auto model = lsvv::model_from_json(lsvv::read_json_file(model_path));
    auto data = lsvv::load_dataset(data_path, model.task);
    pad_features(data, model.scaler.column_min.size());
    fmt::print("{},{}\n", lsvv::metric_name(model.task), model.evaluate(data));
    return 0;
}

int run_cv(const ExperimentConfig& config, lsvv::Index repetition) {
    const auto data = lsvv::load_dataset(config.dataset, config.task);
    const auto prep = lsvv::prepare_repetition(data, config, repetition);
    for (const auto baseline : config.baselines) {
        const auto result = lsvv::grid_search(prep, config, baseline);
        const auto& b = result.best;
        fmt::print("{},tau_A={},tau_I={},tau_S={},theta_fraction={},sigma={},{}={},trainings={}\n",
                   lsvv::to_string(baseline), b.tau_A, b.tau_I, b.tau_S, b.theta_fraction, b.sigma,
                   lsvv::metric_name(data.task), result.best_score, result.trainings);
    }
    return 0;
}

int run_spectrum(const std::string& model_path, double r, double lipschitz) {
    const auto model = lsvv::model_from_json(lsvv::read_json_file(model_path));
    auto report = lsvv::singular_tail_sums(model.weights);
    if (r > 0.0 && lipschitz > 0.0) {
        report.suggested_theta = lsvv::suggest_theta(report.values, r, lipschitz);
        fmt::print(stderr, "suggested theta {}\n", *report.suggested_theta);
    }
    lsvv::write_spectrum_csv(std::cout, report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-supervised vector-valued learning with local Rademacher complexity"};
    app.require_subcommand(1);

    ConfigFlags train_flags;
    std::string model_out;
    std::string unlabeled_path;
    std::string trace_path;
    auto* train = app.add_subcommand("train", "fit one model and write it as JSON");
    add_config_flags(train, train_flags);
    train->add_option("--model", model_out, "model output path (default: stdout)");
    train->add_option("--unlabeled", unlabeled_path, "extra unlabeled samples (sparse format)");
    train->add_option("--trace", trace_path, "per-iteration CSV trace");

    std::string model_in;
    std::string eval_data;
    auto* eval = app.add_subcommand("eval", "evaluate a saved model on a labeled dataset");
    eval->add_option("--model", model_in, "model JSON")->required();
    eval->add_option("--data", eval_data, "labeled test data")->required();

    ConfigFlags cv_flags;
    lsvv::Index cv_repetition = 0;
    auto* cv = app.add_subcommand("cv", "grid search for one repetition's split");
    add_config_flags(cv, cv_flags);
    cv->add_option("--repetition", cv_repetition, "which partition to search on");

    ConfigFlags exp_flags;
    auto* experiment = app.add_subcommand("experiment", "repeated splits, grid search and test evaluation");
    add_config_flags(experiment, exp_flags);

    ConfigFlags theta_flags;
    auto* theta = app.add_subcommand("theta-sweep", "LSVV test metric as theta varies");
    add_config_flags(theta, theta_flags);

    ConfigFlags rate_flags;
    auto* rate = app.add_subcommand("label-rate-sweep", "all baselines across labeled fractions");
    add_config_flags(rate, rate_flags);

    std::string spectrum_model;
    double spectrum_r = 0.0;
    double spectrum_l = 0.0;
    auto* spectrum = app.add_subcommand("spectrum", "singular values and tail sums of a saved model");
    spectrum->add_option("--model", spectrum_model, "model JSON")->required();
    spectrum->add_option("--r", spectrum_r, "complexity-bound constant r for the theta suggestion");
    spectrum->add_option("--lipschitz", spectrum_l, "loss Lipschitz constant for the theta suggestion");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*train) {
            return run_train(resolve(train_flags), model_out, unlabeled_path, trace_path);
        }
        if (*eval) {
            return run_eval(model_in, eval_data);
        }
        if (*cv) {
            return run_cv(resolve(cv_flags), cv_repetition);
        }
        if (*experiment) {
            const auto config = resolve(exp_flags);
            emit_report(config, lsvv::run_experiment(config));
        } else if (*theta) {
            const auto config = resolve(theta_flags);
            emit_report(config, lsvv::theta_sweep(lsvv::load_dataset(config.dataset, config.task), config));
        } else if (*rate) {
            const auto config = resolve(rate_flags);
            emit_report(config, lsvv::label_rate_sweep(lsvv::load_dataset(config.dataset, config.task), config));
        } else if (*spectrum) {
            return run_spectrum(spectrum_model, spectrum_r, spectrum_l);
        }
        return 0;
    } catch (const std::exception& e) {
        fmt::print(stderr, "lsvv: error: {}\n", e.what());
        return 1;
    }
}
