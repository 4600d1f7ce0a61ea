#include "lsvv/experiment.hpp"

#include "lsvv/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

namespace lsvv {

std::string_view to_string(Baseline baseline) noexcept {
    switch (baseline) {
        case Baseline::SRM_VV: return "SRM_VV";
        case Baseline::LRC_VV: return "LRC_VV";
        case Baseline::SS_VV: return "SS_VV";
        case Baseline::LSVV: return "LSVV";
    }
    return "LSVV";
}

Baseline parse_baseline(std::string_view name) {
    for (const auto b : all_baselines()) {
        if (name == to_string(b)) {
            return b;
        }
    }
    if (name == "SRM-VV" || name == "Linear-VV") {
        return Baseline::SRM_VV;
    }
    if (name == "LRC-VV") {
        return Baseline::LRC_VV;
    }
    if (name == "SS-VV") {
        return Baseline::SS_VV;
    }
    throw parameter_error(fmt::format("unknown baseline '{}'", name));
}

std::vector<Baseline> all_baselines() {
    return {Baseline::SRM_VV, Baseline::LRC_VV, Baseline::SS_VV, Baseline::LSVV};
}

namespace {

std::vector<double> powers(double base, int from, int to) {
    std::vector<double> out;
    for (int e = from; e <= to; ++e) {
        out.push_back(std::pow(base, e));
    }
    return out;
}

std::vector<double> with_zero(std::vector<double> values) {
    values.insert(values.begin(), 0.0);
    return values;
}

}  // namespace

Grids Grids::paper() {
    Grids g;
    g.tau_A = powers(10.0, -15, -6);
    g.tau_I = with_zero(powers(10.0, -15, -6));
    g.tau_S = with_zero(powers(10.0, -10, -1));
    g.theta_fraction = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    g.sigma = powers(2.0, -5, 5);
    return g;
}

Grids Grids::reduced() {
    Grids g;
    g.tau_A = {1e-14, 1e-10, 1e-6};
    g.tau_I = {0.0, 1e-14, 1e-10, 1e-6};
    g.tau_S = {0.0, 1e-7, 1e-4, 1e-1};
    g.theta_fraction = {0.0, 0.4, 0.7};
    g.sigma = {0.125, 0.25, 0.5};
    return g;
}

BaselineConstraint baseline_constraints(Baseline baseline) noexcept {
    switch (baseline) {
        case Baseline::SRM_VV: return {false, false};
        case Baseline::LRC_VV: return {false, true};
        case Baseline::SS_VV: return {true, false};
        case Baseline::LSVV: return {true, true};
    }
    return {true, true};
}

Grids constrain(const Grids& grids, Baseline baseline) {
    const auto rule = baseline_constraints(baseline);
    const auto restrict = [](const std::vector<double>& values, bool positive, std::string_view what) {
        if (!positive) {
            return std::vector<double>{0.0};
        }
        std::vector<double> out;
        std::copy_if(values.begin(), values.end(), std::back_inserter(out), [](double v) { return v > 0.0; });
        if (out.empty()) {
            throw parameter_error(fmt::format("{} grid has no positive candidates", what));
        }
        return out;
    };
    Grids out = grids;
    out.tau_I = restrict(grids.tau_I, rule.manifold, "tau_I");
    out.tau_S = restrict(grids.tau_S, rule.tail, "tau_S");
    if (!rule.tail && !out.theta_fraction.empty()) {
        out.theta_fraction = {grids.theta_fraction.front()};
    }
    return out;
}

std::vector<GridPoint> expand_grid(const Grids& grids) {
    std::vector<GridPoint> points;
    for (const double sigma : grids.sigma) {
        for (const double tau_A : grids.tau_A) {
            for (const double tau_I : grids.tau_I) {
                for (const double tau_S : grids.tau_S) {
                    for (const double theta : grids.theta_fraction) {
                        points.push_back(GridPoint{tau_A, tau_I, tau_S, theta, sigma});
                    }
                }
            }
        }
    }
    return points;
}

Index theta_from_fraction(double fraction, Index outputs, Index feature_dim) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw parameter_error(fmt::format("theta fraction {} outside [0, 1]", fraction));
    }
    const Index cap = std::min(outputs, feature_dim);
    return std::min(cap, static_cast<Index>(std::floor(fraction * static_cast<double>(cap) + 1e-9)));
}

void ExperimentConfig::validate() const {
    split.validate();
    if (repetitions < 1) {
        throw parameter_error("repetitions must be >= 1");
    }
    if (cv_folds < 2) {
        throw parameter_error("cv_folds must be >= 2");
    }
    if (grids.tau_A.empty() || grids.tau_I.empty() || grids.tau_S.empty() || grids.theta_fraction.empty() ||
        (space == Space::ApproxKernel && grids.sigma.empty())) {
        throw parameter_error("every hyperparameter grid needs at least one candidate");
    }
    if (baselines.empty()) {
        throw parameter_error("no baselines selected");
    }
    if (space == Space::ApproxKernel && rff_features < 1) {
        throw parameter_error("rff_features must be >= 1");
    }
}

std::string ExperimentConfig::display_name() const {
    if (!name.empty()) {
        return name;
    }
    return dataset.empty() ? std::string("dataset") : std::filesystem::path(dataset).stem().string();
}

PreparedRepetition prepare_repetition(const Dataset& data, const ExperimentConfig& config, Index repetition) {
    SplitSpec spec = config.split;
    spec.seed = config.split.seed + static_cast<std::uint64_t>(repetition);
    auto split = make_split(data, spec);

    PreparedRepetition prep;
    prep.repetition = repetition;
    prep.seed = config.split.seed;
    std::tie(prep.train, prep.test) = normalize_features(split.train, split.test);
    if (data.task == TaskKind::MultiLabelRegression) {
        std::tie(prep.train, prep.test) = scale_labels_unit(prep.train, prep.test);
    }
    const Index n = prep.train.size();
    Matrix similarity;
    if (config.graph.weighting == GraphOptions::Weighting::Knn) {
        const Index k = std::min(config.graph.k, n - 1);
        similarity = k >= 1 ? knn_similarity(prep.train.X, k) : Matrix::Zero(n, n);
    } else {
        similarity = heat_kernel_similarity(prep.train.X, config.graph.sigma_g);
    }
    prep.laplacian = laplacian(similarity);
    return prep;
}

SpaceCache build_space(const PreparedRepetition& prep, const ExperimentConfig& config, double sigma) {
    SpaceCache cache;
    cache.sigma = sigma;
    if (config.space == Space::Linear) {
        cache.map = FeatureMap::identity(prep.train.dim());
    } else {
        const auto seed = stable_seed(prep.seed, prep.repetition, std::bit_cast<std::uint64_t>(sigma));
        cache.map = build_rff(prep.train.dim(), config.rff_features, sigma, seed);
    }
    cache.phi_train = cache.map.apply(prep.train.X);
    cache.manifold = manifold_matrix(cache.phi_train, prep.laplacian);
    return cache;
}

Hyperparams make_hyperparams(const GridPoint& point, const ExperimentConfig& config, Index feature_dim, Index outputs,
                             std::uint64_t seed) {
    Hyperparams hp;
    hp.tau_A = point.tau_A;
    hp.tau_I = point.tau_I;
    hp.tau_S = point.tau_S;
    hp.theta = theta_from_fraction(point.theta_fraction, outputs, feature_dim);
    hp.batch_size = config.batch_size;
    hp.max_iters = config.max_iters;
    hp.xi = config.xi;
    hp.eps = config.eps;
    hp.seed = seed;
    hp.svt_mode = config.svt_mode;
    hp.early_stop = config.early_stop;
    return hp;
}

namespace {

constexpr std::uint64_t fold_tag = 0xF01D;
constexpr std::uint64_t cv_tag = 0xC5;
constexpr std::uint64_t final_tag = 0xF1A1;

// Runs body(i) for i in [0, count) on up to `workers` threads; the first exception is rethrown.
template <typename Body>
void parallel_for(Index count, Index workers, Body&& body) {
    if (workers <= 0) {
        workers = std::max<Index>(1, static_cast<Index>(std::thread::hardware_concurrency()));
    }
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (Index i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<Index> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (Index w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (Index i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next = count;
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

LabeledSamples gather(const Dataset& data, const Matrix& phi, std::span<const Index> rows) {
    LabeledSamples out;
    const auto n = static_cast<Index>(rows.size());
    out.phi.resize(n, phi.cols());
    out.y.resize(n, data.outputs());
    out.mask.resize(n, data.outputs());
    for (Index r = 0; r < n; ++r) {
        const Index i = rows[static_cast<std::size_t>(r)];
        out.phi.row(r) = phi.row(i);
        out.y.row(r) = data.Y.row(i);
        out.mask.row(r) = data.mask.row(i);
    }
    return out;
}

struct FoldData {
    LabeledSamples fit;
    LabeledSamples validation;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<double> sigma_candidates(const Grids& grids, Space space) {
    return space == Space::Linear ? std::vector<double>{0.0} : grids.sigma;
}

struct FinalFit {
    double value = 0.0;
    Index theta = 0;
};

FinalFit fit_and_test(const PreparedRepetition& prep, const ExperimentConfig& config, const SpaceCache& cache,
                      const GridPoint& point) {
    const auto loss = loss_for_task(prep.train.task);
    const auto hp = make_hyperparams(point, config, cache.phi_train.cols(), prep.train.outputs(),
                                     stable_seed(prep.seed, prep.repetition, final_tag));
    const auto samples = labeled_samples(prep.train, cache.phi_train);
    const Matrix W = train(samples, cache.manifold, loss, hp).weights;
    const Matrix preds = predict(W, cache.map.apply(prep.test.X), prep.test.task);
    return {task_metric(prep.test.task, preds, prep.test.Y), hp.theta};
}

ResultRow make_row(const ExperimentConfig& config, std::string baseline, std::string_view metric,
                   std::vector<RunRecord> runs) {
    ResultRow row;
    row.dataset = config.display_name();
    row.space = std::string(to_string(config.space));
    row.baseline = std::move(baseline);
    row.metric = std::string(metric);
    std::vector<double> values;
    for (const auto& r : runs) {
        values.push_back(r.value);
        row.seconds += r.seconds;
    }
    const auto summary = aggregate(values, row.metric);
    row.mean = summary.mean;
    row.std = summary.std;
    row.runs = std::move(runs);
    return row;
}

}  // namespace

GridSearchResult grid_search(const PreparedRepetition& prep, const ExperimentConfig& config, const Grids& grids) {
    const auto labeled = prep.train.labeled_rows();
    const Index folds = config.cv_folds;
    if (static_cast<Index>(labeled.size()) < folds) {
        throw error(fmt::format("cross-validation needs at least {} labeled samples, have {}", folds, labeled.size()));
    }
    std::vector<Index> shuffled = labeled;
    std::mt19937_64 rng(stable_seed(prep.seed, prep.repetition, fold_tag));
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<std::vector<Index>> fit_rows(static_cast<std::size_t>(folds));
    std::vector<std::vector<Index>> val_rows(static_cast<std::size_t>(folds));
    for (std::size_t p = 0; p < shuffled.size(); ++p) {
        const auto f = p % static_cast<std::size_t>(folds);
        for (std::size_t g = 0; g < fit_rows.size(); ++g) {
            (g == f ? val_rows[g] : fit_rows[g]).push_back(shuffled[p]);
        }
    }

    Grids effective = grids;
    effective.sigma = sigma_candidates(grids, config.space);
    GridSearchResult result;
    result.points = expand_grid(effective);

    std::map<double, Index> sigma_slot;
    std::vector<SpaceCache> caches;
    std::vector<std::vector<FoldData>> fold_data;
    for (const double sigma : effective.sigma) {
        if (sigma_slot.contains(sigma)) {
            continue;
        }
        sigma_slot[sigma] = static_cast<Index>(caches.size());
        caches.push_back(build_space(prep, config, sigma));
        auto& per_fold = fold_data.emplace_back();
        for (Index f = 0; f < folds; ++f) {
            per_fold.push_back(FoldData{gather(prep.train, caches.back().phi_train, fit_rows[static_cast<std::size_t>(f)]),
                                        gather(prep.train, caches.back().phi_train, val_rows[static_cast<std::size_t>(f)])});
        }
    }

    const auto loss = loss_for_task(prep.train.task);
    const auto n_points = static_cast<Index>(result.points.size());
    std::vector<double> fold_scores(static_cast<std::size_t>(n_points * folds), 0.0);
    parallel_for(n_points * folds, config.workers, [&](Index task) {
        const Index p = task / folds;
        const Index f = task % folds;
        const auto& point = result.points[static_cast<std::size_t>(p)];
        const Index slot = sigma_slot.at(point.sigma);
        const auto& cache = caches[static_cast<std::size_t>(slot)];
        const auto& data = fold_data[static_cast<std::size_t>(slot)][static_cast<std::size_t>(f)];
        const auto hp = make_hyperparams(point, config, cache.phi_train.cols(), prep.train.outputs(),
                                         stable_seed(prep.seed, prep.repetition, cv_tag, f));
        const Matrix W = train(data.fit, cache.manifold, loss, hp).weights;
        const Matrix preds = predict(W, data.validation.phi, prep.train.task);
        fold_scores[static_cast<std::size_t>(task)] =
            task_metric(prep.train.task, preds, data.validation.y, data.validation.mask);
    });

    result.trainings = n_points * folds;
    result.scores.resize(static_cast<std::size_t>(n_points));
    Index best = 0;
    for (Index p = 0; p < n_points; ++p) {
        double sum = 0.0;
        for (Index f = 0; f < folds; ++f) {
            sum += fold_scores[static_cast<std::size_t>(p * folds + f)];
        }
        result.scores[static_cast<std::size_t>(p)] = sum / static_cast<double>(folds);
        if (result.scores[static_cast<std::size_t>(p)] < result.scores[static_cast<std::size_t>(best)]) {
            best = p;
        }
    }
    result.best = result.points[static_cast<std::size_t>(best)];
    result.best_score = result.scores[static_cast<std::size_t>(best)];
    return result;
}

GridSearchResult grid_search(const PreparedRepetition& prep, const ExperimentConfig& config, Baseline baseline) {
    return grid_search(prep, config, constrain(config.grids, baseline));
}

ExperimentReport run_experiment(const Dataset& data, const ExperimentConfig& config) {
    config.validate();
    data.validate();
    ExperimentReport report;
    std::map<Baseline, std::vector<RunRecord>> runs;
    for (Index rep = 0; rep < config.repetitions; ++rep) {
        const auto prep = prepare_repetition(data, config, rep);
        for (const auto baseline : config.baselines) {
            const auto start = std::chrono::steady_clock::now();
            const auto search = [&] {
                try {
                    return grid_search(prep, config, baseline);
                } catch (const error& e) {
                    throw error(fmt::format("{} repetition {} ({}): {}", config.display_name(), rep,
                                            to_string(baseline), e.what()));
                }
            }();
            const auto cache = build_space(prep, config, search.best.sigma);
            const auto fit = fit_and_test(prep, config, cache, search.best);
            runs[baseline].push_back(RunRecord{rep, fit.value, search.best, fit.theta, seconds_since(start)});
            report.trainings += search.trainings + 1;
        }
    }
    for (const auto baseline : config.baselines) {
        report.rows.push_back(make_row(config, std::string(to_string(baseline)), metric_name(data.task),
                                       std::move(runs[baseline])));
    }
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    return run_experiment(load_dataset(config.dataset, config.task), config);
}

ExperimentReport theta_sweep(const Dataset& data, const ExperimentConfig& config) {
    config.validate();
    data.validate();
    ExperimentReport report;
    const auto& fractions = config.theta_sweep_fractions;
    std::vector<std::vector<RunRecord>> runs(fractions.size());
    for (Index rep = 0; rep < config.repetitions; ++rep) {
        const auto prep = prepare_repetition(data, config, rep);
        const auto start = std::chrono::steady_clock::now();
        const auto search = grid_search(prep, config, Baseline::LSVV);
        report.trainings += search.trainings;
        const double search_seconds = seconds_since(start);
        const auto cache = build_space(prep, config, search.best.sigma);
        for (std::size_t i = 0; i < fractions.size(); ++i) {
            const auto fit_start = std::chrono::steady_clock::now();
            GridPoint point = search.best;
            point.theta_fraction = fractions[i];
            const auto fit = fit_and_test(prep, config, cache, point);
            runs[i].push_back(RunRecord{rep, fit.value, point, fit.theta,
                                        search_seconds / static_cast<double>(fractions.size()) + seconds_since(fit_start)});
            ++report.trainings;
        }
    }
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        report.rows.push_back(make_row(config, fmt::format("LSVV[theta={}]", fractions[i]), metric_name(data.task),
                                       std::move(runs[i])));
    }
    return report;
}

ExperimentReport label_rate_sweep(const Dataset& data, const ExperimentConfig& config) {
    ExperimentReport report;
    for (const double rate : config.label_rates) {
        ExperimentConfig at_rate = config;
        at_rate.split.labeled_fraction_of_train = rate;
        auto part = run_experiment(data, at_rate);
        for (auto& row : part.rows) {
            row.baseline = fmt::format("{}[label_rate={}]", row.baseline, rate);
            report.rows.push_back(std::move(row));
        }
        report.trainings += part.trainings;
    }
    return report;
}

void write_results_csv(std::ostream& out, std::vector<ResultRow> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.dataset, a.space, a.baseline) < std::tie(b.dataset, b.space, b.baseline);
    });
    out << "dataset,space,baseline,repetition_or_AGG,metric,value,tau_A,tau_I,tau_S,theta,sigma,seconds\n";
    for (const auto& row : rows) {
        const bool linear = row.space == to_string(Space::Linear);
        for (const auto& run : row.runs) {
            out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{:.3f}\n", row.dataset, row.space, row.baseline,
                               run.repetition, row.metric, run.value, run.chosen.tau_A, run.chosen.tau_I,
                               run.chosen.tau_S, run.theta, linear ? std::string{} : fmt::format("{}", run.chosen.sigma),
                               run.seconds);
        }
        out << fmt::format("{},{},{},AGG,{},{},,,,,,{:.3f}\n", row.dataset, row.space, row.baseline, row.metric,
                           row.mean, row.seconds);
        out << fmt::format("{},{},{},AGG,{}_std,{},,,,,,{:.3f}\n", row.dataset, row.space, row.baseline, row.metric,
                           row.std, row.seconds);
    }
}

}  // namespace lsvv
