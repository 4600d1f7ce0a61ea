#pragma once

#include "lsvv/core.hpp"
#include "lsvv/dataset.hpp"
#include "lsvv/features.hpp"
#include "lsvv/graph.hpp"
#include "lsvv/model.hpp"
#include "lsvv/trainer.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lsvv {

/// The four members of the framework, distinguished only by which penalties are active.
enum class Baseline {
    SRM_VV,  ///< tau_I = 0, tau_S = 0
    LRC_VV,  ///< tau_I = 0, tau_S > 0
    SS_VV,   ///< tau_I > 0, tau_S = 0
    LSVV,    ///< tau_I > 0, tau_S > 0
};

[[nodiscard]] std::string_view to_string(Baseline baseline) noexcept;
[[nodiscard]] Baseline parse_baseline(std::string_view name);
[[nodiscard]] std::vector<Baseline> all_baselines();

/// Candidate sets. `theta_fraction` is multiplied by min(K, feature dim) and floored.
struct Grids {
    std::vector<double> tau_A;
    std::vector<double> tau_I;
    std::vector<double> tau_S;
    std::vector<double> theta_fraction;
    std::vector<double> sigma;

    /// Full published candidate sets (10 x 11 x 11 x 10 x 11 points).
    [[nodiscard]] static Grids paper();
    /// Three log-spaced values per parameter inside the published ranges.
    [[nodiscard]] static Grids reduced();
};

struct BaselineConstraint {
    bool manifold;  ///< tau_I restricted to positive candidates (else to {0})
    bool tail;      ///< tau_S restricted to positive candidates (else to {0})
};

[[nodiscard]] BaselineConstraint baseline_constraints(Baseline baseline) noexcept;

/// Applies the sign pattern of `baseline` to `grids`. When tau_S is fixed to 0 the theta grid
/// collapses to its first value, since theta has no effect without the tail penalty.
[[nodiscard]] Grids constrain(const Grids& grids, Baseline baseline);

struct GridPoint {
    double tau_A = 0.0;
    double tau_I = 0.0;
    double tau_S = 0.0;
    double theta_fraction = 0.0;
    double sigma = 0.0;  // unused in the linear space
};

/// Cartesian product, ordered sigma, tau_A, tau_I, tau_S, theta (last varies fastest).
[[nodiscard]] std::vector<GridPoint> expand_grid(const Grids& grids);

[[nodiscard]] Index theta_from_fraction(double fraction, Index outputs, Index feature_dim);

struct ExperimentConfig {
    std::string dataset;
    std::string name;  // defaults to the dataset file stem
    TaskKind task = TaskKind::MultiClass;
    Space space = Space::ApproxKernel;
    Index rff_features = 100;
    SplitSpec split;
    Index repetitions = 30;
    Grids grids = Grids::reduced();
    Index cv_folds = 5;
    std::vector<Baseline> baselines = all_baselines();
    SvtMode svt_mode = SvtMode::TailShrink;
    std::string output;
    GraphOptions graph;
    Index batch_size = 64;
    Index max_iters = 2000;
    double xi = 0.95;
    double eps = 1e-6;
    bool early_stop = true;
    Index workers = 0;  // 0 = hardware concurrency
    std::vector<double> label_rates{0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<double> theta_sweep_fractions{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

    void validate() const;
    [[nodiscard]] std::string display_name() const;
};

/// One repetition's normalized split with the graph over all training rows.
struct PreparedRepetition {
    Index repetition = 0;
    std::uint64_t seed = 0;
    Dataset train;  // labeled rows plus unlabeled rows (all-false mask)
    Dataset test;
    Matrix laplacian;
};

[[nodiscard]] PreparedRepetition prepare_repetition(const Dataset& data, const ExperimentConfig& config,
                                                    Index repetition);

/// Feature map, mapped training rows and manifold matrix for one bandwidth.
struct SpaceCache {
    double sigma = 0.0;
    FeatureMap map = FeatureMap::identity(0);
    Matrix phi_train;
    Matrix manifold;
};

[[nodiscard]] SpaceCache build_space(const PreparedRepetition& prep, const ExperimentConfig& config, double sigma);

[[nodiscard]] Hyperparams make_hyperparams(const GridPoint& point, const ExperimentConfig& config, Index feature_dim,
                                           Index outputs, std::uint64_t seed);

struct GridSearchResult {
    GridPoint best;
    double best_score = 0.0;
    std::vector<GridPoint> points;
    std::vector<double> scores;  // mean validation metric per point
    Index trainings = 0;
};

/**
 * @brief k-fold cross-validated grid search over the labeled training rows.
 * @details Folds split only the labeled rows; the graph always spans every training row, so a
 *          fold's held-out rows act as unlabeled samples. Ties keep the first point in grid order.
 *          All points of a fold share one batch-sampling seed.
 */
[[nodiscard]] GridSearchResult grid_search(const PreparedRepetition& prep, const ExperimentConfig& config,
                                           const Grids& grids);
[[nodiscard]] GridSearchResult grid_search(const PreparedRepetition& prep, const ExperimentConfig& config,
                                           Baseline baseline);

struct RunRecord {
    Index repetition = 0;
    double value = 0.0;
    GridPoint chosen;
    Index theta = 0;
    double seconds = 0.0;
};

struct ResultRow {
    std::string dataset;
    std::string space;
    std::string baseline;
    std::string metric;
    double mean = 0.0;
    double std = 0.0;
    std::vector<RunRecord> runs;
    double seconds = 0.0;
};

struct ExperimentReport {
    std::vector<ResultRow> rows;
    Index trainings = 0;
};

/// Repeated split, grid search, final fit and test evaluation for every configured baseline.
[[nodiscard]] ExperimentReport run_experiment(const Dataset& data, const ExperimentConfig& config);
[[nodiscard]] ExperimentReport run_experiment(const ExperimentConfig& config);

/// LSVV with theta swept over `theta_sweep_fractions`, other hyperparameters at the CV optimum.
[[nodiscard]] ExperimentReport theta_sweep(const Dataset& data, const ExperimentConfig& config);

/// run_experiment once per labeled fraction in `label_rates`.
[[nodiscard]] ExperimentReport label_rate_sweep(const Dataset& data, const ExperimentConfig& config);

/// Columns: dataset,space,baseline,repetition_or_AGG,metric,value,tau_A,tau_I,tau_S,theta,sigma,seconds.
/// Each row contributes one line per repetition and two AGG lines (`<metric>` mean, `<metric>_std`).
void write_results_csv(std::ostream& out, std::vector<ResultRow> rows);

}  // namespace lsvv
