#include "lsvv/config.hpp"
#include "lsvv/experiment.hpp"
#include "lsvv/metrics.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <sstream>

using namespace lsvv;

namespace {

const Dataset& iris() {
    static const Dataset data = load_dataset(std::string(LSVV_DATA_DIR) + "/iris.txt", TaskKind::MultiClass);
    return data;
}

Grids single_point() {
    Grids g;
    g.tau_A = {1e-8};
    g.tau_I = {1e-6};
    g.tau_S = {1e-2};
    g.theta_fraction = {0.4};
    g.sigma = {0.25};
    return g;
}

ExperimentConfig quick_config() {
    ExperimentConfig config;
    config.name = "iris";
    config.split = SplitSpec{0.7, 0.3, 0.0, 5};
    config.repetitions = 2;
    config.grids = single_point();
    config.max_iters = 60;
    config.workers = 1;
    return config;
}

}  // namespace

TEST_CASE("baseline constraints") {
    const auto g = Grids::reduced();
    const auto srm = constrain(g, Baseline::SRM_VV);
    CHECK(srm.tau_I == std::vector<double>{0.0});
    CHECK(srm.tau_S == std::vector<double>{0.0});
    CHECK(srm.theta_fraction.size() == 1);
    const auto ss = constrain(g, Baseline::SS_VV);
    CHECK(ss.tau_S == std::vector<double>{0.0});
    for (const double v : ss.tau_I) {
        CHECK(v > 0.0);
    }
    const auto lsvv = constrain(g, Baseline::LSVV);
    CHECK(lsvv.tau_I.size() == 3);
    CHECK(lsvv.tau_S.size() == 3);
    CHECK(lsvv.theta_fraction == g.theta_fraction);
    const auto lrc = constrain(g, Baseline::LRC_VV);
    CHECK(lrc.tau_I == std::vector<double>{0.0});
    CHECK(lrc.tau_S.size() == 3);

    Grids no_positive = g;
    no_positive.tau_S = {0.0};
    CHECK_THROWS_AS(static_cast<void>(constrain(no_positive, Baseline::LSVV)), parameter_error);
}

TEST_CASE("grid expansion and theta") {
    const auto points = expand_grid(constrain(Grids::reduced(), Baseline::LSVV));
    CHECK(points.size() == 3 * 3 * 3 * 3 * 3);
    CHECK(points[0].theta_fraction == 0.0);
    CHECK(points[1].theta_fraction == 0.4);
    CHECK(points[3].tau_S == 1e-4);
    CHECK(Grids::paper().tau_A.size() == 10);
    CHECK(Grids::paper().tau_I.size() == 11);
    CHECK(Grids::paper().tau_S.size() == 11);
    CHECK(Grids::paper().theta_fraction.size() == 10);
    CHECK(Grids::paper().sigma.size() == 11);

    CHECK(theta_from_fraction(0.0, 3, 100) == 0);
    CHECK(theta_from_fraction(0.4, 3, 100) == 1);
    CHECK(theta_from_fraction(0.7, 3, 100) == 2);
    CHECK(theta_from_fraction(1.0, 3, 100) == 3);
    CHECK(theta_from_fraction(0.3, 10, 100) == 3);
    CHECK(theta_from_fraction(1.0, 5, 2) == 2);
    CHECK_THROWS_AS(static_cast<void>(theta_from_fraction(1.5, 3, 4)), parameter_error);
}

TEST_CASE("baseline names") {
    for (const auto b : all_baselines()) {
        CHECK(parse_baseline(to_string(b)) == b);
    }
    CHECK(parse_baseline("SS-VV") == Baseline::SS_VV);
    CHECK_THROWS_AS(static_cast<void>(parse_baseline("SVM")), parameter_error);
}

TEST_CASE("prepared repetition") {
    const auto config = quick_config();
    const auto prep = prepare_repetition(iris(), config, 0);
    CHECK(prep.train.size() == 105);
    CHECK(prep.test.size() == 45);
    CHECK(prep.laplacian.rows() == 105);
    CHECK(prep.train.X.rowwise().norm().maxCoeff() == doctest::Approx(1.0));
    const auto again = prepare_repetition(iris(), config, 0);
    CHECK(again.train == prep.train);
    CHECK(prepare_repetition(iris(), config, 1).train.X != prep.train.X);
}

TEST_CASE("grid search") {
    const auto config = quick_config();
    const auto prep = prepare_repetition(iris(), config, 0);
    SUBCASE("single point costs one training per fold") {
        const auto result = grid_search(prep, config, Baseline::LSVV);
        CHECK(result.trainings == config.cv_folds);
        CHECK(result.points.size() == 1);
        CHECK(result.best.tau_S == 1e-2);
    }
    SUBCASE("deterministic, ties keep grid order") {
        auto c = config;
        c.grids.tau_A = {1e-8, 1e-7};
        c.grids.sigma = {0.25, 0.5};
        const auto a = grid_search(prep, c, Baseline::SRM_VV);
        const auto b = grid_search(prep, c, Baseline::SRM_VV);
        CHECK(a.scores == b.scores);
        CHECK(a.best.tau_A == b.best.tau_A);
        CHECK(a.best.sigma == b.best.sigma);
        CHECK(a.trainings == 4 * c.cv_folds);
        const auto best = std::min_element(a.scores.begin(), a.scores.end()) - a.scores.begin();
        CHECK(a.best.tau_A == a.points[static_cast<std::size_t>(best)].tau_A);
        CHECK(a.best.sigma == a.points[static_cast<std::size_t>(best)].sigma);
    }
    SUBCASE("worker count does not change results") {
        auto c = config;
        c.grids.tau_S = {1e-3, 1e-1};
        c.workers = 3;
        CHECK(grid_search(prep, c, Baseline::LSVV).scores == grid_search(prep, [&] {
                                                                 auto one = c;
                                                                 one.workers = 1;
                                                                 return one;
                                                             }(),
                                                             Baseline::LSVV)
                                                                 .scores);
    }
    SUBCASE("too few labeled rows") {
        auto c = config;
        c.split.labeled_fraction_of_train = 0.03;
        CHECK_THROWS_AS(static_cast<void>(grid_search(prepare_repetition(iris(), c, 0), c, Baseline::LSVV)), error);
    }
}

TEST_CASE("run_experiment") {
    auto config = quick_config();
    SUBCASE("rows, records and training count") {
        const auto report = run_experiment(iris(), config);
        REQUIRE(report.rows.size() == 4);
        CHECK(report.trainings == 4 * config.repetitions * (config.cv_folds + 1));
        for (const auto& row : report.rows) {
            CHECK(row.runs.size() == 2);
            CHECK(row.metric == "error");
            CHECK(row.dataset == "iris");
            CHECK(row.mean >= 0.0);
            CHECK(row.mean <= 1.0);
        }
        const auto srm = std::find_if(report.rows.begin(), report.rows.end(),
                                      [](const ResultRow& r) { return r.baseline == "SRM_VV"; });
        REQUIRE(srm != report.rows.end());
        for (const auto& run : srm->runs) {
            CHECK(run.chosen.tau_I == 0.0);
            CHECK(run.chosen.tau_S == 0.0);
        }
    }
    SUBCASE("one repetition has zero spread") {
        config.repetitions = 1;
        config.baselines = {Baseline::LSVV, Baseline::SRM_VV};
        for (const auto& row : run_experiment(iris(), config).rows) {
            CHECK(row.std == 0.0);
        }
    }
    SUBCASE("linear space") {
        config.space = Space::Linear;
        config.repetitions = 1;
        config.baselines = {Baseline::LSVV};
        const auto report = run_experiment(iris(), config);
        CHECK(report.rows.front().space == "linear");
    }
}

TEST_CASE("theta sweep") {
    auto config = quick_config();
    config.repetitions = 1;
    const auto report = theta_sweep(iris(), config);
    REQUIRE(report.rows.size() == 11);
    CHECK(report.rows.front().baseline == "LSVV[theta=0]");
    CHECK(report.rows.back().baseline == "LSVV[theta=1]");
    CHECK(report.rows.back().runs.front().theta == 3);
    CHECK(report.trainings == config.cv_folds + 11);
}

TEST_CASE("label-rate sweep") {
    auto config = quick_config();
    config.repetitions = 1;
    config.baselines = {Baseline::SRM_VV};
    config.label_rates = {0.2, 0.5};
    const auto report = label_rate_sweep(iris(), config);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].baseline == "SRM_VV[label_rate=0.2]");
    CHECK(report.rows[1].baseline == "SRM_VV[label_rate=0.5]");
}

TEST_CASE("results CSV") {
    ResultRow row;
    row.dataset = "toy";
    row.space = "kernel";
    row.baseline = "LSVV";
    row.metric = "error";
    row.runs = {RunRecord{0, 0.25, GridPoint{1e-8, 1e-6, 0.01, 0.4, 0.5}, 1, 1.5}};
    row.mean = 0.25;
    std::ostringstream out;
    write_results_csv(out, {row});
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "dataset,space,baseline,repetition_or_AGG,metric,value,tau_A,tau_I,tau_S,theta,sigma,seconds");
    std::getline(in, line);
    CHECK(line.rfind("toy,kernel,LSVV,0,error,0.25,", 0) == 0);
    CHECK(line.find(",1,0.5,1.500") != std::string::npos);
    std::getline(in, line);
    CHECK(line.rfind("toy,kernel,LSVV,AGG,error,0.25", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("toy,kernel,LSVV,AGG,error_std,0", 0) == 0);
}

TEST_CASE("configuration JSON") {
    SUBCASE("round trip") {
        auto config = quick_config();
        config.dataset = "data/iris.txt";
        config.baselines = {Baseline::LSVV, Baseline::SS_VV};
        config.space = Space::Linear;
        const auto back = config_from_json(config_to_json(config));
        CHECK(config_to_json(back) == config_to_json(config));
        CHECK(back.grids.tau_S == config.grids.tau_S);
        CHECK(back.baselines == config.baselines);
        CHECK(back.space == Space::Linear);
    }
    SUBCASE("overrides") {
        nlohmann::json j = nlohmann::json::object();
        apply_override(j, "tau_S", "0,1e-3,0.1");
        apply_override(j, "repetitions", "3");
        apply_override(j, "baselines", "LSVV,SRM_VV");
        apply_override(j, "early_stop", "false");
        const auto config = config_from_json(j);
        CHECK(config.grids.tau_S == std::vector<double>{0.0, 1e-3, 0.1});
        CHECK(config.repetitions == 3);
        CHECK(config.baselines == std::vector<Baseline>{Baseline::LSVV, Baseline::SRM_VV});
        CHECK_FALSE(config.early_stop);
        CHECK_THROWS_AS(apply_override(j, "repetitions", "zero"), parameter_error);
        CHECK_THROWS_AS(apply_override(j, "no_such_field", "1"), parameter_error);
    }
    SUBCASE("scalars become lists, unknown keys rejected") {
        const auto config = config_from_json(nlohmann::json{{"sigma", 0.5}, {"grid", "paper"}});
        CHECK(config.grids.sigma == std::vector<double>{0.5});
        CHECK(config.grids.tau_A.size() == 10);
        CHECK_THROWS_AS(static_cast<void>(config_from_json(nlohmann::json{{"sigmaa", 1}})), parameter_error);
        CHECK_THROWS_AS(static_cast<void>(config_from_json(nlohmann::json{{"repetitions", "x"}})), parameter_error);
    }
}

TEST_CASE("model fit, prediction and JSON") {
    FitOptions options;
    options.sigma = 0.25;
    options.map_seed = 3;
    options.hp.tau_A = 1e-8;
    options.hp.max_iters = 200;
    const auto model = fit_model(iris(), options);
    const double train_error = model.evaluate(iris());
    CHECK(train_error < 0.5);
    const auto back = model_from_json(nlohmann::json(model));
    CHECK(back.weights == model.weights);
    CHECK(back.predict(iris().X) == model.predict(iris().X));
    CHECK(back.evaluate(iris()) == train_error);
}
