#include "lsvv/metrics.hpp"

#include <doctest.h>

using namespace lsvv;

namespace {

Matrix rows(std::initializer_list<std::initializer_list<double>> values) {
    Matrix M(static_cast<Index>(values.size()), static_cast<Index>(values.begin()->size()));
    Index i = 0;
    for (const auto& row : values) {
        Index j = 0;
        for (const double x : row) {
            M(i, j++) = x;
        }
        ++i;
    }
    return M;
}

}  // namespace

TEST_CASE("predict") {
    const Matrix W = Matrix::Identity(3, 3);
    Vector phi(3);
    phi << 0.1, 0.9, 0.3;
    CHECK(predict(W, phi, TaskKind::MultiClass) == Vector::Unit(3, 1));
    phi << 0.4, 0.4, 0.1;
    CHECK(predict(W, phi, TaskKind::MultiClass) == Vector::Unit(3, 0));
    Vector two(2);
    two << 0.6, 0.5;
    Vector expected(2);
    expected << 1, 0;
    CHECK(predict(Matrix::Identity(2, 2), two, TaskKind::MultiLabelClassification) == expected);
    CHECK(predict(Matrix::Identity(2, 2), two, TaskKind::MultiLabelRegression) == two);
    const Matrix phi_rows = rows({{0.1, 0.9, 0.3}, {0.5, 0.2, 0.1}});
    CHECK(predict(W, phi_rows, TaskKind::MultiClass) == rows({{0, 1, 0}, {1, 0, 0}}));
}

TEST_CASE("multi-class error") {
    const Matrix labels = rows({{1, 0}, {0, 1}, {1, 0}, {0, 1}});
    CHECK(mc_error(labels, labels) == 0.0);
    CHECK(mc_error(rows({{0, 1}, {1, 0}, {0, 1}, {1, 0}}), labels) == 1.0);
    CHECK(mc_error(rows({{1, 0}, {0, 1}, {1, 0}, {1, 0}}), labels) == 0.25);
    CHECK_THROWS_AS(static_cast<void>(mc_error(labels.topRows(2), labels)), dimension_error);
}

TEST_CASE("Hamming loss") {
    const Matrix labels = rows({{1, 0, 1}, {0, 0, 1}});
    CHECK(hamming_loss(labels, labels) == 0.0);
    CHECK(hamming_loss(rows({{1, 0}}), rows({{0, 0}})) == 0.5);
    CHECK(hamming_loss((1.0 - labels.array()).matrix(), labels) == 1.0);
}

TEST_CASE("RMSE") {
    const Matrix labels = rows({{0.2, 0.4}, {0.9, 0.1}});
    CHECK(rmse(labels, labels) == 0.0);
    CHECK(rmse(rows({{0.5}}), rows({{0.0}})) == 0.5);
    CHECK(rmse(rows({{1, 0, 0, 0}}), rows({{0, 0, 0, 0}})) == 0.25);
}

TEST_CASE("task metric dispatch") {
    const Matrix labels = rows({{1, 0}, {0, 1}});
    CHECK(metric_name(TaskKind::MultiClass) == "error");
    CHECK(metric_name(TaskKind::MultiLabelClassification) == "hamming");
    CHECK(metric_name(TaskKind::MultiLabelRegression) == "rmse");
    CHECK(task_metric(TaskKind::MultiLabelClassification, rows({{1, 1}, {0, 1}}), labels) == 0.25);
    Mask mask = Mask::Constant(2, 2, true);
    mask(0, 1) = false;
    CHECK(task_metric(TaskKind::MultiLabelClassification, rows({{1, 1}, {0, 1}}), labels, mask) == 0.0);
}

TEST_CASE("aggregate") {
    const std::vector<double> same{0.1, 0.1};
    const auto a = aggregate(same, "error");
    CHECK(a.mean == doctest::Approx(0.1));
    CHECK(a.std == 0.0);
    CHECK(a.metric_name == "error");
    const std::vector<double> one{0.3};
    CHECK(aggregate(one).std == 0.0);
    const std::vector<double> spread{0.0, 1.0};
    CHECK(aggregate(spread).mean == 0.5);
    CHECK(aggregate(spread).std == 0.5);
    CHECK(aggregate(spread).per_run == spread);
    CHECK_THROWS_AS(static_cast<void>(aggregate(std::vector<double>{})), error);
}
