#include "lsvv/dataset.hpp"

#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

using namespace lsvv;

namespace {

Dataset random_multiclass(Index n, Index d, Index K, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_int_distribution<Index> cls(0, K - 1);
    Dataset data;
    data.task = TaskKind::MultiClass;
    data.X = Matrix::NullaryExpr(n, d, [&] { return u(rng); });
    data.Y = Matrix::Zero(n, K);
    for (Index i = 0; i < n; ++i) {
        data.Y(i, i < K ? i : cls(rng)) = 1.0;
    }
    data.mask = Mask::Constant(n, K, true);
    for (Index k = 0; k < K; ++k) {
        data.label_values.push_back(k + 1);
    }
    return data;
}

}  // namespace

TEST_CASE("multiclass parsing") {
    SUBCASE("one-hot encoding over the labels seen") {
        const auto data = parse_sparse_multiclass("1 1:1\n2 1:0.5 3:1.0\n");
        CHECK(data.size() == 2);
        CHECK(data.dim() == 3);
        CHECK(data.outputs() == 2);
        CHECK(data.X(1, 0) == 0.5);
        CHECK(data.X(1, 1) == 0.0);
        CHECK(data.X(1, 2) == 1.0);
        CHECK(data.Y(1, 0) == 0.0);
        CHECK(data.Y(1, 1) == 1.0);
        CHECK(data.label_values == std::vector<long>{1, 2});
        CHECK(data.mask.all());
    }
    SUBCASE("empty input") {
        CHECK_THROWS_WITH_AS(static_cast<void>(parse_sparse_multiclass("")), "no samples", parse_error);
        CHECK_THROWS_AS(static_cast<void>(parse_sparse_multiclass("\n# only a comment\n")), parse_error);
    }
    SUBCASE("errors carry line numbers") {
        try {
            static_cast<void>(parse_sparse_multiclass("1 1:1\n2 1:0.5 x\n"));
            FAIL("expected a parse error");
        } catch (const parse_error& e) {
            CHECK(e.line() == 2);
        }
        CHECK_THROWS_AS(static_cast<void>(parse_sparse_multiclass("1.5 1:1\n")), parse_error);
        CHECK_THROWS_AS(static_cast<void>(parse_sparse_multiclass("a 1:1\n")), parse_error);
        CHECK_THROWS_AS(static_cast<void>(parse_sparse_multiclass("1 0:1\n")), parse_error);
        CHECK_THROWS_AS(static_cast<void>(parse_sparse_multiclass("1 2:1 2:3\n")), parse_error);
        CHECK_THROWS_AS(static_cast<void>(parse_sparse_multiclass("1 2:nan\n")), parse_error);
    }
    SUBCASE("labels need not be contiguous") {
        const auto data = parse_sparse_multiclass("7 1:1\n3 1:2\n7 1:3\n");
        CHECK(data.label_values == std::vector<long>{3, 7});
        CHECK(data.Y(0, 1) == 1.0);
        CHECK(data.Y(1, 0) == 1.0);
    }
}

TEST_CASE("multilabel parsing") {
    const auto data = parse_sparse_multilabel("1,3 2:1.0\n 2:1.0\n1,1 1:1\n2 1:1\n");
    CHECK(data.label_values == std::vector<long>{1, 2, 3});
    CHECK(data.Y.row(0) == (Eigen::RowVector3d() << 1, 0, 1).finished());
    CHECK(data.Y.row(1) == (Eigen::RowVector3d() << 0, 0, 0).finished());
    CHECK(data.Y.row(2) == (Eigen::RowVector3d() << 1, 0, 0).finished());
    CHECK(data.task == TaskKind::MultiLabelClassification);
    CHECK_THROWS_AS(static_cast<void>(parse_sparse_multilabel("1,x 1:1\n")), parse_error);
}

TEST_CASE("regression parsing") {
    const auto data = parse_sparse_regression("0.5,-1 1:2\n1.5,2e-1 2:1\n");
    CHECK(data.outputs() == 2);
    CHECK(data.Y(1, 1) == doctest::Approx(0.2));
    CHECK_THROWS_AS(static_cast<void>(parse_sparse_regression("0.5,1 1:2\n0.5 1:1\n")), parse_error);
}

TEST_CASE("sparse round trip") {
    SUBCASE("multiclass") {
        auto data = random_multiclass(20, 5, 3, 11);
        data.X(3, 4) = 0.0;
        data.X.col(4).setZero();  // trailing empty column must survive
        CHECK(parse_sparse_multiclass(to_sparse_text(data)) == data);
    }
    SUBCASE("multilabel") {
        Dataset data;
        data.task = TaskKind::MultiLabelClassification;
        data.X = Matrix::Random(6, 4);
        data.Y = (Matrix::Random(6, 3).array() > 0.0).cast<double>();
        data.Y.col(1).setZero();
        data.Y(0, 1) = 1.0;
        data.Y.row(5).setZero();
        data.mask = Mask::Constant(6, 3, true);
        data.label_values = {2, 4, 9};
        CHECK(parse_sparse_multilabel(to_sparse_text(data)) == data);
    }
    SUBCASE("regression") {
        Dataset data;
        data.task = TaskKind::MultiLabelRegression;
        data.X = Matrix::Random(5, 3);
        data.Y = Matrix::Random(5, 2);
        data.mask = Mask::Constant(5, 2, true);
        CHECK(parse_sparse_regression(to_sparse_text(data)) == data);
    }
}

TEST_CASE("feature normalization") {
    SUBCASE("min-max column scaling") {
        Dataset data = random_multiclass(3, 1, 1, 1);
        data.X << 0, 2, 4;
        const auto out = normalize_features(data);
        CHECK(out.X(0, 0) == 0.0);
        CHECK(out.X(1, 0) == 0.5);
        CHECK(out.X(2, 0) == 1.0);
    }
    SUBCASE("all-zero input stays zero") {
        Dataset data = random_multiclass(4, 3, 2, 2);
        data.X.setZero();
        CHECK(normalize_features(data).X.isZero(0.0));
    }
    SUBCASE("row norms bounded by one, attained on the training split") {
        const auto data = random_multiclass(5, 3, 2, 3);
        const auto out = normalize_features(data);
        CHECK(out.X.rowwise().norm().maxCoeff() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("constant column maps to zero") {
        Dataset data = random_multiclass(4, 2, 2, 4);
        data.X.col(1).setConstant(3.0);
        CHECK(normalize_features(data).X.col(1).isZero(0.0));
    }
    SUBCASE("test rows reuse training statistics") {
        const auto train = random_multiclass(10, 3, 2, 5);
        auto test = train.rows(std::vector<Index>{0, 1});
        test.X(0, 0) = 100.0;
        const auto [a, b] = normalize_features(train, test);
        CHECK(b.X.row(1) == a.X.row(1));
        CHECK(b.X(0, 0) > 1.0);
    }
}

TEST_CASE("label scaling") {
    Dataset data;
    data.task = TaskKind::MultiLabelRegression;
    data.X = Matrix::Zero(3, 1);
    data.Y.resize(3, 3);
    data.Y << -1, 5, 0,  //
        1, 5, 0.3,       //
        1, 5, 0.6;
    data.mask = Mask::Constant(3, 3, true);
    const auto out = scale_labels_unit(data);
    CHECK(out.Y(0, 0) == 0.0);
    CHECK(out.Y(1, 0) == 1.0);
    CHECK(out.Y.col(1).isZero(0.0));
    CHECK(out.Y(0, 2) == 0.0);
    CHECK(out.Y(1, 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(out.Y(2, 2) == 1.0);
    CHECK_THROWS_AS(static_cast<void>(scale_labels_unit(random_multiclass(3, 1, 2, 0))), parameter_error);
}

TEST_CASE("train/test split") {
    const auto data = random_multiclass(10, 2, 2, 6);
    SUBCASE("sizes") {
        const auto split = make_split(data, SplitSpec{0.7, 0.1, 0.0, 1});
        CHECK(split.train.size() == 7);
        CHECK(split.test.size() == 3);
        CHECK(split.train.labeled_count() == 1);
        CHECK(split.test.labeled_count() == 3);
    }
    SUBCASE("fully labeled") {
        CHECK(make_split(data, SplitSpec{0.7, 1.0, 0.0, 1}).train.labeled_count() == 7);
    }
    SUBCASE("deterministic and a partition") {
        const SplitSpec spec{0.7, 0.5, 0.0, 42};
        const auto a = make_split(data, spec);
        const auto b = make_split(data, spec);
        CHECK(a.train_indices == b.train_indices);
        CHECK(a.train == b.train);
        std::set<Index> all(a.train_indices.begin(), a.train_indices.end());
        for (const auto i : a.test_indices) {
            CHECK(all.insert(i).second);
        }
        CHECK(all.size() == 10);
    }
    SUBCASE("zero labeled samples") {
        CHECK_THROWS_AS(static_cast<void>(make_split(data, SplitSpec{0.7, 0.0, 0.0, 1})), error);
    }
    SUBCASE("fractions validated") {
        CHECK_THROWS_AS(static_cast<void>(make_split(data, SplitSpec{1.5, 0.1, 0.0, 1})), parameter_error);
    }
}

TEST_CASE("missing-label masking for multi-label data") {
    Dataset data;
    data.task = TaskKind::MultiLabelClassification;
    data.X = Matrix::Random(50, 3);
    data.Y = (Matrix::Random(50, 4).array() > 0.0).cast<double>();
    data.mask = Mask::Constant(50, 4, true);
    data.label_values = {1, 2, 3, 4};
    const auto split = make_split(data, SplitSpec{0.8, 0.5, 0.5, 9});
    CHECK(split.train.size() == 40);
    CHECK(split.train.labeled_count() <= 20);
    // 20 labeled rows x 4 outputs = 80 observed entries before masking
    const auto observed = split.train.mask.count();
    CHECK(std::abs(static_cast<double>(observed) - 40.0) <= 1.0);
    CHECK(split.test.mask.all());
}
