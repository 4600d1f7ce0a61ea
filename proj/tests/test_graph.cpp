#include "lsvv/graph.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace lsvv;

TEST_CASE("knn_similarity") {
    SUBCASE("points on a line") {
        Matrix X(3, 1);
        X << 0, 1, 10;
        Matrix expected(3, 3);
        expected << 0, 1, 0,  //
            1, 0, 1,          //
            0, 1, 0;
        CHECK(knn_similarity(X, 1) == expected);
    }
    SUBCASE("two points") {
        Matrix expected(2, 2);
        expected << 0, 1, 1, 0;
        CHECK(knn_similarity(Matrix::Random(2, 3), 1) == expected);
    }
    SUBCASE("symmetric binary, zero diagonal, at least k neighbours") {
        const Matrix S = knn_similarity(Matrix::Random(30, 4), 5);
        CHECK(S == S.transpose());
        CHECK(S.diagonal().isZero(0.0));
        CHECK(((S.array() == 0.0) || (S.array() == 1.0)).all());
        CHECK(S.rowwise().sum().minCoeff() >= 5.0);
    }
    SUBCASE("k out of range") {
        CHECK_THROWS_AS(static_cast<void>(knn_similarity(Matrix::Random(4, 2), 0)), parameter_error);
        CHECK_THROWS_AS(static_cast<void>(knn_similarity(Matrix::Random(4, 2), 4)), parameter_error);
    }
}

TEST_CASE("heat_kernel_similarity") {
    Matrix X(3, 2);
    X << 0, 0,  //
        0, 0,   //
        0.5, 0;
    const Matrix S = heat_kernel_similarity(X, 0.5);
    CHECK(S(0, 1) == 1.0);
    CHECK(S(0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(S.diagonal().isZero(0.0));
    CHECK(S == S.transpose());
    CHECK_THROWS_AS(static_cast<void>(heat_kernel_similarity(X, 0.0)), parameter_error);
}

TEST_CASE("laplacian") {
    Matrix S(2, 2);
    S << 0, 1, 1, 0;
    Matrix expected(2, 2);
    expected << 1, -1, -1, 1;
    CHECK(laplacian(S) == expected);

    const Matrix R = knn_similarity(Matrix::Random(20, 3), 3);
    const Matrix L = laplacian(R);
    CHECK(L.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(L);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);

    Matrix A = Matrix::Zero(2, 2);
    A(0, 1) = 1.0;
    CHECK_THROWS_AS(static_cast<void>(laplacian(A)), error);
}

TEST_CASE("manifold_matrix") {
    SUBCASE("zero Laplacian") {
        CHECK(manifold_matrix(Matrix::Random(5, 4), Matrix::Zero(5, 5)).isZero(0.0));
    }
    SUBCASE("single sample") {
        const Matrix S = Matrix::Zero(1, 1);
        CHECK(manifold_matrix(Matrix::Random(1, 4), laplacian(S)).isZero(0.0));
    }
    SUBCASE("pairwise identity") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 10; ++trial) {
            const Matrix X = Matrix::Random(12, 3);
            const Matrix phi = Matrix::Random(12, 6);
            const Matrix S = knn_similarity(X, 3);
            const Matrix M = manifold_matrix(phi, laplacian(S));
            const Matrix W = Matrix::Random(6, 2);
            double pairwise = 0.0;
            for (Index i = 0; i < 12; ++i) {
                for (Index j = 0; j < 12; ++j) {
                    pairwise += S(i, j) * (W.transpose() * (phi.row(i) - phi.row(j)).transpose()).squaredNorm();
                }
            }
            CHECK((W.transpose() * M * W).trace() == doctest::Approx(0.5 * pairwise).epsilon(1e-10));
            CHECK((W.transpose() * M * W).trace() >= 0.0);
        }
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(static_cast<void>(manifold_matrix(Matrix::Random(5, 4), Matrix::Zero(4, 4))), dimension_error);
    }
}

TEST_CASE("build_graph clamps k for tiny sets") {
    const Matrix X = Matrix::Random(4, 2);
    const auto g = build_graph(X, X, GraphOptions{});
    CHECK(g.similarity.sum() == 12.0);  // complete graph on 4 vertices
    CHECK(g.manifold.rows() == 2);
}
