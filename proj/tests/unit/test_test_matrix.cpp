#include "logdet/error.hpp"
#include "logdet/oracle.hpp"
#include "logdet/test_matrix.hpp"

#include <gtest/gtest.h>

using namespace logdet;

TEST(TestMatrix, IdentityWhenNoTerms) {
    TestMatrixConfig c;
    c.n = 100;
    c.heavy_count = 0;
    c.tail_count = 0;
    c.density = 0.1;
    const auto op = generate_test_matrix(c);
    EXPECT_EQ(op->rank(), 0);
    EXPECT_EQ(dense_logdet(*op), 0.0);
}

TEST(TestMatrix, PaperShape) {
    const auto op = generate_test_matrix(TestMatrixConfig{});
    EXPECT_EQ(op->n(), 5000);
    EXPECT_EQ(op->rank(), 300);
    for (Index j = 0; j < op->rank(); ++j) {
        ASSERT_EQ(op->factor().col(j).nonZeros(), 125);
        EXPECT_DOUBLE_EQ(op->weights()[j], (j < 40 ? 10.0 : 1.0) / double((j + 1) * (j + 1)));
    }
}

TEST(TestMatrix, Analog500MatchesIndependentLogdet) {
    TestMatrixConfig c;
    c.n = 500;
    c.density = 0.05;
    const auto op = generate_test_matrix(c);

    // Materialize independently from the factors and take log det via Cholesky.
    const MatrixXd x(op->factor());
    const MatrixXd a = MatrixXd::Identity(500, 500) + x * op->weights().asDiagonal() * x.transpose();
    const Eigen::LLT<MatrixXd> llt(a);
    ASSERT_EQ(llt.info(), Eigen::Success);
    const double chol = 2 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();

    EXPECT_GE(dense_spectrum(*op).eigenvalues.minCoeff(), 1 - 1e-10);
    EXPECT_GT(chol, 0);
    EXPECT_NEAR(dense_logdet(*op), chol, 1e-9 * chol);
}

TEST(TestMatrix, Deterministic) {
    TestMatrixConfig c;
    c.n = 400;
    c.heavy_count = 10;
    c.tail_count = 20;
    const auto a = generate_test_matrix(c), b = generate_test_matrix(c);
    EXPECT_TRUE(MatrixXd(a->factor()) == MatrixXd(b->factor()));
    EXPECT_TRUE(a->weights() == b->weights());
}

TEST(TestMatrix, ColumnsIndependentOfCount) {
    TestMatrixConfig c;
    c.n = 300;
    c.heavy_count = 5;
    c.tail_count = 5;
    const auto small = generate_test_matrix(c);
    c.tail_count = 50;
    const auto large = generate_test_matrix(c);
    EXPECT_TRUE(MatrixXd(small->factor()) == MatrixXd(large->factor()).leftCols(10));
}

TEST(TestMatrix, SeedChangesMatrix) {
    TestMatrixConfig c;
    c.n = 200;
    c.heavy_count = 3;
    c.tail_count = 3;
    const auto a = generate_test_matrix(c);
    c.seed = 51;
    const auto b = generate_test_matrix(c);
    EXPECT_FALSE(MatrixXd(a->factor()) == MatrixXd(b->factor()));
}

TEST(TestMatrix, BadConfig) {
    TestMatrixConfig c;
    c.n = 300;
    EXPECT_THROW(generate_test_matrix(c), Error);  // 40 + 260 = n
    c = {};
    c.n = 100;
    c.heavy_count = 1;
    c.tail_count = 0;
    c.density = 0.001;
    EXPECT_THROW(generate_test_matrix(c), Error);
    c.density = 1.5;
    EXPECT_THROW(generate_test_matrix(c), Error);
}
