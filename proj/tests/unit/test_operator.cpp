#include "logdet/error.hpp"
#include "logdet/operator.hpp"
#include "logdet/oracle.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace logdet;
using namespace logdet::testing;

TEST(Operator, IdentityApply) {
    LowRankPlusIdentity id(3);
    EXPECT_EQ(id.apply(VectorXd::LinSpaced(3, 1, 3)), VectorXd::LinSpaced(3, 1, 3));
}

TEST(Operator, DiagonalApply) {
    DenseOperator d(MatrixXd(Eigen::Vector2d(2, 3).asDiagonal()));
    EXPECT_EQ(d.apply(Eigen::Vector2d(1, 1)), VectorXd(Eigen::Vector2d(2, 3)));
}

TEST(Operator, RankOneUpdate) {
    SparseMatrix x(2, 1);
    x.insert(0, 0) = 1.0;
    LowRankPlusIdentity op(x, VectorXd::Ones(1));
    EXPECT_EQ(op.apply(Eigen::Vector2d(1, 1)), VectorXd(Eigen::Vector2d(2, 1)));
}

TEST(Operator, DimensionMismatch) {
    LowRankPlusIdentity id(3);
    try {
        id.apply(VectorXd::Ones(2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "dimension");
    }
}

TEST(Operator, CounterIncrementsPerApply) {
    auto op = random_spd(10, 1, 5, 1);
    EXPECT_EQ(op->mvm_count(), 0u);
    for (int i = 0; i < 5; ++i) op->apply(VectorXd::Ones(10));
    EXPECT_EQ(op->mvm_count(), 5u);
    op->to_dense();
    EXPECT_EQ(op->mvm_count(), 5u);
}

TEST(Operator, DenseRejectsAsymmetry) {
    MatrixXd a = MatrixXd::Identity(2, 2);
    a(0, 1) = 0.5;
    EXPECT_THROW(DenseOperator{a}, Error);
}

TEST(Operator, LinearityAndSymmetry) {
    const auto op = random_spd(50, 1, 20, 2);
    const VectorXd u = random_gaussian(50, 1, 3).col(0), v = random_gaussian(50, 1, 4).col(0);
    const double alpha = 0.7, beta = -1.3;
    const VectorXd lhs = op->apply(alpha * u + beta * v);
    const VectorXd rhs = alpha * op->apply(u) + beta * op->apply(v);
    EXPECT_LE((lhs - rhs).norm(), 1e-12 * rhs.norm());
    const double a = u.dot(op->apply(v)), b = v.dot(op->apply(u));
    EXPECT_LE(std::abs(a - b), 1e-12 * std::abs(a));
}

TEST(Operator, LowRankSymmetricAndAboveOne) {
    SparseMatrix x = random_gaussian(30, 4, 5).sparseView();
    VectorXd w(4);
    w << 3, 2, 1, 0.5;
    LowRankPlusIdentity op(x, w);
    const VectorXd u = random_gaussian(30, 1, 6).col(0), v = random_gaussian(30, 1, 7).col(0);
    EXPECT_LE(std::abs(u.dot(op.apply(v)) - v.dot(op.apply(u))), 1e-12 * std::abs(u.dot(op.apply(v))));
    EXPECT_GE(dense_spectrum(op.to_dense()).eigenvalues.minCoeff(), 1 - 1e-10);
    EXPECT_EQ(op.structural_lower_bound(), 1.0);
}

TEST(Operator, LowRankRejectsNonPositiveWeights) {
    SparseMatrix x(3, 1);
    x.insert(0, 0) = 1.0;
    EXPECT_THROW(LowRankPlusIdentity(x, VectorXd::Zero(1)), Error);
}

TEST(Operator, ShiftHandExample) {
    auto op = diagonal(Eigen::Vector2d(0.5, 2));
    auto [scaled, offset] = shift_to_unit_min(op, 0.5);
    EXPECT_NEAR(offset, 2 * std::log(0.5), 1e-15);
    EXPECT_NEAR(offset, -1.386294, 1e-6);
    EXPECT_TRUE(scaled->to_dense().isApprox(MatrixXd(Eigen::Vector2d(1, 4).asDiagonal())));
    EXPECT_NEAR(offset + dense_logdet(*scaled), 0.0, 1e-14);
}

TEST(Operator, ShiftUnitIsNoop) {
    OperatorPtr op = random_spd(5, 1, 3, 8);
    auto [same, offset] = shift_to_unit_min(op, 1.0);
    EXPECT_EQ(same.get(), op.get());
    EXPECT_EQ(offset, 0.0);
}

TEST(Operator, ShiftRandomMatchesDirect) {
    auto op = random_spd(50, 0.05, 10, 9);
    const double lmin = dense_spectrum(*op).eigenvalues.minCoeff();
    auto [scaled, offset] = shift_to_unit_min(op, lmin);
    const double direct = dense_logdet(*op);
    EXPECT_LE(std::abs(direct - (offset + dense_logdet(*scaled))), 1e-8 * std::abs(direct));
}

TEST(Operator, ShiftRejectsNonPositive) {
    try {
        shift_to_unit_min(random_spd(3, 1, 2, 1), 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "bad-config");
    }
}

TEST(Operator, GramRotation) {
    MatrixXd b(2, 2);
    b << 0, 1, -1, 0;
    auto g = gram_operator(b);
    EXPECT_NEAR(0.5 * dense_logdet(*g), 0.0, 1e-15);
}

TEST(Operator, GramDiagonal) {
    auto g = gram_operator(MatrixXd(Eigen::Vector2d(-2, 3).asDiagonal()));
    EXPECT_NEAR(0.5 * dense_logdet(*g), std::log(6.0), 1e-14);
    g->apply(VectorXd::Ones(2));
    EXPECT_EQ(g->mvm_count(), 1u);
}

TEST(Operator, GramRandomMatchesLu) {
    const MatrixXd b = random_gaussian(20, 20, 10) + 3 * MatrixXd::Identity(20, 20);
    const Eigen::PartialPivLU<MatrixXd> lu(b);
    double log_abs_det = 0;
    for (Index i = 0; i < 20; ++i) log_abs_det += std::log(std::abs(lu.matrixLU()(i, i)));
    EXPECT_NEAR(0.5 * dense_logdet(*gram_operator(b)), log_abs_det, 1e-8);
}

TEST(Operator, GramRejectsNonSquare) {
    try {
        gram_operator(MatrixXd::Ones(2, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "dimension");
    }
}
