#include "logdet/operator.hpp"

#include "logdet/error.hpp"

#include <cmath>
#include <string>

namespace logdet {

SpdOperator::SpdOperator(Index n) : n_(n) {
    if (n < 1) throw Error("dimension", "operator dimension must be positive");
}

VectorXd SpdOperator::apply(const Eigen::Ref<const VectorXd>& v) const {
    VectorXd out(n_);
    apply(v, out);
    return out;
}

void SpdOperator::apply(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const {
    if (v.size() != n_ || out.size() != n_) {
        throw Error("dimension", "vector of length " + std::to_string(v.size()) +
                                     " applied to operator of dimension " + std::to_string(n_));
    }
    apply_impl(v, out);
    mvm_.fetch_add(1, std::memory_order_relaxed);
}

DenseOperator::DenseOperator(MatrixXd a) : SpdOperator(a.rows()), a_(std::move(a)) {
    if (a_.rows() != a_.cols()) throw Error("dimension", "dense operator must be square");
    for (Index j = 0; j < a_.cols(); ++j)
        for (Index i = j + 1; i < a_.rows(); ++i)
            if (a_(i, j) != a_(j, i))
                throw Error("not-symmetric", "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                 ") differs from its transpose");
}

void DenseOperator::apply_impl(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const {
    out.noalias() = a_ * v;
}

SparseOperator::SparseOperator(SparseMatrix a) : SpdOperator(a.rows()), a_(std::move(a)) {
    if (a_.rows() != a_.cols()) throw Error("dimension", "sparse operator must be square");
    a_.makeCompressed();
}

void SparseOperator::apply_impl(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const {
    out.noalias() = a_ * v;
}

LowRankPlusIdentity::LowRankPlusIdentity(SparseMatrix x, VectorXd w)
    : SpdOperator(x.rows()), x_(std::move(x)), w_(std::move(w)) {
    if (x_.cols() != w_.size()) throw Error("dimension", "factor columns and weights disagree");
    for (Index j = 0; j < w_.size(); ++j)
        if (!(w_[j] > 0.0) || !std::isfinite(w_[j]))
            throw Error("bad-config", "low-rank weights must be positive and finite");
    x_.makeCompressed();
}

LowRankPlusIdentity::LowRankPlusIdentity(Index n) : LowRankPlusIdentity(SparseMatrix(n, 0), VectorXd(0)) {}

MatrixXd LowRankPlusIdentity::to_dense() const {
    MatrixXd xd = MatrixXd(x_);
    MatrixXd a = xd * w_.asDiagonal() * xd.transpose();
    a.diagonal().array() += 1.0;
    // exact symmetry of the materialized copy
    a = (0.5 * (a + a.transpose())).eval();
    return a;
}

void LowRankPlusIdentity::apply_impl(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const {
    out = v;
    if (x_.cols() == 0) return;
    VectorXd coeff = x_.transpose() * v;
    coeff.array() *= w_.array();
    out.noalias() += x_ * coeff;
}

ScaledOperator::ScaledOperator(OperatorPtr base, double divisor)
    : SpdOperator(base->n()), base_(std::move(base)), divisor_(divisor) {
    if (!(divisor_ > 0.0) || !std::isfinite(divisor_))
        throw Error("bad-config", "scale divisor must be positive and finite");
}

std::optional<double> ScaledOperator::structural_lower_bound() const {
    if (auto lb = base_->structural_lower_bound()) return *lb / divisor_;
    return std::nullopt;
}

void ScaledOperator::apply_impl(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const {
    base_->apply(v, out);
    out /= divisor_;
}

GramOperator::GramOperator(MatrixXd b) : SpdOperator(b.rows()), b_(std::move(b)) {
    if (b_.rows() != b_.cols()) throw Error("dimension", "gram factor must be square");
}

MatrixXd GramOperator::to_dense() const {
    MatrixXd g = b_.transpose() * b_;
    g = (0.5 * (g + g.transpose())).eval();
    return g;
}

void GramOperator::apply_impl(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const {
    VectorXd bv = b_ * v;
    out.noalias() = b_.transpose() * bv;
}

std::pair<OperatorPtr, double> shift_to_unit_min(OperatorPtr op, double lambda_min) {
    if (!(lambda_min > 0.0) || !std::isfinite(lambda_min))
        throw Error("bad-config", "lambda_min must be positive");
    if (lambda_min == 1.0) return {std::move(op), 0.0};
    const double offset = static_cast<double>(op->n()) * std::log(lambda_min);
    return {std::make_shared<ScaledOperator>(std::move(op), lambda_min), offset};
}

OperatorPtr gram_operator(MatrixXd b) {
    if (b.rows() != b.cols()) throw Error("dimension", "gram_operator requires a square matrix");
    return std::make_shared<GramOperator>(std::move(b));
}

} // namespace logdet
