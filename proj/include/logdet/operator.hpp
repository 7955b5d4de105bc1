#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>

namespace logdet {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

/**
 * Matrix-free symmetric positive (semi)definite operator.
 *
 * Operator data is immutable after construction; the only mutable state is
 * the MVM tally, which is atomic so `apply` may be called concurrently.
 */
class SpdOperator {
public:
    SpdOperator(const SpdOperator&) = delete;
    SpdOperator& operator=(const SpdOperator&) = delete;
    virtual ~SpdOperator() = default;

    Index n() const noexcept { return n_; }

    /// Returns A*v and counts one MVM. Throws Error("dimension") on size mismatch.
    VectorXd apply(const Eigen::Ref<const VectorXd>& v) const;
    void apply(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const;

    std::uint64_t mvm_count() const noexcept { return mvm_.load(std::memory_order_relaxed); }

    /// Dense copy of A. Does not touch the MVM tally.
    virtual MatrixXd to_dense() const = 0;

    /// A lower bound on the spectrum known from the structure, if any.
    virtual std::optional<double> structural_lower_bound() const { return std::nullopt; }

    virtual std::string_view kind() const = 0;

protected:
    explicit SpdOperator(Index n);

    virtual void apply_impl(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const = 0;

private:
    Index n_;
    mutable std::atomic<std::uint64_t> mvm_{0};
};

using OperatorPtr = std::shared_ptr<const SpdOperator>;

class DenseOperator final : public SpdOperator {
public:
    /// Throws Error("not-symmetric") unless a(i,j) == a(j,i) bitwise.
    explicit DenseOperator(MatrixXd a);

    const MatrixXd& matrix() const noexcept { return a_; }
    MatrixXd to_dense() const override { return a_; }
    std::string_view kind() const override { return "dense"; }

protected:
    void apply_impl(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const override;

private:
    MatrixXd a_;
};

/// Sparse operator; the matrix is held with both triangles present.
class SparseOperator final : public SpdOperator {
public:
    explicit SparseOperator(SparseMatrix a);

    const SparseMatrix& matrix() const noexcept { return a_; }
    MatrixXd to_dense() const override { return MatrixXd(a_); }
    std::string_view kind() const override { return "sparse"; }

protected:
    void apply_impl(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const override;

private:
    SparseMatrix a_;
};

/// A = I + X diag(w) X^T with w > 0, so every eigenvalue is at least 1.
class LowRankPlusIdentity final : public SpdOperator {
public:
    LowRankPlusIdentity(SparseMatrix x, VectorXd w);
    /// Identity of dimension n (r = 0).
    explicit LowRankPlusIdentity(Index n);

    const SparseMatrix& factor() const noexcept { return x_; }
    const VectorXd& weights() const noexcept { return w_; }
    Index rank() const noexcept { return x_.cols(); }

    MatrixXd to_dense() const override;
    std::optional<double> structural_lower_bound() const override { return 1.0; }
    std::string_view kind() const override { return "low-rank-plus-identity"; }

protected:
    void apply_impl(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const override;

private:
    SparseMatrix x_;
    VectorXd w_;
};

/// v -> base(v) / divisor. Counts one MVM per apply (and one on the base).
class ScaledOperator final : public SpdOperator {
public:
    ScaledOperator(OperatorPtr base, double divisor);

    const OperatorPtr& base() const noexcept { return base_; }
    double divisor() const noexcept { return divisor_; }

    MatrixXd to_dense() const override { return base_->to_dense() / divisor_; }
    std::optional<double> structural_lower_bound() const override;
    std::string_view kind() const override { return "scaled"; }

protected:
    void apply_impl(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const override;

private:
    OperatorPtr base_;
    double divisor_;
};

/// v -> B^T (B v); the pair of products with B counts as one apply.
class GramOperator final : public SpdOperator {
public:
    explicit GramOperator(MatrixXd b);

    const MatrixXd& factor() const noexcept { return b_; }
    MatrixXd to_dense() const override;
    std::string_view kind() const override { return "gram"; }

protected:
    void apply_impl(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const override;

private:
    MatrixXd b_;
};

/// Â = A / lambda_min together with offset = n log(lambda_min), so that
/// log det(A) = offset + tr(log Â). Throws Error("bad-config") for lambda_min <= 0.
std::pair<OperatorPtr, double> shift_to_unit_min(OperatorPtr op, double lambda_min);

/// Operator for B^T B; log|det B| = 0.5 * log det(B^T B). Throws Error("dimension") if B is not square.
OperatorPtr gram_operator(MatrixXd b);

} // namespace logdet
