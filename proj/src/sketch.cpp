#include "logdet/sketch.hpp"

#include "logdet/error.hpp"
#include "logdet/lanczos.hpp"
#include "logdet/parallel.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>

namespace logdet {

namespace {

constexpr double kRankTolerance = 1e-12;

} // namespace

SketchMatrix gaussian_sketch(Index n, Index q, SketchScale scale, std::uint64_t seed, std::uint32_t stream) {
    if (q < 1) throw Error("bad-config", "sketch needs at least one column");
    if (n < 1) throw Error("bad-config", "sketch needs at least one row");
    SketchMatrix s;
    s.scale = scale;
    s.seed = seed;
    s.stream = stream;
    s.oversized = q > n;
    s.entries.resize(n, q);
    const double factor = scale == SketchScale::inverse_sqrt_q ? 1.0 / std::sqrt(static_cast<double>(q)) : 1.0;
    for (Index j = 0; j < q; ++j) {
        KeyedRng rng(seed, stream, static_cast<std::uint64_t>(j));
        for (Index i = 0; i < n; ++i) s.entries(i, j) = factor * rng.normal();
    }
    return s;
}

MatrixXd sketch_log(const SpdOperator& op, const MatrixXd& s, int steps, int threads) {
    if (steps < 1) throw Error("bad-config", "sketch_steps must be at least 1");
    if (s.rows() != op.n()) throw Error("dimension", "sketch rows do not match operator");
    MatrixXd y(s.rows(), s.cols());
    parallel_for(static_cast<std::size_t>(s.cols()), threads, [&](std::size_t j) {
        const auto col = static_cast<Index>(j);
        y.col(col) = matfun_apply(op, s.col(col), log_function, steps);
    });
    return y;
}

double sketch_zero_floor(const MatrixXd& s) { return kRankTolerance * s.norm(); }

SketchBasis basis_from_sketch_topk(const MatrixXd& y, Index k, bool shrink_on_rank_deficiency, double zero_floor) {
    if (k < 0 || k > y.cols()) throw Error("bad-config", "k must not exceed the number of sketch columns");
    SketchBasis basis;
    basis.construction = BasisConstruction::pcps_topk;
    basis.requested = k;

    Eigen::BDCSVD<MatrixXd> svd(y, Eigen::ComputeThinU);
    const VectorXd& sigma = svd.singularValues();
    Index rank = 0;
    if (sigma.size() > 0) {
        const double cutoff = std::max(kRankTolerance * sigma[0], zero_floor);
        while (rank < sigma.size() && sigma[rank] > cutoff) ++rank;
    }
    basis.achieved_rank = rank;
    if (rank < k && !shrink_on_rank_deficiency) throw RankDeficientError(rank, k);
    basis.columns = svd.matrixU().leftCols(std::min(k, rank));
    return basis;
}

SketchBasis build_basis_pcps(const SpdOperator& op, const SketchMatrix& s, Index k, int sketch_steps,
                             const SketchOptions& options) {
    if (k > s.q()) throw Error("bad-config", "k must not exceed q");
    if (k < 0) throw Error("bad-config", "k must be non-negative");
    const MatrixXd y = sketch_log(op, s.entries, sketch_steps, options.threads);
    return basis_from_sketch_topk(y, k, options.shrink_on_rank_deficiency, sketch_zero_floor(s.entries));
}

SketchBasis basis_from_sketch_qr(const MatrixXd& y, Index k, bool shrink_on_rank_deficiency, double zero_floor) {
    SketchBasis basis;
    basis.construction = BasisConstruction::oversampled_qr;
    basis.requested = y.cols();

    Eigen::ColPivHouseholderQR<MatrixXd> qr(y);
    const VectorXd pivots = qr.matrixR().diagonal().cwiseAbs();
    Index rank = 0;
    if (pivots.size() > 0) {
        const double cutoff = std::max(kRankTolerance * pivots[0], zero_floor);
        while (rank < pivots.size() && pivots[rank] > cutoff) ++rank;
    }
    basis.achieved_rank = rank;
    if (rank < k && !shrink_on_rank_deficiency) throw RankDeficientError(rank, k);
    if (rank > 0) {
        MatrixXd q = MatrixXd::Identity(y.rows(), rank);
        q.applyOnTheLeft(qr.householderQ());
        basis.columns = std::move(q);
    } else {
        basis.columns.resize(y.rows(), 0);
    }
    return basis;
}

SketchBasis build_basis_oversampled(const SpdOperator& op, Index k, Index p, int sketch_steps, std::uint64_t seed,
                                    const SketchOptions& options) {
    if (k < 1 || p < 1) throw Error("bad-config", "oversampled basis needs k >= 1 and p >= 1");
    const SketchMatrix s = gaussian_sketch(op.n(), k + p, SketchScale::unit_variance, seed);
    const MatrixXd y = sketch_log(op, s.entries, sketch_steps, options.threads);
    return basis_from_sketch_qr(y, k, options.shrink_on_rank_deficiency, sketch_zero_floor(s.entries));
}

} // namespace logdet
