#pragma once

#include "logdet/operator.hpp"
#include "logdet/random.hpp"

#include <cstdint>

namespace logdet {

enum class SketchScale { unit_variance, inverse_sqrt_q };

/// n x q Gaussian test matrix; column j comes from the keyed stream (seed, stream, j).
struct SketchMatrix {
    MatrixXd entries;
    SketchScale scale = SketchScale::inverse_sqrt_q;
    std::uint64_t seed = 0;
    std::uint32_t stream = static_cast<std::uint32_t>(Stream::sketch);
    bool oversized = false;  // q > n

    Index q() const noexcept { return entries.cols(); }
};

/// Errors: "bad-config" if q < 1.
SketchMatrix gaussian_sketch(Index n, Index q, SketchScale scale, std::uint64_t seed,
                             std::uint32_t stream = static_cast<std::uint32_t>(Stream::sketch));

enum class BasisConstruction { pcps_topk, oversampled_qr };

/// Column-orthonormal deflation basis Q.
struct SketchBasis {
    MatrixXd columns;
    BasisConstruction construction = BasisConstruction::pcps_topk;
    Index requested = 0;       // k (pcps) or k + p (oversampled)
    Index achieved_rank = 0;   // numerical rank of the sketched matrix

    Index k() const noexcept { return columns.cols(); }
};

struct SketchOptions {
    int threads = 1;
    /// Return a basis with the achieved rank instead of throwing RankDeficientError.
    bool shrink_on_rank_deficiency = false;
};

/// Y = [log(A) s_j] with each column from matfun_apply using `steps` Lanczos steps.
MatrixXd sketch_log(const SpdOperator& op, const MatrixXd& s, int steps, int threads = 1);

/**
 * Top-k left singular vectors of Y = log(A) S.
 *
 * Singular values below 1e-12 sigma_max count as zero. Errors: "bad-config"
 * for k > q or sketch_steps < 1; RankDeficientError when rank(Y) < k (unless
 * the options ask for a shrunken basis).
 */
SketchBasis build_basis_pcps(const SpdOperator& op, const SketchMatrix& s, Index k, int sketch_steps,
                             const SketchOptions& options = {});

/// Singular values of log(A) S at or below this count as zero: 1e-12 ||S||_F.
double sketch_zero_floor(const MatrixXd& s);

/// Same extraction applied to an already-formed Y. Directions with singular
/// value at or below max(1e-12 sigma_max, zero_floor) are discarded.
SketchBasis basis_from_sketch_topk(const MatrixXd& y, Index k, bool shrink_on_rank_deficiency,
                                   double zero_floor = 0.0);

/**
 * Orthonormal basis of range(log(A) S) with S standard Gaussian n x (k+p).
 *
 * Uses column-pivoted Householder QR and keeps every numerically independent
 * column (relative threshold 1e-12). Errors: "bad-config" for k < 1 or p < 1;
 * RankDeficientError when fewer than k columns survive.
 */
SketchBasis build_basis_oversampled(const SpdOperator& op, Index k, Index p, int sketch_steps, std::uint64_t seed,
                                    const SketchOptions& options = {});

/// Same extraction applied to an already-formed Y; `k` is the minimum acceptable rank.
SketchBasis basis_from_sketch_qr(const MatrixXd& y, Index k, bool shrink_on_rank_deficiency,
                                 double zero_floor = 0.0);

} // namespace logdet
