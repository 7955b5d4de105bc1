#pragma once

#include "logdet/operator.hpp"
#include "logdet/random.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>

namespace logdet::testing {

inline MatrixXd random_gaussian(Index rows, Index cols, std::uint64_t seed) {
    MatrixXd g(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        KeyedRng rng(seed, Stream::test_data, static_cast<std::uint64_t>(j));
        for (Index i = 0; i < rows; ++i) g(i, j) = rng.normal();
    }
    return g;
}

inline VectorXd random_unit(Index n, std::uint64_t seed) {
    VectorXd v = random_gaussian(n, 1, seed).col(0);
    return v / v.norm();
}

inline MatrixXd random_orthogonal(Index n, std::uint64_t seed) {
    Eigen::HouseholderQR<MatrixXd> qr(random_gaussian(n, n, seed));
    return qr.householderQ() * MatrixXd::Identity(n, n);
}

/// U diag(eigs) U^T with a random orthogonal U, symmetrized bitwise.
inline MatrixXd spd_with_spectrum(const VectorXd& eigs, std::uint64_t seed) {
    const MatrixXd u = random_orthogonal(eigs.size(), seed);
    MatrixXd a = u * eigs.asDiagonal() * u.transpose();
    MatrixXd sym = 0.5 * (a + a.transpose());
    for (Index j = 0; j < sym.cols(); ++j)
        for (Index i = j + 1; i < sym.rows(); ++i) sym(i, j) = sym(j, i);
    return sym;
}

/// Eigenvalues spread log-uniformly on [lo, hi], endpoints included.
inline VectorXd geometric_spectrum(Index n, double lo, double hi) {
    VectorXd e(n);
    for (Index i = 0; i < n; ++i)
        e[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1));
    return e;
}

inline std::shared_ptr<const DenseOperator> random_spd(Index n, double lo, double hi, std::uint64_t seed) {
    return std::make_shared<DenseOperator>(spd_with_spectrum(geometric_spectrum(n, lo, hi), seed));
}

inline std::shared_ptr<const DenseOperator> diagonal(const VectorXd& d) {
    return std::make_shared<DenseOperator>(MatrixXd(d.asDiagonal()));
}

} // namespace logdet::testing
