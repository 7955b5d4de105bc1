#pragma once

#include "logdet/lanczos.hpp"
#include "logdet/operator.hpp"

#include <utility>

namespace logdet {

/// Default cap on n for dense oracle computations; LOGDET_DENSE_LIMIT overrides it.
inline constexpr Index kDefaultDenseLimit = 4000;

Index dense_limit();

/// Full eigendecomposition A = U diag(lambda) U^T, eigenvalues non-increasing.
struct DenseSpectrum {
    VectorXd eigenvalues;
    MatrixXd eigenvectors;
};

/// Errors: "too-large" above the dense limit.
DenseSpectrum dense_spectrum(const SpdOperator& op);
DenseSpectrum dense_spectrum(const MatrixXd& a);

/// sum_i log(lambda_i). Errors: "too-large", "not-pd".
double dense_logdet(const SpdOperator& op);

/// U f(Lambda) U^T, symmetrized. Errors: "too-large", "domain".
MatrixXd dense_matrix_function(const SpdOperator& op, const ScalarFunction& f);
MatrixXd dense_matrix_function(const DenseSpectrum& spectrum, const ScalarFunction& f);

struct ResidualTrace {
    double trace = 0.0;
    double fnorm = 0.0;
};

/// tr and Frobenius norm of (I - QQ^T) log(A) (I - QQ^T).
/// Errors: "too-large", "bad-basis" if Q^T Q deviates from I by more than 1e-8.
ResidualTrace exact_residual_trace(const SpdOperator& op, const MatrixXd& q);
ResidualTrace exact_residual_trace(const MatrixXd& log_a, const MatrixXd& q);

} // namespace logdet
