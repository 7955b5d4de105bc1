#pragma once

#include "logdet/error.hpp"
#include "logdet/operator.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace logdet {

/// Symmetric tridiagonal output of the Lanczos recurrence.
struct JacobiMatrix {
    std::vector<double> alpha;  // diagonal, length actual_steps
    std::vector<double> beta;   // off-diagonal, length actual_steps - 1, all > 0
    int requested_steps = 0;

    int actual_steps() const noexcept { return static_cast<int>(alpha.size()); }
    bool broke_down() const noexcept { return actual_steps() < requested_steps; }
};

struct LanczosDecomposition {
    JacobiMatrix jacobi;
    MatrixXd basis;  // n x actual_steps, orthonormal columns
};

/// Gauss rule: nodes ascending, weights are squared first eigenvector components.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

using ScalarFunction = std::function<double(double)>;

/**
 * Lanczos tridiagonalization with full reorthogonalization.
 *
 * Consumes one MVM per step. The recurrence stops early when the next beta
 * falls below 1e-12 times the largest ||A v_j|| seen so far; the truncated
 * Jacobi matrix is then exact on the invariant subspace reached.
 *
 * Errors: "bad-vector" if ||v|| deviates from 1 by more than 1e-10,
 * "bad-config" if steps < 1.
 */
JacobiMatrix lanczos(const SpdOperator& op, const Eigen::Ref<const VectorXd>& v, int steps);

/// Same recurrence, keeping the orthonormal Krylov basis.
LanczosDecomposition lanczos_with_basis(const SpdOperator& op, const Eigen::Ref<const VectorXd>& v, int steps);

/// Eigenvalues (ascending) and first eigenvector components of a Jacobi matrix,
/// by implicit QL with Wilkinson shifts. Throws Error("eig-fail") if QL stalls.
void tridiagonal_eigen_first_row(const JacobiMatrix& t, std::vector<double>& eigenvalues,
                                 std::vector<double>& first_components);

QuadratureRule quadrature_rule(const JacobiMatrix& t);

/// sum_k weights[k] * f(nodes[k]). Throws Error("domain") if f is not finite at a node.
double quadrature_eval(const QuadratureRule& rule, const ScalarFunction& f);

/// ||v|| * V f(T) e_1 from `steps` Lanczos steps started at v / ||v||.
/// Errors: "bad-vector" for v == 0, "domain" if f is not finite on the Ritz values.
VectorXd matfun_apply(const SpdOperator& op, const Eigen::Ref<const VectorXd>& v, const ScalarFunction& f,
                      int steps);

/// Natural log, the integrand used throughout.
inline double log_function(double x) { return std::log(x); }

} // namespace logdet
