#include "logdet/oracle.hpp"

#include "logdet/error.hpp"

#include <Eigen/Eigenvalues>

#include <cstdlib>
#include <string>

namespace logdet {

namespace {

void check_size(Index n) {
    if (n > dense_limit())
        throw Error("too-large", "n = " + std::to_string(n) + " exceeds dense limit " +
                                     std::to_string(dense_limit()));
}

} // namespace

Index dense_limit() {
    if (const char* env = std::getenv("LOGDET_DENSE_LIMIT")) {
        char* end = nullptr;
        const long long value = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) return static_cast<Index>(value);
    }
    return kDefaultDenseLimit;
}

DenseSpectrum dense_spectrum(const MatrixXd& a) {
    check_size(a.rows());
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw Error("eig-fail", "dense eigensolver failed");
    // Eigen returns ascending order
    DenseSpectrum out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

DenseSpectrum dense_spectrum(const SpdOperator& op) {
    check_size(op.n());
    return dense_spectrum(op.to_dense());
}

double dense_logdet(const SpdOperator& op) {
    const DenseSpectrum spectrum = dense_spectrum(op);
    double sum = 0.0;
    for (Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
        const double lambda = spectrum.eigenvalues[i];
        if (!(lambda > 0.0)) throw Error("not-pd", "eigenvalue " + std::to_string(lambda) + " is not positive");
        sum += std::log(lambda);
    }
    return sum;
}

MatrixXd dense_matrix_function(const DenseSpectrum& spectrum, const ScalarFunction& f) {
    const Index n = spectrum.eigenvalues.size();
    VectorXd fvals(n);
    for (Index i = 0; i < n; ++i) {
        fvals[i] = f(spectrum.eigenvalues[i]);
        if (!std::isfinite(fvals[i]))
            throw Error("domain", "function undefined at eigenvalue " + std::to_string(spectrum.eigenvalues[i]));
    }
    const MatrixXd& u = spectrum.eigenvectors;
    MatrixXd fa = u * fvals.asDiagonal() * u.transpose();
    return 0.5 * (fa + fa.transpose());
}

MatrixXd dense_matrix_function(const SpdOperator& op, const ScalarFunction& f) {
    return dense_matrix_function(dense_spectrum(op), f);
}

ResidualTrace exact_residual_trace(const MatrixXd& log_a, const MatrixXd& q) {
    const Index n = log_a.rows();
    check_size(n);
    if (q.cols() > 0 && q.rows() != n) throw Error("dimension", "basis rows do not match operator");
    if (q.cols() == 0) return {log_a.trace(), log_a.norm()};

    const MatrixXd gram = q.transpose() * q;
    const double deviation = (gram - MatrixXd::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
    if (deviation > 1e-8) throw Error("bad-basis", "basis columns are not orthonormal");

    // (I - QQ^T) F (I - QQ^T) with the projector applied on both sides
    MatrixXd left = log_a - q * (q.transpose() * log_a);
    MatrixXd delta = left - (left * q) * q.transpose();
    delta = (0.5 * (delta + delta.transpose())).eval();
    return {delta.trace(), delta.norm()};
}

ResidualTrace exact_residual_trace(const SpdOperator& op, const MatrixXd& q) {
    check_size(op.n());
    return exact_residual_trace(dense_matrix_function(op, log_function), q);
}

} // namespace logdet
