#include "logdet/lanczos.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <numeric>

namespace logdet {

namespace {

constexpr double kUnitTolerance = 1e-10;
constexpr double kBreakdownTolerance = 1e-12;
constexpr int kMaxQlIterations = 60;

LanczosDecomposition run_lanczos(const SpdOperator& op, const Eigen::Ref<const VectorXd>& v, int steps) {
    if (steps < 1) throw Error("bad-config", "Lanczos needs at least one step");
    if (v.size() != op.n()) throw Error("dimension", "start vector length does not match operator");
    const double norm = v.norm();
    if (!(std::abs(norm - 1.0) <= kUnitTolerance)) throw Error("bad-vector", "start vector must have unit norm");

    const Index n = op.n();
    const Index max_steps = std::min<Index>(steps, n);

    LanczosDecomposition out;
    out.jacobi.requested_steps = steps;
    out.jacobi.alpha.reserve(static_cast<std::size_t>(max_steps));
    out.jacobi.beta.reserve(static_cast<std::size_t>(max_steps));
    MatrixXd& basis = out.basis;
    basis.resize(n, max_steps);
    basis.col(0) = v;

    VectorXd w(n);
    VectorXd h;
    double scale = 0.0;
    double beta_prev = 0.0;
    Index built = 0;
    for (Index j = 0; j < steps; ++j) {
        op.apply(basis.col(j), w);
        ++built;
        scale = std::max(scale, w.norm());
        if (j > 0) w.noalias() -= beta_prev * basis.col(j - 1);
        const double alpha = basis.col(j).dot(w);
        w.noalias() -= alpha * basis.col(j);
        out.jacobi.alpha.push_back(alpha);
        if (j + 1 == steps) break;

        // full reorthogonalization, classical Gram-Schmidt repeated once if needed
        const auto previous = basis.leftCols(j + 1);
        for (int pass = 0; pass < 2; ++pass) {
            const double before = w.norm();
            h.noalias() = previous.transpose() * w;
            w.noalias() -= previous * h;
            if (w.norm() > 0.7071067811865476 * before) break;
        }

        const double beta = w.norm();
        if (beta <= kBreakdownTolerance * scale || j + 1 == n) break;
        out.jacobi.beta.push_back(beta);
        basis.col(j + 1) = w / beta;
        beta_prev = beta;
    }
    basis.conservativeResize(n, built);
    return out;
}

} // namespace

JacobiMatrix lanczos(const SpdOperator& op, const Eigen::Ref<const VectorXd>& v, int steps) {
    return run_lanczos(op, v, steps).jacobi;
}

LanczosDecomposition lanczos_with_basis(const SpdOperator& op, const Eigen::Ref<const VectorXd>& v, int steps) {
    return run_lanczos(op, v, steps);
}

void tridiagonal_eigen_first_row(const JacobiMatrix& t, std::vector<double>& eigenvalues,
                                 std::vector<double>& first_components) {
    const int size = t.actual_steps();
    if (size < 1 || static_cast<int>(t.beta.size()) != size - 1)
        throw Error("eig-fail", "malformed Jacobi matrix");

    std::vector<double> d(t.alpha);
    std::vector<double> e(static_cast<std::size_t>(size), 0.0);
    std::copy(t.beta.begin(), t.beta.end(), e.begin());
    std::vector<double> z(static_cast<std::size_t>(size), 0.0);
    z[0] = 1.0;

    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < size; ++l) {
        int iterations = 0;
        int m = l;
        do {
            for (m = l; m < size - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iterations > kMaxQlIterations) throw Error("eig-fail", "implicit QL did not converge");

            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            int i = m - 1;
            bool underflow = false;
            for (; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                // first row of the accumulated rotations
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }

    std::vector<int> order(static_cast<std::size_t>(size));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
    eigenvalues.resize(static_cast<std::size_t>(size));
    first_components.resize(static_cast<std::size_t>(size));
    for (int k = 0; k < size; ++k) {
        eigenvalues[k] = d[order[k]];
        first_components[k] = z[order[k]];
    }
}

QuadratureRule quadrature_rule(const JacobiMatrix& t) {
    QuadratureRule rule;
    std::vector<double> first;
    tridiagonal_eigen_first_row(t, rule.nodes, first);
    rule.weights.resize(first.size());
    std::transform(first.begin(), first.end(), rule.weights.begin(), [](double c) { return c * c; });
    return rule;
}

double quadrature_eval(const QuadratureRule& rule, const ScalarFunction& f) {
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const double value = f(rule.nodes[k]);
        if (!std::isfinite(value))
            throw Error("domain", "integrand not finite at node " + std::to_string(rule.nodes[k]));
        sum += rule.weights[k] * value;
    }
    return sum;
}

VectorXd matfun_apply(const SpdOperator& op, const Eigen::Ref<const VectorXd>& v, const ScalarFunction& f,
                      int steps) {
    const double norm = v.norm();
    if (!(norm > 0.0)) throw Error("bad-vector", "matfun_apply needs a nonzero vector");
    const VectorXd start = v / norm;
    const LanczosDecomposition dec = run_lanczos(op, start, steps);
    const JacobiMatrix& t = dec.jacobi;
    const Index size = t.actual_steps();

    VectorXd coeff(size);
    if (size == 1) {
        coeff[0] = f(t.alpha[0]);
        if (!std::isfinite(coeff[0])) throw Error("domain", "integrand not finite at Ritz value");
    } else {
        Eigen::SelfAdjointEigenSolver<MatrixXd> solver;
        const VectorXd diag = Eigen::Map<const VectorXd>(t.alpha.data(), size);
        const VectorXd sub = Eigen::Map<const VectorXd>(t.beta.data(), size - 1);
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        if (solver.info() != Eigen::Success) throw Error("eig-fail", "tridiagonal eigensolver failed");
        VectorXd fvals(size);
        for (Index k = 0; k < size; ++k) {
            fvals[k] = f(solver.eigenvalues()[k]);
            if (!std::isfinite(fvals[k])) throw Error("domain", "integrand not finite at Ritz value");
        }
        const MatrixXd& y = solver.eigenvectors();
        coeff.noalias() = y * (fvals.array() * y.row(0).transpose().array()).matrix();
    }
    return norm * (dec.basis * coeff);
}

} // namespace logdet
