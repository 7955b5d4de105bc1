#include "logdet/estimator.hpp"

#include "logdet/error.hpp"
#include "logdet/lanczos.hpp"
#include "logdet/parallel.hpp"
#include "logdet/random.hpp"
#include "logdet/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace logdet {

namespace {

// Forwards to a shared operator while keeping a private MVM tally, so
// concurrent estimates on one operator report their own counts.
class TallyView final : public SpdOperator {
public:
    explicit TallyView(const SpdOperator& base) : SpdOperator(base.n()), base_(base) {}
    MatrixXd to_dense() const override { return base_.to_dense(); }
    std::optional<double> structural_lower_bound() const override { return base_.structural_lower_bound(); }
    std::string_view kind() const override { return base_.kind(); }

protected:
    void apply_impl(const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) const override {
        base_.apply(v, out);
    }

private:
    const SpdOperator& base_;
};

} // namespace

std::string_view to_string(EstimatorVariant v) {
    switch (v) {
    case EstimatorVariant::pcps: return "pcps";
    case EstimatorVariant::no_pcps: return "no-pcps";
    case EstimatorVariant::plain_slq: return "plain-slq";
    }
    return "unknown";
}

std::optional<EstimatorVariant> parse_estimator_variant(std::string_view s) {
    if (s == "pcps") return EstimatorVariant::pcps;
    if (s == "no-pcps") return EstimatorVariant::no_pcps;
    if (s == "plain-slq") return EstimatorVariant::plain_slq;
    return std::nullopt;
}

void EstimatorParams::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("bad-config", "epsilon must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw Error("bad-config", "delta must lie in (0, 1)");
    if (n_queries < 1 || m < 1 || m_prime < 1 || sketch_steps < 1)
        throw Error("bad-config", "N, m, m' and sketch_steps must be at least 1");
    if (variant == EstimatorVariant::plain_slq) return;
    if (k < 1 || q < 1) throw Error("bad-config", "k and q must be at least 1");
    if (variant == EstimatorVariant::pcps && k > q) throw Error("bad-config", "k must not exceed q");
    if (variant == EstimatorVariant::no_pcps && q <= k) throw Error("bad-config", "q = k + p needs p >= 1");
}

EstimatorParams params_from_bounds(const ParameterSet& set, std::uint64_t seed, int threads) {
    auto narrow = [](std::int64_t v, const char* what) {
        if (v > std::numeric_limits<int>::max()) throw Error("bad-config", std::string(what) + " is too large");
        return static_cast<int>(v);
    };
    EstimatorParams p;
    p.epsilon = set.epsilon;
    p.delta = set.delta;
    p.k = static_cast<Index>(set.k);
    p.q = static_cast<Index>(set.q);
    p.n_queries = set.n_queries;
    p.m = narrow(set.m, "m");
    p.m_prime = narrow(set.m_prime, "m'");
    p.sketch_steps = p.m_prime;
    p.seed = seed;
    p.threads = threads;
    switch (set.method) {
    case BoundMethod::pcps: p.variant = EstimatorVariant::pcps; break;
    case BoundMethod::no_pcps: p.variant = EstimatorVariant::no_pcps; break;
    default: p.variant = EstimatorVariant::plain_slq; break;
    }
    return p;
}

FirstPartResult first_part(const SpdOperator& op, const MatrixXd& q, int m_prime, int threads) {
    if (m_prime < 1) throw Error("bad-config", "m' must be at least 1");
    const auto k = static_cast<std::size_t>(q.cols());
    std::vector<double> values(k, 0.0);
    std::vector<int> steps(k, 0);
    parallel_for(k, threads, [&](std::size_t i) {
        const JacobiMatrix t = lanczos(op, q.col(static_cast<Index>(i)), m_prime + 1);
        steps[i] = t.actual_steps();
        values[i] = quadrature_eval(quadrature_rule(t), log_function);
    });
    FirstPartResult out;
    for (std::size_t i = 0; i < k; ++i) {
        out.value += values[i];
        out.steps += static_cast<std::uint64_t>(steps[i]);
    }
    return out;
}

SecondPartResult second_part(const SpdOperator& op, const MatrixXd& q, std::int64_t n_queries, int m,
                             std::uint64_t seed, int threads) {
    if (n_queries < 1 || m < 1) throw Error("bad-config", "N and m must be at least 1");
    const Index n = op.n();
    if (q.cols() > 0 && q.rows() != n) throw Error("dimension", "basis rows do not match operator");
    const double zero_threshold = 1e-12 * static_cast<double>(n);

    SecondPartResult out;
    out.per_query.resize(static_cast<std::size_t>(n_queries));
    parallel_for(out.per_query.size(), threads, [&](std::size_t i) {
        KeyedRng rng(seed, Stream::queries, static_cast<std::uint64_t>(i));
        VectorXd w(n);
        for (Index j = 0; j < n; ++j) w[j] = rng.rademacher();
        if (q.cols() > 0) w.noalias() -= q * (q.transpose() * w);
        QueryRecord& record = out.per_query[i];
        record.residual_norm_sq = w.squaredNorm();
        if (record.residual_norm_sq <= zero_threshold) {
            record.residual_norm_sq = 0.0;
            return;
        }
        w /= std::sqrt(record.residual_norm_sq);
        const JacobiMatrix t = lanczos(op, w, m + 1);
        record.steps = t.actual_steps();
        record.quadrature = quadrature_eval(quadrature_rule(t), log_function);
    });

    double sum = 0.0;
    for (const QueryRecord& r : out.per_query) {
        sum += r.residual_norm_sq * r.quadrature;
        out.steps += static_cast<std::uint64_t>(r.steps);
    }
    out.value = sum / static_cast<double>(n_queries);
    return out;
}

double plain_hutchinson_slq(const SpdOperator& op, std::int64_t n_queries, int m, std::uint64_t seed, int threads) {
    return second_part(op, MatrixXd(op.n(), 0), n_queries, m, seed, threads).value;
}

EstimateReport estimate_logdet(const SpdOperator& shared, const SpectralBounds& bounds, const EstimatorParams& params) {
    params.validate();
    const TallyView op(shared);
    if (!(bounds.lambda_min >= 1.0))
        throw Error("bad-config", "lambda_min must be at least 1; rescale with shift_to_unit_min first");

    const Index n = op.n();
    const std::uint64_t start_count = op.mvm_count();
    EstimateReport report;
    report.variant = params.variant;
    report.seed = params.seed;
    report.k_requested = params.variant == EstimatorVariant::plain_slq ? 0 : params.k;
    report.q_requested = params.variant == EstimatorVariant::plain_slq ? 0 : params.q;

    MatrixXd basis(n, 0);
    if (params.variant != EstimatorVariant::plain_slq) {
        Index q_used = params.q;
        Index k = params.k;
        if (q_used > n) {
            q_used = n;
            report.warnings.push_back("q capped from " + std::to_string(params.q) + " to n = " + std::to_string(n));
        }
        k = std::min(k, q_used);
        report.q_used = q_used;

        const bool pcps = params.variant == EstimatorVariant::pcps;
        const SketchMatrix s = gaussian_sketch(n, q_used, pcps ? SketchScale::inverse_sqrt_q : SketchScale::unit_variance,
                                               params.seed);
        const MatrixXd y = sketch_log(op, s.entries, params.sketch_steps, params.threads);
        report.mvm_sketch = op.mvm_count() - start_count;
        const double floor = sketch_zero_floor(s.entries);
        SketchBasis sb = pcps ? basis_from_sketch_topk(y, k, true, floor) : basis_from_sketch_qr(y, k, true, floor);
        report.achieved_rank = sb.achieved_rank;
        if (sb.achieved_rank < k) {
            report.warnings.push_back("rank-deficient: achieved rank " + std::to_string(sb.achieved_rank) +
                                      " < k = " + std::to_string(k) + "; k shrunk");
        }
        basis = std::move(sb.columns);
    }

    const std::uint64_t before_first = op.mvm_count();
    const FirstPartResult fp = first_part(op, basis, params.m_prime, params.threads);
    report.first_part = fp.value;
    report.mvm_first_part = op.mvm_count() - before_first;

    const std::uint64_t before_second = op.mvm_count();
    SecondPartResult sp = second_part(op, basis, params.n_queries, params.m, params.seed, params.threads);
    report.second_part = sp.value;
    report.per_query = std::move(sp.per_query);
    report.mvm_second_part = op.mvm_count() - before_second;

    report.gamma = report.first_part + report.second_part + report.offset;
    report.mvm_actual = op.mvm_count() - start_count;

    const double kq = static_cast<double>(basis.cols());
    const double nm = static_cast<double>(params.n_queries) * static_cast<double>(params.m);
    switch (params.variant) {
    case EstimatorVariant::pcps:
        report.mvm_nominal = static_cast<double>(report.q_used) + kq * params.m_prime + nm;
        break;
    case EstimatorVariant::no_pcps:
        report.mvm_nominal = static_cast<double>(report.q_used) * (1.0 + params.m_prime) + nm;
        break;
    case EstimatorVariant::plain_slq:
        report.mvm_nominal = nm;
        break;
    }
    return report;
}

EstimateReport estimate_logdet_scaled(const OperatorPtr& op, const SpectralBounds& bounds,
                                      const EstimatorParams& params) {
    if (bounds.lambda_min >= 1.0) return estimate_logdet(*op, bounds, params);
    auto [scaled, offset] = shift_to_unit_min(op, bounds.lambda_min);
    SpectralBounds unit = bounds;
    unit.lambda_max = bounds.lambda_max / bounds.lambda_min;
    unit.lambda_min = 1.0;
    EstimateReport report = estimate_logdet(*scaled, unit, params);
    report.offset = offset;
    report.gamma = report.first_part + report.second_part + report.offset;
    report.warnings.push_back("operator rescaled by lambda_min = " + std::to_string(bounds.lambda_min));
    return report;
}

} // namespace logdet
