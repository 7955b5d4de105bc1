#pragma once

#include "logdet/bounds.hpp"
#include "logdet/operator.hpp"
#include "logdet/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logdet {

enum class EstimatorVariant { pcps, no_pcps, plain_slq };

std::string_view to_string(EstimatorVariant v);
std::optional<EstimatorVariant> parse_estimator_variant(std::string_view s);

/// Parameters of one estimator run. For no_pcps, q holds k + p.
struct EstimatorParams {
    double epsilon = 0.1;
    double delta = 0.1;
    Index k = 1;
    Index q = 1;
    std::int64_t n_queries = 1;
    int m = 1;
    int m_prime = 1;
    int sketch_steps = 1;
    std::uint64_t seed = 50;
    EstimatorVariant variant = EstimatorVariant::pcps;
    int threads = 1;

    /// Throws Error("bad-config") on out-of-range fields.
    void validate() const;
};

/// Copies k, q, N, m, m' from a bound set; sketch_steps defaults to m'.
EstimatorParams params_from_bounds(const ParameterSet& set, std::uint64_t seed, int threads = 1);

struct QueryRecord {
    double residual_norm_sq = 0.0;  // ||(I - QQ^T) z||^2
    double quadrature = 0.0;        // Gauss estimate of v^T log(A) v
    int steps = 0;                  // Lanczos steps actually taken
};

struct EstimateReport {
    double gamma = 0.0;
    double first_part = 0.0;
    double second_part = 0.0;
    double offset = 0.0;
    std::uint64_t mvm_actual = 0;
    double mvm_nominal = 0.0;
    std::uint64_t mvm_sketch = 0;
    std::uint64_t mvm_first_part = 0;
    std::uint64_t mvm_second_part = 0;
    std::vector<QueryRecord> per_query;
    Index k_requested = 0;
    Index achieved_rank = 0;
    Index q_requested = 0;
    Index q_used = 0;
    EstimatorVariant variant = EstimatorVariant::pcps;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

struct FirstPartResult {
    double value = 0.0;
    std::uint64_t steps = 0;
};

/// Sum over the columns q_i of the (m'+1)-point Gauss estimate of q_i^T log(A) q_i.
FirstPartResult first_part(const SpdOperator& op, const MatrixXd& q, int m_prime, int threads = 1);

struct SecondPartResult {
    double value = 0.0;
    std::vector<QueryRecord> per_query;
    std::uint64_t steps = 0;
};

/**
 * Hutchinson estimate of tr((I-QQ^T) log(A) (I-QQ^T)) with (m+1)-point Gauss
 * quadrature per query.
 *
 * Query i uses the Rademacher vector from the keyed stream (seed, queries, i).
 * A query whose projected residual has ||w||^2 <= 1e-12 n contributes 0.
 * Contributions are summed in query order whatever the thread count.
 */
SecondPartResult second_part(const SpdOperator& op, const MatrixXd& q, std::int64_t n_queries, int m,
                             std::uint64_t seed, int threads = 1);

/// Plain SLQ: second_part with no deflation.
double plain_hutchinson_slq(const SpdOperator& op, std::int64_t n_queries, int m, std::uint64_t seed,
                            int threads = 1);

/**
 * Deflated log-determinant estimate Gamma = first part + second part.
 *
 * Requires bounds.lambda_min >= 1 (Error "bad-config" otherwise). A sketch
 * with q > n is capped at n and the cap is recorded in warnings. Rank
 * deficiency shrinks k and is reported as a warning; "domain" errors abort.
 */
EstimateReport estimate_logdet(const SpdOperator& op, const SpectralBounds& bounds, const EstimatorParams& params);

/// estimate_logdet after rescaling by lambda_min when it is below 1; the
/// n log(lambda_min) offset is carried in the report and added to gamma.
EstimateReport estimate_logdet_scaled(const OperatorPtr& op, const SpectralBounds& bounds,
                                      const EstimatorParams& params);

} // namespace logdet
