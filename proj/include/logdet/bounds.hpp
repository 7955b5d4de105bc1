#pragma once

#include "logdet/operator.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

namespace logdet {

/// Parameter-selection families: the deflated estimator with and without the
/// projection-cost-preserving sketch analysis, and two plain-SLQ baselines.
enum class BoundMethod { pcps, no_pcps, ubaru, cortinovis };

std::string_view to_string(BoundMethod m);
std::optional<BoundMethod> parse_bound_method(std::string_view s);

inline constexpr std::int64_t kSaturated = std::numeric_limits<std::int64_t>::max();

/// Ceiling that ignores round-off within 1e-12 relative of an integer and
/// saturates at kSaturated for non-finite or huge inputs.
std::int64_t ceil_count(double x);

/// Constants of the Lanczos-quadrature error bound for f = log on [lambda_min, lambda_max].
struct SpectralConstants {
    double rho = 0.0;     // Bernstein ellipse parameter, > 1
    double m_rho = 0.0;   // bound on |log| over the ellipse
    double c = 0.0;       // (n-1) log(lambda_min) + log(lambda_max), a lower bound on tr(log A)
    double c_rho = 0.0;   // 4 m_rho / (c (rho^2 - rho))
    double kappa = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    Index n = 0;
};

/// Errors: "degenerate-spectrum" when lambda_max == lambda_min, "bad-spectrum"
/// when C <= 0, "bad-config" for lambda_min < 1 or lambda_max < lambda_min.
SpectralConstants spectral_constants(double lambda_min, double lambda_max, Index n);

/// Real-valued bounds before the ceiling; kept for plotting.
struct RawBounds {
    double k = 0.0;
    double q = 0.0;
    double n_queries = 0.0;
    double m = 0.0;
    double m_prime = 0.0;
};

struct ParameterSet {
    BoundMethod method = BoundMethod::pcps;
    double epsilon = 0.0;
    double delta = 0.0;
    Index n = 0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;

    std::int64_t k = 0;
    std::int64_t q = 0;  // sketch columns; k + p for no_pcps
    std::int64_t p = 0;  // oversampling, no_pcps only
    std::int64_t n_queries = 0;
    std::int64_t m = 0;
    std::int64_t m_prime = 0;
    RawBounds raw;
    bool impractical = false;  // k + p above 1e4 (no_pcps)

    /// Nominal MVMs for the deflation part: q + k m' (pcps) or (k+p)(1+m') (no_pcps).
    double first_part_mvm() const;
    /// First part plus N m for the stochastic part.
    double total_mvm() const;
};

/// Rademacher query bound (1 + sqrt(1 + 4 eps sqrt(delta)))^2 / (2 eps^2 delta).
double hutchinson_query_bound(double epsilon, double delta);

/// 0.5 log(count * c_rho / tolerance) / log(rho); count = 4n for the residual
/// part and 2k for the projected part.
double lanczos_steps_bound(double count, double tolerance, const SpectralConstants& consts);

/// Oversampling p >= 1 + 64k / (k delta^2 - 64). Throws Error("bad-config")
/// unless k delta^2 > 64.
double oversampling_bound(std::int64_t k, double delta);

ParameterSet pcps_parameter_set(double epsilon, double delta, Index n, const SpectralConstants& consts);

/// k is the smallest integer strictly above 64/delta^2; p, m' follow from it.
ParameterSet no_pcps_parameter_set(double epsilon, double delta, Index n, const SpectralConstants& consts);

/// pcps set with q replaced by 3k.
ParameterSet practical_parameter_set(double epsilon, double delta, Index n, const SpectralConstants& consts);

struct CountBound {
    std::int64_t value = 0;
    double raw = 0.0;
    bool saturated = false;
};

/// ceil(1152 e 9^k / (eps^2 delta)), saturating.
CountBound loose_q_bound(double epsilon, double delta, std::int64_t k);

/// Single-query tail min(1, (sqrt 2 + 2/sqrt(sr))^2 / eps^2).
double hutchinson_tail(double epsilon, double stable_rank);

struct BaselineBounds {
    std::int64_t n_queries = 0;
    std::int64_t m = 0;
    double raw_n_queries = 0.0;
    double raw_m = 0.0;
};

/// Plain SLQ query/step bounds. Errors: "degenerate-spectrum" for kappa <= 1,
/// "bad-config" for tr_fa <= 0 or a non-baseline method.
BaselineBounds baseline_bounds(BoundMethod method, double epsilon, double delta, Index n, double kappa,
                               double tr_fa);

} // namespace logdet
