#include "logdet/bounds.hpp"

#include "logdet/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace logdet {

namespace {

void check_probability(double x, const char* name) {
    if (!(x > 0.0 && x < 1.0)) throw Error("bad-config", std::string(name) + " must lie in (0, 1)");
}

std::int64_t at_least_one(double raw) { return std::max<std::int64_t>(1, ceil_count(raw)); }

} // namespace

std::string_view to_string(BoundMethod m) {
    switch (m) {
    case BoundMethod::pcps: return "pcps";
    case BoundMethod::no_pcps: return "no-pcps";
    case BoundMethod::ubaru: return "ubaru";
    case BoundMethod::cortinovis: return "cortinovis";
    }
    return "unknown";
}

std::optional<BoundMethod> parse_bound_method(std::string_view s) {
    if (s == "pcps") return BoundMethod::pcps;
    if (s == "no-pcps") return BoundMethod::no_pcps;
    if (s == "ubaru") return BoundMethod::ubaru;
    if (s == "cortinovis") return BoundMethod::cortinovis;
    return std::nullopt;
}

std::int64_t ceil_count(double x) {
    if (std::isnan(x) || x >= 9.0e18) return kSaturated;
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-12 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::ceil(x));
}

SpectralConstants spectral_constants(double lambda_min, double lambda_max, Index n) {
    if (n < 1) throw Error("bad-config", "n must be positive");
    if (!(lambda_min >= 1.0)) throw Error("bad-config", "lambda_min must be at least 1");
    if (lambda_max == lambda_min)
        throw Error("degenerate-spectrum", "lambda_max equals lambda_min; use the single-eigenvalue path");
    if (!(lambda_max > lambda_min)) throw Error("bad-config", "lambda_max must exceed lambda_min");

    SpectralConstants out;
    out.lambda_min = lambda_min;
    out.lambda_max = lambda_max;
    out.n = n;
    out.kappa = lambda_max / lambda_min;
    out.rho = (lambda_max + std::sqrt(2.0 * lambda_max * lambda_min - lambda_min * lambda_min)) /
              (lambda_max - lambda_min);
    out.m_rho = std::abs(std::log(lambda_min / 2.0)) + std::numbers::pi;
    out.c = static_cast<double>(n - 1) * std::log(lambda_min) + std::log(lambda_max);
    if (!(out.c > 0.0)) throw Error("bad-spectrum", "C = (n-1) log(lambda_min) + log(lambda_max) must be positive");
    out.c_rho = 4.0 * out.m_rho / (out.c * (out.rho * out.rho - out.rho));
    return out;
}

double ParameterSet::first_part_mvm() const {
    switch (method) {
    case BoundMethod::pcps:
        return static_cast<double>(q) + static_cast<double>(k) * static_cast<double>(m_prime);
    case BoundMethod::no_pcps:
        return static_cast<double>(q) * (1.0 + static_cast<double>(m_prime));
    default:
        return 0.0;
    }
}

double ParameterSet::total_mvm() const {
    return first_part_mvm() + static_cast<double>(n_queries) * static_cast<double>(m);
}

double hutchinson_query_bound(double epsilon, double delta) {
    const double root = 1.0 + std::sqrt(1.0 + 4.0 * epsilon * std::sqrt(delta));
    return root * root / (2.0 * epsilon * epsilon * delta);
}

double lanczos_steps_bound(double count, double tolerance, const SpectralConstants& consts) {
    return 0.5 * std::log(count * consts.c_rho / tolerance) / std::log(consts.rho);
}

double oversampling_bound(std::int64_t k, double delta) {
    const double denominator = static_cast<double>(k) * delta * delta - 64.0;
    if (!(denominator > 0.0)) throw Error("bad-config", "oversampling needs k * delta^2 > 64");
    return 1.0 + 64.0 * static_cast<double>(k) / denominator;
}

ParameterSet pcps_parameter_set(double epsilon, double delta, Index n, const SpectralConstants& consts) {
    check_probability(epsilon, "epsilon");
    check_probability(delta, "delta");
    ParameterSet out;
    out.method = BoundMethod::pcps;
    out.epsilon = epsilon;
    out.delta = delta;
    out.n = n;
    out.lambda_min = consts.lambda_min;
    out.lambda_max = consts.lambda_max;

    out.raw.k = 16.0 * (1.0 + epsilon) / (1.0 - epsilon);
    out.k = at_least_one(out.raw.k);
    out.raw.q = 288.0 * static_cast<double>(out.k) / (epsilon * epsilon * delta);
    out.q = at_least_one(out.raw.q);
    out.raw.n_queries = hutchinson_query_bound(epsilon, delta);
    out.n_queries = at_least_one(out.raw.n_queries);
    out.raw.m = lanczos_steps_bound(4.0 * static_cast<double>(n), epsilon, consts);
    out.m = at_least_one(out.raw.m);
    out.raw.m_prime = lanczos_steps_bound(2.0 * static_cast<double>(out.k), epsilon, consts);
    out.m_prime = at_least_one(out.raw.m_prime);
    return out;
}

ParameterSet no_pcps_parameter_set(double epsilon, double delta, Index n, const SpectralConstants& consts) {
    ParameterSet out = pcps_parameter_set(epsilon, delta, n, consts);
    out.method = BoundMethod::no_pcps;

    const double threshold = 64.0 / (delta * delta);
    const double nearest = std::round(threshold);
    const bool integral = std::abs(threshold - nearest) <= 1e-12 * threshold;
    out.raw.k = threshold;
    out.k = static_cast<std::int64_t>(integral ? nearest : std::floor(threshold)) + 1;

    const double p_raw = oversampling_bound(out.k, delta);
    out.p = at_least_one(p_raw);
    out.raw.q = static_cast<double>(out.k) + p_raw;
    out.q = out.p == kSaturated ? kSaturated : out.k + out.p;
    out.raw.m_prime = lanczos_steps_bound(2.0 * static_cast<double>(out.q), epsilon, consts);
    out.m_prime = at_least_one(out.raw.m_prime);
    out.impractical = static_cast<double>(out.q) > 1e4;
    return out;
}

ParameterSet practical_parameter_set(double epsilon, double delta, Index n, const SpectralConstants& consts) {
    ParameterSet out = pcps_parameter_set(epsilon, delta, n, consts);
    out.q = 3 * out.k;
    out.raw.q = static_cast<double>(out.q);
    return out;
}

CountBound loose_q_bound(double epsilon, double delta, std::int64_t k) {
    check_probability(epsilon, "epsilon");
    check_probability(delta, "delta");
    if (k < 1) throw Error("bad-config", "k must be positive");
    CountBound out;
    // evaluate in log space so large k does not overflow before the check
    const double log_raw = std::log(1152.0 * std::numbers::e / (epsilon * epsilon * delta)) +
                           static_cast<double>(k) * std::log(9.0);
    out.raw = std::exp(log_raw);
    out.value = ceil_count(out.raw);
    out.saturated = out.value == kSaturated;
    return out;
}

double hutchinson_tail(double epsilon, double stable_rank) {
    if (!(epsilon > 0.0)) throw Error("bad-config", "epsilon must be positive");
    const double root = std::sqrt(2.0) + 2.0 / std::sqrt(stable_rank);
    return std::min(1.0, root * root / (epsilon * epsilon));
}

BaselineBounds baseline_bounds(BoundMethod method, double epsilon, double delta, Index n, double kappa,
                               double tr_fa) {
    check_probability(epsilon, "epsilon");
    check_probability(delta, "delta");
    if (!(kappa > 1.0)) throw Error("degenerate-spectrum", "baseline bounds need kappa > 1");
    if (!(tr_fa > 0.0)) throw Error("bad-config", "tr(log A) must be positive");

    const double nd = static_cast<double>(n);
    const double scaled = epsilon * tr_fa;
    const double log_two_over_delta = std::log(2.0 / delta);
    BaselineBounds out;
    switch (method) {
    case BoundMethod::ubaru: {
        const double l = std::log(1.0 + kappa);
        out.raw_n_queries = 24.0 * nd * nd * l * l * log_two_over_delta / (scaled * scaled);
        out.raw_m = std::sqrt(3.0 * kappa) / 4.0 *
                    std::log(5.0 * kappa * nd * std::log(2.0 * kappa + 2.0) /
                             (scaled * std::sqrt(2.0 * kappa + 1.0)));
        break;
    }
    case BoundMethod::cortinovis: {
        const double l = std::log(kappa);
        out.raw_n_queries = 8.0 * (nd * l * l + 2.0 * scaled * l) * log_two_over_delta / (scaled * scaled);
        out.raw_m = std::sqrt(kappa + 1.0) / 4.0 *
                    std::log(4.0 * nd * (std::sqrt(kappa + 1.0) + 1.0) * std::log(2.0 * kappa) / scaled);
        break;
    }
    default:
        throw Error("bad-config", "baseline_bounds supports ubaru and cortinovis only");
    }
    out.n_queries = at_least_one(out.raw_n_queries);
    out.m = at_least_one(out.raw_m);
    return out;
}

} // namespace logdet
