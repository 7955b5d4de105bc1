#pragma once

#include "logdet/bounds.hpp"
#include "logdet/estimator.hpp"
#include "logdet/operator.hpp"
#include "logdet/spectral.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace logdet {

struct SweepConfig {
    std::vector<double> epsilon_grid = default_epsilon_grid();
    double delta = 0.1;
    std::vector<BoundMethod> methods = {BoundMethod::pcps, BoundMethod::no_pcps};
    int trials = 1;
    std::uint64_t seed = 50;
    std::optional<double> tr_fa;  // tr(log A), needed by the baseline bounds
    int threads = 1;

    /// 40 points uniform on [0.01, 0.2].
    static std::vector<double> default_epsilon_grid();
    /// Throws Error("bad-config") for an empty, unsorted or out-of-range grid.
    void validate() const;
};

/// One CSV/JSON row. Execution fields are empty for bound-only rows.
struct SweepRow {
    std::string method;
    double epsilon = 0.0;
    double delta = 0.0;
    std::optional<std::int64_t> k;
    std::optional<std::int64_t> q_or_kp;
    std::optional<std::int64_t> n_queries;
    std::optional<std::int64_t> m;
    std::optional<std::int64_t> m_prime;
    std::optional<double> mvm_nominal;
    std::optional<double> mvm_actual;
    std::optional<double> gamma_mean;
    std::optional<double> gamma_p10;
    std::optional<double> gamma_p90;
    std::optional<double> success_rate;
    std::optional<double> oracle_value;
};

/// Column names in output order.
const std::vector<std::string>& sweep_columns();

/// All requested bound sets at every grid point, ordered by (method, epsilon).
/// Errors: "missing-spectral-data" when a baseline is requested without tr_fa.
std::vector<SweepRow> run_bound_sweep(const SweepConfig& config, const SpectralConstants& consts, Index n);

/// Nearest-rank percentile of an unsorted sample, p in (0, 100].
double nearest_rank_percentile(std::vector<double> sample, double p);

/// True when |gamma - oracle| <= eps |oracle|, or |gamma| <= eps when oracle == 0.
bool within_tolerance(double gamma, double oracle, double epsilon);

struct ValidationResult {
    SweepRow row;
    std::vector<double> gammas;
    std::vector<std::uint64_t> mvm_actual;
};

/**
 * Runs the estimator `config.trials` times with seeds config.seed + 1, ...
 * and compares against the dense oracle. Trials run on config.threads
 * workers; each trial is single-threaded so results do not depend on it.
 */
ValidationResult run_validation(const SweepConfig& config, const OperatorPtr& op, const SpectralBounds& bounds,
                                const EstimatorParams& params);

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_json(std::ostream& out, const std::vector<SweepRow>& rows);

} // namespace logdet
