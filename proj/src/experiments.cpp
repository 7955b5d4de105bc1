#include "logdet/experiments.hpp"

#include "logdet/error.hpp"
#include "logdet/oracle.hpp"
#include "logdet/parallel.hpp"
#include "logdet/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace logdet {

std::vector<double> SweepConfig::default_epsilon_grid() {
    constexpr int points = 40;
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) grid[i] = 0.01 + (0.2 - 0.01) * i / (points - 1);
    return grid;
}

void SweepConfig::validate() const {
    if (epsilon_grid.empty()) throw Error("bad-config", "epsilon grid is empty");
    for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
        if (!(epsilon_grid[i] > 0.0 && epsilon_grid[i] < 1.0))
            throw Error("bad-config", "epsilon grid values must lie in (0, 1)");
        if (i > 0 && !(epsilon_grid[i] > epsilon_grid[i - 1]))
            throw Error("bad-config", "epsilon grid must be strictly increasing");
    }
    if (!(delta > 0.0 && delta < 1.0)) throw Error("bad-config", "delta must lie in (0, 1)");
    if (methods.empty()) throw Error("bad-config", "no methods requested");
    if (trials < 1) throw Error("bad-config", "trials must be at least 1");
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> columns = {
        "method",      "epsilon",    "delta",     "k",         "q_or_kp",      "N",           "m",
        "m_prime",     "mvm_nominal", "mvm_actual", "gamma_mean", "gamma_p10", "gamma_p90", "success_rate",
        "oracle_value"};
    return columns;
}

std::vector<SweepRow> run_bound_sweep(const SweepConfig& config, const SpectralConstants& consts, Index n) {
    config.validate();
    const bool needs_trace = std::any_of(config.methods.begin(), config.methods.end(), [](BoundMethod m) {
        return m == BoundMethod::ubaru || m == BoundMethod::cortinovis;
    });
    if (needs_trace && !config.tr_fa)
        throw Error("missing-spectral-data", "baseline bounds need tr(log A) and kappa");

    std::vector<SweepRow> rows;
    rows.reserve(config.methods.size() * config.epsilon_grid.size());
    for (BoundMethod method : config.methods) {
        for (double eps : config.epsilon_grid) {
            SweepRow row;
            row.method = std::string(to_string(method));
            row.epsilon = eps;
            row.delta = config.delta;
            if (method == BoundMethod::pcps || method == BoundMethod::no_pcps) {
                const ParameterSet set = method == BoundMethod::pcps ? pcps_parameter_set(eps, config.delta, n, consts)
                                                                     : no_pcps_parameter_set(eps, config.delta, n, consts);
                row.k = set.k;
                row.q_or_kp = set.q;
                row.n_queries = set.n_queries;
                row.m = set.m;
                row.m_prime = set.m_prime;
                row.mvm_nominal = set.total_mvm();
            } else {
                const BaselineBounds b = baseline_bounds(method, eps, config.delta, n, consts.kappa, *config.tr_fa);
                row.n_queries = b.n_queries;
                row.m = b.m;
                row.mvm_nominal = static_cast<double>(b.n_queries) * static_cast<double>(b.m);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

double nearest_rank_percentile(std::vector<double> sample, double p) {
    if (sample.empty()) throw Error("bad-config", "percentile of an empty sample");
    if (!(p > 0.0 && p <= 100.0)) throw Error("bad-config", "percentile must lie in (0, 100]");
    std::sort(sample.begin(), sample.end());
    auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(sample.size())));
    rank = std::clamp<std::size_t>(rank, 1, sample.size());
    return sample[rank - 1];
}

bool within_tolerance(double gamma, double oracle, double epsilon) {
    if (oracle == 0.0) return std::abs(gamma) <= epsilon;
    return std::abs(gamma - oracle) <= epsilon * std::abs(oracle);
}

ValidationResult run_validation(const SweepConfig& config, const OperatorPtr& op, const SpectralBounds& bounds,
                                const EstimatorParams& params) {
    if (config.trials < 1) throw Error("bad-config", "trials must be at least 1");
    const double oracle = dense_logdet(*op);

    const auto trials = static_cast<std::size_t>(config.trials);
    ValidationResult result;
    result.gammas.resize(trials);
    result.mvm_actual.resize(trials);
    std::vector<double> nominal(trials);
    parallel_for(trials, config.threads, [&](std::size_t t) {
        EstimatorParams trial = params;
        trial.seed = config.seed + 1 + t;
        trial.threads = 1;
        const EstimateReport report = estimate_logdet_scaled(op, bounds, trial);
        result.gammas[t] = report.gamma;
        result.mvm_actual[t] = report.mvm_actual;
        nominal[t] = report.mvm_nominal;
    });

    SweepRow& row = result.row;
    row.method = std::string(to_string(params.variant));
    row.epsilon = params.epsilon;
    row.delta = params.delta;
    if (params.variant != EstimatorVariant::plain_slq) {
        row.k = params.k;
        row.q_or_kp = params.q;
        row.m_prime = params.m_prime;
    }
    row.n_queries = params.n_queries;
    row.m = params.m;
    row.mvm_nominal = nominal.front();
    const double mvm_sum = std::accumulate(result.mvm_actual.begin(), result.mvm_actual.end(), 0.0,
                                           [](double acc, std::uint64_t v) { return acc + static_cast<double>(v); });
    row.mvm_actual = mvm_sum / static_cast<double>(trials);
    row.gamma_mean = std::accumulate(result.gammas.begin(), result.gammas.end(), 0.0) / static_cast<double>(trials);
    row.gamma_p10 = nearest_rank_percentile(result.gammas, 10.0);
    row.gamma_p90 = nearest_rank_percentile(result.gammas, 90.0);
    const auto successes = std::count_if(result.gammas.begin(), result.gammas.end(),
                                         [&](double g) { return within_tolerance(g, oracle, params.epsilon); });
    row.success_rate = static_cast<double>(successes) / static_cast<double>(trials);
    row.oracle_value = oracle;
    return result;
}

namespace {

template <class T>
std::string cell(const std::optional<T>& v) {
    if (!v) return {};
    if constexpr (std::is_floating_point_v<T>) return format_double(*v);
    else return std::to_string(*v);
}

template <class T>
nlohmann::ordered_json json_cell(const std::optional<T>& v) {
    if (!v) return nullptr;
    return *v;
}

} // namespace

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    const auto& columns = sweep_columns();
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const SweepRow& r : rows) {
        out << r.method << ',' << format_double(r.epsilon) << ',' << format_double(r.delta) << ',' << cell(r.k) << ','
            << cell(r.q_or_kp) << ',' << cell(r.n_queries) << ',' << cell(r.m) << ',' << cell(r.m_prime) << ','
            << cell(r.mvm_nominal) << ',' << cell(r.mvm_actual) << ',' << cell(r.gamma_mean) << ','
            << cell(r.gamma_p10) << ',' << cell(r.gamma_p90) << ',' << cell(r.success_rate) << ','
            << cell(r.oracle_value) << '\n';
    }
}

void write_json(std::ostream& out, const std::vector<SweepRow>& rows) {
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const SweepRow& r : rows) {
        nlohmann::ordered_json j;
        j["method"] = r.method;
        j["epsilon"] = r.epsilon;
        j["delta"] = r.delta;
        j["k"] = json_cell(r.k);
        j["q_or_kp"] = json_cell(r.q_or_kp);
        j["N"] = json_cell(r.n_queries);
        j["m"] = json_cell(r.m);
        j["m_prime"] = json_cell(r.m_prime);
        j["mvm_nominal"] = json_cell(r.mvm_nominal);
        j["mvm_actual"] = json_cell(r.mvm_actual);
        j["gamma_mean"] = json_cell(r.gamma_mean);
        j["gamma_p10"] = json_cell(r.gamma_p10);
        j["gamma_p90"] = json_cell(r.gamma_p90);
        j["success_rate"] = json_cell(r.success_rate);
        j["oracle_value"] = json_cell(r.oracle_value);
        array.push_back(std::move(j));
    }
    out << array.dump(2) << '\n';
}

} // namespace logdet
