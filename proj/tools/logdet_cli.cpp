#include "logdet/bounds.hpp"
#include "logdet/error.hpp"
#include "logdet/estimator.hpp"
#include "logdet/experiments.hpp"
#include "logdet/matrix_io.hpp"
#include "logdet/oracle.hpp"
#include "logdet/report_io.hpp"
#include "logdet/spectral.hpp"
#include "logdet/test_matrix.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace logdet;

namespace {

/// Bad flag combinations found after parsing; exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Shared {
    std::uint64_t seed = 50;
    std::string format;  // empty: the subcommand default
    std::string out;
    int threads = 1;
    bool verbose = false;
};

struct MatrixSource {
    bool gen_paper = false;
    bool gen_identity = false;
    std::string matrix_file;
    std::string factor_file;
    TestMatrixConfig gen;

    int count() const {
        return int(gen_paper) + int(gen_identity) + int(!matrix_file.empty()) + int(!factor_file.empty());
    }
};

struct Spectrum {
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
    int probe_steps = 50;
};

void add_generator_flags(CLI::App* cmd, MatrixSource& src, bool with_sources) {
    if (with_sources) {
        cmd->add_flag("--gen-paper", src.gen_paper, "Use the sparse low-rank-plus-identity test matrix");
        cmd->add_flag("--gen-identity", src.gen_identity, "Use the identity matrix of dimension --n");
        cmd->add_option("--matrix", src.matrix_file, "Matrix Market file (coordinate real symmetric)");
        cmd->add_option("--factors", src.factor_file, "Binary factor file written by gen-matrix");
    }
    cmd->add_option("--n", src.gen.n, "Dimension")->check(CLI::PositiveNumber);
    cmd->add_option("--heavy", src.gen.heavy_count, "Number of heavy rank-one terms")->check(CLI::NonNegativeNumber);
    cmd->add_option("--tail", src.gen.tail_count, "Number of tail rank-one terms")->check(CLI::NonNegativeNumber);
    cmd->add_option("--heavy-scale", src.gen.heavy_scale, "Heavy term scale");
    cmd->add_option("--tail-scale", src.gen.tail_scale, "Tail term scale");
    cmd->add_option("--density", src.gen.density, "Nonzero fraction per factor column");
}

void add_spectrum_flags(CLI::App* cmd, Spectrum& s) {
    cmd->add_option("--lambda-min", s.lambda_min, "Lower bound on the spectrum")->check(CLI::PositiveNumber);
    cmd->add_option("--lambda-max", s.lambda_max, "Upper bound on the spectrum")->check(CLI::PositiveNumber);
    cmd->add_option("--probe-steps", s.probe_steps, "Lanczos steps for spectral bound estimation")
        ->check(CLI::Range(2, 100000));
}

OperatorPtr load_operator(const MatrixSource& src, std::uint64_t seed) {
    if (src.count() != 1)
        throw UsageError("exactly one matrix source is required: --gen-paper, --gen-identity, --matrix or --factors");
    if (src.gen_identity) return std::make_shared<LowRankPlusIdentity>(src.gen.n);
    if (src.gen_paper) {
        TestMatrixConfig c = src.gen;
        c.seed = seed;
        return generate_test_matrix(c);
    }
    if (!src.matrix_file.empty()) return load_matrix_market(src.matrix_file);
    return read_factor_file(src.factor_file);
}

SpectralBounds resolve_bounds(const SpdOperator& op, const Spectrum& s, std::uint64_t seed, bool verbose) {
    SpectralBounds b;
    b.provenance = BoundsProvenance::user_supplied;
    if (s.lambda_min && s.lambda_max) {
        b.lambda_min = *s.lambda_min;
        b.lambda_max = *s.lambda_max;
    } else {
        const SpectralBounds est = estimate_spectral_bounds(op, s.probe_steps, seed);
        b.lambda_min = s.lambda_min ? *s.lambda_min : op.structural_lower_bound().value_or(est.lambda_min);
        b.lambda_max = s.lambda_max ? *s.lambda_max : est.lambda_max;
        b.provenance = BoundsProvenance::estimated;
    }
    if (!(b.lambda_max >= b.lambda_min)) throw Error("bad-config", "lambda_max must be at least lambda_min");
    if (verbose)
        std::cerr << "spectrum [" << format_double(b.lambda_min) << ", " << format_double(b.lambda_max) << "] ("
                  << to_string(b.provenance) << ")\n";
    return b;
}

/// Constants for the bound formulas on the unit-minimum rescaling of [lo, hi].
SpectralConstants unit_constants(const SpectralBounds& b, Index n) {
    if (b.lambda_min >= 1.0) return spectral_constants(b.lambda_min, b.lambda_max, n);
    return spectral_constants(1.0, b.lambda_max / b.lambda_min, n);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<BoundMethod> parse_methods(const std::string& list) {
    std::vector<BoundMethod> out;
    for (const std::string& name : split_list(list)) {
        const auto m = parse_bound_method(name);
        if (!m) throw UsageError("unknown method '" + name + "'");
        out.push_back(*m);
    }
    if (out.empty()) throw UsageError("method list is empty");
    return out;
}

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (format == a) return;
    throw UsageError("unsupported --format '" + format + "' for this subcommand");
}

/// Writes to --out, or stdout when it is empty.
template <class Fn>
void emit(const Shared& shared, Fn&& write) {
    if (shared.out.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(shared.out, std::ios::binary);
    if (!file) throw Error("io", "cannot write " + shared.out);
    write(file);
    file.flush();
    if (!file) throw Error("io", "write failed for " + shared.out);
}

std::string json_text(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
    std::optional<double> eps, delta;
    std::string variants = "pcps";
    std::optional<double> tr_fa;
    MatrixSource src;
    Spectrum spectrum;
};

int cmd_bounds(const Shared& shared, BoundsArgs& a, bool n_given) {
    check_format(shared.format, {"text", "json", "csv"});
    if (!a.eps || !a.delta) throw UsageError("--eps and --delta are required");
    const std::vector<BoundMethod> methods = parse_methods(a.variants);

    Index n = a.src.gen.n;
    SpectralBounds sb;
    OperatorPtr op;
    if (a.src.count() > 0) {
        op = load_operator(a.src, shared.seed);
        n = op->n();
        sb = resolve_bounds(*op, a.spectrum, shared.seed, shared.verbose);
    } else {
        if (!n_given) throw UsageError("--n is required without a matrix source");
        if (!a.spectrum.lambda_min || !a.spectrum.lambda_max)
            throw UsageError("--lambda-min and --lambda-max are required without a matrix source");
        sb.lambda_min = *a.spectrum.lambda_min;
        sb.lambda_max = *a.spectrum.lambda_max;
    }
    const SpectralConstants consts = unit_constants(sb, n);

    std::optional<double> tr_fa = a.tr_fa;
    const bool baseline = std::any_of(methods.begin(), methods.end(), [](BoundMethod m) {
        return m == BoundMethod::ubaru || m == BoundMethod::cortinovis;
    });
    if (baseline && !tr_fa) {
        if (!op) throw Error("missing-spectral-data", "baseline bounds need --trfa or a matrix source");
        tr_fa = dense_logdet(*op);
    }

    SweepConfig config;
    config.epsilon_grid = {*a.eps};
    config.delta = *a.delta;
    config.methods = methods;
    config.tr_fa = tr_fa;
    config.validate();

    if (shared.format == "csv") {
        const auto rows = run_bound_sweep(config, consts, n);
        emit(shared, [&](std::ostream& out) { write_csv(out, rows); });
        return 0;
    }

    nlohmann::ordered_json j;
    j["n"] = n;
    j["lambda_min"] = sb.lambda_min;
    j["lambda_max"] = sb.lambda_max;
    j["spectrum_provenance"] = std::string(to_string(sb.provenance));
    j["constants"] = to_json(consts);
    auto& sets = j["parameter_sets"] = nlohmann::ordered_json::array();
    std::ostringstream text;
    text << "n " << n << "  lambda [" << format_double(sb.lambda_min) << ", " << format_double(sb.lambda_max)
         << "] (" << to_string(sb.provenance) << ")\n"
         << "rho " << format_double(consts.rho) << "  M_rho " << format_double(consts.m_rho) << "  C "
         << format_double(consts.c) << "  C_rho " << format_double(consts.c_rho) << '\n';
    for (BoundMethod m : methods) {
        if (m == BoundMethod::pcps || m == BoundMethod::no_pcps) {
            const ParameterSet s = m == BoundMethod::pcps ? pcps_parameter_set(*a.eps, *a.delta, n, consts)
                                                          : no_pcps_parameter_set(*a.eps, *a.delta, n, consts);
            sets.push_back(to_json(s));
            write_text(text, s);
        } else {
            const BaselineBounds b = baseline_bounds(m, *a.eps, *a.delta, n, consts.kappa, *tr_fa);
            sets.push_back({{"method", std::string(to_string(m))}, {"epsilon", *a.eps}, {"delta", *a.delta},
                            {"n", n}, {"kappa", consts.kappa}, {"tr_fa", *tr_fa}, {"N", b.n_queries}, {"m", b.m},
                            {"raw", {{"N", b.raw_n_queries}, {"m", b.raw_m}}}});
            text << "method " << to_string(m) << "  eps " << format_double(*a.eps) << "  delta "
                 << format_double(*a.delta) << "  n " << n << '\n'
                 << "  N = " << b.n_queries << '\n'
                 << "  m = " << b.m << '\n';
        }
    }
    if (shared.format == "json") emit(shared, [&](std::ostream& out) { out << json_text(j); });
    else emit(shared, [&](std::ostream& out) { out << text.str(); });
    return 0;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
    MatrixSource src;
    Spectrum spectrum;
    std::optional<double> eps, delta;
    std::string auto_params;
    std::string variant = "pcps";
    std::optional<Index> k, q;
    std::optional<std::int64_t> n_queries;
    std::optional<int> m, m_prime, sketch_steps;
    bool validate = false;
    int trials = 1;
    bool per_query = false;
};

EstimatorParams resolve_params(EstimateArgs& a, const SpectralBounds& sb, Index n, const Shared& shared) {
    const auto variant = parse_estimator_variant(a.variant);
    if (!variant) throw UsageError("unknown --variant '" + a.variant + "'");

    EstimatorParams p;
    p.seed = shared.seed;
    p.threads = shared.threads;
    if (!a.auto_params.empty()) {
        if (!a.eps || !a.delta) throw UsageError("--auto-params needs --eps and --delta");
        const SpectralConstants consts = unit_constants(sb, n);
        ParameterSet set;
        if (a.auto_params == "theorem") {
            if (*variant == EstimatorVariant::no_pcps) set = no_pcps_parameter_set(*a.eps, *a.delta, n, consts);
            else set = pcps_parameter_set(*a.eps, *a.delta, n, consts);
        } else if (a.auto_params == "practical") {
            if (*variant == EstimatorVariant::no_pcps)
                throw UsageError("--auto-params practical applies to the pcps and plain-slq variants");
            set = practical_parameter_set(*a.eps, *a.delta, n, consts);
        } else {
            throw UsageError("--auto-params must be theorem or practical");
        }
        p = params_from_bounds(set, shared.seed, shared.threads);
    } else {
        if (!a.k || !a.q || !a.n_queries || !a.m || !a.m_prime)
            throw UsageError("give --auto-params, or all of --k --q --N --m --m-prime");
        if (a.eps) p.epsilon = *a.eps;
        if (a.delta) p.delta = *a.delta;
    }
    p.variant = *variant;
    if (a.k) p.k = *a.k;
    if (a.q) p.q = *a.q;
    if (a.n_queries) p.n_queries = *a.n_queries;
    if (a.m) p.m = *a.m;
    if (a.m_prime) p.m_prime = *a.m_prime;
    p.sketch_steps = a.sketch_steps ? *a.sketch_steps : p.m_prime;
    p.validate();
    return p;
}

int cmd_estimate(const Shared& shared, EstimateArgs& a) {
    check_format(shared.format, {"text", "json", "csv"});
    if (a.trials < 1) throw UsageError("--trials must be at least 1");
    if (a.trials > 1 && !a.validate) throw UsageError("--trials needs --validate");
    const OperatorPtr op = load_operator(a.src, shared.seed);
    const SpectralBounds sb = resolve_bounds(*op, a.spectrum, shared.seed, shared.verbose);
    const EstimatorParams params = resolve_params(a, sb, op->n(), shared);

    const EstimateReport report = estimate_logdet_scaled(op, sb, params);

    std::optional<double> oracle;
    std::optional<ValidationResult> validation;
    if (a.validate) {
        oracle = dense_logdet(*op);
        if (a.trials > 1) {
            SweepConfig config;
            config.trials = a.trials;
            config.seed = shared.seed;
            config.threads = shared.threads;
            validation = run_validation(config, op, sb, params);
        }
    }
    const auto relative_error = [&]() -> std::optional<double> {
        if (!oracle) return std::nullopt;
        const double err = std::abs(report.gamma - *oracle);
        return *oracle == 0.0 ? err : err / std::abs(*oracle);
    }();

    if (shared.format == "csv") {
        emit(shared, [&](std::ostream& out) {
            out << "variant,seed,n,gamma,first_part,second_part,offset,mvm_actual,mvm_nominal,k,achieved_rank,"
                   "q_used,N,m,m_prime,oracle_value,relative_error\n"
                << to_string(report.variant) << ',' << report.seed << ',' << op->n() << ','
                << format_double(report.gamma) << ',' << format_double(report.first_part) << ','
                << format_double(report.second_part) << ',' << format_double(report.offset) << ','
                << report.mvm_actual << ',' << format_double(report.mvm_nominal) << ',' << report.k_requested << ','
                << report.achieved_rank << ',' << report.q_used << ',' << params.n_queries << ',' << params.m << ','
                << params.m_prime << ',' << (oracle ? format_double(*oracle) : "") << ','
                << (relative_error ? format_double(*relative_error) : "") << '\n';
            if (validation) {
                out << '\n';
                write_csv(out, {validation->row});
            }
        });
        return 0;
    }
    if (shared.format == "json") {
        nlohmann::ordered_json j;
        j["n"] = op->n();
        j["lambda_min"] = sb.lambda_min;
        j["lambda_max"] = sb.lambda_max;
        j["spectrum_provenance"] = std::string(to_string(sb.provenance));
        j["params"] = {{"epsilon", params.epsilon}, {"delta", params.delta}, {"k", params.k}, {"q", params.q},
                       {"N", params.n_queries}, {"m", params.m}, {"m_prime", params.m_prime},
                       {"sketch_steps", params.sketch_steps}};
        j["report"] = to_json(report, a.per_query);
        if (oracle) {
            j["oracle_value"] = *oracle;
            j["relative_error"] = *relative_error;
        }
        if (validation) {
            std::ostringstream rows;
            write_json(rows, {validation->row});
            j["validation"] = nlohmann::ordered_json::parse(rows.str())[0];
        }
        emit(shared, [&](std::ostream& out) { out << json_text(j); });
        return 0;
    }
    emit(shared, [&](std::ostream& out) {
        out << "n              " << op->n() << '\n'
            << "spectrum       [" << format_double(sb.lambda_min) << ", " << format_double(sb.lambda_max) << "] ("
            << to_string(sb.provenance) << ")\n"
            << "params         N " << params.n_queries << "  m " << params.m << "  m' " << params.m_prime
            << "  sketch steps " << params.sketch_steps << '\n';
        write_text(out, report);
        if (oracle) {
            out << "oracle         " << format_double(*oracle) << '\n'
                << "relative_error " << format_double(*relative_error) << '\n';
        }
        if (validation) {
            const SweepRow& r = validation->row;
            out << "trials         " << a.trials << " (seeds " << shared.seed + 1 << ".." << shared.seed + a.trials
                << ")\n"
                << "success_rate   " << format_double(*r.success_rate) << '\n'
                << "gamma_mean     " << format_double(*r.gamma_mean) << '\n'
                << "gamma_p10      " << format_double(*r.gamma_p10) << '\n'
                << "gamma_p90      " << format_double(*r.gamma_p90) << '\n';
        }
    });
    return 0;
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string sweep;
    std::string methods = "pcps,no-pcps";
    double delta = 0.1;
    double eps_min = 0.01;
    double eps_max = 0.2;
    int eps_points = 40;
    std::string matrix_stats;
    MatrixSource src;
    Spectrum spectrum;
    std::string auto_params = "practical";
    int trials = 1;
};

struct MatrixStats {
    Index n = 0;
    double kappa = 0;
    double lambda_min = 1.0;
    std::optional<double> tr_fa;
};

MatrixStats parse_matrix_stats(const std::string& spec) {
    MatrixStats s;
    bool have_n = false, have_kappa = false;
    for (const std::string& item : split_list(spec)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("--matrix-stats entries must look like key=value");
        const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        double v = 0;
        try {
            std::size_t used = 0;
            v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw UsageError("bad number in --matrix-stats: " + item);
        }
        if (key == "n") {
            s.n = static_cast<Index>(v);
            have_n = v >= 1 && std::floor(v) == v;
        } else if (key == "kappa") {
            s.kappa = v;
            have_kappa = true;
        } else if (key == "trfa") {
            s.tr_fa = v;
        } else if (key == "lambda_min") {
            s.lambda_min = v;
        } else {
            throw UsageError("unknown --matrix-stats key '" + key + "'");
        }
    }
    if (!have_n || !have_kappa) throw UsageError("--matrix-stats needs n=<integer> and kappa=<value>");
    return s;
}

std::vector<double> epsilon_grid(const ExperimentArgs& a) {
    if (a.eps_points < 1) throw UsageError("--eps-points must be positive");
    if (a.eps_points == 1) return {a.eps_min};
    std::vector<double> grid(a.eps_points);
    for (int i = 0; i < a.eps_points; ++i)
        grid[i] = a.eps_min + (a.eps_max - a.eps_min) * i / (a.eps_points - 1);
    return grid;
}

int cmd_experiment(const Shared& shared, ExperimentArgs& a) {
    check_format(shared.format, {"csv", "json"});
    const std::vector<BoundMethod> methods = parse_methods(a.methods);
    SweepConfig config;
    config.epsilon_grid = a.eps_points == 40 && a.eps_min == 0.01 && a.eps_max == 0.2
                              ? SweepConfig::default_epsilon_grid()
                              : epsilon_grid(a);
    config.delta = a.delta;
    config.methods = methods;
    config.trials = a.trials;
    config.seed = shared.seed;
    config.threads = shared.threads;
    try {
        config.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }

    std::vector<SweepRow> rows;
    if (a.sweep == "bounds") {
        SpectralConstants consts;
        Index n = 0;
        if (!a.matrix_stats.empty()) {
            if (a.src.count() > 0) throw UsageError("--matrix-stats and a matrix source are mutually exclusive");
            const MatrixStats s = parse_matrix_stats(a.matrix_stats);
            n = s.n;
            consts = spectral_constants(s.lambda_min, s.lambda_min * s.kappa, n);
            config.tr_fa = s.tr_fa;
        } else {
            const OperatorPtr op = load_operator(a.src, shared.seed);
            n = op->n();
            const SpectralBounds sb = resolve_bounds(*op, a.spectrum, shared.seed, shared.verbose);
            consts = unit_constants(sb, n);
            if (n <= dense_limit()) config.tr_fa = dense_logdet(*op);
        }
        rows = run_bound_sweep(config, consts, n);
    } else if (a.sweep == "validation") {
        const OperatorPtr op = load_operator(a.src, shared.seed);
        const Index n = op->n();
        const SpectralBounds sb = resolve_bounds(*op, a.spectrum, shared.seed, shared.verbose);
        const SpectralConstants consts = unit_constants(sb, n);
        std::optional<double> tr_fa;
        for (BoundMethod m : methods) {
            for (double eps : config.epsilon_grid) {
                EstimatorParams p;
                if (m == BoundMethod::pcps) {
                    const ParameterSet set = a.auto_params == "theorem"
                                                 ? pcps_parameter_set(eps, config.delta, n, consts)
                                                 : practical_parameter_set(eps, config.delta, n, consts);
                    p = params_from_bounds(set, shared.seed, 1);
                } else if (m == BoundMethod::no_pcps) {
                    p = params_from_bounds(no_pcps_parameter_set(eps, config.delta, n, consts), shared.seed, 1);
                } else {
                    if (!tr_fa) tr_fa = dense_logdet(*op);
                    const BaselineBounds b = baseline_bounds(m, eps, config.delta, n, consts.kappa, *tr_fa);
                    p.epsilon = eps;
                    p.delta = config.delta;
                    p.variant = EstimatorVariant::plain_slq;
                    p.n_queries = b.n_queries;
                    p.m = static_cast<int>(b.m);
                }
                ValidationResult r = run_validation(config, op, sb, p);
                r.row.method = std::string(to_string(m));
                rows.push_back(std::move(r.row));
            }
        }
    } else {
        throw UsageError("--sweep must be bounds or validation");
    }

    if (shared.format == "json") emit(shared, [&](std::ostream& out) { write_json(out, rows); });
    else emit(shared, [&](std::ostream& out) { write_csv(out, rows); });
    return 0;
}

// ---------------------------------------------------------------- gen-matrix

struct GenArgs {
    MatrixSource src;
    bool factors = false;
    std::string matrix_format = "auto";
};

int cmd_gen_matrix(const Shared& shared, GenArgs& a) {
    TestMatrixConfig c = a.src.gen;
    c.seed = shared.seed;
    std::string kind = a.factors ? "factors" : a.matrix_format;
    if (kind != "auto" && kind != "mm" && kind != "factors")
        throw UsageError("--matrix-format must be auto, mm or factors");
    if (a.factors && a.matrix_format == "mm") throw UsageError("--factors conflicts with --matrix-format mm");
    if (kind == "auto") kind = c.n <= dense_limit() ? "mm" : "factors";
    if (kind == "mm" && c.n > dense_limit())
        throw Error("too-large", "n = " + std::to_string(c.n) + " exceeds the dense limit " +
                                     std::to_string(dense_limit()) + "; use --factors");

    const auto op = generate_test_matrix(c);
    const std::string path = !shared.out.empty() ? shared.out : (kind == "mm" ? "matrix.mtx" : "matrix.ldf");
    if (kind == "mm") write_matrix_market(path, op->to_dense());
    else write_factor_file(path, *op, c.density, static_cast<std::int64_t>(c.seed));
    std::cout << "wrote " << (kind == "mm" ? "Matrix Market" : "factor") << " file " << path << " (n " << c.n
              << ", rank " << op->rank() << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Log-determinant estimation by deflated stochastic Lanczos quadrature"};
    app.require_subcommand(1);
    Shared shared;

    auto add_shared = [&](CLI::App* cmd) {
        cmd->add_option("--seed", shared.seed, "Random seed")->capture_default_str();
        cmd->add_option("--format", shared.format, "Output format: csv, json or text");
        cmd->add_option("--out", shared.out, "Output file (default stdout)");
        cmd->add_option("--threads", shared.threads, "Worker threads, 0 = one per core")
            ->check(CLI::NonNegativeNumber);
        cmd->add_flag("-v,--verbose", shared.verbose, "Diagnostics on stderr");
    };

    BoundsArgs bounds;
    auto* bounds_cmd = app.add_subcommand("bounds", "Print parameter bounds");
    bounds_cmd->add_option("--eps", bounds.eps, "Relative accuracy in (0, 1)");
    bounds_cmd->add_option("--delta", bounds.delta, "Failure probability in (0, 1)");
    bounds_cmd->add_option("--variant", bounds.variants, "Comma list of pcps, no-pcps, ubaru, cortinovis");
    bounds_cmd->add_option("--trfa", bounds.tr_fa, "tr(log A) for the baseline bounds");
    add_generator_flags(bounds_cmd, bounds.src, true);
    add_spectrum_flags(bounds_cmd, bounds.spectrum);

    EstimateArgs est;
    auto* est_cmd = app.add_subcommand("estimate", "Estimate log det(A)");
    add_generator_flags(est_cmd, est.src, true);
    add_spectrum_flags(est_cmd, est.spectrum);
    est_cmd->add_option("--eps", est.eps, "Relative accuracy in (0, 1)");
    est_cmd->add_option("--delta", est.delta, "Failure probability in (0, 1)");
    est_cmd->add_option("--auto-params", est.auto_params, "theorem or practical");
    est_cmd->add_option("--variant", est.variant, "pcps, no-pcps or plain-slq");
    est_cmd->add_option("--k", est.k, "Deflation rank");
    est_cmd->add_option("--q", est.q, "Sketch columns (k + p for no-pcps)");
    est_cmd->add_option("--N", est.n_queries, "Hutchinson queries");
    est_cmd->add_option("--m", est.m, "Lanczos steps, second part");
    est_cmd->add_option("--m-prime", est.m_prime, "Lanczos steps, first part");
    est_cmd->add_option("--sketch-steps", est.sketch_steps, "Lanczos steps per sketch column (default m')");
    est_cmd->add_flag("--validate", est.validate, "Compare against the dense oracle");
    est_cmd->add_option("--trials", est.trials, "Validation reruns with seeds seed+1..seed+trials");
    est_cmd->add_flag("--per-query", est.per_query, "Include per-query records in JSON output");

    ExperimentArgs exp;
    auto* exp_cmd = app.add_subcommand("experiment", "Parameter and validation sweeps over epsilon");
    exp_cmd->add_option("--sweep", exp.sweep, "bounds or validation")->required();
    exp_cmd->add_option("--methods", exp.methods, "Comma list of pcps, no-pcps, ubaru, cortinovis");
    exp_cmd->add_option("--delta", exp.delta, "Failure probability");
    exp_cmd->add_option("--eps-min", exp.eps_min, "Smallest epsilon");
    exp_cmd->add_option("--eps-max", exp.eps_max, "Largest epsilon");
    exp_cmd->add_option("--eps-points", exp.eps_points, "Grid size");
    exp_cmd->add_option("--matrix-stats", exp.matrix_stats, "n=<int>,kappa=<x>[,trfa=<x>][,lambda_min=<x>]");
    exp_cmd->add_option("--auto-params", exp.auto_params, "pcps parameters for validation: theorem or practical");
    exp_cmd->add_option("--trials", exp.trials, "Trials per validation row");
    add_generator_flags(exp_cmd, exp.src, true);
    add_spectrum_flags(exp_cmd, exp.spectrum);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-matrix", "Write the generated test matrix");
    add_generator_flags(gen_cmd, gen.src, false);
    gen_cmd->add_flag("--factors", gen.factors, "Write the binary factor file");
    gen_cmd->add_option("--matrix-format", gen.matrix_format, "auto, mm or factors");

    for (CLI::App* cmd : {bounds_cmd, est_cmd, exp_cmd, gen_cmd}) add_shared(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (shared.format.empty()) shared.format = *exp_cmd ? "csv" : "text";

    try {
        if (*bounds_cmd) return cmd_bounds(shared, bounds, bounds_cmd->count("--n") > 0);
        if (*est_cmd) return cmd_estimate(shared, est);
        if (*exp_cmd) return cmd_experiment(shared, exp);
        if (*gen_cmd) return cmd_gen_matrix(shared, gen);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\nRun with --help for usage.\n";
        return 2;
    } catch (const Error& e) {
        if (e.code() == "domain") std::cerr << "error: matrix not SPD on quadrature nodes (" << e.what() << ")\n";
        else std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
