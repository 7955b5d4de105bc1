#include "logdet/report_io.hpp"

#include <array>
#include <charconv>
#include <ostream>

namespace logdet {

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), result.ptr);
}

nlohmann::ordered_json to_json(const EstimateReport& r, bool include_queries) {
    nlohmann::ordered_json j;
    j["variant"] = std::string(to_string(r.variant));
    j["seed"] = r.seed;
    j["gamma"] = r.gamma;
    j["first_part"] = r.first_part;
    j["second_part"] = r.second_part;
    j["offset"] = r.offset;
    j["mvm_actual"] = r.mvm_actual;
    j["mvm_nominal"] = r.mvm_nominal;
    j["mvm_sketch"] = r.mvm_sketch;
    j["mvm_first_part"] = r.mvm_first_part;
    j["mvm_second_part"] = r.mvm_second_part;
    j["k_requested"] = r.k_requested;
    j["achieved_rank"] = r.achieved_rank;
    j["q_requested"] = r.q_requested;
    j["q_used"] = r.q_used;
    j["warnings"] = r.warnings;
    if (include_queries) {
        auto& queries = j["per_query"] = nlohmann::ordered_json::array();
        for (const QueryRecord& q : r.per_query)
            queries.push_back({{"residual_norm_sq", q.residual_norm_sq}, {"quadrature", q.quadrature}, {"steps", q.steps}});
    }
    return j;
}

nlohmann::ordered_json to_json(const ParameterSet& s) {
    nlohmann::ordered_json j;
    j["method"] = std::string(to_string(s.method));
    j["epsilon"] = s.epsilon;
    j["delta"] = s.delta;
    j["n"] = s.n;
    j["lambda_min"] = s.lambda_min;
    j["lambda_max"] = s.lambda_max;
    j["k"] = s.k;
    j["q"] = s.q;
    if (s.method == BoundMethod::no_pcps) j["p"] = s.p;
    j["N"] = s.n_queries;
    j["m"] = s.m;
    j["m_prime"] = s.m_prime;
    j["raw"] = {{"k", s.raw.k}, {"q", s.raw.q}, {"N", s.raw.n_queries}, {"m", s.raw.m}, {"m_prime", s.raw.m_prime}};
    j["first_part_mvm"] = s.first_part_mvm();
    j["total_mvm"] = s.total_mvm();
    j["impractical"] = s.impractical;
    return j;
}

nlohmann::ordered_json to_json(const SpectralConstants& c) {
    return {{"rho", c.rho}, {"M_rho", c.m_rho}, {"C", c.c}, {"C_rho", c.c_rho}, {"kappa", c.kappa}};
}

void write_text(std::ostream& out, const EstimateReport& r) {
    out << "variant        " << to_string(r.variant) << '\n'
        << "seed           " << r.seed << '\n'
        << "gamma          " << format_double(r.gamma) << '\n'
        << "first_part     " << format_double(r.first_part) << '\n'
        << "second_part    " << format_double(r.second_part) << '\n'
        << "offset         " << format_double(r.offset) << '\n'
        << "k              " << r.k_requested << " (sketch rank " << r.achieved_rank << ")\n"
        << "q              " << r.q_used << " (requested " << r.q_requested << ")\n"
        << "queries        " << r.per_query.size() << '\n'
        << "mvm_actual     " << r.mvm_actual << " (sketch " << r.mvm_sketch << ", first " << r.mvm_first_part
        << ", second " << r.mvm_second_part << ")\n"
        << "mvm_nominal    " << format_double(r.mvm_nominal) << '\n';
    for (const std::string& w : r.warnings) out << "warning        " << w << '\n';
}

void write_text(std::ostream& out, const ParameterSet& s) {
    out << "method " << to_string(s.method) << "  eps " << format_double(s.epsilon) << "  delta "
        << format_double(s.delta) << "  n " << s.n << '\n'
        << "  k = " << s.k << '\n'
        << "  q = " << s.q;
    if (s.method == BoundMethod::no_pcps) out << "  (p = " << s.p << ")";
    out << '\n'
        << "  N = " << s.n_queries << '\n'
        << "  m = " << s.m << '\n'
        << "  m' = " << s.m_prime << '\n'
        << "  first-part MVM = " << format_double(s.first_part_mvm()) << '\n'
        << "  total MVM = " << format_double(s.total_mvm()) << '\n';
    if (s.impractical) out << "  impractical: k + p exceeds 1e4\n";
}

} // namespace logdet
