#include "logdet/error.hpp"
#include "logdet/experiments.hpp"
#include "logdet/oracle.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include "json.hpp"

#include <algorithm>
#include <sstream>

using namespace logdet;
using namespace logdet::testing;

namespace {

SpectralConstants sweep_constants() { return spectral_constants(1.0, 300.0, 5000); }

} // namespace

TEST(SweepConfig, DefaultGrid) {
    const SweepConfig c;
    ASSERT_EQ(c.epsilon_grid.size(), 40u);
    EXPECT_DOUBLE_EQ(c.epsilon_grid.front(), 0.01);
    EXPECT_DOUBLE_EQ(c.epsilon_grid.back(), 0.2);
    EXPECT_EQ(c.delta, 0.1);
    EXPECT_EQ(c.seed, 50u);
    EXPECT_NO_THROW(c.validate());
}

TEST(SweepConfig, Validation) {
    SweepConfig c;
    c.epsilon_grid = {};
    EXPECT_THROW(c.validate(), Error);
    c.epsilon_grid = {0.2, 0.1};
    EXPECT_THROW(c.validate(), Error);
    c.epsilon_grid = {0.1, 1.0};
    EXPECT_THROW(c.validate(), Error);
    c.epsilon_grid = {0.1};
    c.methods = {};
    EXPECT_THROW(c.validate(), Error);
}

TEST(BoundSweep, SinglePointEqualsParameterSet) {
    SweepConfig c;
    c.epsilon_grid = {0.1};
    c.methods = {BoundMethod::pcps};
    const auto rows = run_bound_sweep(c, sweep_constants(), 5000);
    ASSERT_EQ(rows.size(), 1u);
    const ParameterSet s = pcps_parameter_set(0.1, 0.1, 5000, sweep_constants());
    EXPECT_EQ(rows[0].method, "pcps");
    EXPECT_EQ(rows[0].k, s.k);
    EXPECT_EQ(rows[0].q_or_kp, s.q);
    EXPECT_EQ(rows[0].n_queries, s.n_queries);
    EXPECT_EQ(rows[0].m, s.m);
    EXPECT_EQ(rows[0].m_prime, s.m_prime);
    EXPECT_EQ(rows[0].mvm_nominal, s.total_mvm());
    EXPECT_FALSE(rows[0].mvm_actual);
    EXPECT_FALSE(rows[0].gamma_mean);
    EXPECT_FALSE(rows[0].success_rate);
}

TEST(BoundSweep, NoPcpsFlatAndAbovePcps) {
    SweepConfig c;
    const auto rows = run_bound_sweep(c, sweep_constants(), 5000);
    ASSERT_EQ(rows.size(), 80u);
    for (std::size_t i = 0; i < 40; ++i) {
        const SweepRow& with = rows[i];
        const SweepRow& without = rows[40 + i];
        EXPECT_EQ(with.method, "pcps");
        EXPECT_EQ(without.method, "no-pcps");
        EXPECT_EQ(with.epsilon, without.epsilon);
        EXPECT_EQ(without.k, rows[40].k);
        EXPECT_EQ(without.q_or_kp, rows[40].q_or_kp);
        EXPECT_LT(*with.m_prime, *without.m_prime);
    }
}

TEST(BoundSweep, BaselinesNeedTrace) {
    SweepConfig c;
    c.methods = {BoundMethod::pcps, BoundMethod::ubaru};
    try {
        run_bound_sweep(c, sweep_constants(), 5000);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "missing-spectral-data");
    }
    c.tr_fa = 3000.0;
    const auto rows = run_bound_sweep(c, sweep_constants(), 5000);
    ASSERT_EQ(rows.size(), 80u);
    EXPECT_FALSE(rows[40].k);
    EXPECT_TRUE(rows[40].n_queries);
    for (std::size_t i = 0; i < 40; ++i) EXPECT_LT(*rows[i].n_queries, *rows[40 + i].n_queries);
}

TEST(BoundSweep, CsvBytesReproducible) {
    SweepConfig c;
    std::ostringstream a, b;
    write_csv(a, run_bound_sweep(c, sweep_constants(), 5000));
    write_csv(b, run_bound_sweep(c, sweep_constants(), 5000));
    EXPECT_EQ(a.str(), b.str());
}

TEST(Percentile, NearestRank) {
    std::vector<double> v;
    for (int i = 10; i >= 1; --i) v.push_back(i);
    EXPECT_EQ(nearest_rank_percentile(v, 10), 1);
    EXPECT_EQ(nearest_rank_percentile(v, 90), 9);
    EXPECT_EQ(nearest_rank_percentile(v, 100), 10);
    EXPECT_EQ(nearest_rank_percentile(v, 15), 2);
    EXPECT_EQ(nearest_rank_percentile({4.5}, 10), 4.5);
    EXPECT_THROW(nearest_rank_percentile({}, 50), Error);
}

TEST(Tolerance, RelativeAndDegenerate) {
    EXPECT_TRUE(within_tolerance(105, 100, 0.05));
    EXPECT_FALSE(within_tolerance(106, 100, 0.05));
    EXPECT_TRUE(within_tolerance(0.05, 0, 0.1));
    EXPECT_FALSE(within_tolerance(0.2, 0, 0.1));
}

TEST(Validation, IdentityDegenerateOracle) {
    SweepConfig c;
    c.trials = 3;
    OperatorPtr op = std::make_shared<LowRankPlusIdentity>(40);
    EstimatorParams p;
    p.k = 3;
    p.q = 9;
    p.n_queries = 5;
    p.m = 2;
    p.m_prime = 2;
    p.sketch_steps = 2;
    const ValidationResult r = run_validation(c, op, {1, 1}, p);
    EXPECT_EQ(r.row.oracle_value, 0.0);
    EXPECT_EQ(r.row.success_rate, 1.0);
    EXPECT_EQ(r.gammas.size(), 3u);
}

TEST(Validation, SingleTrialPercentiles) {
    SweepConfig c;
    auto op = random_spd(30, 1, 20, 1);
    EstimatorParams p;
    p.k = 4;
    p.q = 12;
    p.n_queries = 10;
    p.m = 5;
    p.m_prime = 5;
    p.sketch_steps = 5;
    const ValidationResult r = run_validation(c, op, {1, 20}, p);
    EXPECT_EQ(*r.row.gamma_p10, r.gammas[0]);
    EXPECT_EQ(*r.row.gamma_p90, r.gammas[0]);
    EXPECT_EQ(*r.row.gamma_mean, r.gammas[0]);
}

TEST(Validation, StatisticsOrderedAndThreadIndependent) {
    SweepConfig c;
    c.trials = 12;
    auto op = random_spd(40, 1, 50, 2);
    EstimatorParams p;
    p.epsilon = 0.05;
    p.k = 3;
    p.q = 9;
    p.n_queries = 8;
    p.m = 6;
    p.m_prime = 6;
    p.sketch_steps = 6;
    const ValidationResult a = run_validation(c, op, {1, 50}, p);
    c.threads = 4;
    const ValidationResult b = run_validation(c, op, {1, 50}, p);
    EXPECT_LE(*a.row.gamma_p10, *a.row.gamma_mean);
    EXPECT_LE(*a.row.gamma_mean, *a.row.gamma_p90);
    EXPECT_EQ(a.gammas, b.gammas);
    std::ostringstream sa, sb;
    write_csv(sa, {a.row});
    write_csv(sb, {b.row});
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_NEAR(*a.row.oracle_value, dense_logdet(*op), 1e-12);
}

TEST(Validation, SuccessRateMonotoneInEpsilon) {
    SweepConfig c;
    c.trials = 20;
    auto op = random_spd(40, 1, 50, 3);
    EstimatorParams p;
    p.k = 2;
    p.q = 6;
    p.n_queries = 3;
    p.m = 4;
    p.m_prime = 4;
    p.sketch_steps = 4;
    double previous = -1;
    for (double eps : {0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.3}) {
        p.epsilon = eps;
        const double rate = *run_validation(c, op, {1, 50}, p).row.success_rate;
        EXPECT_GE(rate, previous);
        previous = rate;
    }
}

TEST(Output, CsvHeaderAndEmptyCells) {
    SweepRow r;
    r.method = "pcps";
    r.epsilon = 0.1;
    r.delta = 0.1;
    r.k = 20;
    std::ostringstream out;
    write_csv(out, {r});
    EXPECT_EQ(out.str(),
              "method,epsilon,delta,k,q_or_kp,N,m,m_prime,mvm_nominal,mvm_actual,gamma_mean,gamma_p10,gamma_p90,"
              "success_rate,oracle_value\npcps,0.1,0.1,20,,,,,,,,,,,\n");
}

TEST(Output, JsonMirrorsColumns) {
    SweepRow r;
    r.method = "no-pcps";
    r.epsilon = 0.05;
    r.delta = 0.1;
    r.m = 7;
    std::ostringstream out;
    write_json(out, {r});
    const auto j = nlohmann::json::parse(out.str());
    ASSERT_EQ(j.size(), 1u);
    std::vector<std::string> keys;
    for (auto it = j[0].begin(); it != j[0].end(); ++it) keys.push_back(it.key());
    std::vector<std::string> columns = sweep_columns();
    std::sort(keys.begin(), keys.end());
    std::sort(columns.begin(), columns.end());
    EXPECT_EQ(keys, columns);
    EXPECT_EQ(j[0]["m"], 7);
    EXPECT_TRUE(j[0]["k"].is_null());
}
