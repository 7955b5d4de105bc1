#include "logdet/error.hpp"
#include "logdet/matrix_io.hpp"
#include "logdet/oracle.hpp"
#include "logdet/test_matrix.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace logdet;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& body) {
    const fs::path p = fs::temp_directory_path() / ("logdet_io_" + name);
    std::ofstream(p) << body;
    return p;
}

std::string error_code(const fs::path& p) {
    try {
        load_matrix_market(p);
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

} // namespace

TEST(MatrixMarket, Diagonal) {
    const auto op = load_matrix_market(write_temp("diag.mtx",
        "%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 2\n1 1 2.0\n2 2 3\n"));
    EXPECT_EQ(op->apply(VectorXd::Ones(2)), VectorXd(Eigen::Vector2d(2, 3)));
}

TEST(MatrixMarket, Tridiagonal) {
    const auto op = load_matrix_market(write_temp("tri.mtx",
        "%%MatrixMarket matrix coordinate real symmetric\n3 3 5\n1 1 2\n2 1 1\n2 2 2\n3 2 1\n3 3 2\n"));
    EXPECT_EQ(op->apply(Eigen::Vector3d(1, 0, 0)), VectorXd(Eigen::Vector3d(2, 1, 0)));
    EXPECT_EQ(op->apply(Eigen::Vector3d(0, 1, 0)), VectorXd(Eigen::Vector3d(1, 2, 1)));
}

TEST(MatrixMarket, GeneralHeaderRejected) {
    EXPECT_EQ(error_code(write_temp("gen.mtx", "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n")),
              "mm-not-symmetric");
}

TEST(MatrixMarket, InconsistentMirror) {
    EXPECT_EQ(error_code(write_temp("inc.mtx",
        "%%MatrixMarket matrix coordinate real symmetric\n2 2 4\n1 1 1\n2 1 0.5\n1 2 0.25\n2 2 1\n")),
              "mm-inconsistent");
}

TEST(MatrixMarket, ConsistentMirrorAccepted) {
    const auto op = load_matrix_market(write_temp("mir.mtx",
        "%%MatrixMarket matrix coordinate real symmetric\n2 2 4\n1 1 1\n2 1 0.5\n1 2 0.5\n2 2 1\n"));
    EXPECT_EQ(op->to_dense()(0, 1), 0.5);
}

TEST(MatrixMarket, ParseErrors) {
    EXPECT_EQ(error_code(write_temp("p1.mtx", "not a header\n")), "mm-parse");
    EXPECT_EQ(error_code(write_temp("p2.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n")),
              "mm-parse");
    EXPECT_EQ(error_code(write_temp("p3.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1\n")),
              "mm-parse");
    EXPECT_EQ(error_code(write_temp("p4.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 3 1\n1 1 1\n")),
              "mm-parse");
    EXPECT_EQ(error_code(fs::temp_directory_path() / "logdet_io_missing.mtx"), "io");
}

TEST(MatrixMarket, RoundTripGenerated) {
    TestMatrixConfig c;
    c.n = 120;
    c.heavy_count = 4;
    c.tail_count = 10;
    c.density = 0.1;
    const auto op = generate_test_matrix(c);
    const fs::path p = fs::temp_directory_path() / "logdet_io_roundtrip.mtx";
    write_matrix_market(p, op->to_dense());
    const auto loaded = load_matrix_market(p);
    EXPECT_NEAR(dense_logdet(*loaded), dense_logdet(*op), 1e-10);
}

TEST(FactorFile, RoundTrip) {
    TestMatrixConfig c;
    c.n = 150;
    c.heavy_count = 3;
    c.tail_count = 7;
    const auto op = generate_test_matrix(c);
    const fs::path p = fs::temp_directory_path() / "logdet_io_factors.ldf";
    write_factor_file(p, *op, c.density, 50);
    FactorFileHeader h;
    const auto back = read_factor_file(p, &h);
    EXPECT_EQ(h.n, 150u);
    EXPECT_EQ(h.r, 10u);
    EXPECT_EQ(h.density, c.density);
    EXPECT_EQ(h.seed, 50);
    EXPECT_TRUE(MatrixXd(back->factor()) == MatrixXd(op->factor()));
    EXPECT_TRUE(back->weights() == op->weights());
}

TEST(FactorFile, BadMagic) {
    const fs::path p = write_temp("bad.ldf", "NOTAFACTORFILE");
    try {
        read_factor_file(p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "factor-parse");
    }
}
