#include "logdet/matrix_io.hpp"

#include "logdet/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace logdet {

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

constexpr std::array<char, 8> kFactorMagic = {'L', 'D', 'F', 'A', 'C', 'T', '0', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
    out.write(bytes.data(), 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), 8);
    if (!in) throw Error("factor-parse", "unexpected end of factor file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

} // namespace

std::shared_ptr<const SparseOperator> load_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw Error("mm-parse", "empty file");
    std::istringstream header(lowercase(line));
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%matrixmarket" || object != "matrix")
        throw Error("mm-parse", "missing %%MatrixMarket matrix banner");
    if (format != "coordinate") throw Error("mm-parse", "only coordinate format is supported");
    if (field != "real" && field != "double" && field != "integer")
        throw Error("mm-parse", "unsupported field '" + field + "'");
    if (symmetry != "symmetric") throw Error("mm-not-symmetric", "header qualifier is '" + symmetry + "'");

    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '%') continue;
        if (!is_blank(line)) break;
    }
    long long rows = 0, cols = 0, nnz = 0;
    {
        std::istringstream sizes(line);
        if (!(sizes >> rows >> cols >> nnz) || rows < 1 || cols < 1 || nnz < 0)
            throw Error("mm-parse", "bad size line '" + line + "'");
    }
    if (rows != cols) throw Error("mm-parse", "symmetric matrix must be square");

    // keyed by (row, col) with row >= col
    std::map<std::pair<long long, long long>, double> entries;
    long long read = 0;
    while (read < nnz && std::getline(in, line)) {
        if (is_blank(line) || line[0] == '%') continue;
        std::istringstream entry(line);
        long long i = 0, j = 0;
        double value = 0.0;
        if (!(entry >> i >> j >> value)) throw Error("mm-parse", "bad entry line '" + line + "'");
        if (i < 1 || j < 1 || i > rows || j > cols) throw Error("mm-parse", "index out of range: " + line);
        ++read;
        const auto key = std::make_pair(std::max(i, j) - 1, std::min(i, j) - 1);
        auto [it, inserted] = entries.emplace(key, value);
        if (!inserted && it->second != value)
            throw Error("mm-inconsistent", "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                               ") conflicts with its mirror or a duplicate");
    }
    if (read != nnz) throw Error("mm-parse", "file ended after " + std::to_string(read) + " of " +
                                                 std::to_string(nnz) + " entries");

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(entries.size() * 2);
    for (const auto& [key, value] : entries) {
        triplets.emplace_back(key.first, key.second, value);
        if (key.first != key.second) triplets.emplace_back(key.second, key.first, value);
    }
    SparseMatrix a(rows, cols);
    a.setFromTriplets(triplets.begin(), triplets.end());
    return std::make_shared<SparseOperator>(std::move(a));
}

void write_matrix_market(const std::filesystem::path& path, const MatrixXd& a) {
    if (a.rows() != a.cols()) throw Error("dimension", "matrix must be square");
    long long nnz = 0;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = j; i < a.rows(); ++i)
            if (a(i, j) != 0.0) ++nnz;

    std::ofstream out(path);
    if (!out) throw Error("io", "cannot write " + path.string());
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << a.rows() << ' ' << a.cols() << ' ' << nnz << '\n';
    out << std::setprecision(17);
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = j; i < a.rows(); ++i)
            if (a(i, j) != 0.0) out << (i + 1) << ' ' << (j + 1) << ' ' << a(i, j) << '\n';
    if (!out) throw Error("io", "write failed for " + path.string());
}

void write_factor_file(const std::filesystem::path& path, const LowRankPlusIdentity& op, double density,
                       std::int64_t seed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "cannot write " + path.string());
    out.write(kFactorMagic.data(), kFactorMagic.size());
    put_u64(out, static_cast<std::uint64_t>(op.n()));
    put_u64(out, static_cast<std::uint64_t>(op.rank()));
    put_f64(out, density);
    put_u64(out, static_cast<std::uint64_t>(seed));
    for (Index j = 0; j < op.rank(); ++j) put_f64(out, op.weights()[j]);
    const MatrixXd x = MatrixXd(op.factor());
    for (Index j = 0; j < x.cols(); ++j)
        for (Index i = 0; i < x.rows(); ++i) put_f64(out, x(i, j));
    if (!out) throw Error("io", "write failed for " + path.string());
}

std::shared_ptr<const LowRankPlusIdentity> read_factor_file(const std::filesystem::path& path,
                                                            FactorFileHeader* header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot open " + path.string());
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kFactorMagic) throw Error("factor-parse", "bad magic in " + path.string());

    FactorFileHeader h;
    h.n = get_u64(in);
    h.r = get_u64(in);
    h.density = get_f64(in);
    h.seed = static_cast<std::int64_t>(get_u64(in));
    if (h.n == 0 || h.r >= h.n) throw Error("factor-parse", "inconsistent dimensions in header");

    const auto n = static_cast<Index>(h.n);
    const auto r = static_cast<Index>(h.r);
    VectorXd w(r);
    for (Index j = 0; j < r; ++j) w[j] = get_f64(in);
    std::vector<Eigen::Triplet<double>> triplets;
    for (Index j = 0; j < r; ++j)
        for (Index i = 0; i < n; ++i) {
            const double v = get_f64(in);
            if (v != 0.0) triplets.emplace_back(i, j, v);
        }
    SparseMatrix x(n, r);
    x.setFromTriplets(triplets.begin(), triplets.end());
    if (header) *header = h;
    return std::make_shared<LowRankPlusIdentity>(std::move(x), std::move(w));
}

} // namespace logdet
