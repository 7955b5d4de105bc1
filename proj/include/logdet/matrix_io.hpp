#pragma once

#include "logdet/operator.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>

namespace logdet {

/**
 * Reads a Matrix Market `coordinate real symmetric` file into a sparse operator.
 *
 * Errors: "mm-parse" for malformed content, "mm-not-symmetric" when the header
 * lacks the symmetric qualifier, "mm-inconsistent" when an entry and its mirror
 * (or a repeated entry) disagree.
 */
std::shared_ptr<const SparseOperator> load_matrix_market(const std::filesystem::path& path);

/// Writes the lower triangle of a dense symmetric matrix, 1-based, 17 significant digits.
void write_matrix_market(const std::filesystem::path& path, const MatrixXd& a);

/// Header of the binary factor file for a low-rank-plus-identity operator.
struct FactorFileHeader {
    std::uint64_t n = 0;
    std::uint64_t r = 0;
    double density = 0.0;
    std::int64_t seed = 0;
};

/*
 * Factor file layout, all fields little-endian:
 *   bytes  0..7   magic "LDFACT01"
 *   u64 n, u64 r, f64 density, i64 seed
 *   f64 w[r]
 *   f64 X[n*r]   column-major
 */
void write_factor_file(const std::filesystem::path& path, const LowRankPlusIdentity& op, double density,
                       std::int64_t seed);

std::shared_ptr<const LowRankPlusIdentity> read_factor_file(const std::filesystem::path& path,
                                                            FactorFileHeader* header = nullptr);

} // namespace logdet
