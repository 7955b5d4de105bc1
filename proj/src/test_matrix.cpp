#include "logdet/test_matrix.hpp"

#include "logdet/error.hpp"
#include "logdet/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace logdet {

Index TestMatrixConfig::nonzeros_per_column() const {
    return static_cast<Index>(std::llround(density * static_cast<double>(n)));
}

std::shared_ptr<const LowRankPlusIdentity> generate_test_matrix(const TestMatrixConfig& config) {
    if (config.n < 1) throw Error("bad-config", "n must be positive");
    if (config.heavy_count < 0 || config.tail_count < 0)
        throw Error("bad-config", "term counts must be non-negative");
    if (config.rank() >= config.n) throw Error("bad-config", "heavy_count + tail_count must be < n");
    if (!(config.density > 0.0 && config.density < 1.0))
        throw Error("bad-config", "density must lie in (0, 1)");
    if (config.density * static_cast<double>(config.n) < 1.0)
        throw Error("bad-config", "density * n must be at least 1");
    if (!(config.heavy_scale > 0.0) || !(config.tail_scale > 0.0))
        throw Error("bad-config", "scales must be positive");

    const Index n = config.n;
    const Index r = config.rank();
    const Index nnz = config.nonzeros_per_column();

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(r * nnz));
    VectorXd w(r);
    std::vector<Index> pool(static_cast<std::size_t>(n));

    for (Index col = 0; col < r; ++col) {
        const Index j = col + 1;
        const double scale = j <= config.heavy_count ? config.heavy_scale : config.tail_scale;
        w[col] = scale / static_cast<double>(j * j);

        KeyedRng rng(config.seed, Stream::matrix_columns, static_cast<std::uint64_t>(j));
        // partial Fisher-Yates: first nnz slots become the sample
        std::iota(pool.begin(), pool.end(), Index{0});
        for (Index t = 0; t < nnz; ++t) {
            const auto pick = t + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - t)));
            std::swap(pool[t], pool[pick]);
        }
        std::vector<Index> rows(pool.begin(), pool.begin() + nnz);
        std::sort(rows.begin(), rows.end());
        for (Index row : rows) triplets.emplace_back(row, col, rng.normal());
    }

    SparseMatrix x(n, r);
    x.setFromTriplets(triplets.begin(), triplets.end());
    return std::make_shared<LowRankPlusIdentity>(std::move(x), std::move(w));
}

} // namespace logdet
