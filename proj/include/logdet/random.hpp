#pragma once

#include <array>
#include <cstdint>

namespace logdet {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Stream identifiers so that different consumers of one seed never overlap.
enum class Stream : std::uint32_t {
    matrix_columns = 1,
    sketch = 2,
    queries = 3,
    spectral_probe = 4,
    test_data = 100,
};

/**
 * Counter-based random stream keyed by (seed, stream, index).
 *
 * Each (seed, stream, index) triple identifies an independent substream, so a
 * consumer can regenerate column j or query i without drawing anything else.
 * Output is bit-identical across platforms and thread schedules; normals use
 * Box-Muller on 53-bit uniforms rather than std::normal_distribution.
 */
class KeyedRng {
public:
    KeyedRng(std::uint64_t seed, std::uint32_t stream, std::uint64_t index);
    KeyedRng(std::uint64_t seed, Stream stream, std::uint64_t index)
        : KeyedRng(seed, static_cast<std::uint32_t>(stream), index) {}

    std::uint64_t next_u64();
    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on (0, 1].
    double uniform_open_low() { return 1.0 - uniform(); }
    /// Uniform integer on [0, bound). Unbiased (rejection).
    std::uint64_t below(std::uint64_t bound);
    double normal();
    double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

private:
    void refill();

    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint32_t, 4> counter_{};
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace logdet
