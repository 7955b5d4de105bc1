#pragma once

#include "logdet/operator.hpp"

#include <cstdint>
#include <string_view>

namespace logdet {

enum class BoundsProvenance { user_supplied, estimated, exact };

std::string_view to_string(BoundsProvenance p);

/// Interval [lambda_min, lambda_max] containing the spectrum.
struct SpectralBounds {
    double lambda_min = 1.0;
    double lambda_max = 1.0;
    BoundsProvenance provenance = BoundsProvenance::user_supplied;

    double kappa() const noexcept { return lambda_max / lambda_min; }
};

/// Ritz-value interval from one probe_steps Lanczos run with a seeded random
/// start, widened by 0.99 / 1.01. Errors: "bad-config" if probe_steps < 2.
SpectralBounds estimate_spectral_bounds(const SpdOperator& op, int probe_steps, std::uint64_t seed);

} // namespace logdet
