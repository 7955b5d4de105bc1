#include "logdet/spectral.hpp"

#include "logdet/error.hpp"
#include "logdet/lanczos.hpp"
#include "logdet/random.hpp"

#include <algorithm>

namespace logdet {

std::string_view to_string(BoundsProvenance p) {
    switch (p) {
    case BoundsProvenance::user_supplied: return "user-supplied";
    case BoundsProvenance::estimated: return "estimated";
    case BoundsProvenance::exact: return "exact";
    }
    return "unknown";
}

SpectralBounds estimate_spectral_bounds(const SpdOperator& op, int probe_steps, std::uint64_t seed) {
    if (probe_steps < 2) throw Error("bad-config", "probe_steps must be at least 2");
    KeyedRng rng(seed, Stream::spectral_probe, 0);
    VectorXd start(op.n());
    for (Index i = 0; i < start.size(); ++i) start[i] = rng.normal();
    start.normalize();

    const QuadratureRule ritz = quadrature_rule(lanczos(op, start, probe_steps));
    SpectralBounds bounds;
    bounds.lambda_min = 0.99 * ritz.nodes.front();
    bounds.lambda_max = 1.01 * ritz.nodes.back();
    bounds.provenance = BoundsProvenance::estimated;
    return bounds;
}

} // namespace logdet
