#include "bpsi/perturb.hpp"

#include <cmath>
#include <string>

#include "bpsi/errors.hpp"
#include "bpsi/philox.hpp"

namespace bpsi {

std::string_view to_string(NoiseTarget target) {
    switch (target) {
        case NoiseTarget::data_h: return "data_h";
        case NoiseTarget::source_psi: return "source_psi";
        case NoiseTarget::both: return "both";
    }
    return "unknown";
}

std::string_view to_string(NoiseModel model) {
    return model == NoiseModel::pointwise ? "pointwise" : "l2";
}

NoiseTarget parse_noise_target(std::string_view text) {
    if (text == "data_h") return NoiseTarget::data_h;
    if (text == "source_psi") return NoiseTarget::source_psi;
    if (text == "both") return NoiseTarget::both;
    throw ConfigError("unknown noise target '" + std::string(text) +
                      "' (expected data_h, source_psi or both)");
}

NoiseModel parse_noise_model(std::string_view text) {
    if (text == "pointwise") return NoiseModel::pointwise;
    if (text == "l2") return NoiseModel::l2;
    throw ConfigError("unknown noise model '" + std::string(text) + "' (expected pointwise or l2)");
}

std::vector<double> uniform_noise(std::uint64_t seed, std::uint32_t stream, std::size_t n) {
    std::vector<double> y(n);
    for (std::size_t j = 0; j < n; ++j) y[j] = 2.0 * philox_uniform01(seed, stream, j) - 1.0;
    return y;
}

std::vector<double> perturb_data(std::span<const double> h, const NoiseSpec& spec,
                                 const SpatialGrid& grid) {
    if (!(spec.epsilon >= 0.0)) throw ConfigError("noise epsilon must be >= 0");
    if (h.size() != grid.size()) throw ShapeError("perturb_data: sample count does not match grid");
    std::vector<double> out(h.begin(), h.end());
    if (!spec.touches_data() || spec.epsilon == 0.0) return out;

    const auto y = uniform_noise(spec.seed, kDataStream, h.size());
    double scale = spec.epsilon;
    if (spec.model == NoiseModel::l2) {
        double sum = 0.0;
        for (double v : y) sum += v * v;
        scale = spec.epsilon / std::sqrt(grid.dx() * sum);
    }
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += scale * y[j];
    return out;
}

PerturbedSource perturb_source(const TemporalSource& psi, const NoiseSpec& spec) {
    if (!(spec.epsilon >= 0.0)) throw ConfigError("noise epsilon must be >= 0");
    if (!spec.touches_source() || spec.epsilon == 0.0) return {psi, 0.0};

    const double horizon = psi.horizon();
    const double level = spec.epsilon / horizon;
    auto offsets = uniform_noise(spec.seed, kSourceStream, kSourcePieces);
    double achieved = 0.0;
    for (double& o : offsets) {
        o *= level;
        achieved += std::abs(o) * horizon / static_cast<double>(kSourcePieces);
    }
    return {psi.with_offsets(std::move(offsets)), achieved};
}

}  // namespace bpsi
