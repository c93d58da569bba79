#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bpsi/grid.hpp"
#include "bpsi/sources.hpp"

namespace bpsi {

enum class NoiseTarget { data_h, source_psi, both };
enum class NoiseModel {
    pointwise,  ///< h~_j = h_j + eps Y_j, Y_j ~ U(-1, 1)
    l2,         ///< same draw rescaled so the discrete L2 norm of the noise is eps
};

std::string_view to_string(NoiseTarget target);
std::string_view to_string(NoiseModel model);
NoiseTarget parse_noise_target(std::string_view text);
NoiseModel parse_noise_model(std::string_view text);

struct NoiseSpec {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    NoiseTarget target = NoiseTarget::data_h;
    NoiseModel model = NoiseModel::pointwise;

    bool touches_data() const noexcept { return target != NoiseTarget::source_psi; }
    bool touches_source() const noexcept { return target != NoiseTarget::data_h; }
};

/// Philox streams used for the two noise targets.
inline constexpr std::uint32_t kDataStream = 0;
inline constexpr std::uint32_t kSourceStream = 1;

/// Number of equal subintervals carrying the piecewise-constant psi noise.
inline constexpr std::size_t kSourcePieces = 16;

/// Y_j in (-1, 1) for j = 0..n-1.
std::vector<double> uniform_noise(std::uint64_t seed, std::uint32_t stream, std::size_t n);

/// Noisy data h~. Returns h unchanged when the spec does not target h or
/// epsilon is 0.
std::vector<double> perturb_data(std::span<const double> h, const NoiseSpec& spec,
                                 const SpatialGrid& grid);

struct PerturbedSource {
    TemporalSource psi;
    /// ||psi - psi~||_{L^1(0,T)} of the draw (exact for the piecewise-constant noise).
    double achieved_l1 = 0.0;
};

/// psi~ = psi + delta with delta piecewise constant on 16 equal subintervals
/// and levels uniform in (-eps/T, eps/T), so ||psi - psi~||_1 <= eps.
PerturbedSource perturb_source(const TemporalSource& psi, const NoiseSpec& spec);

}  // namespace bpsi
