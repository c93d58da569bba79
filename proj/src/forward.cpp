#include "bpsi/forward.hpp"

#include <cmath>
#include <string>

#include "bpsi/errors.hpp"

namespace bpsi {

namespace {

void require_same_grid(const KernelProfile& profile, const SpatialGrid& grid) {
    if (profile.size() != grid.size() || !(profile.grid == grid)) {
        throw ShapeError("kernel profile was built on a different grid");
    }
}

}  // namespace

std::vector<double> apply_forward(std::span<const double> f_samples,
                                  const KernelProfile& profile, const SpatialGrid& grid) {
    require_same_grid(profile, grid);
    auto spectrum = forward_ft(f_samples, grid);
    for (std::size_t k = 0; k < spectrum.values.size(); ++k) {
        spectrum.values[k] *= profile.values[k];
    }
    return inverse_ft(spectrum);
}

std::vector<double> time_solution(std::span<const double> f_samples, const TemporalSource& psi,
                                  const SpatialGrid& grid, double sigma, double t) {
    const double horizon = psi.horizon();
    if (!(t >= 0.0 && t <= horizon)) {
        throw DomainError("time_solution needs 0 <= t <= T (got t=" + std::to_string(t) + ")");
    }
    if (t == 0.0) {
        if (f_samples.size() != grid.size()) throw ShapeError("time_solution: sample count mismatch");
        return std::vector<double>(grid.size(), 0.0);
    }
    return apply_forward(f_samples, build_profile_until(psi, grid, sigma, t), grid);
}

}  // namespace bpsi
