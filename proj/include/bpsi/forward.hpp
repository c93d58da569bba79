#pragma once

#include <span>
#include <vector>

#include "bpsi/grid.hpp"
#include "bpsi/kernel.hpp"
#include "bpsi/sources.hpp"

namespace bpsi {

/// Final-time data h = K f = F^{-1}(H_psi(|z|^{2 sigma}) f^).
std::vector<double> apply_forward(std::span<const double> f_samples,
                                  const KernelProfile& profile, const SpatialGrid& grid);

/// u(., t) from u^(z, t) = f^(z) \int_0^t e^{-|z|^{2 sigma}(t-s)} (t-s) psi(s) ds.
/// The initial conditions u = u_t = 0 are built in; u(., 0) = 0.
std::vector<double> time_solution(std::span<const double> f_samples, const TemporalSource& psi,
                                  const SpatialGrid& grid, double sigma, double t);

}  // namespace bpsi
