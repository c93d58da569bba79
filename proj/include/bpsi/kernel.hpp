#pragma once

#include <cstdint>
#include <vector>

#include "bpsi/grid.hpp"
#include "bpsi/sources.hpp"

namespace bpsi {

/// H_psi(nu) = \int_0^T e^{-(T-s) nu} (T-s) psi(s) ds, nu >= 0.
/// Computed in the lag form \int_0^T e^{-nu tau} tau psi(T - tau) dtau by
/// adaptive Gauss-Legendre on a mesh graded toward tau = 0; for nu T > 700
/// the range is cut at tau = 700 / nu. Throws AccuracyError when the
/// quadrature does not converge.
double eval_kernel(const TemporalSource& psi, double nu);

/// \int_0^t e^{-(t-s) nu} (t-s) psi(s) ds for 0 <= t <= T; equals
/// eval_kernel at t = T.
double eval_kernel_until(const TemporalSource& psi, double nu, double t);

/// The multiplier H_psi(|z_k|^{2 sigma}) on every frequency node of a grid.
struct KernelProfile {
    std::vector<double> nu;
    std::vector<double> values;
    double sigma = 1.0;
    double psi_l1 = 0.0;
    SpatialGrid grid;

    std::size_t size() const noexcept { return values.size(); }
    double max_abs() const noexcept;
};

/// Evaluates the kernel on every node (in parallel over nodes) and checks
/// nu |H| <= e^{-1} ||psi||_1 (ConsistencyError beyond 1e-9 slack).
KernelProfile build_profile(const TemporalSource& psi, const SpatialGrid& grid, double sigma);

/// Profile of the partial kernel eval_kernel_until(psi, ., t); the decay
/// bound check uses the same ||psi||_{L^1(0,T)}.
KernelProfile build_profile_until(const TemporalSource& psi, const SpatialGrid& grid,
                                  double sigma, double t);

/// Frequency masks for a threshold alpha:
///   omega = {|H| > alpha}, pi = complement,
///   b = pi with nu <= h0, c = pi with nu > h0.
struct LevelSets {
    double alpha = 0.0;
    double h0 = 0.0;
    std::vector<std::uint8_t> omega_mask;
    std::vector<std::uint8_t> pi_mask;
    std::vector<std::uint8_t> b_mask;
    std::vector<std::uint8_t> c_mask;

    std::size_t omega_count() const noexcept;
    std::size_t pi_count() const noexcept;
};

LevelSets level_sets(const KernelProfile& profile, double alpha, double h0);

struct KernelZero {
    double nu = 0.0;
    /// False for zeros seen only as |H| < 1e-12 at a scan node without a
    /// sign change around them.
    bool confirmed = true;
};

/// Zeros of H_psi on [0, nu_max]: 4096-point scan, sign changes refined by
/// bisection to 1e-12; near-zero scan nodes are reported as well.
std::vector<KernelZero> find_zeros(const TemporalSource& psi, double nu_max);

/// x^{2-theta} H_psi(x) - p_T Gamma(2 - theta); ConfigError when p_T = 0.
double asymptotic_residual(const TemporalSource& psi, double x);

/// Smallest scan node (log-spaced on [1e-3, x_max]) beyond which
/// |x^{2-theta} H - p_T Gamma(2-theta)| <= |p_T Gamma(2-theta)| / 2 on every
/// later node. Falls back to 10 when no such node exists or p_T = 0.
double sandwich_threshold(const TemporalSource& psi, double x_max = 1e6,
                          std::size_t samples = 400);

/// (|p_T| Gamma(2-theta) / 2)^{1/(2 sigma (2-theta))}: frequencies in the
/// c-set of level rho satisfy |z| >= c1 * rho^{-1/(2 sigma (2-theta))}.
double c_set_radius_constant(double p_T, double theta, double sigma);

}  // namespace bpsi
