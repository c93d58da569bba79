#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bpsi/grid.hpp"
#include "bpsi/kernel.hpp"

namespace bpsi {

/// sqrt(dx * sum_j v_j^2), uniform weights at every node.
double discrete_l2_norm(std::span<const double> values, double dx);

/// E_abs = sqrt(dx * sum_j (exact_j - rec_j)^2); ShapeError on length mismatch.
double l2_error(std::span<const double> exact, std::span<const double> rec, double dx);

/// E_abs / ||exact||; MetricError when ||exact|| = 0.
double relative_error(std::span<const double> exact, std::span<const double> rec, double dx);

/// (sum_k (1 + z_k^2)^s |f^_k|^2 dz)^{1/2}.
double hs_norm(std::span<const double> field, double s, const SpatialGrid& grid);

/// Least-squares slope of log(err) against log(eps). Needs >= 3 strictly
/// decreasing eps and positive entries (DomainError otherwise).
double fit_rate(std::span<const double> eps, std::span<const double> err);

struct RateFit {
    double slope = 0.0;
    std::vector<double> eps_used;
    std::vector<double> eps_dropped;  ///< saturated rows (E_rel above the cut)
};

/// fit_rate after dropping rows whose relative error exceeds saturation_cut;
/// if fewer than 3 rows would remain nothing is dropped.
RateFit fit_rate_unsaturated(std::span<const double> eps, std::span<const double> err_abs,
                             std::span<const double> err_rel, double saturation_cut = 0.40);

struct InstabilityWitness {
    std::vector<double> f;
    std::vector<double> h;
    double f_norm_sq = 0.0;
    double h_norm_sq = 0.0;
    double ratio = 0.0;
    double radius = 0.0;          ///< the cutoff m in |z| <= m
    std::size_t set_size = 0;     ///< nodes in the discrete A-set
};

/// Discrete instability sequence: on A = {|H| <= 1/n, |z| <= m} (smallest
/// integer m making A nonempty; the unpaired -pi/dx node and exact zeros of H
/// are excluded),
///   f^_n = chi_A / sqrt(|H| m(A)),   h^_n = sqrt(|H|) chi_A / sqrt(m(A)),
/// with m(A) = |A| dz. RangeError when no node qualifies.
InstabilityWitness instability_sequence(int n, const KernelProfile& profile,
                                        const SpatialGrid& grid);

}  // namespace bpsi
