#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bpsi/grid.hpp"
#include "bpsi/kernel.hpp"

namespace bpsi {

enum class FilterKind { truncation, tikhonov };

std::string_view to_string(FilterKind kind);
FilterKind parse_filter(std::string_view text);

/// Parameters of the reconstruction and of the a-priori rule
///   alpha(eps) = eps^{1 / (1 + s/(2 - theta) + b)},
///   b = min{beta (q-2) / (2q), (gamma - s) / (2 sigma (2 - theta))}.
struct RegularizationConfig {
    FilterKind filter = FilterKind::truncation;
    std::optional<double> alpha;  ///< fixed alpha; empty means rule-derived
    double s = 0.0;               ///< Sobolev index of the error norm
    double sigma = 1.0;
    double theta = 0.0;
    double gamma = 2.0;  ///< smoothness of f
    double beta = 1.0;   ///< level-set measure exponent (user supplied)
    double q = 4.0;      ///< Hausdorff-Young exponent, q > 2

    /// Throws ConfigError on out-of-range fields.
    void validate() const;
};

double effective_b(const RegularizationConfig& cfg);

struct AlphaChoice {
    double alpha = 0.0;
    double exponent = 0.0;  ///< alpha = eps^exponent
    double b = 0.0;
    /// eps / alpha^{1 + s/(2 sigma)} -> 0 for this exponent family.
    bool convergence_conditions_hold = true;
    std::string warning;
};

/// The a-priori rule; ConfigError when b <= 0 or eps <= 0.
AlphaChoice select_alpha(double epsilon, const RegularizationConfig& cfg);

/// Rate exponent of the error norm itself: b / (1 + s/(2 - theta) + b).
double theoretical_rate_exponent(const RegularizationConfig& cfg);

struct Reconstruction {
    std::vector<double> samples;
    std::size_t passband_size = 0;  ///< nodes with |H| > alpha (all nonzero H for Tikhonov)
};

/// F^{-1}(h~^ / H chi_{|H| > alpha}); ConfigError when alpha <= 0.
Reconstruction truncation_reconstruct(std::span<const double> h_tilde,
                                      const KernelProfile& profile, double alpha,
                                      const SpatialGrid& grid);

/// F^{-1}(h~^ H / (alpha + H^2)).
Reconstruction tikhonov_reconstruct(std::span<const double> h_tilde,
                                    const KernelProfile& profile, double alpha,
                                    const SpatialGrid& grid);

Reconstruction reconstruct(FilterKind filter, std::span<const double> h_tilde,
                           const KernelProfile& profile, double alpha, const SpatialGrid& grid);

}  // namespace bpsi
