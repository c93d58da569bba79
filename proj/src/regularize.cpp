#include "bpsi/regularize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "bpsi/errors.hpp"

namespace bpsi {

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ConfigError("regularization parameter alpha must be positive and finite");
    }
}

void require_same_grid(const KernelProfile& profile, const SpatialGrid& grid) {
    if (profile.size() != grid.size() || !(profile.grid == grid)) {
        throw ShapeError("kernel profile was built on a different grid");
    }
}

Reconstruction apply_filter(std::span<const double> h_tilde, const KernelProfile& profile,
                            const SpatialGrid& grid,
                            const std::function<double(double)>& filter) {
    require_same_grid(profile, grid);
    auto spectrum = forward_ft(h_tilde, grid);
    std::size_t passband = 0;
    for (std::size_t k = 0; k < spectrum.values.size(); ++k) {
        const double g = filter(profile.values[k]);
        if (g != 0.0) ++passband;
        spectrum.values[k] *= g;
    }
    return {inverse_ft(spectrum), passband};
}

}  // namespace

std::string_view to_string(FilterKind kind) {
    return kind == FilterKind::truncation ? "truncation" : "tikhonov";
}

FilterKind parse_filter(std::string_view text) {
    if (text == "truncation") return FilterKind::truncation;
    if (text == "tikhonov") return FilterKind::tikhonov;
    throw ConfigError("unknown filter '" + std::string(text) +
                      "' (expected truncation or tikhonov)");
}

void RegularizationConfig::validate() const {
    if (alpha && !(*alpha > 0.0)) throw ConfigError("reg.alpha must be positive");
    if (!(s >= 0.0)) throw ConfigError("reg.s must be >= 0");
    if (!(sigma > 0.0 && sigma <= 1.0)) throw ConfigError("sigma must lie in (0, 1]");
    if (!(theta < 2.0)) throw ConfigError("theta must be < 2");
    if (!(gamma >= s)) throw ConfigError("smoothness gamma must be >= s");
    if (!(beta > 0.0)) throw ConfigError("reg.beta must be positive");
    if (!(q > 2.0)) throw ConfigError("reg.q must exceed 2");
}

double effective_b(const RegularizationConfig& cfg) {
    const double level_term = cfg.beta * (cfg.q - 2.0) / (2.0 * cfg.q);
    const double smooth_term = (cfg.gamma - cfg.s) / (2.0 * cfg.sigma * (2.0 - cfg.theta));
    return std::min(level_term, smooth_term);
}

AlphaChoice select_alpha(double epsilon, const RegularizationConfig& cfg) {
    if (!(epsilon > 0.0)) throw ConfigError("select_alpha needs eps > 0");
    cfg.validate();
    const double b = effective_b(cfg);
    if (!(b > 0.0)) {
        throw ConfigError("rate exponent b must be positive (is gamma > s?)");
    }
    AlphaChoice choice;
    choice.b = b;
    choice.exponent = 1.0 / (1.0 + cfg.s / (2.0 - cfg.theta) + b);
    choice.alpha = std::pow(epsilon, choice.exponent);
    // eps / alpha^{1 + s/(2 sigma)} = eps^{1 - exponent (1 + s/(2 sigma))}.
    const double residual_power = 1.0 - choice.exponent * (1.0 + cfg.s / (2.0 * cfg.sigma));
    choice.convergence_conditions_hold = choice.exponent > 0.0 && residual_power > 0.0;
    if (!choice.convergence_conditions_hold) {
        choice.warning = "eps / alpha^(1 + s/(2 sigma)) does not vanish as eps -> 0 "
                         "for this exponent (power " + std::to_string(residual_power) + ")";
    }
    return choice;
}

double theoretical_rate_exponent(const RegularizationConfig& cfg) {
    const double b = effective_b(cfg);
    return b / (1.0 + cfg.s / (2.0 - cfg.theta) + b);
}

Reconstruction truncation_reconstruct(std::span<const double> h_tilde,
                                      const KernelProfile& profile, double alpha,
                                      const SpatialGrid& grid) {
    require_alpha(alpha);
    return apply_filter(h_tilde, profile, grid,
                        [alpha](double h) { return std::abs(h) > alpha ? 1.0 / h : 0.0; });
}

Reconstruction tikhonov_reconstruct(std::span<const double> h_tilde,
                                    const KernelProfile& profile, double alpha,
                                    const SpatialGrid& grid) {
    require_alpha(alpha);
    return apply_filter(h_tilde, profile, grid,
                        [alpha](double h) { return h / (alpha + h * h); });
}

Reconstruction reconstruct(FilterKind filter, std::span<const double> h_tilde,
                           const KernelProfile& profile, double alpha, const SpatialGrid& grid) {
    return filter == FilterKind::truncation
               ? truncation_reconstruct(h_tilde, profile, alpha, grid)
               : tikhonov_reconstruct(h_tilde, profile, alpha, grid);
}

}  // namespace bpsi
