#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bpsi/grid.hpp"

namespace bpsi {

enum class PsiKind { constant, power_singular, affine, sampled };

std::string_view to_string(PsiKind kind);

/// Temporal source psi on [0, T], optionally carrying an additive
/// piecewise-constant perturbation on equal subintervals (used for noisy
/// psi). Metadata follows the asymptotic hypothesis
///   lim_{tau->0+} tau^theta psi(T - tau) = p_T,  |tau^theta psi(T - tau)| <= P.
class TemporalSource {
public:
    /// psi(t) = c.
    static TemporalSource constant(double c, double horizon);
    /// psi(t) = (T - t)^{-theta} (b0 + (T - t) xi), theta < 1 so psi is in L^1.
    static TemporalSource power_singular(double theta, double b0, double xi, double horizon);
    /// psi(t) = a + b t.
    static TemporalSource affine(double a, double b, double horizon);
    /// Piecewise-linear interpolation of (t, value); t strictly increasing
    /// from 0 to the horizon, which is the last t.
    static TemporalSource sampled(std::vector<double> t, std::vector<double> values);
    /// Two-column CSV (t, value) with a header line.
    static TemporalSource from_csv(const std::filesystem::path& path);

    /// Copy with offsets[i] added on [i T/n, (i+1) T/n), n = offsets.size().
    TemporalSource with_offsets(std::vector<double> offsets) const;

    PsiKind kind() const noexcept { return kind_; }
    double horizon() const noexcept { return horizon_; }
    /// Singularity exponent (0 for non-singular kinds).
    double theta() const noexcept;
    double p_T() const noexcept;
    double bound_P() const noexcept;
    bool is_singular() const noexcept { return theta() > 0.0; }
    const std::vector<double>& offsets() const noexcept { return offsets_; }
    std::string describe() const;

    /// psi(t) for t in [0, T]; t = T is rejected for singular kinds.
    double operator()(double t) const;
    /// psi(T - tau) for tau in (0, T].
    double at_lag(double tau) const;
    /// tau * psi(T - tau), evaluated without forming T - tau for power kinds.
    double lag_weighted(double tau) const;
    /// Lags tau in (0, T) where psi is not smooth, sorted.
    std::vector<double> lag_breaks() const;

private:
    TemporalSource() = default;
    double base_at_lag(double tau) const;
    double offset_at_lag(double tau) const;

    PsiKind kind_ = PsiKind::constant;
    double horizon_ = 1.0;
    // constant: c = a; affine: a + b t; power: theta, b0, xi.
    double a_ = 0.0;
    double b_ = 0.0;
    double theta_ = 0.0;
    double b0_ = 0.0;
    double xi_ = 0.0;
    std::vector<double> table_t_;
    std::vector<double> table_v_;
    std::vector<double> offsets_;
};

double eval_psi(const TemporalSource& psi, double t);

/// ||psi||_{L^1(0,T)}.
double l1_norm(const TemporalSource& psi);
/// ||psi - other||_{L^1(0,T)}; ConfigError when horizons differ.
double l1_distance(const TemporalSource& psi, const TemporalSource& other);

enum class SpatialKind { gaussian, sampled };

/// Spatial source f: a closed form or samples on a grid, plus the claimed
/// Sobolev smoothness gamma.
class SpatialSourceSpec {
public:
    /// f(x) = amplitude * exp(-((x - center) / width)^2).
    static SpatialSourceSpec gaussian(double amplitude, double width, double center,
                                      double gamma);
    static SpatialSourceSpec sampled(std::vector<double> samples, SpatialGrid grid,
                                     double gamma);

    SpatialKind kind() const noexcept { return kind_; }
    double gamma() const noexcept { return gamma_; }
    double amplitude() const noexcept { return amplitude_; }
    double width() const noexcept { return width_; }
    double center() const noexcept { return center_; }

    double operator()(double x) const;
    /// Samples on grid nodes; for sampled specs the grid must match.
    std::vector<double> sample(const SpatialGrid& grid) const;

private:
    SpatialSourceSpec() = default;

    SpatialKind kind_ = SpatialKind::gaussian;
    double gamma_ = 0.0;
    double amplitude_ = 1.0;
    double width_ = 1.0;
    double center_ = 0.0;
    std::vector<double> samples_;
    std::optional<SpatialGrid> grid_;
};

}  // namespace bpsi
