#include "bpsi/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "bpsi/errors.hpp"

namespace bpsi {

namespace {

constexpr double kHermitianTolerance = 1e-9;

// FFTW's planner is not reentrant; execution on the planned buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n)
        : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (data == nullptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;

    fftw_complex* data;
};

// Unnormalized in-place DFT of n points; sign = FFTW_FORWARD or FFTW_BACKWARD.
void dft_inplace(std::vector<std::complex<double>>& v, int sign) {
    const std::size_t n = v.size();
    FftwBuffer buf(n);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), buf.data, buf.data, sign, FFTW_ESTIMATE);
    }
    std::copy(v.begin(), v.end(), reinterpret_cast<std::complex<double>*>(buf.data));
    fftw_execute(plan);
    std::copy_n(reinterpret_cast<std::complex<double>*>(buf.data), n, v.begin());
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

double spectral_scale(const SpatialGrid& grid) {
    return grid.dx() / std::sqrt(2.0 * std::numbers::pi);
}

// Maps shifted index k to the DFT bin of z_k.
std::size_t dft_bin(const SpatialGrid& grid, std::size_t k) {
    const std::size_t n = grid.size();
    return (k + n - grid.zero_index()) % n;
}

// Recovers the raw DFT coefficients from a spectral field (undoes scale and
// the e^{-i z A} phase), in DFT order.
std::vector<std::complex<double>> raw_dft(const SpectralField& field) {
    const SpatialGrid& grid = field.grid;
    const std::size_t n = grid.size();
    if (field.values.size() != n) {
        throw ShapeError("spectral field has " + std::to_string(field.values.size()) +
                         " values, grid has " + std::to_string(n) + " nodes");
    }
    const double scale = spectral_scale(grid);
    std::vector<std::complex<double>> raw(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double z = grid.frequency(k);
        raw[dft_bin(grid, k)] = field.values[k] * std::polar(1.0 / scale, z * grid.left());
    }
    return raw;
}

double raw_hermitian_defect(const std::vector<std::complex<double>>& raw) {
    const std::size_t n = raw.size();
    double largest = 0.0;
    double defect = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        largest = std::max(largest, std::abs(raw[m]));
        defect = std::max(defect, std::abs(raw[m] - std::conj(raw[(n - m) % n])));
    }
    return largest > 0.0 ? defect / largest : 0.0;
}

}  // namespace

SpatialGrid::SpatialGrid(double left, double right, std::size_t size)
    : left_(left), right_(right), size_(size) {
    if (!(left < right) || !std::isfinite(left) || !std::isfinite(right)) {
        throw DomainError("grid requires A < B (got A=" + std::to_string(left) +
                          ", B=" + std::to_string(right) + ")");
    }
    if (size < 4) {
        throw DomainError("grid requires L >= 4 (got " + std::to_string(size) + ")");
    }
    dx_ = (right - left) / static_cast<double>(size - 1);
    dz_ = 2.0 * std::numbers::pi / (static_cast<double>(size) * dx_);
}

double SpatialGrid::node(std::size_t j) const noexcept {
    return left_ + static_cast<double>(j) * dx_;
}

double SpatialGrid::frequency(std::size_t k) const noexcept {
    return (static_cast<double>(k) - static_cast<double>(zero_index())) * dz_;
}

std::vector<double> SpatialGrid::nodes() const {
    std::vector<double> x(size_);
    for (std::size_t j = 0; j < size_; ++j) x[j] = node(j);
    return x;
}

std::vector<double> SpatialGrid::frequencies() const {
    std::vector<double> z(size_);
    for (std::size_t k = 0; k < size_; ++k) z[k] = frequency(k);
    return z;
}

double SpatialGrid::max_frequency() const noexcept { return std::numbers::pi / dx_; }

std::size_t SpatialGrid::mirror_index(std::size_t k) const noexcept {
    const std::size_t twice_center = 2 * zero_index();
    return k <= twice_center && twice_center - k < size_ ? twice_center - k : size_;
}

SpatialGrid make_grid(double left, double right, std::size_t size) {
    return SpatialGrid(left, right, size);
}

SpectralField forward_ft(std::span<const double> samples, const SpatialGrid& grid) {
    const std::size_t n = grid.size();
    if (samples.size() != n) {
        throw ShapeError("forward_ft: " + std::to_string(samples.size()) +
                         " samples for a grid of " + std::to_string(n) + " nodes");
    }
    std::vector<std::complex<double>> raw(samples.begin(), samples.end());
    dft_inplace(raw, FFTW_FORWARD);

    const double scale = spectral_scale(grid);
    SpectralField out{std::vector<std::complex<double>>(n), grid};
    for (std::size_t k = 0; k < n; ++k) {
        const double z = grid.frequency(k);
        out.values[k] = raw[dft_bin(grid, k)] * std::polar(scale, -z * grid.left());
    }
    return out;
}

double hermitian_defect(const SpectralField& field) {
    return raw_hermitian_defect(raw_dft(field));
}

std::vector<double> inverse_ft(const SpectralField& field) {
    auto raw = raw_dft(field);
    const double defect = raw_hermitian_defect(raw);
    if (defect > kHermitianTolerance) {
        throw SymmetryError("inverse_ft: spectrum is not Hermitian (relative defect " +
                            std::to_string(defect) + ")");
    }
    dft_inplace(raw, FFTW_BACKWARD);
    const double inv_n = 1.0 / static_cast<double>(raw.size());
    std::vector<double> out(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) out[j] = raw[j].real() * inv_n;
    return out;
}

}  // namespace bpsi
