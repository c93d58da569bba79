#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bpsi {

/// Uniform sampling of the truncated domain [A, B] with L nodes
/// x_j = A + j*dx (j = 0..L-1, dx = (B-A)/(L-1)) and the matched frequency
/// nodes z_k = (k - floor(L/2)) * dz, dz = 2*pi/(L*dx), stored in increasing
/// order so that z_k spans [-pi/dx, pi/dx).
class SpatialGrid {
public:
    static constexpr double kDefaultLeft = -10.0;
    static constexpr double kDefaultRight = 10.0;
    static constexpr std::size_t kDefaultSize = 1024;

    /// Throws DomainError unless left < right and size >= 4.
    SpatialGrid(double left, double right, std::size_t size);

    double left() const noexcept { return left_; }
    double right() const noexcept { return right_; }
    std::size_t size() const noexcept { return size_; }
    double dx() const noexcept { return dx_; }
    double dz() const noexcept { return dz_; }

    double node(std::size_t j) const noexcept;
    double frequency(std::size_t k) const noexcept;
    std::vector<double> nodes() const;
    std::vector<double> frequencies() const;

    /// pi / dx, the Nyquist frequency.
    double max_frequency() const noexcept;
    /// Index of z = 0 in the shifted layout.
    std::size_t zero_index() const noexcept { return size_ / 2; }
    /// Index of the node at -z_k, or size() for the unpaired -pi/dx node of
    /// an even grid.
    std::size_t mirror_index(std::size_t k) const noexcept;

    friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;

private:
    double left_;
    double right_;
    std::size_t size_;
    double dx_;
    double dz_;
};

SpatialGrid make_grid(double left, double right, std::size_t size);

/// Frequency-domain samples on a grid's frequency nodes, shifted layout.
struct SpectralField {
    std::vector<std::complex<double>> values;
    SpatialGrid grid;
};

/// Discrete approximation of the unitary continuous transform
///   f^(z) = (2 pi)^{-1/2} \int f(x) e^{-ixz} dx
/// computed as (dx / sqrt(2 pi)) e^{-i z_k A} DFT[f]. Samples should decay
/// to zero at both ends of the grid.
SpectralField forward_ft(std::span<const double> samples, const SpatialGrid& grid);

/// Inverse of forward_ft. The field must be Hermitian (value at -z equals
/// the conjugate of the value at z) within 1e-9 relative to its largest
/// entry; otherwise SymmetryError.
std::vector<double> inverse_ft(const SpectralField& field);

/// Largest Hermitian defect of a field relative to its largest magnitude.
double hermitian_defect(const SpectralField& field);

}  // namespace bpsi
