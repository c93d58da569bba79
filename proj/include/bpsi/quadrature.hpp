#pragma once

#include <functional>
#include <span>

namespace bpsi {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_depth = 30;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

/// Adaptive 15-point Gauss-Legendre on [a, b]: a panel is accepted when the
/// two-half estimate agrees with the one-panel estimate within
/// max(abs_tol * width / (b - a), rel_tol * |estimate|); otherwise it is
/// bisected, down to max_depth levels.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Same as integrate, summed over consecutive intervals [breaks[i], breaks[i+1]].
/// Breaks must be nondecreasing; empty intervals are skipped.
QuadratureResult integrate_pieces(const std::function<double(double)>& f,
                                  std::span<const double> breaks,
                                  const QuadratureOptions& opts = {});

/// Breakpoints 0, w*r^levels, ..., w*r, w: geometric grading toward 0.
std::vector<double> graded_breaks(double width, int levels, double ratio = 0.5);

}  // namespace bpsi
