#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace fieldcomm {

struct QuadratureOptions {
    double relative_tolerance = 1e-9;
    std::size_t max_panels = 400000;
};

struct QuadratureResult {
    std::complex<double> value;
    double error_estimate;
    /// Integral of |integrand|; the tolerance is relative to this.
    double l1_norm;
    std::size_t panels;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of a complex integrand.
///
/// `breakpoints` must be increasing and span the integration range; each
/// initial interval is refined independently of the others by always
/// bisecting the panel with the largest error estimate. Converged when the
/// summed error estimate is below relative_tolerance * l1_norm. Throws
/// QuadratureError when max_panels is exhausted first.
[[nodiscard]] QuadratureResult integrate_adaptive(
    const std::function<std::complex<double>(double)>& integrand,
    const std::vector<double>& breakpoints, const QuadratureOptions& options = {});

}  // namespace fieldcomm
