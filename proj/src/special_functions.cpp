#include "fieldcomm/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fieldcomm/errors.hpp"

namespace fieldcomm {

SineCosineIntegrals sine_cosine_integrals(double x) {
    using std::numbers::pi;
    if (!(x > 0.0)) {
        throw ValidationError("sine/cosine integrals need x > 0");
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (x > 2.0) {
        // Continued fraction for E1(ix), modified Lentz.
        constexpr double tiny = 1e-300;
        std::complex<double> b(1.0, x);
        std::complex<double> c = 1.0 / tiny;
        std::complex<double> d = 1.0 / b;
        std::complex<double> h = d;
        for (int i = 1; i < 200; ++i) {
            const double a = -static_cast<double>(i) * i;
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            const std::complex<double> del = c * d;
            h *= del;
            if (std::abs(del - 1.0) < eps) {
                break;
            }
        }
        h *= std::complex<double>(std::cos(x), -std::sin(x));
        return {0.5 * pi + h.imag(), -h.real()};
    }
    // Power series; all terms stay O(1) for x <= 2.
    double si = 0.0;
    double ci = 0.0;
    double term = x;  // x^n / n!
    for (int n = 1; n < 60; ++n) {
        if (n % 2 == 1) {
            const double sign = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
            si += sign * term / n;
        } else {
            const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
            ci += sign * term / n;
        }
        term *= x / (n + 1);
        if (term < eps * 1e-3) {
            break;
        }
    }
    return {si, std::numbers::egamma + std::log(x) + ci};
}

std::complex<double> oscillatory_tail(double omega, double lower, int power) {
    if (!(lower > 0.0) || power < 1) {
        throw ValidationError("oscillatory tail needs K > 0 and power >= 1");
    }
    if (omega == 0.0) {
        if (power == 1) {
            throw ValidationError("non-oscillatory 1/k tail diverges");
        }
        return std::pow(lower, 1 - power) / (power - 1);
    }
    // T_1 = -Ci(|w|K) + i sgn(w) (pi/2 - Si(|w|K)); then integrate by parts upward.
    const auto [si, ci] = sine_cosine_integrals(std::abs(omega) * lower);
    const double sgn = omega > 0.0 ? 1.0 : -1.0;
    std::complex<double> t(-ci, sgn * (0.5 * std::numbers::pi - si));
    const std::complex<double> phase = std::polar(1.0, omega * lower);
    const std::complex<double> iw(0.0, omega);
    for (int n = 2; n <= power; ++n) {
        t = phase * std::pow(lower, 1 - n) / static_cast<double>(n - 1) +
            iw / static_cast<double>(n - 1) * t;
    }
    return t;
}

}  // namespace fieldcomm
