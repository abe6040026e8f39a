#pragma once

#include <complex>

namespace fieldcomm {

struct SineCosineIntegrals {
    double si;
    double ci;
};

/// Si(x) and Ci(x) for x > 0.
[[nodiscard]] SineCosineIntegrals sine_cosine_integrals(double x);

/// int_K^inf e^{i omega k} k^{-n} dk for K > 0 and n >= 2 (n >= 1 when omega != 0).
[[nodiscard]] std::complex<double> oscillatory_tail(double omega, double lower, int power);

}  // namespace fieldcomm
