#include <cmath>
#include <numbers>

#include "fieldcomm/errors.hpp"
#include "fieldcomm/protocols.hpp"

namespace fieldcomm {

namespace {

using cplx = std::complex<double>;

constexpr int kVoid = 2;

}  // namespace

DensityMatrix erasure_channel(int n, const DensityMatrix& rho_in) {
    if (n < 1) {
        throw ValidationError("erasure channel needs N >= 1");
    }
    if (rho_in.dim() != 2) {
        throw ValidationError("erasure channel input must be a qubit");
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(3, 3);
    out.topLeftCorner(2, 2) = rho_in.matrix() / static_cast<double>(n);
    out(kVoid, kVoid) = static_cast<double>(n - 1) / n;
    return DensityMatrix(std::move(out));
}

double erasure_coherent_info(int n) {
    if (n < 1) {
        throw ValidationError("erasure channel needs N >= 1");
    }
    // Reference R (dim 2) times output B (dim 3), index 3 r + b.
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(6);
    phi(0) = phi(4) = std::numbers::sqrt2 / 2.0;
    Eigen::MatrixXcd rho = phi * phi.adjoint() / static_cast<double>(n);
    const double erased = static_cast<double>(n - 1) / n;
    rho(kVoid, kVoid) += 0.5 * erased;
    rho(3 + kVoid, 3 + kVoid) += 0.5 * erased;
    const DensityMatrix rb(std::move(rho), {2, 3});
    return entropy(rb.partial_trace({1})) - entropy(rb);
}

AntidegradabilityResult antidegradability_check(int n) {
    if (n < 2) {
        throw ValidationError("anti-degradability check needs at least two receivers");
    }
    if (n > 8) {
        throw ValidationError("anti-degradability check supports at most eight receivers");
    }
    int dim = 1;
    for (int i = 0; i < n; ++i) {
        dim *= 3;
    }
    // Index of the basis state with `level` on receiver i and the void elsewhere.
    auto index = [&](int receiver, int level) {
        int idx = 0;
        for (int j = 0; j < n; ++j) {
            idx = 3 * idx + (j == receiver ? level : kVoid);
        }
        return idx;
    };
    Eigen::MatrixXcd iso = Eigen::MatrixXcd::Zero(dim, 2);
    for (int i = 0; i < n; ++i) {
        for (int b = 0; b < 2; ++b) {
            iso(index(i, b), b) = 1.0 / std::sqrt(static_cast<double>(n));
        }
    }
    const double r = std::numbers::sqrt2 / 2.0;
    const std::vector<Eigen::Vector2cd> inputs{
        {1.0, 0.0}, {0.0, 1.0}, {r, r}, {cplx(r), cplx(0.0, r)}};
    std::vector<int> dims(static_cast<std::size_t>(n), 3);
    std::vector<int> others;
    for (int i = 1; i < n; ++i) {
        others.push_back(i);
    }
    double worst = 0.0;
    for (const auto& psi : inputs) {
        const DensityMatrix out = DensityMatrix::pure(iso * psi, dims);
        const DensityMatrix channel = out.partial_trace({0});
        const DensityMatrix complement = out.partial_trace(others);
        const DensityMatrix recovered = complement.partial_trace({0});
        worst = std::max(worst, trace_distance(channel, recovered));
    }
    return {worst < 1e-10, worst};
}

}  // namespace fieldcomm
