#pragma once

#include <Eigen/Dense>

#include <vector>

namespace fieldcomm {

/// Hermitian, positive semidefinite, unit-trace matrix on a tensor product of
/// small subsystems. Subsystem 0 is the most significant tensor factor.
class DensityMatrix {
public:
    /// Validates and cleans `m`: Hermitian to 1e-10 (then symmetrized), trace
    /// 1 to 1e-8 (then rescaled), eigenvalues in [-1e-10, 0) clipped to zero.
    /// Throws PsdError when any check fails.
    DensityMatrix(Eigen::MatrixXcd m, std::vector<int> dims);
    /// Single subsystem of dimension m.rows().
    explicit DensityMatrix(Eigen::MatrixXcd m);

    static DensityMatrix pure(const Eigen::VectorXcd& psi, std::vector<int> dims);
    static DensityMatrix pure(const Eigen::VectorXcd& psi);

    [[nodiscard]] const Eigen::MatrixXcd& matrix() const { return m_; }
    [[nodiscard]] const std::vector<int>& dims() const { return dims_; }
    [[nodiscard]] int dim() const { return static_cast<int>(m_.rows()); }
    [[nodiscard]] std::complex<double> operator()(int r, int c) const { return m_(r, c); }

    /// Ascending eigenvalues.
    [[nodiscard]] Eigen::VectorXd eigenvalues() const;

    /// Keeps the listed subsystems, in the listed order.
    [[nodiscard]] DensityMatrix partial_trace(const std::vector<int>& keep) const;

private:
    Eigen::MatrixXcd m_;
    std::vector<int> dims_;
};

/// Von Neumann entropy in bits.
[[nodiscard]] double entropy(const DensityMatrix& rho);
[[nodiscard]] double entropy_of_eigenvalues(const Eigen::VectorXd& eigenvalues);

/// S(rho) - S(rho with every subsystem except the first traced out).
[[nodiscard]] double coherent_information(const DensityMatrix& rho);

/// <psi|rho|psi> for normalized psi.
[[nodiscard]] double fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& psi);

/// (1/2) ||a - b||_1.
[[nodiscard]] double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace fieldcomm
