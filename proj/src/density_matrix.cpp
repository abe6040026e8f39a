#include "fieldcomm/density_matrix.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "fieldcomm/errors.hpp"

namespace fieldcomm {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kTraceTol = 1e-8;
constexpr double kNegativeTol = 1e-10;

int product(const std::vector<int>& dims) {
    return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd m, std::vector<int> dims) : m_(std::move(m)), dims_(std::move(dims)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw PsdError("density matrix must be square and non-empty");
    }
    if (product(dims_) != m_.rows()) {
        throw ValidationError("subsystem dimensions do not match the matrix size");
    }
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTol * scale) {
        std::ostringstream msg;
        msg << "density matrix not Hermitian: deviation " << asym;
        throw PsdError(msg.str());
    }
    m_ = 0.5 * (m_ + m_.adjoint()).eval();
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
        std::ostringstream msg;
        msg << "density matrix trace " << tr << " differs from 1";
        throw PsdError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_);
    const Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < -kNegativeTol) {
        std::ostringstream msg;
        msg << "density matrix has negative eigenvalue " << ev.minCoeff();
        throw PsdError(msg.str());
    }
    if (ev.minCoeff() < 0.0) {
        const Eigen::VectorXd clipped = ev.cwiseMax(0.0);
        m_ = es.eigenvectors() * clipped.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
        m_ = 0.5 * (m_ + m_.adjoint()).eval();
    }
    m_ /= m_.trace().real();
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd m) : DensityMatrix(m, {static_cast<int>(m.rows())}) {}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi, std::vector<int> dims) {
    return DensityMatrix(psi * psi.adjoint(), std::move(dims));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) { return pure(psi, {static_cast<int>(psi.size())}); }

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

DensityMatrix DensityMatrix::partial_trace(const std::vector<int>& keep) const {
    const int n = static_cast<int>(dims_.size());
    std::vector<bool> kept(n, false);
    for (int k : keep) {
        if (k < 0 || k >= n || kept[k]) {
            throw ValidationError("invalid subsystem list for partial trace");
        }
        kept[k] = true;
    }
    std::vector<int> traced;
    for (int s = 0; s < n; ++s) {
        if (!kept[s]) {
            traced.push_back(s);
        }
    }
    // Row-major strides: subsystem 0 most significant.
    std::vector<int> stride(n, 1);
    for (int s = n - 2; s >= 0; --s) {
        stride[s] = stride[s + 1] * dims_[s + 1];
    }
    std::vector<int> kdims;
    for (int k : keep) {
        kdims.push_back(dims_[k]);
    }
    std::vector<int> tdims;
    for (int t : traced) {
        tdims.push_back(dims_[t]);
    }
    const int dk = product(kdims);
    const int dt = product(tdims);

    auto offset = [&](int index, const std::vector<int>& subsystems, const std::vector<int>& sdims) {
        int off = 0;
        for (int s = static_cast<int>(subsystems.size()) - 1; s >= 0; --s) {
            off += (index % sdims[s]) * stride[subsystems[s]];
            index /= sdims[s];
        }
        return off;
    };

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
    for (int t = 0; t < dt; ++t) {
        const int ot = offset(t, traced, tdims);
        for (int r = 0; r < dk; ++r) {
            const int i = ot + offset(r, keep, kdims);
            for (int c = 0; c < dk; ++c) {
                out(r, c) += m_(i, ot + offset(c, keep, kdims));
            }
        }
    }
    if (kdims.empty()) {
        kdims.push_back(1);
    }
    return DensityMatrix(std::move(out), std::move(kdims));
}

double entropy_of_eigenvalues(const Eigen::VectorXd& eigenvalues) {
    double s = 0.0;
    for (double lambda : eigenvalues) {
        if (lambda > 0.0) {
            s -= lambda * std::log2(lambda);
        }
    }
    return s;
}

double entropy(const DensityMatrix& rho) { return entropy_of_eigenvalues(rho.eigenvalues()); }

double coherent_information(const DensityMatrix& rho) {
    if (rho.dims().size() < 2) {
        throw ValidationError("coherent information needs a bipartite state");
    }
    return entropy(rho) - entropy(rho.partial_trace({0}));
}

double fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& psi) {
    if (psi.size() != rho.dim()) {
        throw ValidationError("state dimension does not match density matrix");
    }
    return psi.dot(rho.matrix() * psi).real();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) {
        throw ValidationError("trace distance between matrices of different size");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace fieldcomm
