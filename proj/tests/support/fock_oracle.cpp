#include "fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fieldcomm::testing {

namespace {

using cplx = std::complex<double>;

cplx power(cplx z, int n) {
    cplx out = 1.0;
    for (int i = 0; i < n; ++i) {
        out *= z;
    }
    return out;
}

int qubit_bit(int index, int qubit, int qubits) { return (index >> (qubits - 1 - qubit)) & 1; }

Eigen::Vector2cd control_state(const ControlledDisplacement& g) {
    if (g.control_axis == Axis::X) {
        return axis_state(g.control_sign > 0 ? "+X" : "-X");
    }
    return axis_state(g.control_sign > 0 ? "+Z" : "-Z");
}

// Applies the single-mode matrix m to mode `mode` of a field vector laid out
// with mode 0 most significant.
void apply_mode(Eigen::VectorXcd& field, const Eigen::MatrixXcd& m, int mode, int modes, int cutoff) {
    long stride = 1;
    for (int k = mode + 1; k < modes; ++k) {
        stride *= cutoff;
    }
    const long block = stride * cutoff;
    Eigen::VectorXcd v(cutoff);
    for (long outer = 0; outer < field.size(); outer += block) {
        for (long r = 0; r < stride; ++r) {
            for (int i = 0; i < cutoff; ++i) {
                v(i) = field(outer + r + i * stride);
            }
            const Eigen::VectorXcd w = m * v;
            for (int i = 0; i < cutoff; ++i) {
                field(outer + r + i * stride) = w(i);
            }
        }
    }
}

Eigen::MatrixXcd trace_to(const Eigen::MatrixXcd& full, int qubits, const std::vector<int>& keep) {
    const int k = static_cast<int>(keep.size());
    const int dim = 1 << qubits;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(1 << k, 1 << k);
    auto kept_index = [&](int i) {
        int idx = 0;
        for (int q : keep) {
            idx = 2 * idx + qubit_bit(i, q, qubits);
        }
        return idx;
    };
    auto traced_match = [&](int i, int j) {
        for (int q = 0; q < qubits; ++q) {
            const bool kept = std::find(keep.begin(), keep.end(), q) != keep.end();
            if (!kept && qubit_bit(i, q, qubits) != qubit_bit(j, q, qubits)) {
                return false;
            }
        }
        return true;
    };
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            if (traced_match(i, j)) {
                out(kept_index(i), kept_index(j)) += full(i, j);
            }
        }
    }
    return out;
}

}  // namespace

Eigen::MatrixXcd fock_displacement(cplx alpha, int cutoff) {
    const double x = std::norm(alpha);
    const double damp = std::exp(-0.5 * x);
    Eigen::MatrixXcd d(cutoff, cutoff);
    for (int m = 0; m < cutoff; ++m) {
        for (int n = 0; n < cutoff; ++n) {
            const int lo = std::min(m, n);
            const int gap = std::abs(m - n);
            const double ratio = std::exp(0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + gap + 1.0)));
            const cplx base = m >= n ? alpha : -std::conj(alpha);
            d(m, n) = ratio * power(base, gap) * std::assoc_laguerre(static_cast<unsigned>(lo),
                                                                    static_cast<unsigned>(gap), x) *
                      damp;
        }
    }
    return d;
}

namespace {

// Qubit density matrix after tracing out the field.
Eigen::MatrixXcd fock_qubit_state(const FockCircuit& c, int cutoff) {
    const int modes = static_cast<int>(c.generator_modes.front().size());
    long field_dim = 1;
    for (int k = 0; k < modes; ++k) {
        field_dim *= cutoff;
    }
    const int qdim = 1 << c.qubits;
    // psi[i] is the field state attached to qubit basis state i.
    std::vector<Eigen::VectorXcd> psi(qdim, Eigen::VectorXcd::Zero(field_dim));
    for (int i = 0; i < qdim; ++i) {
        psi[i](0) = c.initial(i);
    }
    for (const auto& g : c.gates) {
        Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(modes);
        for (std::size_t i = 0; i < g.shift.coeffs.size(); ++i) {
            amps += static_cast<double>(g.shift.coeffs[i]) * c.generator_modes[i];
        }
        std::vector<Eigen::MatrixXcd> mats;
        for (int k = 0; k < modes; ++k) {
            mats.push_back(fock_displacement(amps(k), cutoff));
        }
        const Eigen::Vector2cd s = control_state(g);
        const int bit = 1 << (c.qubits - 1 - g.qubit);
        for (int i0 = 0; i0 < qdim; ++i0) {
            if (i0 & bit) {
                continue;
            }
            const int i1 = i0 | bit;
            Eigen::VectorXcd along = std::conj(s(0)) * psi[i0] + std::conj(s(1)) * psi[i1];
            Eigen::VectorXcd moved = along;
            for (int k = 0; k < modes; ++k) {
                apply_mode(moved, mats[k], k, modes, cutoff);
            }
            const Eigen::VectorXcd delta = moved - along;
            psi[i0] += s(0) * delta;
            psi[i1] += s(1) * delta;
        }
    }
    Eigen::MatrixXcd full(qdim, qdim);
    for (int i = 0; i < qdim; ++i) {
        for (int j = 0; j < qdim; ++j) {
            full(i, j) = psi[j].dot(psi[i]);
        }
    }
    return full;
}

}  // namespace

Eigen::MatrixXcd fock_reduced_state(const FockCircuit& c, const std::vector<int>& keep, int cutoff) {
    return trace_to(fock_qubit_state(c, cutoff), c.qubits, keep);
}

Eigen::MatrixXcd label_reduced_state(const FockCircuit& c, const std::vector<int>& keep) {
    const auto n = static_cast<Eigen::Index>(c.generator_modes.size());
    Eigen::MatrixXcd table(n, n);
    std::vector<std::string> names;
    for (Eigen::Index i = 0; i < n; ++i) {
        names.push_back("g" + std::to_string(i));
        for (Eigen::Index j = 0; j < n; ++j) {
            table(i, j) = c.generator_modes[j].dot(c.generator_modes[i]);
        }
    }
    auto set = std::make_shared<const GeneratorSet>(GeneratorSet::from_table(table, names));
    HybridState s(set, c.qubits, c.initial);
    for (auto g : c.gates) {
        s = apply_gate(s, g);
    }
    return reduce(s, keep).matrix();
}

FockCircuit cavity_three_mode_circuit() {
    constexpr int kModes = 3;
    constexpr double kLength = 4.0;
    auto coupling = [&](double c, const Profile& f, double t, double x) {
        DisplacementGenerator g;
        g.kernel = CavityDirichlet{kLength, kModes};
        g.coupling = c;
        g.profile = f;
        g.time = t;
        g.position = x;
        return g;
    };
    const Profile tri = Profile::triangle(1.0);
    const std::vector<DisplacementGenerator> gens{
        coupling(0.8, tri, 0.0, 2.0),
        coupling(1.2, tri, 2.0, 2.0),
        coupling(1.0, tri.mirrored(), 2.0, 2.0),
        coupling(0.8, tri.mirrored(), 4.0, 2.0),
        coupling(0.7, Profile::skew_triangle(1.0), 1.0, 1.0),
    };
    FockCircuit c;
    c.qubits = 3;
    for (const auto& g : gens) {
        Eigen::VectorXcd a(kModes);
        for (int j = 1; j <= kModes; ++j) {
            a(j - 1) = cavity_mode_amp(g, j);
        }
        c.generator_modes.push_back(a);
    }
    auto unit = [&](std::size_t i, int sign = 1) { return DisplacementLabel::unit(gens.size(), i, sign); };
    c.gates = {
        {0, Axis::X, +1, unit(0)},
        {0, Axis::Z, -1, unit(1)},
        {1, Axis::Z, -1, unit(2, -1)},
        {2, Axis::Z, +1, unit(4)},
        {1, Axis::X, +1, unit(3)},
        {0, Axis::Z, +1, unit(1) - unit(4)},
        {2, Axis::X, -1, unit(0)},
    };
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    c.initial = Eigen::VectorXcd(8);
    for (int i = 0; i < 8; ++i) {
        c.initial(i) = cplx(normal(rng), normal(rng));
    }
    c.initial.normalize();
    return c;
}

FockComparison compare_with_fock(const FockCircuit& circuit, int cutoff) {
    FockComparison out;
    const int qubits = circuit.qubits;
    const Eigen::MatrixXcd full = fock_qubit_state(circuit, cutoff);
    for (int mask = 1; mask < (1 << qubits); ++mask) {
        std::vector<int> keep;
        for (int q = 0; q < qubits; ++q) {
            if (mask & (1 << q)) {
                keep.push_back(q);
            }
        }
        const Eigen::MatrixXcd a = trace_to(full, qubits, keep);
        const Eigen::MatrixXcd b = label_reduced_state(circuit, keep);
        out.max_entry_difference = std::max(out.max_entry_difference, (a - b).cwiseAbs().maxCoeff());
        ++out.reduced_states;
    }
    return out;
}

}  // namespace fieldcomm::testing
