#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fieldcomm/density_matrix.hpp"
#include "fieldcomm/field_kernel.hpp"

namespace fieldcomm {

/// Integer combination of registered generators. The zero vector is the vacuum.
struct DisplacementLabel {
    std::vector<int> coeffs;

    static DisplacementLabel vacuum(std::size_t generators) { return {std::vector<int>(generators, 0)}; }
    static DisplacementLabel unit(std::size_t generators, std::size_t index, int sign = 1);

    [[nodiscard]] bool is_vacuum() const;
    DisplacementLabel& operator+=(const DisplacementLabel& other);
    friend DisplacementLabel operator+(DisplacementLabel a, const DisplacementLabel& b) { return a += b; }
    friend DisplacementLabel operator-(const DisplacementLabel& a) {
        DisplacementLabel out = a;
        for (int& c : out.coeffs) {
            c = -c;
        }
        return out;
    }
    friend DisplacementLabel operator-(const DisplacementLabel& a, const DisplacementLabel& b) { return a + (-b); }
    friend bool operator==(const DisplacementLabel&, const DisplacementLabel&) = default;
    friend auto operator<=>(const DisplacementLabel&, const DisplacementLabel&) = default;
};

/// Registered generators with their pairwise inner-product table.
///
/// table(i, j) = int alpha_i conj(alpha_j). Read-only after construction and
/// safe to share between threads.
class GeneratorSet {
public:
    GeneratorSet(std::vector<DisplacementGenerator> generators, std::vector<std::string> names,
                 const QuadratureOptions& options = {});

    /// Build from a precomputed Hermitian table, e.g. for audits of hand-made configurations.
    static GeneratorSet from_table(Eigen::MatrixXcd table, std::vector<std::string> names);

    [[nodiscard]] std::size_t size() const { return names_.size(); }
    [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
    [[nodiscard]] std::size_t index(const std::string& name) const;
    [[nodiscard]] const std::vector<DisplacementGenerator>& generators() const { return generators_; }
    [[nodiscard]] const Eigen::MatrixXcd& table() const { return table_; }
    /// Largest quadrature error estimate over the table.
    [[nodiscard]] double max_error() const { return max_error_; }

    [[nodiscard]] DisplacementLabel vacuum() const { return DisplacementLabel::vacuum(size()); }
    [[nodiscard]] DisplacementLabel label(const std::string& name, int sign = 1) const {
        return DisplacementLabel::unit(size(), index(name), sign);
    }

    [[nodiscard]] std::complex<double> inner(const DisplacementLabel& a, const DisplacementLabel& b) const;
    [[nodiscard]] double norm_sq(const DisplacementLabel& a) const { return inner(a, a).real(); }
    [[nodiscard]] double phi(const DisplacementLabel& a, const DisplacementLabel& b) const {
        return inner(a, b).imag();
    }
    /// <a|b> for the coherent states labelled a and b.
    [[nodiscard]] std::complex<double> overlap(const DisplacementLabel& a, const DisplacementLabel& b) const;

private:
    GeneratorSet() = default;
    void check_label(const DisplacementLabel& a) const;

    std::vector<DisplacementGenerator> generators_;
    std::vector<std::string> names_;
    Eigen::MatrixXcd table_;
    double max_error_ = 0.0;
};

/// Gram matrix of coherent states, entry (i, j) = <label_i|label_j>.
[[nodiscard]] Eigen::MatrixXcd gram(const GeneratorSet& set, const std::vector<DisplacementLabel>& labels);

enum class Axis { X, Z };

/// |s axis><s axis| (x) D_shift + (1 - |s axis><s axis|) (x) 1 on one qubit.
struct ControlledDisplacement {
    int qubit = 0;
    Axis control_axis = Axis::X;
    int control_sign = 1;
    DisplacementLabel shift;

    static ControlledDisplacement single(const GeneratorSet& set, int qubit, Axis axis, int control_sign,
                                         const std::string& generator, int generator_sign = 1);
};

/// Superposition of (qubit bit string, coherent-state label) terms.
///
/// Bit q of `bits` holds qubit q in the Z basis: 0 is |+Z>, 1 is |-Z>. Terms
/// are kept sorted and merged by (bits, label).
class HybridState {
public:
    struct Term {
        std::uint32_t bits;
        DisplacementLabel label;
        std::complex<double> amp;
    };

    /// Qubit amplitudes in tensor order (qubit 0 most significant), field in the vacuum.
    HybridState(std::shared_ptr<const GeneratorSet> set, int qubits, const Eigen::VectorXcd& amplitudes);

    /// Product of single-qubit states (each a 2-vector in the Z basis), field in the vacuum.
    static HybridState product(std::shared_ptr<const GeneratorSet> set, const std::vector<Eigen::Vector2cd>& qubits);

    [[nodiscard]] int qubits() const { return qubits_; }
    [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
    [[nodiscard]] const GeneratorSet& generators() const { return *set_; }
    [[nodiscard]] double norm_sq() const;

private:
    HybridState(std::shared_ptr<const GeneratorSet> set, int qubits, std::vector<Term> terms);
    friend HybridState apply_gate(const HybridState&, const ControlledDisplacement&);

    std::shared_ptr<const GeneratorSet> set_;
    int qubits_;
    std::vector<Term> terms_;
};

/// Exact action of a controlled displacement, D_g|L> = e^{i phi(g, L)} |g + L>.
/// Throws UnitarityError if the norm drifts from 1 by more than 1e-8.
[[nodiscard]] HybridState apply_gate(const HybridState& state, const ControlledDisplacement& gate);

/// Reduced state of the listed qubits; the first listed qubit is the most significant factor.
[[nodiscard]] DensityMatrix reduce(const HybridState& state, const std::vector<int>& keep);

/// Entropy in bits of everything except the listed qubits (the field and the
/// remaining qubits), from the spectrum of the state in the non-orthogonal
/// coherent basis. Equals entropy(reduce(state, keep)) for pure states.
[[nodiscard]] double complement_entropy(const HybridState& state, const std::vector<int>& keep);

/// Computational-basis vector of a single qubit state a|+Z> + b|-Z>.
[[nodiscard]] inline Eigen::Vector2cd qubit(std::complex<double> a, std::complex<double> b) {
    return {a, b};
}

/// |+X>, |-X>, |+Y>, |-Y>, |+Z>, |-Z> by name "+X" etc.
[[nodiscard]] Eigen::Vector2cd axis_state(const std::string& name);

}  // namespace fieldcomm
