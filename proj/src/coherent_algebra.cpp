#include "fieldcomm/coherent_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "fieldcomm/errors.hpp"

namespace fieldcomm {

namespace {

using cplx = std::complex<double>;

constexpr double kPrune = 1e-14;
constexpr double kUnitarityTol = 1e-8;

std::uint32_t bit_of(std::uint32_t bits, int q) { return (bits >> q) & 1U; }

std::vector<HybridState::Term> merge(std::vector<HybridState::Term> raw) {
    std::map<std::pair<std::uint32_t, DisplacementLabel>, cplx> acc;
    for (auto& t : raw) {
        acc[{t.bits, std::move(t.label)}] += t.amp;
    }
    std::vector<HybridState::Term> out;
    out.reserve(acc.size());
    for (auto& [key, amp] : acc) {
        if (std::abs(amp) >= kPrune) {
            out.push_back({key.first, key.second, amp});
        }
    }
    return out;
}

}  // namespace

DisplacementLabel DisplacementLabel::unit(std::size_t generators, std::size_t index, int sign) {
    if (index >= generators) {
        throw ValidationError("generator index out of range");
    }
    auto out = vacuum(generators);
    out.coeffs[index] = sign;
    return out;
}

bool DisplacementLabel::is_vacuum() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](int c) { return c == 0; });
}

DisplacementLabel& DisplacementLabel::operator+=(const DisplacementLabel& other) {
    if (coeffs.size() != other.coeffs.size()) {
        throw ValidationError("labels over different generator sets");
    }
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        coeffs[i] += other.coeffs[i];
    }
    return *this;
}

GeneratorSet::GeneratorSet(std::vector<DisplacementGenerator> generators, std::vector<std::string> names,
                           const QuadratureOptions& options)
    : generators_(std::move(generators)), names_(std::move(names)) {
    if (generators_.size() != names_.size()) {
        throw ValidationError("one name per generator required");
    }
    const auto n = static_cast<Eigen::Index>(generators_.size());
    table_ = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const InnerProduct ip = displacement_inner_detailed(generators_[i], generators_[j], options);
            max_error_ = std::max(max_error_, ip.error_bound);
            if (i == j) {
                table_(i, i) = ip.value.real();
            } else {
                table_(i, j) = ip.value;
                table_(j, i) = std::conj(ip.value);
            }
        }
    }
}

GeneratorSet GeneratorSet::from_table(Eigen::MatrixXcd table, std::vector<std::string> names) {
    if (table.rows() != table.cols() || static_cast<std::size_t>(table.rows()) != names.size()) {
        throw ValidationError("inner-product table must be square with one name per row");
    }
    if ((table - table.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, table.cwiseAbs().maxCoeff())) {
        throw ValidationError("inner-product table must be Hermitian");
    }
    GeneratorSet out;
    out.names_ = std::move(names);
    out.table_ = std::move(table);
    return out;
}

std::size_t GeneratorSet::index(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        throw ValidationError("unknown generator '" + name + "'");
    }
    return static_cast<std::size_t>(it - names_.begin());
}

void GeneratorSet::check_label(const DisplacementLabel& a) const {
    if (a.coeffs.size() != size()) {
        throw ValidationError("label does not match generator set");
    }
}

cplx GeneratorSet::inner(const DisplacementLabel& a, const DisplacementLabel& b) const {
    check_label(a);
    check_label(b);
    cplx s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        if (a.coeffs[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < size(); ++j) {
            if (b.coeffs[j] != 0) {
                s += static_cast<double>(a.coeffs[i] * b.coeffs[j]) *
                     table_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
    }
    return s;
}

cplx GeneratorSet::overlap(const DisplacementLabel& a, const DisplacementLabel& b) const {
    if (a == b) {
        return 1.0;
    }
    return std::exp(-0.5 * norm_sq(a) - 0.5 * norm_sq(b) + inner(b, a));
}

Eigen::MatrixXcd gram(const GeneratorSet& set, const std::vector<DisplacementLabel>& labels) {
    const auto n = static_cast<Eigen::Index>(labels.size());
    Eigen::MatrixXcd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        g(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            g(i, j) = set.overlap(labels[i], labels[j]);
            g(j, i) = std::conj(g(i, j));
        }
    }
    return g;
}

ControlledDisplacement ControlledDisplacement::single(const GeneratorSet& set, int qubit, Axis axis,
                                                      int control_sign, const std::string& generator,
                                                      int generator_sign) {
    return {qubit, axis, control_sign, set.label(generator, generator_sign)};
}

HybridState::HybridState(std::shared_ptr<const GeneratorSet> set, int qubits, std::vector<Term> terms)
    : set_(std::move(set)), qubits_(qubits), terms_(std::move(terms)) {}

HybridState::HybridState(std::shared_ptr<const GeneratorSet> set, int qubits, const Eigen::VectorXcd& amplitudes)
    : set_(std::move(set)), qubits_(qubits) {
    if (qubits < 1 || qubits > 8) {
        throw ValidationError("hybrid states support 1 to 8 qubits");
    }
    if (amplitudes.size() != (Eigen::Index{1} << qubits)) {
        throw ValidationError("amplitude vector size does not match qubit count");
    }
    if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-10) {
        throw ValidationError("initial qubit state must be normalized");
    }
    std::vector<Term> raw;
    for (Eigen::Index i = 0; i < amplitudes.size(); ++i) {
        std::uint32_t bits = 0;
        for (int q = 0; q < qubits; ++q) {
            bits |= static_cast<std::uint32_t>((i >> (qubits - 1 - q)) & 1) << q;
        }
        raw.push_back({bits, set_->vacuum(), amplitudes(i)});
    }
    terms_ = merge(std::move(raw));
}

HybridState HybridState::product(std::shared_ptr<const GeneratorSet> set, const std::vector<Eigen::Vector2cd>& qubits) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
    for (const auto& q : qubits) {
        Eigen::VectorXcd next(v.size() * 2);
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            next(2 * i) = v(i) * q(0);
            next(2 * i + 1) = v(i) * q(1);
        }
        v = next;
    }
    return HybridState(std::move(set), static_cast<int>(qubits.size()), v);
}

double HybridState::norm_sq() const {
    cplx s = 0.0;
    for (const auto& a : terms_) {
        for (const auto& b : terms_) {
            if (a.bits == b.bits) {
                s += std::conj(a.amp) * b.amp * set_->overlap(a.label, b.label);
            }
        }
    }
    return s.real();
}

HybridState apply_gate(const HybridState& state, const ControlledDisplacement& gate) {
    if (gate.qubit < 0 || gate.qubit >= state.qubits()) {
        throw ValidationError("gate qubit out of range");
    }
    if (gate.control_sign != 1 && gate.control_sign != -1) {
        throw ValidationError("control sign must be +1 or -1");
    }
    const GeneratorSet& set = state.generators();
    const auto& g = gate.shift;
    const std::uint32_t mask = 1U << gate.qubit;
    std::vector<HybridState::Term> raw;
    raw.reserve(state.terms().size() * 3);
    for (const auto& t : state.terms()) {
        const DisplacementLabel shifted = g + t.label;
        const cplx phase = std::polar(1.0, set.phi(g, t.label));
        const std::uint32_t b = bit_of(t.bits, gate.qubit);
        if (gate.control_axis == Axis::Z) {
            const bool active = (b == 0) == (gate.control_sign == 1);
            if (active) {
                raw.push_back({t.bits, shifted, t.amp * phase});
            } else {
                raw.push_back(t);
            }
            continue;
        }
        // |b> -> |b> + P|b> (x) (D_g - 1), with P|b> = (s^b / 2)(|0> + s|1>).
        const double s = gate.control_sign;
        const double sb = b == 0 ? 1.0 : s;
        const cplx c0 = t.amp * (0.5 * sb);
        const cplx c1 = t.amp * (0.5 * sb * s);
        const std::uint32_t b0 = t.bits & ~mask;
        const std::uint32_t b1 = t.bits | mask;
        raw.push_back(t);
        raw.push_back({b0, shifted, c0 * phase});
        raw.push_back({b0, t.label, -c0});
        raw.push_back({b1, shifted, c1 * phase});
        raw.push_back({b1, t.label, -c1});
    }
    HybridState out(state.set_, state.qubits(), merge(std::move(raw)));
    const double n = out.norm_sq();
    if (std::abs(n - 1.0) > kUnitarityTol) {
        std::ostringstream msg;
        msg << "state norm " << n << " after controlled displacement";
        throw UnitarityError(msg.str());
    }
    return out;
}

DensityMatrix reduce(const HybridState& state, const std::vector<int>& keep) {
    const int k = static_cast<int>(keep.size());
    if (k < 1) {
        throw ValidationError("reduce needs at least one kept qubit");
    }
    std::uint32_t kept_mask = 0;
    for (int q : keep) {
        if (q < 0 || q >= state.qubits() || (kept_mask >> q & 1U)) {
            throw ValidationError("invalid qubit list for reduce");
        }
        kept_mask |= 1U << q;
    }
    auto row = [&](std::uint32_t bits) {
        int r = 0;
        for (int i = 0; i < k; ++i) {
            r |= static_cast<int>(bit_of(bits, keep[i])) << (k - 1 - i);
        }
        return r;
    };
    const GeneratorSet& set = state.generators();
    const int dim = 1 << k;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    const auto& terms = state.terms();
    for (const auto& a : terms) {
        for (const auto& b : terms) {
            if ((a.bits & ~kept_mask) != (b.bits & ~kept_mask)) {
                continue;
            }
            rho(row(a.bits), row(b.bits)) += a.amp * std::conj(b.amp) * set.overlap(b.label, a.label);
        }
    }
    return DensityMatrix(std::move(rho), std::vector<int>(static_cast<std::size_t>(k), 2));
}

double complement_entropy(const HybridState& state, const std::vector<int>& keep) {
    std::uint32_t kept_mask = 0;
    for (int q : keep) {
        kept_mask |= 1U << q;
    }
    // Basis: distinct (traced bits, label) pairs; columns: kept bit patterns.
    std::map<std::pair<std::uint32_t, DisplacementLabel>, Eigen::Index> basis;
    std::map<std::uint32_t, Eigen::Index> columns;
    for (const auto& t : state.terms()) {
        basis.try_emplace({t.bits & ~kept_mask, t.label}, static_cast<Eigen::Index>(basis.size()));
        columns.try_emplace(t.bits & kept_mask, static_cast<Eigen::Index>(columns.size()));
    }
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, static_cast<Eigen::Index>(columns.size()));
    for (const auto& t : state.terms()) {
        c(basis.at({t.bits & ~kept_mask, t.label}), columns.at(t.bits & kept_mask)) += t.amp;
    }
    const GeneratorSet& set = state.generators();
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [ka, ia] : basis) {
        for (const auto& [kb, ib] : basis) {
            if (ka.first == kb.first) {
                g(ia, ib) = set.overlap(ka.second, kb.second);
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gs(g);
    const Eigen::VectorXd root = gs.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXcd sqrt_g = gs.eigenvectors() * root.cast<cplx>().asDiagonal() * gs.eigenvectors().adjoint();
    const Eigen::MatrixXcd m = sqrt_g * c * c.adjoint() * sqrt_g;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ms(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = ms.eigenvalues().cwiseMax(0.0);
    ev /= ev.sum();
    return entropy_of_eigenvalues(ev);
}

Eigen::Vector2cd axis_state(const std::string& name) {
    const double r = std::numbers::sqrt2 / 2.0;
    const cplx i(0.0, 1.0);
    if (name == "+Z") {
        return {1.0, 0.0};
    }
    if (name == "-Z") {
        return {0.0, 1.0};
    }
    if (name == "+X") {
        return {r, r};
    }
    if (name == "-X") {
        return {r, -r};
    }
    if (name == "+Y") {
        return {r, r * i};
    }
    if (name == "-Y") {
        return {r, -r * i};
    }
    throw ValidationError("unknown axis state '" + name + "'");
}

}  // namespace fieldcomm
