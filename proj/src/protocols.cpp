#include "fieldcomm/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "fieldcomm/errors.hpp"

namespace fieldcomm {

namespace {

using cplx = std::complex<double>;
using std::numbers::pi;

constexpr double kBoundSlack = 1e-9;

const char* kV2Warning =
    "V2 is applied as the exact inverse displacement -alpha1; a localized free-space detector "
    "cannot realize it causally across its own profile";

DisplacementGenerator right_mover(double coupling, const Profile& profile, double t, double x) {
    DisplacementGenerator g;
    g.kernel = RightMomentum{};
    g.coupling = coupling;
    g.profile = profile;
    g.time = t;
    g.position = x;
    return g;
}

Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::VectorXcd out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

struct TransferSetup {
    std::shared_ptr<const GeneratorSet> set;
    double mu_b;
    std::vector<ControlledDisplacement> gates;  // qubit index 0 = A, 1 = B
};

TransferSetup build_transfer(const TransferParams& params) {
    validate(params);
    const double t1 = params.t0 + params.delay;
    const double xb = params.alice_position + params.distance;
    const auto a1 = right_mover(params.alice_coupling, params.alice_profile, params.t0, params.alice_position);
    const auto a2 = right_mover(params.alice_coupling, params.alice_profile, t1, params.alice_position);
    auto g1 = right_mover(1.0, params.bob_profile, params.t0 + params.distance, xb);
    auto g2 = right_mover(1.0, params.bob_profile, t1 + params.distance, xb);
    const double mu_b = solve_sensing_strength(a1, g1, 0.5 * pi);
    g1.coupling = mu_b;
    g2.coupling = solve_sensing_strength(a2, g2, 0.5 * pi);
    auto set = std::make_shared<const GeneratorSet>(std::vector<DisplacementGenerator>{a1, a2, g1, g2},
                                                    std::vector<std::string>{"alpha1", "alpha2", "gamma1", "gamma2"},
                                                    params.quadrature);
    std::vector<ControlledDisplacement> gates{
        ControlledDisplacement::single(*set, 0, Axis::X, +1, "alpha1"),
        ControlledDisplacement::single(*set, 0, Axis::Z, +1, "alpha2"),
        ControlledDisplacement::single(*set, 1, Axis::Z, +1, "gamma1"),
        ControlledDisplacement::single(*set, 1, Axis::X, +1, "alpha1", -1),
        ControlledDisplacement::single(*set, 1, Axis::X, -1, "gamma2"),
    };
    return {std::move(set), mu_b, std::move(gates)};
}

HybridState run(HybridState state, const std::vector<ControlledDisplacement>& gates, const std::vector<int>& qubit_map) {
    for (auto gate : gates) {
        gate.qubit = qubit_map[static_cast<std::size_t>(gate.qubit)];
        state = apply_gate(state, gate);
    }
    return state;
}

ProtocolReport transfer_report(const TransferParams& params, const std::vector<LabelledInput>& inputs) {
    const TransferSetup setup = build_transfer(params);
    const GeneratorSet& set = *setup.set;
    const auto a1 = set.label("alpha1");
    const auto a2 = set.label("alpha2");
    const auto g1 = set.label("gamma1");
    const auto g2 = set.label("gamma2");

    ProtocolReport r;
    r.alice_coupling = params.alice_coupling;
    r.bob_coupling = setup.mu_b;
    r.norm_alpha1 = set.norm_sq(a1);
    r.norm_alpha2 = set.norm_sq(a2);
    r.norm_gamma1 = set.norm_sq(g1);
    r.norm_gamma2 = set.norm_sq(g2);
    r.phi_gamma1_alpha1 = set.phi(g1, a1);
    r.phi_gamma2_alpha2 = set.phi(g2, a2);
    r.phi_alpha1_alpha2 = set.phi(a1, a2);
    r.bound_value = 1.0 - 0.5 * r.norm_gamma1;
    r.inequality_check = r.norm_alpha1 >= pi - r.norm_gamma1;
    r.warnings.emplace_back(kV2Warning);

    const Eigen::Vector2cd bob0 = axis_state("-X");
    for (const auto& in : inputs) {
        const HybridState init(setup.set, 2, kron(in.state, bob0));
        const HybridState out = run(init, setup.gates, {0, 1});
        r.fidelity_per_input.push_back({in.label, fidelity(reduce(out, {1}), in.state)});
    }

    // Reference R (qubit 0) maximally entangled with A (qubit 1); Bob is qubit 2.
    Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
    bell(0) = bell(3) = std::numbers::sqrt2 / 2.0;
    const HybridState init(setup.set, 3, kron(bell, bob0));
    const HybridState out = run(init, setup.gates, {1, 2});
    r.coherent_info = entropy(reduce(out, {2})) - entropy(reduce(out, {0, 2}));
    return r;
}

}  // namespace

std::vector<LabelledInput> haar_inputs(int count, std::uint64_t seed) {
    if (count < 0) {
        throw ValidationError("Haar sample count must be non-negative");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<LabelledInput> out;
    for (int i = 0; i < count; ++i) {
        Eigen::Vector2cd v;
        do {
            const double a = normal(rng);
            const double b = normal(rng);
            const double c = normal(rng);
            const double d = normal(rng);
            v = Eigen::Vector2cd(cplx(a, b), cplx(c, d));
        } while (v.norm() < 1e-12);
        out.push_back({"haar_" + std::to_string(i), v.normalized()});
    }
    return out;
}

std::vector<LabelledInput> standard_inputs(int haar_count, std::uint64_t seed) {
    std::vector<LabelledInput> out;
    for (const char* name : {"+X", "-X", "+Y", "-Y", "+Z", "-Z"}) {
        out.push_back({name, axis_state(name)});
    }
    auto haar = haar_inputs(haar_count, seed);
    out.insert(out.end(), haar.begin(), haar.end());
    return out;
}

double alice_to_field(double mu_over_ell, double delay, const Profile& profile, const QuadratureOptions& options) {
    const double ell = profile.support_width();
    if (!std::isfinite(mu_over_ell) || !std::isfinite(delay)) {
        throw ValidationError("coupling and delay must be finite");
    }
    if (!(delay > ell)) {
        throw GeometryError("Alice's two couplings must be strictly timelike separated: delay must exceed the profile width");
    }
    const double mu = mu_over_ell * ell;
    auto set = std::make_shared<const GeneratorSet>(
        std::vector<DisplacementGenerator>{right_mover(mu, profile, 0.0, 0.0), right_mover(mu, profile, delay, 0.0)},
        std::vector<std::string>{"alpha1", "alpha2"}, options);
    // (|+X+X> - |-X-X>) / sqrt2 = (|+Z-Z> + |-Z+Z>) / sqrt2.
    Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
    bell(1) = bell(2) = std::numbers::sqrt2 / 2.0;
    HybridState s(set, 2, bell);
    s = apply_gate(s, ControlledDisplacement::single(*set, 0, Axis::X, +1, "alpha1"));
    s = apply_gate(s, ControlledDisplacement::single(*set, 0, Axis::Z, +1, "alpha2"));
    return coherent_information(reduce(s, {0, 1}));
}

void validate(const TransferParams& params) {
    for (double v : {params.alice_coupling, params.t0, params.delay, params.distance, params.alice_position}) {
        if (!std::isfinite(v)) {
            throw ValidationError("transfer parameters must be finite");
        }
    }
    if (!(params.delay > params.width())) {
        throw GeometryError("Alice's couplings must be timelike separated: delay must exceed the detector width");
    }
    if (!(params.distance > params.delay)) {
        throw GeometryError("Bob's first coupling must precede Alice's second signal: distance must exceed delay");
    }
}

double alice_coupling_for_gamma_norm(const TransferParams& params, double target) {
    if (!(target > 0.0) || !std::isfinite(target)) {
        throw ValidationError("target ||gamma_1||^2 must be positive");
    }
    const auto a1 = right_mover(1.0, params.alice_profile, params.t0, params.alice_position);
    const auto g1 = right_mover(1.0, params.bob_profile, params.t0 + params.distance,
                                params.alice_position + params.distance);
    const double phase_per_unit = std::abs(phi_momentum_closed_form(a1, g1).value);
    if (phase_per_unit == 0.0) {
        throw DegenerateGeometryError("degenerate geometry: profile pair cannot sense");
    }
    const double unit_norm = displacement_inner(g1, g1, params.quadrature).real();
    const double mu_b = std::sqrt(target / unit_norm);
    return 0.5 * pi / (phase_per_unit * mu_b);
}

double ProtocolReport::min_fidelity() const {
    double m = 1.0;
    for (const auto& f : fidelity_per_input) {
        m = std::min(m, f.fidelity);
    }
    return m;
}

ProtocolReport state_transfer(const TransferParams& params, const std::vector<LabelledInput>& inputs) {
    ProtocolReport r = transfer_report(params, inputs);
    for (const auto& f : r.fidelity_per_input) {
        if (f.fidelity < r.bound_value - kBoundSlack) {
            std::ostringstream msg;
            msg << "fidelity " << f.fidelity << " for input " << f.label << " below bound " << r.bound_value;
            throw BoundViolation(msg.str());
        }
    }
    return r;
}

bool AuditReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.pass; });
}

void AuditReport::throw_if_failed() const {
    std::ostringstream msg;
    bool failed = false;
    for (const auto& c : checks) {
        if (!c.pass) {
            msg << (failed ? "; " : "audit failed: ") << c.name << " violated by " << -c.margin;
            failed = true;
        }
    }
    if (failed) {
        throw AuditError(msg.str());
    }
}

AuditReport audit_inequalities(double norm_alpha1, double norm_gamma1, double phi_gamma1_alpha1, double norm_gamma2) {
    AuditReport r;
    const double sum_margin = norm_alpha1 + norm_gamma1 - 2.0 * std::abs(phi_gamma1_alpha1);
    r.checks.push_back({"alpha1_norm_vs_phase", sum_margin >= 0.0, sum_margin});
    const double cs_margin = norm_alpha1 * norm_gamma1 - phi_gamma1_alpha1 * phi_gamma1_alpha1;
    r.checks.push_back({"cauchy_schwarz", cs_margin >= 0.0, cs_margin});
    const double eq_margin = 1e-12 * std::max(1.0, std::abs(norm_gamma1)) - std::abs(norm_gamma2 - norm_gamma1);
    r.checks.push_back({"gamma_norm_equality", eq_margin >= 0.0, eq_margin});
    return r;
}

AuditReport audit_inequalities(const GeneratorSet& set) {
    const auto a1 = set.label("alpha1");
    const auto g1 = set.label("gamma1");
    const auto g2 = set.label("gamma2");
    return audit_inequalities(set.norm_sq(a1), set.norm_sq(g1), set.phi(g1, a1), set.norm_sq(g2));
}

AuditReport transfer_audit(const TransferParams& params, int polar_steps, int azimuth_steps) {
    if (polar_steps < 2 || azimuth_steps < 1) {
        throw ValidationError("audit grid needs at least 2 polar and 1 azimuthal step");
    }
    std::vector<LabelledInput> grid;
    for (int i = 0; i < polar_steps; ++i) {
        const double theta = pi * i / (polar_steps - 1);
        for (int j = 0; j < azimuth_steps; ++j) {
            const double ph = 2.0 * pi * j / azimuth_steps;
            grid.push_back({"bloch_" + std::to_string(i) + "_" + std::to_string(j),
                            Eigen::Vector2cd(std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), ph))});
        }
    }
    const ProtocolReport rep = transfer_report(params, grid);
    AuditReport r;
    const double fid_margin = rep.min_fidelity() - rep.bound_value;
    r.checks.push_back({"fidelity_bound", fid_margin >= -kBoundSlack, fid_margin});
    const AuditReport ineq =
        audit_inequalities(rep.norm_alpha1, rep.norm_gamma1, rep.phi_gamma1_alpha1, rep.norm_gamma2);
    r.checks.insert(r.checks.end(), ineq.checks.begin(), ineq.checks.end());
    return r;
}

}  // namespace fieldcomm
