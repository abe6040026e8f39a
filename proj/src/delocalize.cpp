#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "fieldcomm/errors.hpp"
#include "fieldcomm/protocols.hpp"

namespace fieldcomm {

namespace {

using cplx = std::complex<double>;
using std::numbers::pi;

DisplacementGenerator mover(FieldKernel kernel, double coupling, const Profile& profile, double t, double x) {
    DisplacementGenerator g;
    g.kernel = kernel;
    g.coupling = coupling;
    g.profile = profile;
    g.time = t;
    g.position = x;
    return g;
}

}  // namespace

void validate(const DelocalizeParams& p) {
    for (double v : {p.alice_coupling, p.t0, p.delay, p.distance, p.alice_position}) {
        if (!std::isfinite(v)) {
            throw ValidationError("delocalization parameters must be finite");
        }
    }
    const double width = std::max(p.alice_profile.support_width(), p.bob_profile.support_width());
    if (!(p.delay > width)) {
        throw GeometryError("Alice's couplings must be timelike separated: delay must exceed the detector width");
    }
    if (!(p.distance > p.delay)) {
        throw GeometryError("receivers must sense before Alice's second signal arrives: distance must exceed delay");
    }
}

double alice_coupling_for_gamma2_norm(const DelocalizeParams& p, double target) {
    if (!(target > 0.0) || !std::isfinite(target)) {
        throw ValidationError("target ||gamma_2||^2 must be positive");
    }
    const double t1 = p.t0 + p.delay;
    const auto a2 = mover(RightMomentum{}, 1.0, p.alice_profile, t1, p.alice_position);
    const auto g2 = mover(RightMomentum{}, 1.0, p.bob_profile, t1 + p.distance, p.alice_position + p.distance);
    const double phase_per_unit = std::abs(phi_momentum_closed_form(a2, g2).value);
    if (phase_per_unit == 0.0) {
        throw DegenerateGeometryError("degenerate geometry: profile pair cannot sense");
    }
    const double unit_norm = displacement_inner(g2, g2, p.quadrature).real();
    return 0.25 * pi / (phase_per_unit * std::sqrt(target / unit_norm));
}

double DelocalizeReport::min_joint_fidelity() const {
    double m = 1.0;
    for (const auto& r : results) {
        m = std::min(m, r.joint_fidelity);
    }
    return m;
}

double DelocalizeReport::max_single_coherence() const {
    double m = 0.0;
    for (const auto& r : results) {
        m = std::max({m, r.coherence_left, r.coherence_right});
    }
    return m;
}

DelocalizeReport delocalize(const DelocalizeParams& p, const std::vector<LabelledInput>& inputs) {
    validate(p);
    const double t1 = p.t0 + p.delay;
    const double xa = p.alice_position;
    const double xr = xa + p.distance;
    const double xl = xa - p.distance;

    // Alice's full-momentum coupling split into its two sectors, which are orthogonal.
    const auto a1r = mover(RightMomentum{}, p.alice_coupling, p.alice_profile, p.t0, xa);
    const auto a1l = mover(LeftMomentum{}, p.alice_coupling, p.alice_profile, p.t0, xa);
    const auto a2r = mover(RightMomentum{}, p.alice_coupling, p.alice_profile, t1, xa);
    const auto a2l = mover(LeftMomentum{}, p.alice_coupling, p.alice_profile, t1, xa);
    auto g1r = mover(RightMomentum{}, 1.0, p.bob_profile, p.t0 + p.distance, xr);
    auto g2r = mover(RightMomentum{}, 1.0, p.bob_profile, t1 + p.distance, xr);
    auto g1l = mover(LeftMomentum{}, 1.0, p.bob_profile, p.t0 + p.distance, xl);
    auto g2l = mover(LeftMomentum{}, 1.0, p.bob_profile, t1 + p.distance, xl);
    g1r.coupling = solve_sensing_strength(a1r, g1r, 0.5 * pi);
    g1l.coupling = solve_sensing_strength(a1l, g1l, 0.5 * pi);
    g2r.coupling = solve_sensing_strength(a2r, g2r, 0.25 * pi);
    g2l.coupling = solve_sensing_strength(a2l, g2l, 0.25 * pi);

    auto set = std::make_shared<const GeneratorSet>(
        std::vector<DisplacementGenerator>{a1r, a1l, a2r, a2l, g1r, g1l, g2r, g2l},
        std::vector<std::string>{"alpha1_R", "alpha1_L", "alpha2_R", "alpha2_L", "gamma1_R", "gamma1_L", "gamma2_R",
                                 "gamma2_L"},
        p.quadrature);

    DelocalizeReport rep;
    rep.alice_coupling = p.alice_coupling;
    rep.right_coupling_sense = g1r.coupling;
    rep.left_coupling_sense = g1l.coupling;
    rep.right_coupling_final = g2r.coupling;
    rep.left_coupling_final = g2l.coupling;
    rep.norm_gamma1 = set->norm_sq(set->label("gamma1_R"));
    rep.norm_gamma2 = set->norm_sq(set->label("gamma2_R"));
    rep.bound_value = 1.0 - rep.norm_gamma2;
    rep.coherence_limit = 2.0 * rep.norm_gamma2;
    rep.warnings.emplace_back(
        "each receiver's second coupling is applied as the exact inverse of its sector of alpha1; "
        "a localized free-space detector cannot realize it causally across its own profile");

    // Qubits: 0 = Alice, 1 = left receiver, 2 = right receiver.
    const int alice = 0;
    const int left = 1;
    const int right = 2;
    const std::vector<ControlledDisplacement> gates{
        {alice, Axis::X, +1, set->label("alpha1_R") + set->label("alpha1_L")},
        {alice, Axis::Z, +1, set->label("alpha2_R") + set->label("alpha2_L")},
        ControlledDisplacement::single(*set, right, Axis::Z, +1, "gamma1_R"),
        // The left receiver senses on the -Z branch so that the two flips leave x+ |+X+X> with
        // the same sign as x- |-X-X>.
        ControlledDisplacement::single(*set, left, Axis::Z, -1, "gamma1_L"),
        ControlledDisplacement::single(*set, right, Axis::X, +1, "alpha1_R", -1),
        ControlledDisplacement::single(*set, left, Axis::X, +1, "alpha1_L", -1),
        ControlledDisplacement::single(*set, right, Axis::X, -1, "gamma2_R"),
        ControlledDisplacement::single(*set, left, Axis::X, -1, "gamma2_L"),
    };

    const Eigen::Vector2cd plus = axis_state("+X");
    const Eigen::Vector2cd minus = axis_state("-X");
    const Eigen::Vector2cd bob0 = minus;
    for (const auto& in : inputs) {
        Eigen::VectorXcd v(8);
        for (int i = 0; i < 8; ++i) {
            v(i) = in.state((i >> 2) & 1) * bob0((i >> 1) & 1) * bob0(i & 1);
        }
        HybridState s(set, 3, v);
        for (const auto& g : gates) {
            s = apply_gate(s, g);
        }
        const cplx xp = plus.dot(in.state);
        const cplx xm = minus.dot(in.state);
        Eigen::VectorXcd target(4);
        for (int i = 0; i < 4; ++i) {
            target(i) = xp * plus((i >> 1) & 1) * plus(i & 1) + xm * minus((i >> 1) & 1) * minus(i & 1);
        }
        DensityMatrix joint = reduce(s, {left, right});
        DensityMatrix rl = reduce(s, {left});
        DensityMatrix rr = reduce(s, {right});
        const double cl = std::abs(plus.dot(rl.matrix() * minus));
        const double cr = std::abs(plus.dot(rr.matrix() * minus));
        const double fj = fidelity(joint, target);
        rep.results.push_back({in.label, fj, cl, cr, std::move(joint), std::move(rl), std::move(rr)});
    }
    return rep;
}

}  // namespace fieldcomm
