#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "fieldcomm/errors.hpp"
#include "fieldcomm/protocols.hpp"

namespace fieldcomm {

namespace {

using std::numbers::pi;

constexpr double kFocalTol = 1e-9;

DisplacementGenerator cavity_coupling(const CavityParams& p, double coupling, const Profile& profile, double t,
                                      double x) {
    DisplacementGenerator g;
    g.kernel = CavityDirichlet{p.cavity_length, p.mode_cutoff};
    g.coupling = coupling;
    g.profile = profile;
    g.time = t;
    g.position = x;
    return g;
}

// Coupling that gives phi(b, a) = target, from the closed form (c_a c_b / 4) area_a area_b.
double sensing_coupling(const DisplacementGenerator& a, const DisplacementGenerator& b_template, double target) {
    auto unit = b_template;
    unit.coupling = 1.0;
    const double per_unit = cavity_phase_closed_form(a, unit);
    if (per_unit == 0.0) {
        throw DegenerateGeometryError("degenerate geometry: zero-area profile cannot sense the amplitude");
    }
    return target / per_unit;
}

}  // namespace

FocalPoint reflection_focus(double t, double x, double cavity_length) {
    // Right ray reflects at L, left ray at 0; they meet after one crossing time.
    return {t + cavity_length, cavity_length - x};
}

double CavityReport::min_fidelity() const {
    double m = 1.0;
    for (const auto& f : fidelity_per_input) {
        m = std::min(m, f.fidelity);
    }
    return m;
}

void validate(const CavityParams& p) {
    for (double v : {p.lambda1, p.cavity_length, p.t0, p.delay, p.sender_position()}) {
        if (!std::isfinite(v)) {
            throw ValidationError("cavity parameters must be finite");
        }
    }
    if (!(p.lambda1 != 0.0)) {
        throw ValidationError("lambda1 must be nonzero");
    }
    if (!(p.cavity_length > 0.0) || p.mode_cutoff < 1) {
        throw ValidationError("cavity length must be positive and the mode cutoff at least 1");
    }
    const FocalPoint focus = reflection_focus(p.t0, p.sender_position(), p.cavity_length);
    if (p.bob_focal_time && std::abs(*p.bob_focal_time - focus.time) > kFocalTol) {
        std::ostringstream msg;
        msg << "Bob's second coupling at t = " << *p.bob_focal_time << " is not at the reflection focus t = "
            << focus.time;
        throw GeometryError(msg.str());
    }
    if (p.bob_focal_position && std::abs(*p.bob_focal_position - focus.position) > kFocalTol) {
        std::ostringstream msg;
        msg << "Bob's second coupling at x = " << *p.bob_focal_position << " is not at the reflection focus x = "
            << focus.position;
        throw GeometryError(msg.str());
    }
    const Profile mirror = p.profile.mirrored();
    const double t1 = p.t0 + p.delay;
    const auto alpha = cavity_coupling(p, 1.0, p.profile, p.t0, p.sender_position());
    const auto gamma = cavity_coupling(p, 1.0, p.profile, t1, p.sender_position());
    const auto gamma_b = cavity_coupling(p, 1.0, mirror, p.bob_sense_time.value_or(t1), focus.position);
    validate(alpha);
    validate(gamma_b);
    if (!cavity_direct_window(alpha, gamma)) {
        throw GeometryError("Alice's delay admits wall reflections or is not timelike: outside the direct window");
    }
    if (!cavity_direct_window(alpha, gamma_b)) {
        throw GeometryError("Bob's sensing coupling is outside the direct window of Alice's first coupling");
    }
}

CavityReport cavity_transfer(const CavityParams& p, const std::vector<LabelledInput>& inputs) {
    validate(p);
    const double xa = p.sender_position();
    const double t1 = p.t0 + p.delay;
    const FocalPoint focus = reflection_focus(p.t0, xa, p.cavity_length);
    const Profile mirror = p.profile.mirrored();

    const auto alpha = cavity_coupling(p, p.lambda1, p.profile, p.t0, xa);
    auto gamma = cavity_coupling(p, 1.0, p.profile, t1, xa);
    auto gamma_b = cavity_coupling(p, 1.0, mirror, p.bob_sense_time.value_or(t1), focus.position);
    const auto alpha_f = cavity_coupling(p, p.lambda1, mirror, focus.time, focus.position);
    gamma.coupling = sensing_coupling(alpha, gamma, 0.5 * pi);
    gamma_b.coupling = sensing_coupling(alpha, gamma_b, 0.5 * pi);

    auto set = std::make_shared<const GeneratorSet>(
        std::vector<DisplacementGenerator>{alpha, gamma, gamma_b, alpha_f},
        std::vector<std::string>{"alpha", "gamma", "gamma_b", "alpha_focus"});

    CavityReport r;
    r.lambda1 = p.lambda1;
    r.lambda2 = gamma.coupling;
    r.bob_coupling = gamma_b.coupling;
    r.alpha_norm_sq = set->norm_sq(set->label("alpha"));
    r.gamma_norm_sq = set->norm_sq(set->label("gamma"));
    const double predicted = 4.0 * pi * pi / std::pow(p.lambda1, 4) * r.alpha_norm_sq;
    r.identity_residual = std::abs(r.gamma_norm_sq - predicted) / r.gamma_norm_sq;
    r.phi_closed_form = cavity_phase_closed_form(alpha, gamma);
    r.phi_mode_sum = set->phi(set->label("gamma"), set->label("alpha"));
    r.tail_bound = cavity_tail_bound(gamma, alpha, p.mode_cutoff);
    r.bound_value = 1.0 - 0.5 * r.gamma_norm_sq;
    if (std::abs(p.profile.area() - 1.0) > 1e-12) {
        r.warnings.emplace_back("profile is not unit-area; lambda2 differs from 2 pi / lambda1");
    }

    const std::vector<ControlledDisplacement> gates{
        ControlledDisplacement::single(*set, 0, Axis::X, +1, "alpha"),
        ControlledDisplacement::single(*set, 0, Axis::Z, -1, "gamma"),
        ControlledDisplacement::single(*set, 1, Axis::Z, -1, "gamma_b", -1),
        ControlledDisplacement::single(*set, 1, Axis::X, +1, "alpha_focus"),
    };
    const Eigen::Vector2cd bob0 = axis_state("-X");
    for (const auto& in : inputs) {
        Eigen::VectorXcd v(4);
        v << in.state(0) * bob0(0), in.state(0) * bob0(1), in.state(1) * bob0(0), in.state(1) * bob0(1);
        HybridState s(set, 2, v);
        for (const auto& g : gates) {
            s = apply_gate(s, g);
        }
        const double f = fidelity(reduce(s, {1}), in.state);
        if (f < r.bound_value - 1e-9) {
            std::ostringstream msg;
            msg << "cavity fidelity " << f << " for input " << in.label << " below bound " << r.bound_value;
            throw BoundViolation(msg.str());
        }
        r.fidelity_per_input.push_back({in.label, f});
    }
    return r;
}

}  // namespace fieldcomm
