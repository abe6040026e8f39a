#pragma once

#include <complex>
#include <string>
#include <variant>

#include "fieldcomm/profile.hpp"
#include "fieldcomm/quadrature.hpp"

namespace fieldcomm {

// Field kernels. All continuum kernels live on the massless 1+1 dimensional
// field with a_k labelled by k in R; right movers have k > 0.

/// Coupling to the right-moving conjugate momentum pi_-(x, t).
struct RightMomentum {};
/// Coupling to the left-moving conjugate momentum pi_+(x, t).
struct LeftMomentum {};
/// Coupling to the full conjugate momentum pi = pi_- + pi_+.
struct FullMomentum {};
/// Coupling to the full field amplitude phi(x, t), with a hard infrared cutoff |k| >= k_min.
struct Amplitude {
    double k_min;
};
/// Field amplitude inside a Dirichlet cavity [0, length], modes j = 1..mode_cutoff.
struct CavityDirichlet {
    double length;
    int mode_cutoff = 2048;
};

using FieldKernel = std::variant<RightMomentum, LeftMomentum, FullMomentum, Amplitude, CavityDirichlet>;

[[nodiscard]] std::string kernel_name(const FieldKernel& kernel);

/// One delta-switched coupling and the multimode displacement it generates.
///
/// For momentum kernels alpha(k) = c sqrt(|k|/4pi) e^{i|k|t} conj(F(k)), where
/// F is the Fourier transform of the profile placed at `position` and c is
/// sign * coupling. Amplitude couplings carry 1/sqrt(4pi|k|) and an extra -i;
/// cavity couplings give alpha(j) = -i c e^{i j pi t/L} f_j / sqrt(j pi).
struct DisplacementGenerator {
    FieldKernel kernel = RightMomentum{};
    double coupling = 1.0;
    Profile profile = Profile::triangle(1.0);
    double time = 0.0;
    double position = 0.0;
    int sign = 1;

    [[nodiscard]] double effective_coupling() const { return sign * coupling; }
    /// The profile in absolute coordinates.
    [[nodiscard]] Profile placed_profile() const { return profile.shifted(position); }
    [[nodiscard]] DisplacementGenerator with_coupling(double c) const {
        auto out = *this;
        out.coupling = c;
        return out;
    }
};

/// Throws ValidationError for a non-finite coupling, a bad sign, a bad
/// kernel parameter, or a cavity profile touching the walls.
void validate(const DisplacementGenerator& gen);

struct InnerProduct {
    std::complex<double> value;
    /// Quadrature error estimate (continuum) or analytic tail bound (cavity).
    double error_bound;
};

/// int alpha_a(k) conj(alpha_b(k)) dk, or the mode sum in a cavity.
[[nodiscard]] InnerProduct displacement_inner_detailed(const DisplacementGenerator& a,
                                                       const DisplacementGenerator& b,
                                                       const QuadratureOptions& options = {});

[[nodiscard]] inline std::complex<double> displacement_inner(const DisplacementGenerator& a,
                                                             const DisplacementGenerator& b,
                                                             const QuadratureOptions& options = {}) {
    return displacement_inner_detailed(a, b, options).value;
}

/// phi(a, b) = Im int alpha_a conj(alpha_b).
[[nodiscard]] double phi(const DisplacementGenerator& a, const DisplacementGenerator& b,
                         const QuadratureOptions& options = {});

struct PhaseResult {
    double value;
    /// False when the lightlike-shifted supports are disjoint; the value is then exactly 0
    /// and the pair cannot sense each other.
    bool supports_overlap;
};

/// Closed-form phi(bob, alice) for two momentum couplings:
/// (1/4) mu_A mu_B int f'(x) h(x) dx with h Bob's profile moved back along the
/// shared light ray. Left movers pick up a sign; full-momentum couplings add
/// both sectors. Throws ValidationError for non-momentum kernels.
[[nodiscard]] PhaseResult phi_momentum_closed_form(const DisplacementGenerator& alice,
                                                   const DisplacementGenerator& bob);

/// Bob's coupling that makes phi(bob, alice) equal `target_phase` exactly.
/// Throws DegenerateGeometryError when the profile pair has a vanishing phase integral.
[[nodiscard]] double solve_sensing_strength(const DisplacementGenerator& alice,
                                            const DisplacementGenerator& bob_template,
                                            double target_phase);

/// Right-moving Bob with `bob_profile` placed `delay` to the right of Alice and
/// coupling `delay` later, i.e. on Alice's outgoing light ray; target phase pi/2.
[[nodiscard]] double solve_sensing_strength(const DisplacementGenerator& alice,
                                            const Profile& bob_profile, double delay);

/// alpha(j) for a cavity coupling, including the coupling constant.
[[nodiscard]] std::complex<double> cavity_mode_amp(const DisplacementGenerator& gen, int j);

/// Upper bound on sum_{j > J} |alpha_a(j) alpha_b(j)| for cavity couplings.
[[nodiscard]] double cavity_tail_bound(const DisplacementGenerator& a, const DisplacementGenerator& b,
                                       int mode_cutoff);

/// Closed-form cavity phase phi(b, a) for amplitude couplings that are
/// timelike separated with no wall reflection in between: (c_a c_b / 4) area_a area_b.
/// Throws GeometryError outside that window.
[[nodiscard]] double cavity_phase_closed_form(const DisplacementGenerator& a,
                                              const DisplacementGenerator& b);

/// True when every point of b's support lies strictly inside the future light
/// cone of every point of a's support and no ray reflected off a cavity wall
/// connects them yet.
[[nodiscard]] bool cavity_direct_window(const DisplacementGenerator& a, const DisplacementGenerator& b);

struct AmplitudeNorm {
    double value;
    /// Same quantity with k_min halved.
    double halved_cutoff_value;
    /// Set when halving k_min changes the norm by more than 1%.
    bool divergence_warning;
};

/// ||gamma||^2 of an amplitude coupling with infrared cutoff.
[[nodiscard]] AmplitudeNorm amplitude_kernel_norm(const DisplacementGenerator& gen,
                                                  const QuadratureOptions& options = {});

}  // namespace fieldcomm
