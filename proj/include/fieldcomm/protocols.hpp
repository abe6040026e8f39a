#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fieldcomm/coherent_algebra.hpp"
#include "fieldcomm/density_matrix.hpp"
#include "fieldcomm/field_kernel.hpp"

namespace fieldcomm {

struct LabelledInput {
    std::string label;
    Eigen::Vector2cd state;
};

/// The six Pauli eigenstates followed by `haar_count` Haar-random states drawn from `seed`.
[[nodiscard]] std::vector<LabelledInput> standard_inputs(int haar_count, std::uint64_t seed);

/// Haar-random qubit states only.
[[nodiscard]] std::vector<LabelledInput> haar_inputs(int count, std::uint64_t seed);

/// Coherent information I(A' > F) in bits after Alice's two couplings, starting
/// from the maximally entangled state of Alice's detector A and an ancilla A'.
/// `mu_over_ell` is mu_A in units of the profile's support width. Alice couples
/// to the right-moving momentum at t = 0 and t = delay. Throws GeometryError
/// unless delay exceeds the support width.
[[nodiscard]] double alice_to_field(double mu_over_ell, double delay, const Profile& profile,
                                    const QuadratureOptions& options = {});

/// Free-space five-coupling transfer from Alice at x_A to Bob at x_A + distance.
///
/// Alice couples at t0 and t0 + delay; Bob couples on the two outgoing light
/// rays at t0 + distance and t0 + delay + distance, and once more in between
/// with the exact inverse of Alice's first displacement.
struct TransferParams {
    double alice_coupling = 10.0;
    Profile alice_profile = Profile::skew_triangle(1.0);
    Profile bob_profile = Profile::skew_triangle(1.0).mirrored();
    double t0 = 0.0;
    double delay = 1.5;
    double distance = 3.0;
    double alice_position = 0.0;
    QuadratureOptions quadrature{};

    [[nodiscard]] double width() const {
        return std::max(alice_profile.support_width(), bob_profile.support_width());
    }
};

/// Throws GeometryError unless delay > width and distance > delay.
void validate(const TransferParams& params);

/// mu_A for which Bob's sensing displacement has ||gamma_1||^2 = target.
[[nodiscard]] double alice_coupling_for_gamma_norm(const TransferParams& params, double target);

struct InputFidelity {
    std::string label;
    double fidelity;
};

struct ProtocolReport {
    double alice_coupling = 0.0;
    double bob_coupling = 0.0;
    /// S(B) - S(RB) with a reference R maximally entangled with Alice's input.
    double coherent_info = 0.0;
    std::vector<InputFidelity> fidelity_per_input;
    double bound_value = 0.0;
    double norm_alpha1 = 0.0;
    double norm_alpha2 = 0.0;
    double norm_gamma1 = 0.0;
    double norm_gamma2 = 0.0;
    double phi_gamma1_alpha1 = 0.0;
    double phi_gamma2_alpha2 = 0.0;
    double phi_alpha1_alpha2 = 0.0;
    /// ||alpha_1||^2 >= pi - ||gamma_1||^2.
    bool inequality_check = false;
    std::vector<std::string> warnings;

    [[nodiscard]] double min_fidelity() const;
};

/// Runs the transfer for every input. Throws BoundViolation when any fidelity
/// falls below 1 - ||gamma_1||^2 / 2 by more than 1e-9.
[[nodiscard]] ProtocolReport state_transfer(const TransferParams& params, const std::vector<LabelledInput>& inputs);

struct AuditCheck {
    std::string name;
    bool pass;
    /// Slack of the inequality; negative when violated.
    double margin;
};

struct AuditReport {
    std::vector<AuditCheck> checks;

    [[nodiscard]] bool passed() const;
    /// Throws AuditError naming every failed check and its margin.
    void throw_if_failed() const;
};

/// Norm and phase inequalities on given values: ||alpha_1||^2 >= pi - ||gamma_1||^2,
/// phi^2 <= ||alpha_1||^2 ||gamma_1||^2, and ||gamma_2||^2 = ||gamma_1||^2 to 1e-12.
[[nodiscard]] AuditReport audit_inequalities(double norm_alpha1, double norm_gamma1, double phi_gamma1_alpha1,
                                             double norm_gamma2);

/// Same checks with every quantity read from an inner-product table holding
/// generators named alpha1, gamma1 and gamma2.
[[nodiscard]] AuditReport audit_inequalities(const GeneratorSet& set);

/// Full audit: the fidelity bound on a grid of Bloch-sphere inputs evaluated on
/// the exact final state, followed by the inequality checks.
[[nodiscard]] AuditReport transfer_audit(const TransferParams& params, int polar_steps = 7,
                                           int azimuth_steps = 8);

/// Four-coupling transfer in a Dirichlet cavity with amplitude couplings.
///
/// Alice couples at (t0, x_A) with lambda1 and at (t0 + delay, x_A) with
/// lambda2 = 2 pi / lambda1. Bob, at the mirror point L - x_A, first senses
/// at bob_sense_time, then undoes Alice's displacement at the reflection focus
/// (t0 + L, L - x_A).
struct CavityParams {
    double lambda1 = 5.0;
    Profile profile = Profile::triangle(1.0);
    double cavity_length = 4.0;
    std::optional<double> alice_position;
    double t0 = 0.0;
    double delay = 2.0;
    std::optional<double> bob_sense_time;
    /// When set, must match the focal point.
    std::optional<double> bob_focal_time;
    std::optional<double> bob_focal_position;
    int mode_cutoff = 2048;

    [[nodiscard]] double sender_position() const { return alice_position.value_or(0.5 * cavity_length); }
};

struct FocalPoint {
    double time;
    double position;
};

/// Where the left- and right-moving rays from (t, x) meet again after one reflection each.
[[nodiscard]] FocalPoint reflection_focus(double t, double x, double cavity_length);

struct CavityReport {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double bob_coupling = 0.0;
    double alpha_norm_sq = 0.0;
    double gamma_norm_sq = 0.0;
    /// |gamma|^2 - (4 pi^2 / lambda1^4) |alpha|^2, relative to |gamma|^2.
    double identity_residual = 0.0;
    double phi_closed_form = 0.0;
    double phi_mode_sum = 0.0;
    double tail_bound = 0.0;
    /// Fidelity bound 1 - |gamma|^2 / 2, transferred from the free-space analysis.
    double bound_value = 0.0;
    std::vector<InputFidelity> fidelity_per_input;
    std::vector<std::string> warnings;

    [[nodiscard]] double min_fidelity() const;
};

void validate(const CavityParams& params);

/// Throws GeometryError outside the direct window or off the focal point,
/// BoundViolation when a fidelity falls below the transferred bound.
[[nodiscard]] CavityReport cavity_transfer(const CavityParams& params, const std::vector<LabelledInput>& inputs);

/// Free-space delocalization: Alice couples to the full momentum, two Bobs at
/// x_A - distance and x_A + distance couple to the left- and right-moving
/// momentum respectively. Each Bob's final coupling acquires phase pi/4.
struct DelocalizeParams {
    double alice_coupling = 10.0;
    Profile alice_profile = Profile::skew_triangle(1.0);
    Profile bob_profile = Profile::skew_triangle(1.0).mirrored();
    double t0 = 0.0;
    double delay = 1.5;
    double distance = 3.0;
    double alice_position = 0.0;
    QuadratureOptions quadrature{};
};

void validate(const DelocalizeParams& params);

/// mu_A for which each Bob's final displacement has ||gamma_2||^2 = target.
[[nodiscard]] double alice_coupling_for_gamma2_norm(const DelocalizeParams& params, double target);

struct DelocalizeInputResult {
    std::string label;
    /// Overlap of the (L, R) state with x+ |+X+X> + x- |-X-X>.
    double joint_fidelity;
    /// |<+X|rho|-X>| for each single receiver.
    double coherence_left;
    double coherence_right;
    DensityMatrix joint;
    DensityMatrix left;
    DensityMatrix right;
};

struct DelocalizeReport {
    double alice_coupling = 0.0;
    double left_coupling_sense = 0.0;
    double right_coupling_sense = 0.0;
    double left_coupling_final = 0.0;
    double right_coupling_final = 0.0;
    double norm_gamma1 = 0.0;
    double norm_gamma2 = 0.0;
    double bound_value = 0.0;
    double coherence_limit = 0.0;
    std::vector<DelocalizeInputResult> results;
    std::vector<std::string> warnings;

    [[nodiscard]] double min_joint_fidelity() const;
    [[nodiscard]] double max_single_coherence() const;
};

[[nodiscard]] DelocalizeReport delocalize(const DelocalizeParams& params, const std::vector<LabelledInput>& inputs);

/// (1/N) rho (+) ((N - 1)/N) |v><v| with the qubit in the first two levels of a qutrit.
[[nodiscard]] DensityMatrix erasure_channel(int n, const DensityMatrix& rho_in);

/// S(B) - S(RB) for the erasure channel with a maximally entangled input.
[[nodiscard]] double erasure_coherent_info(int n);

struct AntidegradabilityResult {
    bool antidegradable;
    double max_trace_distance;
};

/// Builds the symmetric N-receiver dilation and compares the channel to a
/// single receiver with the recovery map applied to the other receivers.
/// Requires N >= 2.
[[nodiscard]] AntidegradabilityResult antidegradability_check(int n);

}  // namespace fieldcomm
