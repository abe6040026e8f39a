#include "fieldcomm/field_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fieldcomm/errors.hpp"
#include "fieldcomm/special_functions.hpp"

namespace fieldcomm {

namespace {

using cplx = std::complex<double>;
using std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

enum class Weight { Momentum, Amplitude };

struct ContinuumShape {
    bool right;
    bool left;
    Weight weight;
    double k_min;
};

bool is_cavity(const FieldKernel& k) { return std::holds_alternative<CavityDirichlet>(k); }

ContinuumShape continuum_shape(const FieldKernel& kernel) {
    return std::visit(overloaded{
                          [](const RightMomentum&) { return ContinuumShape{true, false, Weight::Momentum, 0.0}; },
                          [](const LeftMomentum&) { return ContinuumShape{false, true, Weight::Momentum, 0.0}; },
                          [](const FullMomentum&) { return ContinuumShape{true, true, Weight::Momentum, 0.0}; },
                          [](const Amplitude& a) { return ContinuumShape{true, true, Weight::Amplitude, a.k_min}; },
                          [](const CavityDirichlet&) -> ContinuumShape {
                              throw ValidationError("cavity kernel has no continuum shape");
                          },
                      },
                      kernel);
}

double weight(Weight w, double q) {
    return w == Weight::Momentum ? std::sqrt(q / (4.0 * pi)) : 1.0 / std::sqrt(4.0 * pi * q);
}

// Phase factor p of the kernel: 1 for momentum couplings, -i for amplitude couplings.
cplx kernel_phase(Weight w) { return w == Weight::Momentum ? cplx(1.0, 0.0) : cplx(0.0, -1.0); }

int tail_power(Weight a, Weight b) {
    // |F|^2 ~ q^-4 times the weight product q, 1, or 1/q.
    return 3 + (a == Weight::Amplitude ? 1 : 0) + (b == Weight::Amplitude ? 1 : 0);
}

InnerProduct continuum_inner(const DisplacementGenerator& a, const DisplacementGenerator& b,
                             const QuadratureOptions& options) {
    const ContinuumShape sa = continuum_shape(a.kernel);
    const ContinuumShape sb = continuum_shape(b.kernel);
    const bool right = sa.right && sb.right;
    const bool left = sa.left && sb.left;
    const double prefactor_abs = a.effective_coupling() * b.effective_coupling();
    if (!(right || left) || prefactor_abs == 0.0) {
        return {0.0, 0.0};
    }
    const cplx prefactor = prefactor_abs * kernel_phase(sa.weight) * std::conj(kernel_phase(sb.weight));
    const Profile fa = a.placed_profile();
    const Profile fb = b.placed_profile();
    const double dt = a.time - b.time;
    const double k_lo = std::max(sa.k_min, sb.k_min);

    const auto ka = fa.kinks();
    const auto kb = fb.kinks();
    double omega_max = 0.0;
    for (const auto& i : ka) {
        for (const auto& j : kb) {
            if (right) {
                omega_max = std::max(omega_max, std::abs(dt + j.position - i.position));
            }
            if (left) {
                omega_max = std::max(omega_max, std::abs(dt + i.position - j.position));
            }
        }
    }

    const double min_width = std::min(fa.support_width(), fb.support_width());
    const double k_hi = std::max(40.0 / min_width, 4.0 * k_lo);

    auto integrand = [&](double q) -> cplx {
        const cplx Fa = fa.fourier(q);
        const cplx Fb = fb.fourier(q);
        const cplx phase = std::polar(1.0, q * dt);
        cplx s = 0.0;
        if (right) {
            s += std::conj(Fa) * Fb;
        }
        if (left) {
            s += Fa * std::conj(Fb);
        }
        return weight(sa.weight, q) * weight(sb.weight, q) * phase * s;
    };

    std::vector<double> breaks;
    breaks.push_back(k_lo);
    if (k_lo > 0.0) {
        for (double k = 2.0 * k_lo; k < std::min(1.0 / min_width, k_hi); k *= 2.0) {
            breaks.push_back(k);
        }
    }
    const double max_panel =
        std::min(omega_max > 0.0 ? pi / (4.0 * omega_max) : k_hi, (k_hi - k_lo) / 32.0);
    const double start = breaks.back();
    const auto n_uniform = static_cast<std::size_t>(std::ceil((k_hi - start) / max_panel));
    for (std::size_t i = 1; i <= n_uniform; ++i) {
        breaks.push_back(start + (k_hi - start) * static_cast<double>(i) / static_cast<double>(n_uniform));
    }
    breaks.back() = k_hi;

    const QuadratureResult body = integrate_adaptive(integrand, breaks, options);

    // On [K, inf) the transform is exactly -(1/q^2) sum_j jump_j e^{i q x_j}.
    const int n = tail_power(sa.weight, sb.weight);
    cplx tail = 0.0;
    for (const auto& i : ka) {
        for (const auto& j : kb) {
            const double c = i.jump * j.jump / (4.0 * pi);
            if (right) {
                tail += c * oscillatory_tail(dt + j.position - i.position, k_hi, n);
            }
            if (left) {
                tail += c * oscillatory_tail(dt + i.position - j.position, k_hi, n);
            }
        }
    }
    const cplx value = prefactor * (body.value + tail);
    const double error = std::abs(prefactor_abs) * (body.error_estimate + 1e-14 * (body.l1_norm + std::abs(tail)));
    return {value, error};
}

const CavityDirichlet& cavity_of(const DisplacementGenerator& g) { return std::get<CavityDirichlet>(g.kernel); }

InnerProduct cavity_inner(const DisplacementGenerator& a, const DisplacementGenerator& b) {
    const auto& ca = cavity_of(a);
    const auto& cb = cavity_of(b);
    if (ca.length != cb.length) {
        throw ValidationError("cavity couplings with different cavity lengths");
    }
    const int cutoff = std::min(ca.mode_cutoff, cb.mode_cutoff);
    cplx sum = 0.0;
    for (int j = 1; j <= cutoff; ++j) {
        sum += cavity_mode_amp(a, j) * std::conj(cavity_mode_amp(b, j));
    }
    const double tail = cavity_tail_bound(a, b, cutoff);
    const double scale = std::abs(a.effective_coupling() * b.effective_coupling());
    if (tail > 1e-9 * std::max(scale, std::abs(sum))) {
        std::ostringstream msg;
        msg << "cavity mode tail bound " << tail << " exceeds tolerance at J_max = " << cutoff;
        throw TruncationError(msg.str());
    }
    return {sum, tail};
}

}  // namespace

std::string kernel_name(const FieldKernel& kernel) {
    return std::visit(overloaded{
                          [](const RightMomentum&) { return std::string("right_momentum"); },
                          [](const LeftMomentum&) { return std::string("left_momentum"); },
                          [](const FullMomentum&) { return std::string("full_momentum"); },
                          [](const Amplitude&) { return std::string("amplitude"); },
                          [](const CavityDirichlet&) { return std::string("cavity_dirichlet"); },
                      },
                      kernel);
}

void validate(const DisplacementGenerator& gen) {
    if (!std::isfinite(gen.coupling)) {
        throw ValidationError("coupling must be finite");
    }
    if (gen.sign != 1 && gen.sign != -1) {
        throw ValidationError("generator sign must be +1 or -1");
    }
    if (!std::isfinite(gen.time) || !std::isfinite(gen.position)) {
        throw ValidationError("event time and position must be finite");
    }
    if (const auto* amp = std::get_if<Amplitude>(&gen.kernel)) {
        if (!(amp->k_min > 0.0) || !std::isfinite(amp->k_min)) {
            throw ValidationError("amplitude kernel needs a finite IR cutoff k_min > 0");
        }
    }
    if (const auto* cav = std::get_if<CavityDirichlet>(&gen.kernel)) {
        if (!(cav->length > 0.0) || !std::isfinite(cav->length)) {
            throw ValidationError("cavity length must be positive");
        }
        if (cav->mode_cutoff < 1) {
            throw ValidationError("cavity mode cutoff must be at least 1");
        }
        const Profile placed = gen.placed_profile();
        if (!(placed.left() > 0.0) || !(placed.right() < cav->length)) {
            throw GeometryError("coupling profile must lie strictly inside the cavity");
        }
    }
}

InnerProduct displacement_inner_detailed(const DisplacementGenerator& a, const DisplacementGenerator& b,
                                         const QuadratureOptions& options) {
    validate(a);
    validate(b);
    if (is_cavity(a.kernel) != is_cavity(b.kernel)) {
        throw ValidationError("cannot pair a cavity coupling with a continuum coupling");
    }
    if (is_cavity(a.kernel)) {
        return cavity_inner(a, b);
    }
    return continuum_inner(a, b, options);
}

double phi(const DisplacementGenerator& a, const DisplacementGenerator& b, const QuadratureOptions& options) {
    return displacement_inner(a, b, options).imag();
}

PhaseResult phi_momentum_closed_form(const DisplacementGenerator& alice, const DisplacementGenerator& bob) {
    validate(alice);
    validate(bob);
    auto sectors = [](const FieldKernel& k) -> std::pair<bool, bool> {
        if (std::holds_alternative<RightMomentum>(k)) {
            return {true, false};
        }
        if (std::holds_alternative<LeftMomentum>(k)) {
            return {false, true};
        }
        if (std::holds_alternative<FullMomentum>(k)) {
            return {true, true};
        }
        throw ValidationError("closed-form phase needs momentum couplings");
    };
    const auto [ar, al] = sectors(alice.kernel);
    const auto [br, bl] = sectors(bob.kernel);
    const Profile f = alice.placed_profile();
    const double dt = bob.time - alice.time;
    const double scale = 0.25 * alice.effective_coupling() * bob.effective_coupling();

    double value = 0.0;
    bool overlap = false;
    auto add = [&](double shift, double sign) {
        // Bob's profile transported back to Alice's time along the sector's light rays.
        const Profile h = bob.placed_profile().shifted(shift);
        if (h.left() < f.right() && f.left() < h.right()) {
            overlap = true;
            value += sign * scale * f.derivative_overlap(h);
        }
    };
    if (ar && br) {
        add(-dt, 1.0);
    }
    if (al && bl) {
        add(dt, -1.0);
    }
    return {overlap ? value : 0.0, overlap};
}

double solve_sensing_strength(const DisplacementGenerator& alice, const DisplacementGenerator& bob_template,
                              double target_phase) {
    auto unit = bob_template;
    unit.coupling = 1.0;
    const PhaseResult per_unit = phi_momentum_closed_form(alice, unit);
    const double scale = 0.25 * std::abs(alice.coupling) * alice.profile.total_kink() * std::abs(bob_template.profile.area());
    if (!per_unit.supports_overlap || std::abs(per_unit.value) <= 1e-12 * scale) {
        throw DegenerateGeometryError("degenerate geometry: the phase integral vanishes, so this profile pair cannot sense");
    }
    return target_phase / per_unit.value;
}

double solve_sensing_strength(const DisplacementGenerator& alice, const Profile& bob_profile, double delay) {
    DisplacementGenerator bob;
    bob.kernel = RightMomentum{};
    bob.profile = bob_profile;
    bob.time = alice.time + delay;
    bob.position = alice.position + delay;
    return solve_sensing_strength(alice, bob, 0.5 * pi);
}

std::complex<double> cavity_mode_amp(const DisplacementGenerator& gen, int j) {
    validate(gen);
    const auto* cav = std::get_if<CavityDirichlet>(&gen.kernel);
    if (cav == nullptr) {
        throw ValidationError("cavity_mode_amp needs a cavity kernel");
    }
    if (j < 1 || j > cav->mode_cutoff) {
        throw ValidationError("cavity mode index out of range");
    }
    const double kj = j * pi / cav->length;
    // f_j = int f(x) sin(k_j x) dx.
    const double fj = gen.placed_profile().fourier(kj).imag();
    return cplx(0.0, -1.0) * gen.effective_coupling() * std::polar(1.0, kj * gen.time) * fj / std::sqrt(j * pi);
}

double cavity_tail_bound(const DisplacementGenerator& a, const DisplacementGenerator& b, int mode_cutoff) {
    const double length = cavity_of(a).length;
    const double ca = a.profile.total_kink();
    const double cb = b.profile.total_kink();
    // |f_j| <= C (L / j pi)^2, and sum_{j > J} j^-5 <= 1 / (4 J^4).
    const double jm = static_cast<double>(mode_cutoff);
    return std::abs(a.effective_coupling() * b.effective_coupling()) * ca * cb * std::pow(length, 4) /
           (4.0 * std::pow(pi, 5) * jm * jm * jm * jm);
}

bool cavity_direct_window(const DisplacementGenerator& a, const DisplacementGenerator& b) {
    const double length = cavity_of(a).length;
    const Profile pa = a.placed_profile();
    const Profile pb = b.placed_profile();
    const double dt = b.time - a.time;
    const double spread = std::max(pb.right() - pa.left(), pa.right() - pb.left());
    const double left_reflection = pa.left() + pb.left();
    const double right_reflection = 2.0 * length - pa.right() - pb.right();
    return dt > spread && dt < left_reflection && dt < right_reflection;
}

double cavity_phase_closed_form(const DisplacementGenerator& a, const DisplacementGenerator& b) {
    validate(a);
    validate(b);
    if (!is_cavity(a.kernel) || !is_cavity(b.kernel)) {
        throw ValidationError("cavity closed form needs cavity couplings");
    }
    if (!cavity_direct_window(a, b)) {
        throw GeometryError("couplings are not in the direct timelike window of the cavity");
    }
    return 0.25 * a.effective_coupling() * b.effective_coupling() * a.profile.area() * b.profile.area();
}

AmplitudeNorm amplitude_kernel_norm(const DisplacementGenerator& gen, const QuadratureOptions& options) {
    const auto* amp = std::get_if<Amplitude>(&gen.kernel);
    if (amp == nullptr) {
        throw ValidationError("amplitude_kernel_norm needs an amplitude kernel");
    }
    const double value = displacement_inner(gen, gen, options).real();
    auto halved = gen;
    halved.kernel = Amplitude{0.5 * amp->k_min};
    const double halved_value = displacement_inner(halved, halved, options).real();
    const bool warn = std::abs(halved_value - value) > 0.01 * std::abs(value);
    return {value, halved_value, warn};
}

}  // namespace fieldcomm
