// Prints one PASS/FAIL line per acceptance criterion with the measured values.
// Exit status is the number of failed criteria; --report-only always exits 0.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fieldcomm/errors.hpp"
#include "fieldcomm/protocols.hpp"
#include "support/erasure_oracle.hpp"
#include "support/fock_oracle.hpp"

namespace {

using namespace fieldcomm;
using std::numbers::pi;

constexpr std::uint64_t kSeed = 20240607;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Appends one clause to the detail text and folds it into the verdict.
void clause(Outcome& o, bool ok, const std::string& text) {
    o.pass = o.pass && ok;
    if (!o.detail.empty()) {
        o.detail += "; ";
    }
    o.detail += (ok ? "" : "FAILED ") + text;
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

DisplacementGenerator right_mover(double mu, const Profile& f, double t) {
    DisplacementGenerator g;
    g.kernel = RightMomentum{};
    g.coupling = mu;
    g.profile = f;
    g.time = t;
    return g;
}

Outcome triangle_norm() {
    Outcome o;
    for (double mu : {0.25, 1.0, 2.0}) {
        const double got = displacement_inner(right_mover(mu, Profile::triangle(1.0), 0.0),
                                              right_mover(mu, Profile::triangle(1.0), 0.0))
                               .real();
        const double want = 4.0 * std::log(2.0) / pi * mu * mu;
        const double rel = std::abs(got - want) / want;
        clause(o, rel <= 1e-6, "mu=" + num(mu) + " rel err " + num(rel) + " (<= 1e-6)");
    }
    return o;
}

Outcome vacuum_overlap() {
    Outcome o;
    for (double mu : {0.25, 1.0, 2.0}) {
        auto set = std::make_shared<const GeneratorSet>(
            std::vector<DisplacementGenerator>{right_mover(mu, Profile::triangle(1.0), 0.0)},
            std::vector<std::string>{"alpha1"});
        const auto got = set->overlap(set->label("alpha1"), set->vacuum());
        const double want = std::pow(4.0, -mu * mu / pi);
        const double err = std::abs(got - want);
        clause(o, err <= 1e-6, "mu=" + num(mu) + " |<a|0> - 4^(-mu^2/pi)| " + num(err) + " (<= 1e-6)");
    }
    return o;
}

Outcome coherent_info_curve() {
    Outcome o;
    const Profile tri = Profile::triangle(1.0);
    std::vector<double> mus;
    for (int i = 0; i <= 30; ++i) {
        mus.push_back(0.1 * i);
    }
    std::vector<double> curve;
    for (double mu : mus) {
        curve.push_back(alice_to_field(mu, 1.5, tri));
    }
    clause(o, std::abs(curve[0] + 1.0) <= 1e-12, "I(0) = " + num(curve[0]) + " (-1 to 1e-12)");
    double worst_drop = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        worst_drop = std::max(worst_drop, curve[i - 1] - curve[i]);
    }
    clause(o, worst_drop <= 1e-9, "largest decrease " + num(worst_drop) + " (<= 1e-9)");
    const double at075 = alice_to_field(0.75, 1.5, tri);
    clause(o, at075 >= 0.0, "I(0.75) = " + num(at075) + " (>= 0)");
    clause(o, curve[20] > 0.99, "I(2) = " + num(curve[20]) + " (> 0.99)");
    double spread = 0.0;
    double spread_mu = 0.0;
    for (double mu : mus) {
        double lo = 1e300;
        double hi = -1e300;
        for (double d : {1.1, 1.5, 2.0, 2.5, 3.0}) {
            const double v = alice_to_field(mu, d, tri);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > spread) {
            spread = hi - lo;
            spread_mu = mu;
        }
    }
    clause(o, spread < 1e-6,
           "max variation over delay in {1.1,1.5,2,2.5,3} " + num(spread) + " at mu=" + num(spread_mu) + " (< 1e-6)");
    return o;
}

Profile random_profile(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double width = 0.5 + 1.5 * u(rng);
    const int interior = 1 + static_cast<int>(3 * u(rng));
    std::vector<double> xs;
    for (int i = 0; i < interior; ++i) {
        xs.push_back(width * (0.05 + 0.9 * u(rng)));
    }
    std::sort(xs.begin(), xs.end());
    std::vector<Profile::Node> nodes{{0.0, 0.0}};
    for (double x : xs) {
        if (x - nodes.back().x > 1e-3) {
            nodes.push_back({x, 0.2 + 0.8 * u(rng)});
        }
    }
    nodes.push_back({width, 0.0});
    return Profile(nodes).shifted(-0.5 * width);
}

Outcome commutation() {
    Outcome o;
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    const std::vector<FieldKernel> kernels{RightMomentum{}, LeftMomentum{}, FullMomentum{}};
    for (int i = 0; i < 20; ++i) {
        const Profile f = random_profile(rng);
        const double ell = f.support_width();
        const double dt = ell * (1.0 + 1e-3 + 2.0 * u(rng));
        auto a1 = right_mover((0.5 + 5.0 * u(rng)) * ell, f, 0.0);
        a1.kernel = kernels[static_cast<std::size_t>(i) % kernels.size()];
        a1.position = 4.0 * (u(rng) - 0.5);
        auto a2 = a1;
        a2.time = dt;
        worst = std::max(worst, std::abs(phi(a1, a2)));
    }
    clause(o, worst < 1e-6, "max |phi(a1,a2)| over 20 configurations " + num(worst) + " (< 1e-6)");
    return o;
}

Outcome transfer_bound() {
    Outcome o;
    const auto inputs = haar_inputs(100, kSeed);
    for (double g : {0.005, 0.02, 0.05, 0.1, 0.2}) {
        TransferParams p;
        p.alice_coupling = alice_coupling_for_gamma_norm(p, g);
        try {
            const auto r = state_transfer(p, inputs);
            clause(o, true, "|g1|^2=" + num(g) + " min F " + num(r.min_fidelity()) + " >= " + num(r.bound_value));
            if (g == 0.02) {
                clause(o, r.min_fidelity() >= 0.99, "min F at 0.02 is " + num(r.min_fidelity()) + " (>= 0.99)");
            }
        } catch (const BoundViolation& e) {
            clause(o, false, "|g1|^2=" + num(g) + ": " + e.what());
        }
    }
    return o;
}

Outcome audit_inequality() {
    Outcome o;
    double worst = 1e300;
    for (double g : {0.005, 0.02, 0.05, 0.1, 0.2}) {
        TransferParams p;
        p.alice_coupling = alice_coupling_for_gamma_norm(p, g);
        const auto r = state_transfer(p, {});
        worst = std::min(worst, r.norm_alpha1 - (pi - r.norm_gamma1));
        const auto audit = audit_inequalities(r.norm_alpha1, r.norm_gamma1, r.phi_gamma1_alpha1, r.norm_gamma2);
        clause(o, audit.passed(), "audit at |g1|^2=" + num(g) + (audit.passed() ? " passes" : " fails"));
    }
    clause(o, worst >= 0.0, "min |a1|^2 - (pi - |g1|^2) " + num(worst) + " (>= 0)");
    bool rejected = false;
    try {
        audit_inequalities(0.5, pi + 0.1, 0.5 * pi, pi + 0.1).throw_if_failed();
    } catch (const AuditError&) {
        rejected = true;
    }
    clause(o, rejected, std::string("forged |a1|^2=0.5, |g1|^2=pi+0.1, phi=pi/2 ") + (rejected ? "rejected" : "accepted"));
    return o;
}

Outcome cavity() {
    Outcome o;
    const auto inputs = standard_inputs(100, kSeed);
    for (double l : {3.0, 5.0, 10.0}) {
        CavityParams p;
        p.lambda1 = l;
        try {
            const auto r = cavity_transfer(p, inputs);
            const std::string at = "l1=" + num(l) + " ";
            clause(o, r.identity_residual <= 1e-9, at + "identity residual " + num(r.identity_residual) + " (<= 1e-9)");
            const double exact = std::abs(r.phi_closed_form - 0.5 * pi);
            clause(o, exact <= 1e-12, at + "|phi - pi/2| " + num(exact) + " (<= 1e-12)");
            const double agree = std::abs(r.phi_mode_sum - r.phi_closed_form);
            clause(o, agree <= 1e-4, at + "mode sum vs closed form " + num(agree) + " (<= 1e-4)");
            clause(o, r.min_fidelity() >= r.bound_value,
                   at + "min F " + num(r.min_fidelity()) + " >= " + num(r.bound_value));
        } catch (const Error& e) {
            clause(o, false, "l1=" + num(l) + ": " + e.what());
        }
    }
    return o;
}

Outcome erasure() {
    Outcome o;
    double worst_formula = 0.0;
    double worst_oracle = 0.0;
    for (int n = 1; n <= 6; ++n) {
        const double v = erasure_coherent_info(n);
        worst_formula = std::max(worst_formula, std::abs(v - (2.0 - n) / n));
        worst_oracle = std::max({worst_oracle, std::abs(v - testing::erasure_info_kraus(n)),
                                 std::abs(v - testing::erasure_info_dilation(n))});
    }
    clause(o, worst_formula <= 1e-12, "max |I - (2-N)/N| " + num(worst_formula) + " (<= 1e-12)");
    clause(o, worst_oracle <= 1e-12, "max |I - brute-force oracle| " + num(worst_oracle) + " (<= 1e-12)");
    const double two = erasure_coherent_info(2);
    clause(o, two == 0.0, "I(2) = " + num(two) + " (== 0)");
    return o;
}

Outcome antidegradability() {
    Outcome o;
    for (int n : {2, 3, 4}) {
        const auto r = antidegradability_check(n);
        clause(o, r.max_trace_distance < 1e-10,
               "N=" + std::to_string(n) + " trace distance " + num(r.max_trace_distance) + " (< 1e-10)");
    }
    return o;
}

Outcome fock_oracle() {
    Outcome o;
    const auto cmp = testing::compare_with_fock(testing::cavity_three_mode_circuit(), 30);
    clause(o, cmp.max_entry_difference <= 1e-6,
           std::to_string(cmp.reduced_states) + " reduced states, max entry difference " +
               num(cmp.max_entry_difference) + " (<= 1e-6)");
    return o;
}

Outcome delocalization() {
    Outcome o;
    DelocalizeParams p;
    p.alice_coupling = alice_coupling_for_gamma2_norm(p, 0.02);
    const auto r = delocalize(p, standard_inputs(100, kSeed));
    clause(o, r.max_single_coherence() <= r.coherence_limit,
           "max single coherence " + num(r.max_single_coherence()) + " (<= " + num(r.coherence_limit) + ")");
    clause(o, r.min_joint_fidelity() >= r.bound_value,
           "min joint F " + num(r.min_joint_fidelity()) + " (>= " + num(r.bound_value) + ")");
    return o;
}

struct Criterion {
    int id;
    std::string name;
    double time_limit;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const bool report_only = argc > 1 && std::strcmp(argv[1], "--report-only") == 0;
    const std::vector<Criterion> criteria{
        {1, "triangle norm closed form", 1.0, triangle_norm},
        {2, "vacuum overlap", 1.0, vacuum_overlap},
        {3, "coherent information curve", 10.0, coherent_info_curve},
        {4, "commutation of timelike couplings", 5.0, commutation},
        {5, "transfer fidelity bound", 30.0, transfer_bound},
        {6, "norm inequality and forged audit", 1.0, audit_inequality},
        {7, "cavity identities and transfer", 60.0, cavity},
        {8, "erasure coherent information", 1.0, erasure},
        {9, "anti-degradability", 5.0, antidegradability},
        {10, "Fock-space oracle", 60.0, fock_oracle},
        {11, "delocalization", 30.0, delocalization},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("threw: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        clause(o, secs < c.time_limit, "runtime " + num(secs) + " s (< " + num(c.time_limit) + " s)");
        failed += o.pass ? 0 : 1;
        std::printf("criterion %2d %s: %s | %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return report_only ? 0 : failed;
}
