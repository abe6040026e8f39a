#include "fieldcomm/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fieldcomm/errors.hpp"

namespace fieldcomm {

namespace {

using cd = std::complex<double>;

constexpr double kSeriesThreshold = 1.0;

// E0(z) = int_0^1 e^{izt} dt and E1(z) = int_0^1 t e^{izt} dt.
// Power series below |z| = 1 avoid the cancellation in the closed forms.
void segment_moments(double z, cd& e0, cd& e1) {
    const cd iz(0.0, z);
    if (std::abs(z) < kSeriesThreshold) {
        cd term(1.0, 0.0);  // (iz)^n / n!
        e0 = 0.0;
        e1 = 0.0;
        for (int n = 0; n < 30; ++n) {
            e0 += term / static_cast<double>(n + 1);
            e1 += term / static_cast<double>(n + 2);
            term *= iz / static_cast<double>(n + 1);
        }
        return;
    }
    const cd eiz = std::exp(iz);
    e0 = (eiz - 1.0) / iz;
    e1 = (eiz - e0) / iz;
}

}  // namespace

Profile::Profile(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 3) {
        throw ValidationError("profile needs at least three nodes");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i].x) || !std::isfinite(nodes_[i].value)) {
            throw ValidationError("profile node " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && !(nodes_[i].x > nodes_[i - 1].x)) {
            throw ValidationError("profile node positions must be strictly increasing");
        }
    }
    if (nodes_.front().value != 0.0 || nodes_.back().value != 0.0) {
        throw ValidationError("profile must vanish at the first and last node");
    }
    if (std::none_of(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.value != 0.0; })) {
        throw ValidationError("profile is identically zero");
    }
}

Profile Profile::triangle(double width) {
    return skew_triangle(width, 0.0);
}

Profile Profile::skew_triangle(double width, double peak) {
    if (!(width > 0.0)) {
        throw ValidationError("triangle width must be positive");
    }
    const double half = 0.5 * width;
    if (!(peak > -half && peak < half)) {
        throw ValidationError("triangle peak must lie strictly inside the support");
    }
    return Profile({{-half, 0.0}, {peak, 2.0 / width}, {half, 0.0}});
}

double Profile::operator()(double x) const {
    if (x <= left() || x >= right()) {
        return 0.0;
    }
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x,
                                     [](double v, const Node& n) { return v < n.x; });
    const Node& b = *it;
    const Node& a = *(it - 1);
    return a.value + (b.value - a.value) * (x - a.x) / (b.x - a.x);
}

double Profile::area() const {
    double sum = 0.0;
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        sum += 0.5 * (nodes_[i].value + nodes_[i - 1].value) * (nodes_[i].x - nodes_[i - 1].x);
    }
    return sum;
}

double Profile::slope(std::size_t segment) const {
    const Node& a = nodes_.at(segment);
    const Node& b = nodes_.at(segment + 1);
    return (b.value - a.value) / (b.x - a.x);
}

std::vector<Profile::Kink> Profile::kinks() const {
    std::vector<Kink> out;
    out.reserve(nodes_.size());
    const std::size_t segments = nodes_.size() - 1;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double before = i == 0 ? 0.0 : slope(i - 1);
        const double after = i == segments ? 0.0 : slope(i);
        out.push_back({nodes_[i].x, after - before});
    }
    return out;
}

double Profile::total_kink() const {
    const auto ks = kinks();
    return std::accumulate(ks.begin(), ks.end(), 0.0,
                           [](double acc, const Kink& k) { return acc + std::abs(k.jump); });
}

Profile Profile::shifted(double d) const {
    auto out = nodes_;
    for (auto& n : out) {
        n.x += d;
    }
    return Profile(std::move(out));
}

Profile Profile::mirrored() const {
    std::vector<Node> out(nodes_.rbegin(), nodes_.rend());
    for (auto& n : out) {
        n.x = -n.x;
    }
    return Profile(std::move(out));
}

Profile Profile::scaled(double factor) const {
    auto out = nodes_;
    for (auto& n : out) {
        n.value *= factor;
    }
    return Profile(std::move(out));
}

Profile Profile::normalized() const {
    const double a = area();
    if (a == 0.0) {
        throw ValidationError("cannot normalize a profile with zero area");
    }
    return scaled(1.0 / a);
}

std::complex<double> Profile::fourier(double k) const {
    cd sum = 0.0;
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        const Node& a = nodes_[i - 1];
        const Node& b = nodes_[i];
        const double h = b.x - a.x;
        cd e0;
        cd e1;
        segment_moments(k * h, e0, e1);
        sum += std::exp(cd(0.0, k * a.x)) * h * (a.value * e0 + (b.value - a.value) * e1);
    }
    return sum;
}

double Profile::derivative_overlap(const Profile& h) const {
    // f' is constant on each of our segments; integrate h exactly over each
    // one by splitting at h's nodes (h is linear in between, so the trapezoid
    // rule is exact).
    double total = 0.0;
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        const double a = nodes_[i - 1].x;
        const double b = nodes_[i].x;
        std::vector<double> cuts{a, b};
        for (const auto& n : h.nodes()) {
            if (n.x > a && n.x < b) {
                cuts.push_back(n.x);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        double integral = 0.0;
        for (std::size_t c = 1; c < cuts.size(); ++c) {
            integral += 0.5 * (h(cuts[c - 1]) + h(cuts[c])) * (cuts[c] - cuts[c - 1]);
        }
        total += slope(i - 1) * integral;
    }
    return total;
}

}  // namespace fieldcomm
