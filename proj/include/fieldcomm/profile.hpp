#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fieldcomm {

/// Continuous, compactly supported, piecewise-linear smearing function f(x).
///
/// Defined by an ordered node list; the function interpolates linearly between
/// nodes and vanishes at and outside the first and last node. Continuity means
/// f' is piecewise constant with no delta contributions, which is what makes
/// the Fourier transform and the f'h overlap exactly integrable.
class Profile {
public:
    struct Node {
        double x;
        double value;
    };

    /// A slope discontinuity: f'' contains jump * delta(x - position).
    struct Kink {
        double position;
        double jump;
    };

    /// Throws ValidationError unless nodes are strictly increasing, finite,
    /// at least three, zero at both ends, and not identically zero.
    explicit Profile(std::vector<Node> nodes);

    /// Symmetric unit-area triangle supported on [-width/2, width/2].
    static Profile triangle(double width);

    /// Unit-area triangle on [-width/2, width/2] whose peak sits at `peak`.
    /// The default peak -width/4 gives the standard asymmetric sender profile.
    static Profile skew_triangle(double width, double peak);
    static Profile skew_triangle(double width) { return skew_triangle(width, -0.25 * width); }

    [[nodiscard]] std::span<const Node> nodes() const { return nodes_; }
    [[nodiscard]] double left() const { return nodes_.front().x; }
    [[nodiscard]] double right() const { return nodes_.back().x; }
    [[nodiscard]] double support_width() const { return right() - left(); }

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double area() const;
    [[nodiscard]] double slope(std::size_t segment) const;

    /// Kinks at every node, including the two support edges.
    [[nodiscard]] std::vector<Kink> kinks() const;
    /// Sum of |jump| over all kinks; bounds |f~(k)| <= total_kink() / k^2.
    [[nodiscard]] double total_kink() const;

    [[nodiscard]] Profile shifted(double d) const;
    /// x -> -x.
    [[nodiscard]] Profile mirrored() const;
    [[nodiscard]] Profile scaled(double factor) const;
    [[nodiscard]] Profile normalized() const;

    /// f~(k) = integral f(x) e^{ikx} dx, summed exactly segment by segment.
    [[nodiscard]] std::complex<double> fourier(double k) const;

    /// integral f'(x) h(x) dx, exact for piecewise-linear h.
    [[nodiscard]] double derivative_overlap(const Profile& h) const;

private:
    std::vector<Node> nodes_;
};

/// Free-function spelling of Profile::fourier.
[[nodiscard]] inline std::complex<double> profile_fourier(const Profile& profile, double k) {
    return profile.fourier(k);
}

}  // namespace fieldcomm
