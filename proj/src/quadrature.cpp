#include "fieldcomm/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <queue>
#include <sstream>

#include "fieldcomm/errors.hpp"

namespace fieldcomm {

namespace {

struct Panel {
    double a;
    double b;
    std::complex<double> value;
    double error;
    double l1;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate(const std::function<std::complex<double>(double)>& f, double a, double b) {
    double error = 0.0;
    double l1 = 0.0;
    // max_depth = 0: a single 15-point Kronrod rule with its embedded 7-point Gauss estimate.
    const auto value =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &error, &l1);
    return {a, b, value, error, l1};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<std::complex<double>(double)>& integrand,
                                    const std::vector<double>& breakpoints,
                                    const QuadratureOptions& options) {
    std::priority_queue<Panel> queue;
    std::complex<double> value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i] > breakpoints[i - 1])) {
            continue;
        }
        Panel p = evaluate(integrand, breakpoints[i - 1], breakpoints[i]);
        value += p.value;
        error += p.error;
        l1 += p.l1;
        queue.push(p);
    }
    std::size_t panels = queue.size();
    // Running sums drift as panels are replaced; recompute them periodically.
    std::size_t since_resum = 0;
    while (!queue.empty() && error > options.relative_tolerance * l1) {
        if (panels >= options.max_panels) {
            std::ostringstream msg;
            msg << "adaptive quadrature did not converge: error " << error << " vs target "
                << options.relative_tolerance * l1 << " after " << panels << " panels";
            throw QuadratureError(msg.str());
        }
        const Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = evaluate(integrand, worst.a, mid);
        const Panel right = evaluate(integrand, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        queue.push(left);
        queue.push(right);
        ++panels;
        if (++since_resum == 512) {
            since_resum = 0;
            auto copy = queue;
            value = 0.0;
            error = 0.0;
            l1 = 0.0;
            while (!copy.empty()) {
                value += copy.top().value;
                error += copy.top().error;
                l1 += copy.top().l1;
                copy.pop();
            }
        }
    }
    // Final exact resummation.
    value = 0.0;
    error = 0.0;
    l1 = 0.0;
    while (!queue.empty()) {
        value += queue.top().value;
        error += queue.top().error;
        l1 += queue.top().l1;
        queue.pop();
    }
    return {value, error, l1, panels};
}

}  // namespace fieldcomm
