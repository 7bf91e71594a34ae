/**
 * @brief Composite Gauss-Legendre rules for oscillatory integrals over frequency.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace gevlab::quadrature {

struct Node {
    double x;
    double w;
};

/// 32-point Gauss-Legendre on [a, b].
inline void append_panel(double a, double b, std::vector<Node>& out) {
    using rule = boost::math::quadrature::gauss<double, 32>;
    const auto& abscissa = rule::abscissa();
    const auto& weights = rule::weights();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
        out.push_back({mid - half * abscissa[i], half * weights[i]});
        out.push_back({mid + half * abscissa[i], half * weights[i]});
    }
}

/**
 * Nodes for the integral over [a, b] of a function whose oscillation in the
 * integration variable has angular frequency at most `omega`. Panels are
 * narrow enough that each carries at most ~4 oscillation periods.
 */
inline std::vector<Node> oscillatory_rule(double a, double b, double omega) {
    const double width = 24.0 / std::max(omega, 1e-3);
    const std::size_t panels =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / width)));
    std::vector<Node> nodes;
    nodes.reserve(panels * 32);
    const double step = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) append_panel(a + step * p, a + step * (p + 1), nodes);
    return nodes;
}

/// Symmetric rule on [-R, R]; panels meet at the origin.
inline std::vector<Node> symmetric_rule(double radius, double omega) {
    auto nodes = oscillatory_rule(0.0, radius, omega);
    const std::size_t half = nodes.size();
    nodes.reserve(2 * half);
    for (std::size_t i = 0; i < half; ++i) nodes.push_back({-nodes[i].x, nodes[i].w});
    return nodes;
}

}  // namespace gevlab::quadrature
