#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace gevlab::fd {

/**
 * Fornberg's recursion: weights w[j] such that
 *   f^{(order)}(x0) ~ sum_j w[j] f(nodes[j]).
 * Works in any field type; nodes need not be uniform.
 */
template <class Real>
std::vector<Real> fornberg_weights(const Real& x0, std::span<const Real> nodes, std::size_t order) {
    const std::size_t n = nodes.size();
    if (n <= order) throw std::invalid_argument("fornberg_weights: too few nodes for derivative order");
    // c[i][k]: weight of node i for derivative k
    std::vector<std::vector<Real>> c(n, std::vector<Real>(order + 1, Real(0)));
    Real c1(1);
    Real c4 = nodes[0] - x0;
    c[0][0] = Real(1);
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, order);
        Real c2(1);
        const Real c5 = c4;
        c4 = nodes[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const Real c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k)
                    c[i][k] = c1 * (Real(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - Real(k) * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<Real> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = c[i][order];
    return w;
}

/// Half-width of the smallest centred stencil with the requested accuracy order.
inline std::size_t centred_half_width(std::size_t derivative, std::size_t accuracy) {
    for (std::size_t m = 1;; ++m) {
        const std::size_t points = 2 * m + 1;
        if (points <= derivative) continue;
        std::size_t acc = points - derivative;
        if (acc % 2 == 1) ++acc;  // symmetric stencils gain one order
        if (acc >= accuracy) return m;
    }
}

/// Weights of the centred stencil on offsets -m..m in units of the spacing h.
template <class Real>
std::vector<Real> centred_weights(std::size_t derivative, std::size_t half_width, const Real& h) {
    std::vector<Real> nodes;
    for (long j = -static_cast<long>(half_width); j <= static_cast<long>(half_width); ++j)
        nodes.push_back(Real(j) * h);
    return fornberg_weights<Real>(Real(0), std::span<const Real>(nodes), derivative);
}

/**
 * Derivative of uniformly sampled values, treating samples beyond either end
 * as zero (appropriate for compactly supported data).
 */
template <class Value, class Real>
std::vector<Value> differentiate(const std::vector<Value>& values, const Real& h, std::size_t derivative,
                                 std::size_t accuracy) {
    const std::size_t m = centred_half_width(derivative, accuracy);
    const auto w = centred_weights<Real>(derivative, m, h);
    const long n = static_cast<long>(values.size());
    const long half = static_cast<long>(m);
    std::vector<Value> out(values.size(), Value(0));
    for (long i = 0; i < n; ++i) {
        Value acc(0);
        for (long j = -half; j <= half; ++j) {
            const long k = i + j;
            if (k < 0 || k >= n) continue;
            acc += values[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(j + half)];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

}  // namespace gevlab::fd
