/**
 * @brief The degenerate operator L, its frozen ODE A_tau, the weight w and the
 * weighted norms, with numerical checks of the associated inequalities.
 *
 *     L      = d_x^2 + x^{2(p-1)} d_{t1}^2 + x^{2(q-1)} d_{t2}^2   on R^3
 *     A_tau  = d_x^2 - tau1^2 x^{2(p-1)} - tau2^2 x^{2(q-1)}       on R
 *     w(x,t) = (|tau1|^{2/p} + tau1^2 x^{2(p-1)} + |tau2|^{2/q} + tau2^2 x^{2(q-1)})^{1/2}
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gevlab/errors.hpp"
#include "gevlab/finite_difference.hpp"
#include "gevlab/sampled_function.hpp"

namespace gevlab {

class OperatorParams {
public:
    OperatorParams(int p, int q) : p_(p), q_(q) {
        if (p < 1 || q < p) throw std::invalid_argument("operator parameters must satisfy 1 <= p <= q");
    }
    int p() const { return p_; }
    int q() const { return q_; }
    /// p / q, the exponent of |tau| in the weight inequality.
    double gamma() const { return static_cast<double>(p_) / q_; }
    /// q / p, the optimal Gevrey exponent.
    double critical_order() const { return static_cast<double>(q_) / p_; }

private:
    int p_;
    int q_;
};

struct Tau {
    double tau1{0};
    double tau2{0};
    double norm() const { return std::hypot(tau1, tau2); }
};

struct DualFrequency {
    double xi{0};
    Tau tau;
};

/// x^{2k} with 0^0 = 1.
inline double even_power(double x, int k) { return k == 0 ? 1.0 : std::pow(x * x, k); }

/// tau1^2 x^{2(p-1)} + tau2^2 x^{2(q-1)}
inline double potential(double x, Tau tau, const OperatorParams& params) {
    return tau.tau1 * tau.tau1 * even_power(x, params.p() - 1) +
           tau.tau2 * tau.tau2 * even_power(x, params.q() - 1);
}

inline double weight_w(double x, Tau tau, const OperatorParams& params) {
    return std::sqrt(std::pow(std::abs(tau.tau1), 2.0 / params.p()) +
                     std::pow(std::abs(tau.tau2), 2.0 / params.q()) + potential(x, tau, params));
}

/// Quintic smoothstep: 0 on [-1/4, 1/4], 1 for |x| >= 1, C^2 in between.
inline double smoothstep_cutoff(double x) {
    const double t = std::clamp((std::abs(x) - 0.25) / 0.75, 0.0, 1.0);
    return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

struct WeightConfig {
    double rho{0.0};
    std::function<double(double)> v{smoothstep_cutoff};
};

/// Grid margin (nodes per face) where apply_L has no valid stencil; set to zero.
inline constexpr std::size_t kStencilMargin = 1;

/**
 * L u by second-order centred differences on a 3D grid with axes (x, t1, t2).
 * The outermost layer of nodes is set to zero.
 */
template <class Real = double>
SampledFunction<Real> apply_L(const SampledFunction<Real>& u, const OperatorParams& params) {
    if (u.dimension() != 3) throw std::invalid_argument("apply_L: three-dimensional input required");
    for (int d = 0; d < 3; ++d)
        if (u.axis(d).count < 2 * kStencilMargin + 4)
            throw degenerate_grid("apply_L: need at least four interior nodes per axis");
    const std::size_t n0 = u.axis(0).count, n1 = u.axis(1).count, n2 = u.axis(2).count;
    const Real i0 = Real(1) / (u.axis(0).spacing * u.axis(0).spacing);
    const Real i1 = Real(1) / (u.axis(1).spacing * u.axis(1).spacing);
    const Real i2 = Real(1) / (u.axis(2).spacing * u.axis(2).spacing);
    std::vector<complex_t<Real>> out(u.size(), complex_t<Real>(0));
    for (std::size_t i = 1; i + 1 < n0; ++i) {
        const double x = to_double(u.coordinate(0, i));
        const Real a1(even_power(x, params.p() - 1));
        const Real a2(even_power(x, params.q() - 1));
        for (std::size_t j = 1; j + 1 < n1; ++j) {
            for (std::size_t k = 1; k + 1 < n2; ++k) {
                const auto c = u[u.flat_index(i, j, k)];
                const Real two(2);
                const auto dxx = (u[u.flat_index(i + 1, j, k)] - two * c + u[u.flat_index(i - 1, j, k)]) * i0;
                const auto d11 = (u[u.flat_index(i, j + 1, k)] - two * c + u[u.flat_index(i, j - 1, k)]) * i1;
                const auto d22 = (u[u.flat_index(i, j, k + 1)] - two * c + u[u.flat_index(i, j, k - 1)]) * i2;
                out[u.flat_index(i, j, k)] = dxx + a1 * d11 + a2 * d22;
            }
        }
    }
    return SampledFunction<Real>(u.axes(), std::move(out), u.support_radius());
}

namespace detail {

inline void require_1d(const SampledFunction<double>& f, const char* who) {
    if (f.dimension() != 1) throw std::invalid_argument(std::string(who) + ": one-dimensional input required");
}

inline double weighted_sum(const std::vector<std::complex<double>>& v, const std::vector<double>& weight,
                           double h) {
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::norm(v[i]) * weight[i];
    return s * h;
}

}  // namespace detail

/**
 * A_tau f with second-order centred differences; samples beyond the grid are
 * taken as zero, so the discrete operator is a symmetric tridiagonal matrix.
 */
inline SampledFunction<double> apply_A_tau(const SampledFunction<double>& f, Tau tau,
                                           const OperatorParams& params) {
    detail::require_1d(f, "apply_A_tau");
    const std::size_t n = f.size();
    if (n < 4) throw degenerate_grid("apply_A_tau: need at least four grid points");
    const double h = f.axis(0).spacing;
    const double ih2 = 1.0 / (h * h);
    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> left = i > 0 ? f[i - 1] : 0.0;
        const std::complex<double> right = i + 1 < n ? f[i + 1] : 0.0;
        out[i] = (left - 2.0 * f[i] + right) * ih2 - potential(f.coordinate(0, i), tau, params) * f[i];
    }
    return SampledFunction<double>(f.axes(), std::move(out), f.support_radius());
}

/// Squared H^k_tau norm, k = 0, 1, 2, with derivatives of the given accuracy order.
inline double htau_norm_squared(const SampledFunction<double>& f, int k, Tau tau, const OperatorParams& params,
                                const WeightConfig& weights = {}, std::size_t accuracy = 6) {
    detail::require_1d(f, "htau_norm");
    if (k < 0 || k > 2) throw std::invalid_argument("htau_norm: k must be 0, 1 or 2");
    const std::size_t n = f.size();
    const double h = f.axis(0).spacing;
    const double scale = weights.rho * std::pow(tau.norm(), params.gamma());
    std::vector<double> w2(n), conj(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = f.coordinate(0, i);
        const double w = weight_w(x, tau, params);
        w2[i] = w * w;
        conj[i] = scale == 0.0 ? 1.0 : std::exp(scale * weights.v(x));
    }
    std::vector<double> weight(n);
    auto term = [&](const std::vector<std::complex<double>>& v, auto&& factor) {
        for (std::size_t i = 0; i < n; ++i) weight[i] = factor(i) * conj[i];
        return detail::weighted_sum(v, weight, h);
    };
    const auto& values = f.values();
    if (k == 0) return term(values, [&](std::size_t i) { return 1.0 / w2[i]; });
    const auto d1 = fd::differentiate(values, h, 1, accuracy);
    if (k == 1)
        return term(d1, [&](std::size_t i) { return 1.0 / w2[i]; }) + term(values, [](std::size_t) { return 1.0; });
    const auto d2 = fd::differentiate(values, h, 2, accuracy);
    return term(d2, [&](std::size_t i) { return 1.0 / w2[i]; }) + term(d1, [](std::size_t) { return 1.0; }) +
           term(values, [&](std::size_t i) { return w2[i]; });
}

inline double htau_norm(const SampledFunction<double>& f, int k, Tau tau, const OperatorParams& params,
                        const WeightConfig& weights = {}) {
    return std::sqrt(htau_norm_squared(f, k, tau, params, weights));
}

/// Plain L^2 norm by the trapezoid rule.
inline double l2_norm(const SampledFunction<double>& f) {
    double s = 0;
    for (const auto& v : f.values()) s += std::norm(v);
    return std::sqrt(s * to_double(f.cell_volume()));
}

struct InversionOptions {
    /// Extension stops once the potential reaches this value ...
    double potential_cap = 1e6;
    /// ... or once the WKB factor exp(-int sqrt(V)) beyond the input grid drops below this.
    double decay_target = 1e-20;
    std::size_t max_nodes = 20'000'000;
};

/**
 * Solve A_tau f = g with zero Dirichlet data, on the grid of g extended with
 * the same spacing until the solution has decayed; f is returned on the grid
 * of g. Requires |tau| >= 1.
 */
inline SampledFunction<double> invert_A_tau(const SampledFunction<double>& g, Tau tau, const OperatorParams& params,
                                            const InversionOptions& options = {}) {
    detail::require_1d(g, "invert_A_tau");
    if (!(tau.norm() >= 1.0)) throw std::invalid_argument("invert_A_tau: requires |tau| >= 1");
    const auto& ax = g.axis(0);
    const double h = ax.spacing;
    const double log_target = -std::log(options.decay_target);

    auto extension = [&](double edge, double direction) {
        std::size_t count = 0;
        double action = 0;
        double x = edge;
        while (true) {
            const double v = potential(x, tau, params);
            if (v >= options.potential_cap || action >= log_target) break;
            x += direction * h;
            action += std::sqrt(potential(x, tau, params)) * h;
            if (++count > options.max_nodes) throw std::runtime_error("invert_A_tau: extension exceeds node budget");
        }
        return count;
    };
    const std::size_t left = extension(ax.origin, -1.0);
    const std::size_t right = extension(ax.last(), 1.0);
    const std::size_t n = left + ax.count + right;
    const double origin = ax.origin - static_cast<double>(left) * h;

    // -A_tau is symmetric positive definite: diagonal 2/h^2 + V, off-diagonal -1/h^2.
    const double ih2 = 1.0 / (h * h);
    std::vector<double> diag(n);
    std::vector<std::complex<double>> rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) diag[i] = 2.0 * ih2 + potential(origin + static_cast<double>(i) * h, tau, params);
    for (std::size_t i = 0; i < ax.count; ++i) rhs[left + i] = -g[i];

    // Thomas elimination with off-diagonal -ih2
    std::vector<double> c(n);
    double pivot = diag[0];
    c[0] = -ih2 / pivot;
    rhs[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] + ih2 * c[i - 1];
        if (!(pivot > 0.0) || !std::isfinite(pivot))
            throw internal_consistency_error("invert_A_tau: non-positive pivot in a definite system");
        c[i] = -ih2 / pivot;
        rhs[i] = (rhs[i] + ih2 * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];

    std::vector<std::complex<double>> f(rhs.begin() + static_cast<long>(left),
                                        rhs.begin() + static_cast<long>(left + ax.count));
    return SampledFunction<double>(g.axes(), std::move(f), g.support_radius());
}

struct AprioriRatio {
    double ratio{0};
    /// ||A_tau f|| vanished to rounding; ratio is not meaningful.
    bool undefined{false};
};

/// ||f||^2_{H^2_tau} / ||A_tau f||^2_{H^0_tau}.
inline AprioriRatio check_apriori(const SampledFunction<double>& f, Tau tau, const OperatorParams& params,
                                  const WeightConfig& weights = {}) {
    f.require_compact_support("check_apriori");
    const double num = htau_norm_squared(f, 2, tau, params, weights);
    const double den = htau_norm_squared(apply_A_tau(f, tau, params), 0, tau, params, weights);
    if (!(den > 1e-300) || !(den > 1e-28 * num)) return {0.0, true};
    return {num / den, false};
}

/**
 * C^infinity cutoff equal to 1 on [-inner, inner] and 0 outside
 * [-outer, outer], built from exp(-1/t).
 */
inline double smooth_cutoff(double x, double inner, double outer) {
    const double a = std::abs(x);
    if (a <= inner) return 1.0;
    if (a >= outer) return 0.0;
    const double s = std::exp(-1.0 / (outer - a));
    const double t = std::exp(-1.0 / (a - inner));
    return s / (s + t);
}

struct ProbeOptions {
    std::size_t count = 100;
    std::uint64_t seed = 42;
    double lo = -2.0;
    double hi = 2.0;
    std::size_t points = 4001;
    double cutoff_inner = 1.0;
    double cutoff_outer = 1.75;
};

/**
 * Gaussians exp(-(x-c)^2 / (2 s^2)) with c ~ U[-1/2, 1/2], s ~ U[0.05, 0.5],
 * times a smooth cutoff, from a fixed-seed mt19937_64 stream.
 */
inline std::vector<SampledFunction<double>> probe_family(const ProbeOptions& options = {}) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> centre(-0.5, 0.5);
    std::uniform_real_distribution<double> width(0.05, 0.5);
    const auto axis = axis_over(options.lo, options.hi, options.points);
    std::vector<SampledFunction<double>> out;
    out.reserve(options.count);
    for (std::size_t i = 0; i < options.count; ++i) {
        const double c = centre(rng);
        const double s = width(rng);
        out.push_back(SampledFunction<double>::sample(
            {axis},
            [&](const std::array<double, 3>& x) {
                const double t = (x[0] - c) / s;
                return std::complex<double>(std::exp(-0.5 * t * t) *
                                            smooth_cutoff(x[0], options.cutoff_inner, options.cutoff_outer));
            },
            options.cutoff_outer));
    }
    return out;
}

struct AprioriSweep {
    double max_ratio{0};
    std::size_t undefined{0};
};

inline AprioriSweep max_apriori_ratio(std::span<const SampledFunction<double>> probes, Tau tau,
                                      const OperatorParams& params, const WeightConfig& weights = {}) {
    AprioriSweep out;
    for (const auto& f : probes) {
        const auto r = check_apriori(f, tau, params, weights);
        if (r.undefined) {
            ++out.undefined;
            continue;
        }
        out.max_ratio = std::max(out.max_ratio, r.ratio);
    }
    return out;
}

/// max over g of ||A_tau^{-1} g||_{H^2_tau} / ||g||_{H^0_tau}.
inline double inverse_norm_estimate(std::span<const SampledFunction<double>> probes, Tau tau,
                                    const OperatorParams& params, const WeightConfig& weights = {}) {
    double best = 0;
    for (const auto& g : probes) {
        const auto f = invert_A_tau(g, tau, params);
        best = std::max(best, htau_norm(f, 2, tau, params, weights) / htau_norm(g, 0, tau, params, weights));
    }
    return best;
}

struct WeightRow {
    double tau{0};
    double sup_ratio{0};
    double argmax_x{0};
    double argmax_angle{0};
};

struct WeightSweepOptions {
    std::size_t x_samples = 2001;
    std::size_t angle_samples = 91;
};

/**
 * For each |tau| in the ladder, sup over x in [-R, R] and directions
 * tau = |tau| (cos a, sin a), a in [0, pi/2], of
 *     |tau|^gamma (|x|^{p-1} + |x|^{q-1}) / w(x, tau),  gamma = p/q.
 */
inline std::vector<WeightRow> weight_inequality_rows(const OperatorParams& params, std::span<const double> tau_ladder,
                                                     double support_radius, const WeightSweepOptions& options = {}) {
    if (!(support_radius > 0.0 && support_radius <= 1.0))
        throw std::invalid_argument("check_weight_inequality: support radius must lie in (0, 1]");
    const double half_pi = 2.0 * std::atan(1.0);
    std::vector<WeightRow> rows;
    for (double t : tau_ladder) {
        if (!(t >= 1.0)) throw std::invalid_argument("check_weight_inequality: |tau| must be >= 1");
        WeightRow row{t, 0, 0, 0};
        const double lead = std::pow(t, params.gamma());
        for (std::size_t ia = 0; ia < options.angle_samples; ++ia) {
            const double a = half_pi * static_cast<double>(ia) / static_cast<double>(options.angle_samples - 1);
            const Tau tau{t * std::cos(a), t * std::sin(a)};
            for (std::size_t ix = 0; ix < options.x_samples; ++ix) {
                const double x = -support_radius + 2.0 * support_radius * static_cast<double>(ix) /
                                                       static_cast<double>(options.x_samples - 1);
                const double ax = std::abs(x);
                const double powers = (params.p() == 1 ? 1.0 : std::pow(ax, params.p() - 1)) +
                                      (params.q() == 1 ? 1.0 : std::pow(ax, params.q() - 1));
                const double r = lead * powers / weight_w(x, tau, params);
                if (r > row.sup_ratio) row = {t, r, x, a};
            }
        }
        rows.push_back(row);
    }
    return rows;
}

inline double check_weight_inequality(const OperatorParams& params, std::span<const double> tau_ladder,
                                      double support_radius) {
    double best = 0;
    for (const auto& row : weight_inequality_rows(params, tau_ladder, support_radius))
        best = std::max(best, row.sup_ratio);
    return best;
}

struct ScalingSides {
    double lhs{0};
    double rhs{0};
    double ratio() const { return lhs / rhs; }
};

namespace detail {

struct ScalingTerms {
    double mass{0};      // ||f||^2
    double gradient{0};  // ||f'||^2
    double moment{0};    // int |f|^2 x^{2(m-1)}
};

inline ScalingTerms scaling_terms(const SampledFunction<double>& f, int m) {
    require_1d(f, "check_scaling_inequality");
    if (m < 1) throw std::invalid_argument("check_scaling_inequality: m must be >= 1");
    const double h = f.axis(0).spacing;
    const auto d1 = fd::differentiate(f.values(), h, 1, 6);
    ScalingTerms t;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = f.coordinate(0, i);
        t.mass += std::norm(f[i]);
        t.gradient += std::norm(d1[i]);
        t.moment += std::norm(f[i]) * even_power(x, m - 1);
    }
    t.mass *= h;
    t.gradient *= h;
    t.moment *= h;
    return t;
}

}  // namespace detail

/// Smallest C with ||f||^2 <= C (||f'||^2 + int |f|^2 x^{2(m-1)}) over the probes (the case lambda = 1).
inline double calibrate_scaling_constant(std::span<const SampledFunction<double>> probes, int m) {
    double c = 0;
    for (const auto& f : probes) {
        const auto t = detail::scaling_terms(f, m);
        c = std::max(c, t.mass / (t.gradient + t.moment));
    }
    return c;
}

/// lambda^{2/m} ||f||^2  versus  C ||f'||^2 + C lambda^2 int |f|^2 x^{2(m-1)}.
inline ScalingSides check_scaling_inequality(const SampledFunction<double>& f, double lambda, int m, double c) {
    if (!(lambda > 0)) throw std::invalid_argument("check_scaling_inequality: lambda must be positive");
    const auto t = detail::scaling_terms(f, m);
    return {std::pow(lambda, 2.0 / m) * t.mass, c * t.gradient + c * lambda * lambda * t.moment};
}

}  // namespace gevlab
