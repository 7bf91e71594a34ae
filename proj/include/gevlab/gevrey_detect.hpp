/**
 * @brief Synthetic functions of known Gevrey order and two order estimators.
 *
 * estimate_order_fbi reads the order from the stretched-exponential decay of
 * the FBI transform along a frequency ray. estimate_order_derivatives reads
 * it from the growth of sup |u^(k)| near a point. Both report s >= 1.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gevlab/errors.hpp"
#include "gevlab/fbi_transform.hpp"
#include "gevlab/finite_difference.hpp"
#include "gevlab/precision.hpp"
#include "gevlab/sampled_function.hpp"
#include "gevlab/stretched_fit.hpp"

namespace gevlab {

class GevreyOrder {
public:
    explicit GevreyOrder(double s) : s_(s) {
        if (!(s >= 1.0) || !std::isfinite(s)) throw std::invalid_argument("Gevrey order must be >= 1");
    }
    double value() const { return s_; }

private:
    double s_;
};

struct BumpGrid {
    std::size_t points = 2048;
    /// Zero padding on each side, as a fraction of b - a.
    double padding = 0.25;
};

/// Smallest grid that keeps 2 pi / xi_max above 8 spacings (with a small margin).
inline BumpGrid bump_grid_resolving(double a, double b, double xi_max, double padding = 0.25) {
    const double span = (b - a) * (1.0 + 2.0 * padding);
    const double h = 2.0 * std::acos(-1.0) / (xi_max * (kSamplesPerWavelength + 0.5));
    return {std::max<std::size_t>(2048, static_cast<std::size_t>(std::ceil(span / h)) + 1), padding};
}

/**
 * s > 1: g(x) = exp(-(x-a)^{-1/(s-1)}) exp(-(b-x)^{-1/(s-1)}) on (a, b), zero
 * elsewhere; g is in G^s and in no smaller class.
 * s = 1: the Gaussian exp(-(x-m)^2 / (2 sigma^2)), m = (a+b)/2,
 * sigma = (b-a)/48, restricted to [a, b]. It is analytic on the interior but
 * not flat at the ends (the jump there is about e^{-288}).
 */
template <class Real = double>
SampledFunction<Real> make_gevrey_bump(GevreyOrder s, double a, double b, BumpGrid grid = {}) {
    if (!(b > a)) throw std::invalid_argument("make_gevrey_bump: interval must satisfy a < b");
    if (grid.points < 8) throw degenerate_grid("make_gevrey_bump: too few grid points");
    using std::exp;
    using std::pow;
    const Real ra(a), rb(b);
    const Real pad = Real(grid.padding) * (rb - ra);
    auto axis = axis_over<Real>(ra - pad, rb + pad, grid.points);
    const double order = s.value();
    std::function<Real(const Real&)> profile;
    if (order == 1.0) {
        const Real mid = (ra + rb) / Real(2);
        const Real sigma = (rb - ra) / Real(48);
        profile = [mid, sigma](const Real& x) {
            const Real t = (x - mid) / sigma;
            return exp(-t * t / Real(2));
        };
    } else {
        const Real e = Real(1) / Real(order - 1.0);
        profile = [ra, rb, e](const Real& x) { return exp(-pow(x - ra, -e) - pow(rb - x, -e)); };
    }
    const bool flat = order > 1.0;
    return SampledFunction<Real>::sample(
        {axis},
        [&](const std::array<Real, 3>& x) -> complex_t<Real> {
            const Real& t = x[0];
            if (flat ? (t <= ra || t >= rb) : (t < ra || t > rb)) return complex_t<Real>(0);
            return complex_t<Real>(profile(t));
        },
        0.5 * (b - a));
}

/// 24 logarithmically spaced frequencies in [16, 1024].
inline std::vector<double> default_frequency_ladder(std::size_t count = 24, double lo = 16.0,
                                                    double hi = 1024.0) {
    if (count < 2 || !(hi > lo) || !(lo > 0)) throw std::invalid_argument("frequency ladder bounds");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1));
    return out;
}

struct FbiOrderEstimate {
    GevreyOrder order{1.0};
    FitResult fit;
    std::vector<double> brackets;   // <xi> along the ladder
    std::vector<double> magnitudes; // |F_gamma u(x0, xi)|
};

/// Fit options used by estimate_order_fbi: the algebraic prefactor is fitted.
inline FitOptions fbi_fit_options() {
    FitOptions o;
    o.algebraic_prefactor = true;
    return o;
}

/**
 * Fit |F_gamma u(x0, t e)| ~ C <t e>^{-beta} exp(-delta <t e>^r) along the
 * ladder t and report s = 1/r. `direction` defaults to the first coordinate axis.
 */
template <class Real>
FbiOrderEstimate estimate_order_fbi(const SampledFunction<Real>& u, std::span<const double> x0,
                                    GammaExponent gamma, std::span<const double> ladder,
                                    std::span<const double> direction = {},
                                    const FitOptions& options = fbi_fit_options()) {
    const std::size_t dim = static_cast<std::size_t>(u.dimension());
    if (x0.size() != dim) throw std::invalid_argument("estimate_order_fbi: base point dimension");
    std::vector<double> e(dim, 0.0);
    if (direction.empty()) {
        e[0] = 1.0;
    } else {
        if (direction.size() != dim) throw std::invalid_argument("estimate_order_fbi: direction dimension");
        double n = 0;
        for (double v : direction) n += v * v;
        if (!(n > 0)) throw std::invalid_argument("estimate_order_fbi: zero direction");
        for (std::size_t d = 0; d < dim; ++d) e[d] = direction[d] / std::sqrt(n);
    }
    std::vector<complex_t<Real>> z;
    for (double v : x0) z.emplace_back(Real(v), Real(0));

    FbiOrderEstimate out;
    std::vector<double> xi(dim);
    for (double t : ladder) {
        for (std::size_t d = 0; d < dim; ++d) xi[d] = t * e[d];
        const auto value = fbi<Real>(u, std::span<const complex_t<Real>>(z), std::span<const double>(xi), gamma);
        out.brackets.push_back(std::sqrt(1.0 + t * t));
        out.magnitudes.push_back(to_double(magnitude<Real>(value)));
    }
    out.fit = fit_stretched_exponential(out.brackets, out.magnitudes, options);
    out.order = GevreyOrder(1.0 / out.fit.r);
    return out;
}

template <class Real>
FbiOrderEstimate estimate_order_fbi(const SampledFunction<Real>& u, double x0, GammaExponent gamma,
                                    std::span<const double> ladder,
                                    const FitOptions& options = fbi_fit_options()) {
    return estimate_order_fbi<Real>(u, std::span<const double>(&x0, 1), gamma, ladder, {}, options);
}

struct DerivativeOptions {
    /// sup |u^(k)| is taken over |x - x0| <= radius.
    double radius = 1.0;
    std::size_t accuracy = 8;
    /// Largest accepted disagreement between spacings h and 2h, relative to the sup.
    double noise_tolerance = 0.05;
    /// M_k below this multiple of M_{k-1} marks the remaining derivatives as zero.
    double vanishing_ratio = 1e-8;
};

struct DerivativeOrderEstimate {
    GevreyOrder order{1.0};
    /// Coefficient of k log k before clamping at 1.
    double raw_exponent{1.0};
    /// Derivatives vanish identically beyond some order (polynomial data).
    bool degenerate{false};
    /// log sup |u^(k)|, k = 0 .. orders_used.
    std::vector<double> log_sup;
    int orders_used{0};
};

/**
 * Smallest C_k with sup |u^(k)| <= C_k^{k+1} k^{s k}, one per order k >= 1.
 * Bounded C_k along k is consistent with u in G^s near the sampled point.
 */
inline std::vector<double> minimal_gevrey_constants(std::span<const double> log_sup, double s) {
    std::vector<double> out;
    for (std::size_t k = 1; k < log_sup.size(); ++k) {
        const double kk = static_cast<double>(k);
        out.push_back(std::exp((log_sup[k] - s * kk * std::log(kk)) / (kk + 1.0)));
    }
    return out;
}

/**
 * Order from derivative growth: centred finite differences of accuracy 8 give
 * M_k = sup |u^(k)| near x0; the regression
 *     log M_k = a + b k + s k log k,  k = 1 .. K
 * yields s, clamped below at 1. Orders are used while the estimates from
 * spacings h and 2h agree within the noise tolerance.
 */
template <class Real>
DerivativeOrderEstimate estimate_order_derivatives(const SampledFunction<Real>& u, double x0,
                                                   int max_order, const DerivativeOptions& options = {}) {
    if (u.dimension() != 1) throw std::invalid_argument("estimate_order_derivatives: one-dimensional input only");
    if (max_order < 4 || max_order > 14)
        throw std::invalid_argument("estimate_order_derivatives: max_order must lie in [4, 14]");
    using std::abs;
    using std::log;
    const auto& ax = u.axis(0);
    const Real h = ax.spacing;
    const long n = static_cast<long>(ax.count);
    const double hd = to_double(h);
    const long centre = std::lround((x0 - to_double(ax.origin)) / hd);
    const long reach = static_cast<long>(options.radius / hd);

    DerivativeOrderEstimate out;
    Real sup0(0);
    for (long i = std::max(0L, centre - reach); i <= std::min(n - 1, centre + reach); ++i)
        sup0 = std::max(sup0, Real(abs(u[static_cast<std::size_t>(i)])));
    if (!(sup0 > Real(0))) throw order_too_high("estimate_order_derivatives: u vanishes near x0");
    out.log_sup.push_back(to_double(log(sup0)));

    Real previous = sup0;
    for (int k = 1; k <= max_order; ++k) {
        const std::size_t m = fd::centred_half_width(static_cast<std::size_t>(k), options.accuracy);
        const auto w1 = fd::centred_weights<Real>(static_cast<std::size_t>(k), m, h);
        const auto w2 = fd::centred_weights<Real>(static_cast<std::size_t>(k), m, Real(2) * h);
        const long span2 = 2 * static_cast<long>(m);
        const long lo = std::max(span2, centre - reach);
        const long hi = std::min(n - 1 - span2, centre + reach);
        if (lo > hi) throw degenerate_grid("estimate_order_derivatives: neighbourhood too close to grid edge");
        Real sup(0), err(0);
        for (long i = lo; i <= hi; ++i) {
            complex_t<Real> d1(0), d2(0);
            for (long j = -static_cast<long>(m); j <= static_cast<long>(m); ++j) {
                d1 += u[static_cast<std::size_t>(i + j)] * w1[static_cast<std::size_t>(j + static_cast<long>(m))];
                d2 += u[static_cast<std::size_t>(i + 2 * j)] * w2[static_cast<std::size_t>(j + static_cast<long>(m))];
            }
            sup = std::max(sup, Real(abs(d1)));
            err = std::max(err, Real(abs(d1 - d2)));
        }
        if (sup < Real(options.vanishing_ratio) * previous) {
            out.degenerate = true;
            break;
        }
        // smooth data: the spacings agree; noise: they do not
        if (err > Real(options.noise_tolerance) * sup) break;
        out.log_sup.push_back(to_double(log(sup)));
        previous = sup;
    }
    out.orders_used = static_cast<int>(out.log_sup.size()) - 1;

    if (out.degenerate) {
        out.raw_exponent = 1.0;
        out.order = GevreyOrder(1.0);
        return out;
    }
    if (out.orders_used < 4)
        throw order_too_high("estimate_order_derivatives: only " + std::to_string(out.orders_used) +
                             " derivative orders rise above the finite-difference noise");

    const int K = out.orders_used;
    Eigen::MatrixXd A(K, 3);
    Eigen::VectorXd y(K);
    for (int k = 1; k <= K; ++k) {
        A(k - 1, 0) = 1.0;
        A(k - 1, 1) = k;
        A(k - 1, 2) = k * std::log(static_cast<double>(k));
        y(k - 1) = out.log_sup[static_cast<std::size_t>(k)];
    }
    const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(y);
    out.raw_exponent = coef(2);
    out.order = GevreyOrder(std::max(1.0, coef(2)));
    return out;
}

}  // namespace gevlab
