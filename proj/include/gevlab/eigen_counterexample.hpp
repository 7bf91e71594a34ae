/**
 * @brief Real eigenvalues of L_z = d_x^2 - x^{2(q-1)} + z x^{2(p-1)}, the exact
 * kernel family F_lambda of L built from them, and the growth comparison that
 * recovers the optimal Gevrey exponent q/p.
 *
 * L_z f = 0 is the symmetric-definite pencil H f = z M f with
 * H = -d_x^2 + x^{2(q-1)} and M = x^{2(p-1)}. It is discretised on the
 * staggered grid x_j = (j + 1/2) h - X, where M is positive at every node,
 * and eigenvalues are located by Sturm (inertia) bisection.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gevlab/errors.hpp"
#include "gevlab/finite_difference.hpp"
#include "gevlab/operator_core.hpp"
#include "gevlab/sampled_function.hpp"

namespace gevlab {

struct EigenGrid {
    double X{0};
    double h{1e-3};
};

/// X with X^{2(q-1)} = 1e6 (capped at 1000), h = 1e-3.
inline EigenGrid default_eigen_grid(const OperatorParams& params) {
    const double X = params.q() == 1 ? 1000.0 : std::min(1000.0, std::pow(1e6, 1.0 / (2.0 * (params.q() - 1))));
    return {X, 1e-3};
}

struct Eigenpair {
    double z{0};
    std::complex<double> w;
    SampledFunction<double> f;
    double residual{0};
    double grid_stability{0};
    double z_coarse{0};  // discrete eigenvalue at spacing h
    double z_fine{0};    // discrete eigenvalue at spacing h/2
};

struct EigenOptions {
    double residual_tolerance = 1e-6;
    double stability_tolerance = 1e-5;
    /// log of the eigenfunction decay at which the domain is cut (e^{-460} ~ 1e-200).
    double cut_action = 460.0;
};

namespace detail {

/// Staggered symmetric grid x_j = (j + 1/2) h - X, j = 0 .. n-1.
struct StaggeredGrid {
    double X;
    double h;
    std::size_t n;

    StaggeredGrid(double X_, double h_) : X(X_), h(h_) {
        n = 2 * static_cast<std::size_t>(std::llround(X / h));
        X = 0.5 * static_cast<double>(n) * h;
    }
    double x(std::size_t j) const { return (static_cast<double>(j) + 0.5) * h - X; }
    /// Symmetric index range [lo, n - lo) covering |x| <= cut.
    std::size_t first_inside(double cut) const {
        if (cut >= X) return 0;
        const double j = std::floor((X - cut) / h - 0.5);
        return std::min(n / 2 - 1, static_cast<std::size_t>(std::max(0.0, j)));
    }
};

/// Half-width beyond which an eigenfunction with eigenvalue z has decayed by exp(-action).
inline double decay_cut(const OperatorParams& params, double z, double limit, double action) {
    const int p = params.p(), q = params.q();
    auto excess = [&](double x) {
        return even_power(x, q - 1) - std::max(z, 0.0) * even_power(x, p - 1);
    };
    double x = std::max(z, 0.0) > 0.0 ? std::pow(std::max(z, 1e-300), 1.0 / (2.0 * (q - p))) : 0.0;
    double acc = 0;
    const double step = 1e-2;
    while (acc < action && x < limit) {
        acc += std::sqrt(std::max(0.0, excess(x + 0.5 * step))) * step;
        x += step;
    }
    return std::min(limit, x + 1.0);
}

/// Number of eigenvalues of the pencil below z (inertia of H - z M on the cut grid).
inline std::size_t sturm_count(const StaggeredGrid& g, const OperatorParams& params, double z, double action) {
    const std::size_t lo = g.first_inside(decay_cut(params, z, g.X, action));
    const std::size_t hi = g.n - lo;
    const double ih2 = 1.0 / (g.h * g.h);
    const double b2 = ih2 * ih2;
    const int p = params.p(), q = params.q();
    std::size_t negatives = 0;
    double d = 1.0;
    bool first = true;
    for (std::size_t j = lo; j < hi; ++j) {
        const double x = g.x(j);
        const double a = 2.0 * ih2 + even_power(x, q - 1) - z * even_power(x, p - 1);
        d = first ? a : a - b2 / d;
        first = false;
        if (d == 0.0) d = -std::numeric_limits<double>::epsilon() * ih2;
        if (d < 0.0) ++negatives;
    }
    return negatives;
}

/// k-th (0-based) pencil eigenvalue on grid g by bisection.
inline double bisect_eigenvalue(const StaggeredGrid& g, const OperatorParams& params, std::size_t k, double action) {
    double lo = 0.0, hi = 1.0;
    while (sturm_count(g, params, hi, action) <= k) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw internal_consistency_error("bisect_eigenvalue: no bracket found");
    }
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(g, params, mid, action) <= k)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/**
 * Solve a tridiagonal system with constant off-diagonal `off` by Gaussian
 * elimination with partial pivoting.
 */
inline std::vector<double> solve_tridiagonal_pivoted(std::vector<double> diag, double off, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    std::vector<double> sub(n, off), sup(n, off), sup2(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(diag[i]) >= std::abs(sub[i])) {
            const double piv = diag[i] == 0.0 ? std::numeric_limits<double>::min() : diag[i];
            const double m = sub[i] / piv;
            diag[i + 1] -= m * sup[i];
            rhs[i + 1] -= m * rhs[i];
            sup2[i] = 0.0;
        } else {
            // swap rows i and i+1
            const double m = diag[i] / sub[i];
            diag[i] = sub[i];
            const double t = diag[i + 1];
            diag[i + 1] = sup[i] - m * t;
            sup[i] = t;
            sup2[i] = i + 1 < n - 1 ? sup[i + 1] : 0.0;
            if (i + 1 < n - 1) sup[i + 1] = -m * sup2[i];
            std::swap(rhs[i], rhs[i + 1]);
            rhs[i + 1] -= m * rhs[i];
        }
    }
    if (diag[n - 1] == 0.0) diag[n - 1] = std::numeric_limits<double>::min();
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    if (n > 1) x[n - 2] = (rhs[n - 2] - sup[n - 2] * x[n - 1]) / diag[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1] - sup2[i] * x[i + 2]) / diag[i];
    return x;
}

/// Eigenvector of the pencil at (a close approximation of) its eigenvalue sigma.
inline SampledFunction<double> pencil_eigenvector(const StaggeredGrid& g, const OperatorParams& params, double sigma,
                                                  double action) {
    const std::size_t lo = g.first_inside(decay_cut(params, sigma, g.X, action));
    const std::size_t n = g.n - 2 * lo;
    if (n < 8) throw degenerate_grid("pencil_eigenvector: cut grid too small");
    const double ih2 = 1.0 / (g.h * g.h);
    std::vector<double> diag(n), mass(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.x(lo + i);
        mass[i] = even_power(x, params.p() - 1);
        diag[i] = 2.0 * ih2 + even_power(x, params.q() - 1) - sigma * mass[i];
    }
    std::vector<double> v(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) v[i] += 1e-3 * static_cast<double>(i % 7);  // break parity of the start
    for (int it = 0; it < 4; ++it) {
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = mass[i] * v[i];
        v = solve_tridiagonal_pivoted(diag, -ih2, std::move(rhs));
        double s = 0;
        for (double e : v) s = std::max(s, std::abs(e));
        for (double& e : v) e /= s;
    }
    // zero the two outermost layers, normalise to unit L^2 norm, fix the sign
    for (std::size_t i : {std::size_t{0}, std::size_t{1}, n - 2, n - 1}) v[i] = 0.0;
    double norm = 0;
    for (double e : v) norm += e * e;
    norm = std::sqrt(norm * g.h);
    std::size_t peak = n / 2;
    for (std::size_t i = n / 2; i < n; ++i)
        if (std::abs(v[i]) > std::abs(v[peak])) peak = i;
    const double sign = v[peak] < 0 ? -1.0 : 1.0;
    std::vector<std::complex<double>> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = sign * v[i] / norm;
    const Axis<double> axis{g.x(lo), g.h, n};
    return SampledFunction<double>({axis}, std::move(values), std::abs(g.x(lo)));
}

}  // namespace detail

/**
 * ||f'' - x^{2(q-1)} f + z x^{2(p-1)} f||_2 / ||f||_2 with centred differences
 * of the given accuracy order (samples beyond the grid taken as zero). Order 2
 * matches the pencil discretisation.
 */
inline double residual_norm(const SampledFunction<double>& f, double z, const OperatorParams& params,
                            std::size_t accuracy = 2) {
    if (f.dimension() != 1) throw std::invalid_argument("residual_norm: one-dimensional eigenfunction required");
    const auto d2 = fd::differentiate(f.values(), f.axis(0).spacing, 2, accuracy);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = f.coordinate(0, i);
        const auto r = d2[i] - even_power(x, params.q() - 1) * f[i] + z * even_power(x, params.p() - 1) * f[i];
        num += std::norm(r);
        den += std::norm(f[i]);
    }
    if (!(den > 0)) throw std::invalid_argument("residual_norm: eigenfunction vanishes identically");
    return std::sqrt(num / den);
}

inline double residual_norm(const Eigenpair& pair, const OperatorParams& params) {
    return residual_norm(pair.f, pair.z, params);
}

/**
 * Up to `count` real eigenpairs ordered by z. Each candidate is solved at h
 * and h/2; z is the Richardson value (4 z_{h/2} - z_h) / 3, f the
 * eigenvector at h/2, and candidates failing the residual or grid-stability
 * tolerance are dropped. For p = q no nonzero Schwartz solution exists and
 * the result is empty.
 */
inline std::vector<Eigenpair> solve_nonlinear_eigen(const OperatorParams& params, EigenGrid grid, std::size_t count,
                                                    const EigenOptions& options = {}) {
    std::vector<Eigenpair> out;
    if (params.p() == params.q() || count == 0) return out;
    if (!(grid.h > 0) || !(grid.X > 0)) throw std::invalid_argument("solve_nonlinear_eigen: grid needs X, h > 0");
    if (even_power(grid.X, params.q() - 1) < 1e6 - 1e-6)
        throw std::invalid_argument("solve_nonlinear_eigen: X too small, need X^{2(q-1)} >= 1e6");
    const detail::StaggeredGrid coarse(grid.X, grid.h);
    const detail::StaggeredGrid fine(grid.X, 0.5 * grid.h);
    for (std::size_t k = 0; k < count; ++k) {
        const double zc = detail::bisect_eigenvalue(coarse, params, k, options.cut_action);
        const double zf = detail::bisect_eigenvalue(fine, params, k, options.cut_action);
        Eigenpair pair;
        pair.z_coarse = zc;
        pair.z_fine = zf;
        pair.z = (4.0 * zf - zc) / 3.0;
        pair.w = std::sqrt(std::complex<double>(pair.z, 0.0));
        pair.grid_stability = std::abs(zc - zf) / std::abs(pair.z);
        pair.f = detail::pencil_eigenvector(fine, params, zf, options.cut_action);
        pair.residual = residual_norm(pair.f, pair.z, params);
        if (pair.residual <= options.residual_tolerance && pair.grid_stability <= options.stability_tolerance)
            out.push_back(std::move(pair));
    }
    return out;
}

/// f and its derivatives at x by 6-point Lagrange (Fornberg) weights on the stored samples.
inline double eigenfunction_derivative(const SampledFunction<double>& f, double x, std::size_t order = 0) {
    const auto& ax = f.axis(0);
    const double s = (x - ax.origin) / ax.spacing;
    const long base = static_cast<long>(std::floor(s)) - 2;
    const long n = static_cast<long>(ax.count);
    if (base < 0 || base + 5 >= n)
        throw resample_error("eigenfunction evaluated at x = " + std::to_string(x) +
                             " outside the stored range [" + std::to_string(ax.origin) + ", " +
                             std::to_string(ax.last()) + "]");
    std::array<double, 6> nodes;
    for (long j = 0; j < 6; ++j) nodes[static_cast<std::size_t>(j)] = ax.coordinate(static_cast<std::size_t>(base + j));
    const auto w = fd::fornberg_weights<double>(x, std::span<const double>(nodes), order);
    double v = 0;
    for (long j = 0; j < 6; ++j) v += w[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(base + j)].real();
    return v;
}

struct Box3 {
    std::array<double, 3> lo{-1.0, -1.0, -1.0};
    std::array<double, 3> hi{1.0, 1.0, 1.0};
    std::array<std::size_t, 3> count{33, 33, 33};
};

/**
 * F_lambda(x, t1, t2) = e^{i lambda t2} e^{lambda^{p/q} w t1} f(lambda^{1/q} x)
 * on the box grid (axes x, t1, t2). Throws resample_error when lambda^{1/q} x
 * leaves the stored eigenfunction.
 */
inline SampledFunction<double> build_counterexample(const Eigenpair& pair, double lambda, const OperatorParams& params,
                                                    const Box3& box = {}) {
    if (!(lambda >= 1.0)) throw std::invalid_argument("build_counterexample: lambda must be >= 1");
    std::vector<Axis<double>> axes;
    for (int d = 0; d < 3; ++d) {
        if (box.count[static_cast<std::size_t>(d)] < 2) throw degenerate_grid("build_counterexample: box axis too small");
        axes.push_back(axis_over(box.lo[static_cast<std::size_t>(d)], box.hi[static_cast<std::size_t>(d)],
                                 box.count[static_cast<std::size_t>(d)]));
    }
    const double sx = std::pow(lambda, 1.0 / params.q());
    const std::complex<double> rate = std::pow(lambda, params.gamma()) * pair.w;
    std::vector<double> profile(axes[0].count);
    for (std::size_t i = 0; i < axes[0].count; ++i) profile[i] = eigenfunction_derivative(pair.f, sx * axes[0].coordinate(i));
    std::vector<std::complex<double>> e1(axes[1].count), e2(axes[2].count);
    for (std::size_t j = 0; j < axes[1].count; ++j) e1[j] = std::exp(rate * axes[1].coordinate(j));
    for (std::size_t k = 0; k < axes[2].count; ++k) e2[k] = std::exp(std::complex<double>(0.0, lambda * axes[2].coordinate(k)));
    std::vector<std::complex<double>> values;
    values.reserve(axes[0].count * axes[1].count * axes[2].count);
    for (std::size_t i = 0; i < axes[0].count; ++i)
        for (std::size_t j = 0; j < axes[1].count; ++j)
            for (std::size_t k = 0; k < axes[2].count; ++k) values.push_back(profile[i] * e1[j] * e2[k]);
    double radius = 0;
    for (int d = 0; d < 3; ++d)
        radius = std::max({radius, std::abs(box.lo[static_cast<std::size_t>(d)]), std::abs(box.hi[static_cast<std::size_t>(d)])});
    return SampledFunction<double>(std::move(axes), std::move(values), radius);
}

struct KernelCheck {
    /// lambda^{2/q} residual_norm: the separable reduction.
    double relative_residual{0};
    /// |L_h F| / (lambda^{2/q} |F|) at the grid centre, cell scale c and c/2.
    double fd_coarse{0};
    double fd_fine{0};
    /// log2(fd_coarse / fd_fine); 2 for pure second-order discretisation error.
    double observed_order{0};
};

struct KernelCheckOptions {
    double cell = 0.04;
    std::size_t nodes = 7;
    /// Grid centre in the scaled variable lambda^{1/q} x; away from 0, where f can be flat to high order.
    double scaled_centre = 0.75;
    double order_lo = 1.5;
    double order_hi = 2.5;
};

/**
 * L F_lambda two ways: exactly via L F_lambda = lambda^{2/q} (L_z f)(lambda^{1/q} x) e^{..},
 * and by 3D second-order differences on a small grid around
 * (scaled_centre lambda^{-1/q}, 0, 0) with
 * spacings (c lambda^{-1/q}, c lambda^{-p/q}, c / lambda), at c and c/2. The
 * difference between the two must shrink at second order; otherwise the
 * call throws internal_consistency_error.
 */
inline KernelCheck verify_kernel(const Eigenpair& pair, double lambda, const OperatorParams& params,
                                 const KernelCheckOptions& options = {}) {
    KernelCheck out;
    out.relative_residual = std::pow(lambda, 2.0 / params.q()) * residual_norm(pair, params);
    const double scale = std::pow(lambda, 2.0 / params.q());
    auto fd_residual = [&](double c) {
        const double half = 0.5 * static_cast<double>(options.nodes - 1);
        const std::array<double, 3> step{c * std::pow(lambda, -1.0 / params.q()), c * std::pow(lambda, -params.gamma()),
                                         c / lambda};
        const std::array<double, 3> centre{options.scaled_centre * std::pow(lambda, -1.0 / params.q()), 0.0, 0.0};
        Box3 box;
        for (std::size_t d = 0; d < 3; ++d) {
            box.lo[d] = centre[d] - half * step[d];
            box.hi[d] = centre[d] + half * step[d];
            box.count[d] = options.nodes;
        }
        const auto F = build_counterexample(pair, lambda, params, box);
        const auto LF = apply_L(F, params);
        const std::size_t mid = options.nodes / 2;
        const std::size_t at = F.flat_index(mid, mid, mid);
        return std::abs(LF[at]) / (scale * std::abs(F[at]));
    };
    out.fd_coarse = fd_residual(options.cell);
    out.fd_fine = fd_residual(0.5 * options.cell);
    out.observed_order = std::log2(out.fd_coarse / out.fd_fine);
    if (!(out.observed_order >= options.order_lo && out.observed_order <= options.order_hi))
        throw internal_consistency_error("verify_kernel: finite-difference residual converges at order " +
                                         std::to_string(out.observed_order) + ", not 2");
    return out;
}

/// k in {0, 1} maximising |f^(k)(0)|; throws when both vanish.
inline int select_k(const Eigenpair& pair) {
    const double f0 = std::abs(eigenfunction_derivative(pair.f, 0.0, 0));
    const double f1 = std::abs(eigenfunction_derivative(pair.f, 0.0, 1));
    if (std::max(f0, f1) < 1e-12)
        throw std::domain_error("select_k: f(0) and f'(0) both vanish; analyse the parity of f to choose k");
    return f1 > f0 ? 1 : 0;
}

/// log sup_U |F_lambda| ~ log_prefactor + rate * lambda^{p/q}.
struct SupFit {
    double log_prefactor{0};
    double rate{0};
    std::array<double, 3> lambdas{2.0, 4.0, 8.0};
    std::array<double, 3> log_sups{};
};

inline SupFit fit_sup(const Eigenpair& pair, const OperatorParams& params, const Box3& box = {}) {
    SupFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto F = build_counterexample(pair, fit.lambdas[i], params, box);
        double sup = 0;
        for (const auto& v : F.values()) sup = std::max(sup, std::abs(v));
        fit.log_sups[i] = std::log(sup);
        const double x = std::pow(fit.lambdas[i], params.gamma());
        sx += x;
        sy += fit.log_sups[i];
        sxx += x * x;
        sxy += x * fit.log_sups[i];
    }
    fit.rate = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
    fit.log_prefactor = (sy - fit.rate * sx) / 3.0;
    return fit;
}

struct GrowthRow {
    long long N{1};
    int k{0};
    double lambda{1};
    double log_lhs{0};
    double log_sup{0};
    double s_star{0};
};

/// Default N ladder: 10^2 .. 10^6, four points per decade.
inline std::vector<long long> default_n_ladder() {
    std::vector<long long> out;
    for (int i = 0; i <= 16; ++i) out.push_back(std::llround(std::pow(10.0, 2.0 + 0.25 * i)));
    return out;
}

/**
 * Rows for lambda = N^{q/p}:
 *   log_lhs = N log lambda + (k/q) log lambda + log |f^(k)(0)|
 *   log_sup = log_prefactor + rate N
 *   s_star  = (log_lhs - log_sup - N log B0) / (N max(log N, 1))
 * with log B0 = max(0, (log_lhs - log_sup - N log N) / (N + 1)) over the two
 * smallest N.
 */
inline std::vector<GrowthRow> growth_table(const Eigenpair& pair, const OperatorParams& params, int k,
                                           std::span<const long long> n_ladder, const SupFit& sup) {
    if (k != 0 && k != 1) throw std::invalid_argument("growth_table: k must be 0 or 1");
    const double dk = std::abs(eigenfunction_derivative(pair.f, 0.0, static_cast<std::size_t>(k)));
    if (dk < 1e-12)
        throw std::domain_error("growth_table: f^(k)(0) vanishes for k = " + std::to_string(k) +
                                "; analyse the parity of f to choose k");
    const double qp = params.critical_order();
    std::vector<GrowthRow> rows;
    for (long long N : n_ladder) {
        if (N < 1) throw std::invalid_argument("growth_table: N must be >= 1");
        GrowthRow row;
        row.N = N;
        row.k = k;
        const double n = static_cast<double>(N);
        const double log_lambda = qp * std::log(n);
        row.lambda = std::exp(log_lambda);
        row.log_lhs = n * log_lambda + (static_cast<double>(k) / params.q()) * log_lambda + std::log(dk);
        row.log_sup = sup.log_prefactor + sup.rate * n;
        rows.push_back(row);
    }
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows[a].N < rows[b].N; });
    double log_b0 = 0;
    for (std::size_t i = 0; i < std::min<std::size_t>(2, order.size()); ++i) {
        const auto& r = rows[order[i]];
        const double n = static_cast<double>(r.N);
        log_b0 = std::max(log_b0, (r.log_lhs - r.log_sup - n * std::log(n)) / (n + 1.0));
    }
    for (auto& r : rows) {
        const double n = static_cast<double>(r.N);
        r.s_star = (r.log_lhs - r.log_sup - n * log_b0) / (n * std::max(std::log(n), 1.0));
    }
    return rows;
}

inline std::vector<GrowthRow> growth_table(const Eigenpair& pair, const OperatorParams& params, int k,
                                           std::span<const long long> n_ladder) {
    return growth_table(pair, params, k, n_ladder, fit_sup(pair, params));
}

struct OptimalExponent {
    double s0{0};
    double slope{0};
    double residual_rms{0};
    bool inconclusive{false};
    bool within_tolerance{false};
    double tolerance{0.02};
    std::vector<GrowthRow> rows;
};

struct ExponentOptions {
    /// Regression RMS above this marks the estimate inconclusive.
    double max_rms = 1e-2;
    /// Relative tolerance on q/p, but never tighter than 0.02.
    double relative_tolerance = 0.01;
    double absolute_floor = 0.02;
};

/**
 * s_star regressed on 1/log N over the ladder; the intercept is s0. Compared
 * against q/p within max(0.02, 1% of q/p).
 */
inline OptimalExponent estimate_optimal_exponent(const Eigenpair& pair, const OperatorParams& params,
                                                 std::span<const long long> n_ladder,
                                                 const ExponentOptions& options = {}) {
    OptimalExponent out;
    out.rows = growth_table(pair, params, select_k(pair), n_ladder);
    const std::size_t n = out.rows.size();
    if (n < 3) throw std::invalid_argument("estimate_optimal_exponent: need at least three ladder points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : out.rows) {
        const double x = 1.0 / std::log(static_cast<double>(r.N));
        sx += x;
        sy += r.s_star;
        sxx += x * x;
        sxy += x * r.s_star;
    }
    const double dn = static_cast<double>(n);
    out.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    out.s0 = (sy - out.slope * sx) / dn;
    double ss = 0;
    for (const auto& r : out.rows) {
        const double e = r.s_star - out.s0 - out.slope / std::log(static_cast<double>(r.N));
        ss += e * e;
    }
    out.residual_rms = std::sqrt(ss / dn);
    out.inconclusive = !(out.residual_rms <= options.max_rms) || !std::isfinite(out.s0);
    out.tolerance = std::max(options.absolute_floor, options.relative_tolerance * params.critical_order());
    out.within_tolerance = !out.inconclusive && std::abs(out.s0 - params.critical_order()) <= out.tolerance;
    return out;
}

inline OptimalExponent estimate_optimal_exponent(const Eigenpair& pair, const OperatorParams& params) {
    const auto ladder = default_n_ladder();
    return estimate_optimal_exponent(pair, params, ladder);
}

}  // namespace gevlab
