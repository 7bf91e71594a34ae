/**
 * @brief Fitting y ~ C exp(-delta x^r) to positive decay data.
 *
 * The law is linear in double-log coordinates once C is known:
 *     log(log C - log y) = log delta + r log x.
 * C is profiled out: for each trial C the double-log regression is an
 * ordinary least-squares line, and C is chosen to make that line fit best
 * (largest coefficient of determination, which unlike the raw residual does
 * not degenerate as C grows). The tail half of the ladder, where C matters
 * least, seeds the search.
 *
 * With FitOptions::algebraic_prefactor the model is C x^{-beta} exp(-delta x^r).
 * For fixed r it is linear in (log C, beta, delta), so those are solved by
 * least squares in log y and r alone is searched.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "gevlab/errors.hpp"

namespace gevlab {

struct FitResult {
    double C{1};
    double delta{1};
    double r{1};
    double residual_rms{0};
    int n_points{0};
    /// Exponent before the r <= 1 cap; equal to r unless r_capped.
    double r_unconstrained{1};
    bool r_capped{false};
    /// Algebraic prefactor exponent; zero unless FitOptions::algebraic_prefactor.
    double beta{0};
};

struct FitOptions {
    std::size_t min_points = 6;
    /// [16, 1024] spans log10(64) ~ 1.806 decades.
    double min_decades = 1.8;
    /// Allowed relative rise between consecutive samples.
    double monotone_tolerance = 0.05;
    /// Fit C x^{-beta} exp(-delta x^r) instead of C exp(-delta x^r).
    bool algebraic_prefactor = false;
};

namespace detail {

struct LineFit {
    double intercept{0};
    double slope{0};
    double ssr{0};
    double sst{0};
    bool ok{false};
};

/// t = log(c - log y) against L = log x; slope optionally pinned.
inline LineFit double_log_line(double c, std::span<const double> logx, std::span<const double> logy,
                               const double* pinned_slope = nullptr) {
    LineFit f;
    const std::size_t n = logx.size();
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double gap = c - logy[i];
        if (!(gap > 0)) return f;
        t[i] = std::log(gap);
    }
    double mx = 0, mt = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += logx[i];
        mt += t[i];
    }
    mx /= n;
    mt /= n;
    if (pinned_slope) {
        f.slope = *pinned_slope;
        f.intercept = mt - f.slope * mx;
    } else {
        double sxx = 0, sxt = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sxx += (logx[i] - mx) * (logx[i] - mx);
            sxt += (logx[i] - mx) * (t[i] - mt);
        }
        if (sxx <= 0) return f;
        f.slope = sxt / sxx;
        f.intercept = mt - f.slope * mx;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double e = t[i] - f.intercept - f.slope * logx[i];
        f.ssr += e * e;
        f.sst += (t[i] - mt) * (t[i] - mt);
    }
    f.ok = true;
    return f;
}

inline double misfit(const LineFit& f) {
    if (!f.ok) return std::numeric_limits<double>::infinity();
    if (f.sst <= 0) return f.ssr > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    return f.ssr / f.sst;
}

/// Profile log C over (floor, floor + e^18]; returns the best log C.
inline double profile_log_c(double floor_c, double seed_c, std::span<const double> logx,
                            std::span<const double> logy, const double* pinned_slope) {
    // parametrise c = floor + exp(v) so the constraint c > max log y is implicit
    auto objective = [&](double v) {
        return misfit(double_log_line(floor_c + std::exp(v), logx, logy, pinned_slope));
    };
    const double v_lo = -30.0, v_hi = 18.0;
    const int samples = 480;
    double best_v = v_lo, best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) {
        const double v = v_lo + (v_hi - v_lo) * i / samples;
        const double m = objective(v);
        if (m < best) {
            best = m;
            best_v = v;
        }
    }
    if (seed_c > floor_c) {
        const double v = std::log(seed_c - floor_c);
        if (objective(v) < best) best_v = v;
    }
    const double step = (v_hi - v_lo) / samples;
    const auto res = boost::math::tools::brent_find_minima(objective, best_v - step, best_v + step,
                                                           std::numeric_limits<double>::digits);
    return floor_c + std::exp(res.first);
}

struct PrefactorFit {
    double log_c{0};
    double beta{0};
    double delta{0};
    double ssr{std::numeric_limits<double>::infinity()};
};

/// log y = log C - beta log x - delta x^r for fixed r, by QR least squares.
inline PrefactorFit prefactor_at(double r, std::span<const double> logx, std::span<const double> logy) {
    const auto n = static_cast<Eigen::Index>(logx.size());
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = -logx[static_cast<std::size_t>(i)];
        A(i, 2) = -std::exp(r * logx[static_cast<std::size_t>(i)]);
        b(i) = logy[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
    PrefactorFit f{c(0), c(1), c(2), (A * c - b).squaredNorm()};
    if (!std::isfinite(f.ssr)) f.ssr = std::numeric_limits<double>::infinity();
    return f;
}

/// Exponent minimising the residual over [r_lo, r_hi]: log-spaced scan, then Brent.
inline double profile_prefactor_r(std::span<const double> logx, std::span<const double> logy, double r_lo,
                                  double r_hi) {
    auto objective = [&](double lr) { return prefactor_at(std::exp(lr), logx, logy).ssr; };
    const double a = std::log(r_lo), b = std::log(r_hi);
    const int samples = 400;
    double best_v = a, best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) {
        const double v = a + (b - a) * i / samples;
        const double m = objective(v);
        if (m < best) {
            best = m;
            best_v = v;
        }
    }
    const double step = (b - a) / samples;
    const auto res = boost::math::tools::brent_find_minima(objective, std::max(a, best_v - step),
                                                           std::min(b, best_v + step),
                                                           std::numeric_limits<double>::digits);
    return std::exp(res.first);
}

}  // namespace detail

/**
 * Least-squares stretched-exponential fit. Requirements: xs >= 1 strictly
 * increasing, ys > 0, at least options.min_points samples spanning
 * options.min_decades decades. ys that rise by more than the monotone
 * tolerance are rejected with fit_rejected. The exponent is capped at 1
 * (the unconstrained value is kept as a diagnostic). residual_rms is measured
 * in double-log coordinates, or in log y for the prefactor model.
 */
inline FitResult fit_stretched_exponential(std::span<const double> xs, std::span<const double> ys,
                                           const FitOptions& options = {}) {
    const std::size_t n = xs.size();
    if (ys.size() != n) throw std::invalid_argument("fit_stretched_exponential: size mismatch");
    if (n < std::max<std::size_t>(options.min_points, 4))
        throw fit_rejected("fit_stretched_exponential: need at least " +
                           std::to_string(std::max<std::size_t>(options.min_points, 4)) + " points");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(xs[i] >= 1.0) || !std::isfinite(xs[i]))
            throw std::invalid_argument("fit_stretched_exponential: abscissae must be >= 1");
        if (i > 0 && !(xs[i] > xs[i - 1]))
            throw std::invalid_argument("fit_stretched_exponential: abscissae must increase");
        if (!(ys[i] > 0.0) || !std::isfinite(ys[i]))
            throw std::invalid_argument("fit_stretched_exponential: ordinates must be positive");
    }
    if (std::log10(xs[n - 1] / xs[0]) < options.min_decades - 1e-12)
        throw fit_rejected("fit_stretched_exponential: ladder spans too few decades");
    for (std::size_t i = 1; i < n; ++i) {
        if (ys[i] > ys[i - 1] * (1.0 + options.monotone_tolerance))
            throw fit_rejected("fit_stretched_exponential: data rise at x = " + std::to_string(xs[i]));
    }

    std::vector<double> logx(n), logy(n);
    for (std::size_t i = 0; i < n; ++i) {
        logx[i] = std::log(xs[i]);
        logy[i] = std::log(ys[i]);
    }
    if (options.algebraic_prefactor) {
        if (n < 5) throw fit_rejected("fit_stretched_exponential: prefactor fit needs at least 5 points");
        FitResult out;
        double r = detail::profile_prefactor_r(logx, logy, 0.02, 2.0);
        out.r_unconstrained = r;
        if (r > 1.0) {
            r = 1.0;
            out.r_capped = true;
        }
        const auto f = detail::prefactor_at(r, logx, logy);
        if (!(f.delta > 0.0)) throw fit_rejected("fit_stretched_exponential: non-positive decay rate");
        out.C = std::exp(f.log_c);
        out.delta = f.delta;
        out.r = r;
        out.beta = f.beta;
        out.residual_rms = std::sqrt(f.ssr / n);
        out.n_points = static_cast<int>(n);
        return out;
    }

    const double floor_c = *std::max_element(logy.begin(), logy.end());

    // Seed: tail half with C = 1 (or just above the data), then back-solve C on the head.
    double seed_c = floor_c + 1.0;
    {
        const std::size_t h = n / 2;
        const double tail_c = std::max(0.0, floor_c + 1e-6);
        const auto tail = detail::double_log_line(
            tail_c, std::span<const double>(logx).subspan(h), std::span<const double>(logy).subspan(h));
        if (tail.ok) {
            const double d = std::exp(tail.intercept);
            double acc = 0;
            for (std::size_t i = 0; i < h; ++i) acc += logy[i] + d * std::pow(xs[i], tail.slope);
            if (h > 0) seed_c = std::max(floor_c + 1e-9, acc / h);
        }
    }

    double log_c = detail::profile_log_c(floor_c, seed_c, logx, logy, nullptr);
    auto line = detail::double_log_line(log_c, logx, logy);
    if (!line.ok) throw fit_rejected("fit_stretched_exponential: degenerate data");

    FitResult out;
    out.r_unconstrained = line.slope;
    if (line.slope > 1.0) {
        const double one = 1.0;
        log_c = detail::profile_log_c(floor_c, log_c, logx, logy, &one);
        line = detail::double_log_line(log_c, logx, logy, &one);
        out.r_capped = true;
    }
    if (!(line.slope > 0.0))
        throw fit_rejected("fit_stretched_exponential: non-positive decay exponent");
    out.C = std::exp(log_c);
    out.delta = std::exp(line.intercept);
    out.r = line.slope;
    out.residual_rms = std::sqrt(line.ssr / n);
    out.n_points = static_cast<int>(n);
    return out;
}

}  // namespace gevlab
