/**
 * @brief Parameterised FBI transform of sampled compactly supported functions.
 *
 * For u on R^n, gamma in [0,1], base point z in C^n and real frequency xi,
 *
 *     F_gamma u(z, xi) = int u(x') exp(i (z-x').xi - <xi>^gamma (z-x')^2)
 *                               alpha_gamma(z-x', xi) dx'
 *
 * where (z-x')^2 is the bilinear square (no conjugation), <xi> is the
 * Japanese bracket and alpha_gamma is the Jacobian of the contour
 * deformation xi -> xi + i x <xi>^gamma. Frequencies are always real; the
 * transform is evaluated for complex base points by direct evaluation of
 * the entire integrand.
 *
 * Quadrature is the trapezoid rule on the sampling grid. For smooth,
 * compactly supported integrands it converges faster than any power of the
 * spacing, provided the oscillation e^{-i x' xi} is resolved; fbi() refuses
 * frequencies with fewer than 8 samples per wavelength.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "gevlab/errors.hpp"
#include "gevlab/precision.hpp"
#include "gevlab/quadrature.hpp"
#include "gevlab/sampled_function.hpp"

namespace gevlab {

class GammaExponent {
public:
    constexpr GammaExponent() = default;
    explicit GammaExponent(double gamma) : value_(gamma) {
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw std::invalid_argument("gamma must lie in [0, 1]");
    }
    constexpr double value() const { return value_; }

private:
    double value_{1.0};
};

/// Minimum samples per oscillation wavelength accepted by fbi().
inline constexpr double kSamplesPerWavelength = 8.0;

/**
 * alpha_gamma(x, xi) = det(I + i gamma <xi>^{gamma-2} x xi^T)
 *                    = 1 + i gamma <xi>^{gamma-2} (x . xi).
 * The rank-one determinant identity gives the closed form.
 */
template <class Real = double>
complex_t<Real> jacobian_alpha(std::span<const complex_t<Real>> x, std::span<const double> xi,
                               GammaExponent gamma) {
    if (x.size() != xi.size()) throw std::invalid_argument("jacobian_alpha: dimension mismatch");
    using std::pow;
    const Real g(gamma.value());
    const Real bracket = japanese_bracket<Real>(xi);
    const Real beta = g * pow(bracket, g - Real(2));
    complex_t<Real> dot(0);
    for (std::size_t j = 0; j < x.size(); ++j) dot += x[j] * Real(xi[j]);
    return complex_t<Real>(Real(1)) + complex_t<Real>(Real(0), Real(1)) * beta * dot;
}

inline std::complex<double> jacobian_alpha(std::complex<double> x, double xi, GammaExponent gamma) {
    return jacobian_alpha<double>(std::span<const std::complex<double>>(&x, 1),
                                  std::span<const double>(&xi, 1), gamma);
}

namespace detail {

/// Window factor exp(i d xi - c d^2), d = z - x', along one axis, restricted
/// to the nodes where it is not negligible.
template <class Real>
struct AxisWindow {
    std::size_t lo{0};
    std::size_t hi{0};  // exclusive
    std::vector<complex_t<Real>> factor;
    std::vector<complex_t<Real>> offset;  // d = z - x'
};

template <class Real>
AxisWindow<Real> axis_window(const Axis<Real>& axis, const complex_t<Real>& z, const Real& xi,
                             const Real& c) {
    using std::ceil;
    using std::floor;
    using std::log;
    using std::sqrt;
    AxisWindow<Real> w;
    // |factor| = exp(-c (Re d)^2) relative to its peak, so the window is an interval.
    const Real reach = sqrt(-log(negligible_ratio<Real>()) / c);
    const Real centre = (Real(z.real()) - axis.origin) / axis.spacing;
    const Real half = reach / axis.spacing;
    const double lo = std::max(0.0, to_double(floor(centre - half)));
    const double hi = std::min(static_cast<double>(axis.count), to_double(ceil(centre + half)) + 1.0);
    if (!(hi > lo)) return w;
    w.lo = static_cast<std::size_t>(lo);
    w.hi = static_cast<std::size_t>(hi);
    const std::size_t n = w.hi - w.lo;
    w.factor.resize(n);
    w.offset.resize(n);

    const complex_t<Real> iu(Real(0), Real(1));
    const Real h = axis.spacing;
    auto offset_at = [&](std::size_t m) {
        return complex_t<Real>(Real(z.real()) - axis.coordinate(w.lo + m), Real(z.imag()));
    };
    auto phase_at = [&](const complex_t<Real>& d) { return iu * xi * d - c * d * d; };
    // phi(m+1) - phi(m) = -i xi h + 2 c h d(m) - c h^2 ; successive ratios differ by exp(-2 c h^2)
    const complex_t<Real> step_ratio = exp_complex<Real>(-Real(2) * c * h * h, Real(0));
    complex_t<Real> value, ratio;
    for (std::size_t m = 0; m < n; ++m) {
        const complex_t<Real> d = offset_at(m);
        w.offset[m] = d;
        if (m % numeric_traits<Real>::reanchor_interval == 0) {
            value = exp_complex<Real>(phase_at(d));
            ratio = exp_complex<Real>(-iu * xi * h + Real(2) * c * h * d - c * h * h);
        } else {
            value = value * ratio;
            ratio = ratio * step_ratio;
        }
        w.factor[m] = value;
    }
    return w;
}

template <class Real>
void check_resolution(const SampledFunction<Real>& u, std::span<const double> xi) {
    double norm = 0;
    for (double v : xi) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0) return;
    double hmax = 0;
    for (const auto& a : u.axes()) hmax = std::max(hmax, to_double(a.spacing));
    if (2.0 * std::acos(-1.0) / norm < kSamplesPerWavelength * hmax)
        throw grid_too_coarse("frequency |xi| = " + std::to_string(norm) +
                              " is not resolved: wavelength spans fewer than 8 grid spacings");
}

}  // namespace detail

/**
 * F_gamma u(z, xi). Dimensions of z, xi and u must agree. Throws
 * grid_too_coarse when 2 pi / |xi| is below 8 grid spacings.
 */
template <class Real>
complex_t<Real> fbi(const SampledFunction<Real>& u, std::span<const complex_t<Real>> z,
                    std::span<const double> xi, GammaExponent gamma) {
    const std::size_t dim = static_cast<std::size_t>(u.dimension());
    if (z.size() != dim || xi.size() != dim)
        throw std::invalid_argument("fbi: base point, frequency and function dimensions differ");
    detail::check_resolution(u, xi);

    using std::pow;
    const Real g(gamma.value());
    const Real bracket = japanese_bracket<Real>(xi);
    const Real c = pow(bracket, g);
    const Real beta = g * pow(bracket, g - Real(2));
    const complex_t<Real> ibeta(Real(0), beta);

    std::vector<detail::AxisWindow<Real>> win;
    for (std::size_t d = 0; d < dim; ++d) {
        win.push_back(detail::axis_window<Real>(u.axis(static_cast<int>(d)), z[d], Real(xi[d]), c));
        if (win.back().factor.empty()) return complex_t<Real>(0);
    }

    complex_t<Real> sum(0);
    const auto& vals = u.values();
    if (dim == 1) {
        const auto& w0 = win[0];
        const Real k0(xi[0]);
        for (std::size_t m = 0; m < w0.factor.size(); ++m) {
            const auto& uv = vals[w0.lo + m];
            if (uv.real() == 0 && uv.imag() == 0) continue;
            sum += uv * w0.factor[m] * (complex_t<Real>(Real(1)) + ibeta * (w0.offset[m] * k0));
        }
    } else {
        const std::size_t n1 = u.axis(1).count;
        const std::size_t n2 = dim == 3 ? u.axis(2).count : 1;
        for (std::size_t a = 0; a < win[0].factor.size(); ++a) {
            const std::size_t i = win[0].lo + a;
            const complex_t<Real> e0 = win[0].factor[a];
            const complex_t<Real> l0 = win[0].offset[a] * Real(xi[0]);
            for (std::size_t b = 0; b < win[1].factor.size(); ++b) {
                const std::size_t j = win[1].lo + b;
                const complex_t<Real> e01 = e0 * win[1].factor[b];
                const complex_t<Real> l01 = l0 + win[1].offset[b] * Real(xi[1]);
                if (dim == 2) {
                    const auto& uv = vals[i * n1 + j];
                    sum += uv * e01 * (complex_t<Real>(Real(1)) + ibeta * l01);
                    continue;
                }
                for (std::size_t cidx = 0; cidx < win[2].factor.size(); ++cidx) {
                    const std::size_t k = win[2].lo + cidx;
                    const auto& uv = vals[(i * n1 + j) * n2 + k];
                    if (uv.real() == 0 && uv.imag() == 0) continue;
                    const complex_t<Real> l = l01 + win[2].offset[cidx] * Real(xi[2]);
                    sum += uv * e01 * win[2].factor[cidx] * (complex_t<Real>(Real(1)) + ibeta * l);
                }
            }
        }
    }
    return sum * u.cell_volume();
}

/// One-dimensional convenience overload.
template <class Real>
complex_t<Real> fbi(const SampledFunction<Real>& u, const complex_t<Real>& z, double xi,
                    GammaExponent gamma) {
    return fbi<Real>(u, std::span<const complex_t<Real>>(&z, 1), std::span<const double>(&xi, 1),
                     gamma);
}

template <class Real = double>
struct FbiField {
    GammaExponent gamma;
    std::vector<std::vector<complex_t<Real>>> base_points;
    std::vector<std::vector<double>> frequencies;
    std::vector<complex_t<Real>> values;  // row-major: (base point, frequency)

    std::size_t rows() const { return base_points.size(); }
    std::size_t cols() const { return frequencies.size(); }
    const complex_t<Real>& at(std::size_t b, std::size_t f) const { return values[b * cols() + f]; }
};

/// F_gamma u at every (base point, frequency) pair.
template <class Real>
FbiField<Real> fbi_field(const SampledFunction<Real>& u,
                         const std::vector<std::vector<complex_t<Real>>>& base_points,
                         const std::vector<std::vector<double>>& frequencies, GammaExponent gamma) {
    FbiField<Real> field{gamma, base_points, frequencies, {}};
    field.values.reserve(base_points.size() * frequencies.size());
    for (const auto& z : base_points)
        for (const auto& xi : frequencies)
            field.values.push_back(fbi<Real>(u, std::span<const complex_t<Real>>(z),
                                             std::span<const double>(xi), gamma));
    return field;
}

/// Largest distance from x to the sampling grid of u (1D).
template <class Real>
double grid_reach(const SampledFunction<Real>& u, double x) {
    const double lo = to_double(u.axis(0).origin);
    const double hi = to_double(u.axis(0).last());
    return std::max(std::abs(x - lo), std::abs(hi - x));
}

/**
 * (2 pi)^{-1} int_{|xi| <= R} F_gamma u(x, xi) dxi for one-dimensional u,
 * by composite Gauss-Legendre in xi. Converges to u(x) as R grows.
 */
template <class Real>
complex_t<Real> invert_partial(const SampledFunction<Real>& u, double x, GammaExponent gamma,
                               double radius) {
    if (!(radius > 0)) throw std::invalid_argument("invert_partial: R must be positive");
    if (u.dimension() != 1)
        throw std::invalid_argument("invert_partial: truncated inversion is one-dimensional");
    const double xi_max[1] = {radius};
    detail::check_resolution(u, std::span<const double>(xi_max, 1));
    const auto nodes = quadrature::symmetric_rule(radius, grid_reach(u, x));
    const complex_t<Real> z(Real(x), Real(0));
    complex_t<Real> sum(0);
    for (const auto& node : nodes) sum += fbi<Real>(u, z, node.x, gamma) * Real(node.w);
    return sum / (Real(2) * pi<Real>());
}

/**
 * F_gamma u(x_k + i y, xi) at every node x_k of a one-dimensional grid, as a
 * discrete convolution evaluated with the FFT.
 */
inline std::vector<std::complex<double>> fbi_on_grid(const SampledFunction<double>& u, double xi,
                                                     GammaExponent gamma, double imag_offset) {
    if (u.dimension() != 1) throw std::invalid_argument("fbi_on_grid: one-dimensional input only");
    detail::check_resolution(u, std::span<const double>(&xi, 1));
    const std::size_t n = u.size();
    std::size_t len = 1;
    while (len < 2 * n) len <<= 1;
    const double h = u.axis(0).spacing;
    const double bracket = std::sqrt(1.0 + xi * xi);
    const double c = std::pow(bracket, gamma.value());
    const double beta = gamma.value() * std::pow(bracket, gamma.value() - 2.0);
    const double reach = std::sqrt(-std::log(negligible_ratio<double>()) / c);
    const auto half = std::min<std::size_t>(n - 1, static_cast<std::size_t>(reach / h) + 1);

    std::vector<std::complex<double>> kernel(len, 0.0), signal(len, 0.0);
    const std::complex<double> iu(0, 1);
    for (std::size_t m = 0; m <= half; ++m) {
        for (int sgn : {1, -1}) {
            if (m == 0 && sgn < 0) continue;
            const std::complex<double> d(sgn * static_cast<double>(m) * h, imag_offset);
            const std::complex<double> value =
                std::exp(iu * d * xi - c * d * d) * (1.0 + iu * beta * d * xi);
            kernel[sgn > 0 ? m : len - m] = value;
        }
    }
    std::copy(u.values().begin(), u.values().end(), signal.begin());
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> ks, ss, out;
    fft.fwd(ks, kernel);
    fft.fwd(ss, signal);
    for (std::size_t i = 0; i < len; ++i) ks[i] *= ss[i];
    fft.inv(out, ks);
    out.resize(n);
    for (auto& v : out) v *= h;
    return out;
}

/**
 * Splitting u = g + h with g the frequency-truncated inversion. g lives on
 * the complex tube (real grid of u) x (imaginary offsets), h on the real grid.
 */
struct Decomposition {
    double lambda{1};
    SampledFunction<double> g_lambda;  // axis 0: Re z, axis 1: Im z
    SampledFunction<double> h_lambda;

    /// Index of the Im z = 0 row of g_lambda.
    std::size_t real_row() const { return g_lambda.axis(1).count / 2; }
};

/**
 * g_lambda(z) = (2 pi)^{-1} int_{|xi| <= lambda} F_gamma u(z, xi) dxi on the tube
 * |Im z| <= tube_height, sampled at 2*levels+1 imaginary offsets, and
 * h_lambda = u - g_lambda on the real grid. Tube heights above half the
 * support radius are clamped to it.
 */
inline Decomposition decompose(const SampledFunction<double>& u, double lambda, GammaExponent gamma,
                               double tube_height, std::size_t levels = 2) {
    if (!(lambda >= 1.0)) throw std::invalid_argument("decompose: lambda must be >= 1");
    if (!(tube_height >= 0.0)) throw std::invalid_argument("decompose: tube height must be >= 0");
    if (u.dimension() != 1) throw std::invalid_argument("decompose: one-dimensional input only");
    u.require_compact_support("decompose");
    tube_height = std::min(tube_height, 0.5 * u.support_radius());
    if (tube_height == 0.0) levels = 0;

    const std::size_t n = u.size();
    const std::size_t rows = 2 * levels + 1;
    const double reach = to_double(u.axis(0).last() - u.axis(0).origin);
    const auto nodes = quadrature::symmetric_rule(lambda, reach);
    std::vector<std::complex<double>> g(n * rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        const double y = levels == 0 ? 0.0
                                     : -tube_height + tube_height * static_cast<double>(r) /
                                                          static_cast<double>(levels);
        for (const auto& node : nodes) {
            const auto f = fbi_on_grid(u, node.x, gamma, y);
            for (std::size_t k = 0; k < n; ++k) g[k * rows + r] += node.w * f[k];
        }
    }
    const double inv2pi = 1.0 / (2.0 * std::acos(-1.0));
    for (auto& v : g) v *= inv2pi;

    std::vector<std::complex<double>> hvals(n);
    for (std::size_t k = 0; k < n; ++k) hvals[k] = u[k] - g[k * rows + levels];

    const Axis<double> imag_axis{levels == 0 ? 0.0 : -tube_height,
                                 levels == 0 ? 1.0 : tube_height / static_cast<double>(levels), rows};
    Decomposition out{lambda,
                      SampledFunction<double>({u.axis(0), imag_axis}, std::move(g), u.support_radius()),
                      SampledFunction<double>(u.axes(), std::move(hvals), u.support_radius())};
    return out;
}

}  // namespace gevlab
