/**
 * @brief Scalar types and small numeric helpers shared by every module.
 *
 * Most computations run in double. Decay measurements that must resolve
 * magnitudes far below 1e-16 (stretched-exponential tails, high-order
 * derivatives) instantiate the same templates with wide_real.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/complex_adaptor.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace gevlab {

namespace bmp = boost::multiprecision;

/// 160 significant decimal digits, MPFR backed.
using wide_real = bmp::number<bmp::mpfr_float_backend<160>, bmp::et_off>;
using wide_complex = bmp::number<bmp::complex_adaptor<bmp::mpfr_float_backend<160>>, bmp::et_off>;

template <class Real>
struct numeric_traits {
    using complex = std::complex<Real>;
    // recurrences are re-seeded from a direct evaluation this often
    static constexpr std::size_t reanchor_interval = 32;
};

template <>
struct numeric_traits<wide_real> {
    using complex = wide_complex;
    static constexpr std::size_t reanchor_interval = 1024;
};

template <class Real>
using complex_t = typename numeric_traits<Real>::complex;

template <class Real>
inline double to_double(const Real& x) {
    return static_cast<double>(x);
}

template <class Real>
inline Real pi() {
    return boost::math::constants::pi<Real>();
}

/// Relative magnitude below which a term cannot affect a sum in Real.
template <class Real>
inline Real negligible_ratio() {
    using std::pow;
    return pow(Real(10), -(std::numeric_limits<Real>::digits10 + 8));
}

/// e^{re + i im}
template <class Real>
inline complex_t<Real> exp_complex(const Real& re, const Real& im) {
    using std::cos;
    using std::exp;
    using std::sin;
    const Real m = exp(re);
    return complex_t<Real>(m * cos(im), m * sin(im));
}

template <class Real>
inline complex_t<Real> exp_complex(const complex_t<Real>& w) {
    return exp_complex<Real>(Real(w.real()), Real(w.imag()));
}

template <class Real>
inline Real magnitude(const complex_t<Real>& w) {
    using std::abs;
    return Real(abs(w));
}

template <class Real>
inline bool is_finite(const Real& x) {
    using std::isfinite;
    return isfinite(x);
}

/// Japanese bracket (1 + |xi|^2)^{1/2} for a real frequency vector.
template <class Real, class Range>
inline Real japanese_bracket(const Range& xi) {
    using std::sqrt;
    Real s(1);
    for (const auto& v : xi) s += Real(v) * Real(v);
    return sqrt(s);
}

}  // namespace gevlab
