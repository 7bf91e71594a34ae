/**
 * @brief Uniform-grid complex samples of a function on R^n, n = 1, 2, 3.
 */
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gevlab/errors.hpp"
#include "gevlab/precision.hpp"

namespace gevlab {

template <class Real>
struct Axis {
    Real origin{0};
    Real spacing{1};
    std::size_t count{0};

    Real coordinate(std::size_t i) const { return origin + spacing * Real(i); }
    Real last() const { return coordinate(count - 1); }
};

/// Axis with `count` nodes covering [lo, hi] inclusive.
template <class Real>
Axis<Real> axis_over(const Real& lo, const Real& hi, std::size_t count) {
    if (count < 2) throw degenerate_grid("axis needs at least two nodes");
    if (!(hi > lo)) throw std::invalid_argument("axis bounds must satisfy lo < hi");
    return Axis<Real>{lo, (hi - lo) / Real(count - 1), count};
}

/**
 * Samples are stored row-major: the last axis varies fastest. The declared
 * support radius is measured from the midpoint of the grid; values outside
 * it are expected to be zero but are not forced to be.
 *
 * Compact support (two vanishing boundary layers) is not a class invariant,
 * since kernel elements and polynomial probes are sampled with the same
 * type. Operations that need it call require_compact_support().
 */
template <class Real = double>
class SampledFunction {
public:
    using real_type = Real;
    using complex_type = complex_t<Real>;

    SampledFunction() = default;

    SampledFunction(std::vector<Axis<Real>> axes, std::vector<complex_type> values,
                    double support_radius)
        : axes_(std::move(axes)), values_(std::move(values)), support_radius_(support_radius) {
        if (axes_.empty() || axes_.size() > 3)
            throw std::invalid_argument("SampledFunction supports dimension 1, 2 or 3");
        std::size_t n = 1;
        for (const auto& a : axes_) {
            if (!(a.spacing > Real(0))) throw std::invalid_argument("grid spacing must be positive");
            if (a.count == 0) throw degenerate_grid("empty axis");
            n *= a.count;
        }
        if (n != values_.size()) throw std::invalid_argument("value count does not match grid shape");
        for (const auto& v : values_) {
            if (!is_finite(Real(v.real())) || !is_finite(Real(v.imag())))
                throw std::invalid_argument("sampled values must be finite");
        }
    }

    /// Sample `fn` (taking coordinates as std::array<Real,3>, unused entries zero).
    template <class Fn>
    static SampledFunction sample(std::vector<Axis<Real>> axes, Fn&& fn, double support_radius) {
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.count;
        std::vector<complex_type> values;
        values.reserve(n);
        std::array<std::size_t, 3> idx{0, 0, 0};
        const std::size_t dim = axes.size();
        for (std::size_t flat = 0; flat < n; ++flat) {
            std::array<Real, 3> x{Real(0), Real(0), Real(0)};
            for (std::size_t d = 0; d < dim; ++d) x[d] = axes[d].coordinate(idx[d]);
            values.push_back(complex_type(fn(x)));
            for (std::size_t d = dim; d-- > 0;) {
                if (++idx[d] < axes[d].count) break;
                idx[d] = 0;
            }
        }
        return SampledFunction(std::move(axes), std::move(values), support_radius);
    }

    int dimension() const { return static_cast<int>(axes_.size()); }
    const Axis<Real>& axis(int d) const { return axes_.at(static_cast<std::size_t>(d)); }
    const std::vector<Axis<Real>>& axes() const { return axes_; }
    std::size_t size() const { return values_.size(); }
    double support_radius() const { return support_radius_; }

    const std::vector<complex_type>& values() const { return values_; }
    std::vector<complex_type>& values() { return values_; }

    const complex_type& operator[](std::size_t flat) const { return values_[flat]; }
    complex_type& operator[](std::size_t flat) { return values_[flat]; }

    std::size_t flat_index(std::size_t i, std::size_t j = 0, std::size_t k = 0) const {
        switch (axes_.size()) {
            case 1: return i;
            case 2: return i * axes_[1].count + j;
            default: return (i * axes_[1].count + j) * axes_[2].count + k;
        }
    }

    Real coordinate(int d, std::size_t i) const { return axis(d).coordinate(i); }

    Real cell_volume() const {
        Real v(1);
        for (const auto& a : axes_) v *= a.spacing;
        return v;
    }

    /// True when every sample within `layers` nodes of the grid boundary is exactly zero.
    bool vanishes_near_boundary(std::size_t layers = 2) const {
        const std::size_t dim = axes_.size();
        std::array<std::size_t, 3> idx{0, 0, 0};
        for (std::size_t flat = 0; flat < values_.size(); ++flat) {
            bool edge = false;
            for (std::size_t d = 0; d < dim; ++d) {
                if (idx[d] < layers || idx[d] + layers >= axes_[d].count) edge = true;
            }
            if (edge && (values_[flat].real() != 0 || values_[flat].imag() != 0)) return false;
            for (std::size_t d = dim; d-- > 0;) {
                if (++idx[d] < axes_[d].count) break;
                idx[d] = 0;
            }
        }
        return true;
    }

    void require_compact_support(std::string_view context) const {
        if (!vanishes_near_boundary(2))
            throw std::invalid_argument(std::string(context) +
                                        ": samples must vanish on the two outermost grid layers");
    }

private:
    std::vector<Axis<Real>> axes_;
    std::vector<complex_type> values_;
    double support_radius_{0};
};

/// Convert samples and grid to another scalar type.
template <class To, class From>
SampledFunction<To> convert(const SampledFunction<From>& u) {
    std::vector<Axis<To>> axes;
    for (const auto& a : u.axes()) axes.push_back(Axis<To>{To(a.origin), To(a.spacing), a.count});
    std::vector<complex_t<To>> values;
    values.reserve(u.size());
    for (const auto& v : u.values()) values.emplace_back(To(v.real()), To(v.imag()));
    return SampledFunction<To>(std::move(axes), std::move(values), u.support_radius());
}

/// a*u + b*v on a shared grid.
template <class Real>
SampledFunction<Real> linear_combination(const complex_t<Real>& a, const SampledFunction<Real>& u,
                                         const complex_t<Real>& b, const SampledFunction<Real>& v) {
    if (u.size() != v.size() || u.dimension() != v.dimension())
        throw std::invalid_argument("linear_combination: grids differ");
    std::vector<complex_t<Real>> values(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) values[i] = a * u[i] + b * v[i];
    return SampledFunction<Real>(u.axes(), std::move(values),
                                 std::max(u.support_radius(), v.support_radius()));
}

}  // namespace gevlab
