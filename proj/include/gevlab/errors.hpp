#pragma once

#include <stdexcept>
#include <string>

namespace gevlab {

/// Oscillation at the requested frequency is not resolved by the sampling grid.
class grid_too_coarse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decay data cannot be described by a stretched-exponential law.
class fit_rejected : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Finite-difference derivatives are dominated by noise before enough orders are usable.
class order_too_high : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two computations that must agree did not.
class internal_consistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A requested evaluation point lies outside the stored samples.
class resample_error : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Grid too small for the requested stencil.
class degenerate_grid : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace gevlab
