#pragma once

#include <cmath>
#include <concepts>
#include <string>

#include <Eigen/Dense>

#include "viscoshock/errors.hpp"

namespace viscoshock {

/// Polytropic law p(v) = v^(-gamma) in the Lagrangian (specific volume) variable.
/// Convex and decreasing for every v > 0 once gamma >= 1.
struct PressureLaw {
    double gamma = 2.0;

    static PressureLaw make(double gamma)
    {
        if (!(gamma >= 1.0) || !std::isfinite(gamma))
            throw ValidationError("pressure law: gamma must be >= 1, got " + std::to_string(gamma));
        return PressureLaw{gamma};
    }
};

namespace detail {
inline void require_positive_volume(double v)
{
    if (!(v > 0.0))
        throw ValidationError("pressure law: specific volume must be positive, got " + std::to_string(v));
}
} // namespace detail

template <std::floating_point Scalar>
Scalar pressure(Scalar v, const PressureLaw& law)
{
    detail::require_positive_volume(v);
    return std::pow(v, -law.gamma);
}

template <std::floating_point Scalar>
Scalar d_pressure(Scalar v, const PressureLaw& law)
{
    detail::require_positive_volume(v);
    return -law.gamma * std::pow(v, -law.gamma - 1.0);
}

template <std::floating_point Scalar>
Scalar dd_pressure(Scalar v, const PressureLaw& law)
{
    detail::require_positive_volume(v);
    return law.gamma * (law.gamma + 1.0) * std::pow(v, -law.gamma - 2.0);
}

// Coefficient-wise versions for fields. No domain check: callers hold v > 0.
template <typename Derived>
auto pressure(const Eigen::ArrayBase<Derived>& v, const PressureLaw& law)
{
    return v.pow(-law.gamma);
}

template <typename Derived>
auto d_pressure(const Eigen::ArrayBase<Derived>& v, const PressureLaw& law)
{
    return -law.gamma * v.pow(-law.gamma - 1.0);
}

/// Lagrangian sound speed sqrt(-p'(v)).
template <std::floating_point Scalar>
Scalar sound_speed(Scalar v, const PressureLaw& law)
{
    return std::sqrt(-d_pressure(v, law));
}

} // namespace viscoshock
