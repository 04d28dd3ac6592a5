#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

#include "viscoshock/errors.hpp"

namespace viscoshock {

struct AdaptiveOptions {
    double rtol = 1e-10;
    double atol = 1e-10;
    double h_min = 1e-14;  // relative to |t_end - t_start|
    long max_steps = 10'000'000;
};

/// Dormand-Prince 5(4) with local extrapolation for a scalar autonomous ODE y' = f(y).
/// Advances y from t to t_end landing exactly on t_end; `h` carries the step-size
/// proposal across calls so consecutive output intervals reuse the controller state.
template <typename Scalar, typename Rhs>
Scalar advance_adaptive(Rhs&& f, Scalar t, Scalar y, Scalar t_end, Scalar& h, const AdaptiveOptions& opt)
{
    constexpr Scalar c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr Scalar a21 = 1.0 / 5;
    constexpr Scalar a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr Scalar a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr Scalar a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr Scalar a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr Scalar b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b*, the embedded fourth-order weights subtracted
    constexpr Scalar e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2; (void)c3; (void)c4; (void)c5;

    const Scalar span = t_end - t;
    if (span == Scalar(0))
        return y;
    const Scalar dir = span > 0 ? Scalar(1) : Scalar(-1);
    const Scalar h_floor = opt.h_min * std::abs(span);
    if (!(std::abs(h) > 0))
        h = span / 100;
    h = dir * std::min(std::abs(h), std::abs(span));

    Scalar k1 = f(y);
    for (long steps = 0; dir * (t_end - t) > 0; ++steps) {
        if (steps > opt.max_steps)
            throw NumericalError("adaptive integrator: step budget exhausted");
        bool last = false;
        const Scalar h_proposal = h;
        if (dir * (t + h - t_end) >= 0) {
            h = t_end - t;
            last = true;
        }
        const Scalar k2 = f(y + h * a21 * k1);
        const Scalar k3 = f(y + h * (a31 * k1 + a32 * k2));
        const Scalar k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Scalar k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Scalar k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Scalar y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Scalar k7 = f(y_new);
        const Scalar err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const Scalar sc = opt.atol + opt.rtol * std::max(std::abs(y), std::abs(y_new));
        const Scalar ratio = std::abs(err) / sc;

        if (ratio <= 1) {
            t = last ? t_end : t + h;
            y = y_new;
            k1 = k7;
            const Scalar grow = ratio == 0 ? Scalar(5) : std::min(Scalar(5), Scalar(0.9) * std::pow(ratio, Scalar(-0.2)));
            h = last ? h_proposal : h * std::max(Scalar(1), grow);
        } else {
            h *= std::max(Scalar(0.1), Scalar(0.9) * std::pow(ratio, Scalar(-0.2)));
            if (std::abs(h) < h_floor) {
                std::ostringstream msg;
                msg << "adaptive integrator: step size underflow at t=" << t;
                throw NumericalError(msg.str());
            }
        }
    }
    return y;
}

} // namespace viscoshock
