#pragma once

#include "viscoshock/pressure_law.hpp"

namespace viscoshock {

/// A (specific volume, velocity) pair.
struct State {
    double v = 0.0;
    double u = 0.0;
};

/// Entropy-satisfying 1-shock of the inviscid p-system joining (v-, u-) to (v+, u+).
struct ShockData {
    double v_minus = 0.0;
    double v_plus = 0.0;
    double u_minus = 0.0;
    double u_plus = 0.0;
    double s = 0.0;     // shock speed, negative
    double delta = 0.0; // wave strength |v+ - v-|

    State left() const { return {v_minus, u_minus}; }
    State right() const { return {v_plus, u_plus}; }
};

/// Solves the jump relations for s and u+ on the 1-shock branch.
/// Throws ValidationError unless v_minus > v_plus > 0.
ShockData build_shock(double v_minus, double v_plus, double u_minus, const PressureLaw& law);

struct RankineHugoniotResiduals {
    double mass = 0.0;     // -s (v+ - v-) - (u+ - u-)
    double momentum = 0.0; // -s (u+ - u-) + p(v+) - p(v-)
    double scale = 0.0;    // max(|s delta|, |p(v+) - p(v-)|)

    double relative_max() const;
};

RankineHugoniotResiduals rankine_hugoniot_residuals(const ShockData& shock, const PressureLaw& law);

/// First-family characteristic speed -sqrt(-p'(v)).
double characteristic_speed(double v, const PressureLaw& law);

struct LaxReport {
    bool admissible = false;
    bool velocity_drop = false;    // u+ < u-
    bool characteristics_ok = false; // lambda(v+) < s < lambda(v-)
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    double s = 0.0;
};

LaxReport check_lax(const ShockData& shock, const PressureLaw& law);

/// Piecewise-constant inviscid shock. Points exactly on the ray x = s t get the right state.
State riemann_shock_eval(const ShockData& shock, double x, double t);

} // namespace viscoshock
