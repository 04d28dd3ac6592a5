#include "viscoshock/euler_waves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace viscoshock {

ShockData build_shock(double v_minus, double v_plus, double u_minus, const PressureLaw& law)
{
    if (!(v_minus > 0.0) || !(v_plus > 0.0))
        throw ValidationError("build_shock: specific volumes must be positive");
    if (!(v_minus > v_plus)) {
        std::ostringstream msg;
        msg << "build_shock: not a 1-shock, need v_minus > v_plus (got v_minus=" << v_minus
            << ", v_plus=" << v_plus << ")";
        throw ValidationError(msg.str());
    }
    if (!std::isfinite(u_minus))
        throw ValidationError("build_shock: u_minus must be finite");

    ShockData shock;
    shock.v_minus = v_minus;
    shock.v_plus = v_plus;
    shock.u_minus = u_minus;
    shock.delta = v_minus - v_plus;
    const double s2 = (pressure(v_plus, law) - pressure(v_minus, law)) / shock.delta;
    shock.s = -std::sqrt(s2);
    shock.u_plus = u_minus - shock.s * (v_plus - v_minus);
    return shock;
}

double RankineHugoniotResiduals::relative_max() const
{
    const double r = std::max(std::abs(mass), std::abs(momentum));
    return scale > 0.0 ? r / scale : r;
}

RankineHugoniotResiduals rankine_hugoniot_residuals(const ShockData& shock, const PressureLaw& law)
{
    const double dv = shock.v_plus - shock.v_minus;
    const double du = shock.u_plus - shock.u_minus;
    const double dp = pressure(shock.v_plus, law) - pressure(shock.v_minus, law);
    RankineHugoniotResiduals r;
    r.mass = -shock.s * dv - du;
    r.momentum = -shock.s * du + dp;
    r.scale = std::max(std::abs(shock.s * shock.delta), std::abs(dp));
    return r;
}

double characteristic_speed(double v, const PressureLaw& law)
{
    return -sound_speed(v, law);
}

LaxReport check_lax(const ShockData& shock, const PressureLaw& law)
{
    LaxReport rep;
    rep.s = shock.s;
    rep.lambda_minus = characteristic_speed(shock.v_minus, law);
    rep.lambda_plus = characteristic_speed(shock.v_plus, law);
    rep.velocity_drop = shock.u_plus < shock.u_minus;
    rep.characteristics_ok = rep.lambda_plus < shock.s && shock.s < rep.lambda_minus;
    rep.admissible = rep.velocity_drop && rep.characteristics_ok;
    return rep;
}

State riemann_shock_eval(const ShockData& shock, double x, double t)
{
    return x < shock.s * t ? shock.left() : shock.right();
}

} // namespace viscoshock
