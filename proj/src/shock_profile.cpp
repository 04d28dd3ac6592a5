#include "viscoshock/shock_profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "viscoshock/dormand_prince.hpp"

namespace viscoshock {

namespace {

// g(V) near each end state, written in the displacement w from that state so the
// end state is an exact root and small displacements keep full relative accuracy.
double g_near_plus(double w, const ShockData& sh, const PressureLaw& law)
{
    const double s2 = sh.s * sh.s;
    return pressure(sh.v_plus, law) * std::expm1(-law.gamma * std::log1p(w / sh.v_plus)) + s2 * w;
}

double g_near_minus(double w, const ShockData& sh, const PressureLaw& law)
{
    const double s2 = sh.s * sh.s;
    return pressure(sh.v_minus, law) * std::expm1(-law.gamma * std::log1p(-w / sh.v_minus)) - s2 * w;
}

double g_of(double V, const ShockData& sh, const PressureLaw& law)
{
    if (V - sh.v_plus <= sh.v_minus - V)
        return g_near_plus(V - sh.v_plus, sh, law);
    return g_near_minus(sh.v_minus - V, sh, law);
}

void require_alpha(double alpha)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ValidationError("viscous profile: alpha must be positive");
}

} // namespace

double reduced_rhs(double V, const ShockData& shock, double alpha, const PressureLaw& law)
{
    require_alpha(alpha);
    const double slack = 1e-14 * shock.v_minus;
    if (V < shock.v_plus - slack || V > shock.v_minus + slack) {
        std::ostringstream msg;
        msg << "reduced_rhs: V=" << V << " outside [" << shock.v_plus << ", " << shock.v_minus << "]";
        throw ValidationError(msg.str());
    }
    V = std::clamp(V, shock.v_plus, shock.v_minus);
    return g_of(V, shock, law) * std::pow(V, 1.0 + alpha) / (std::abs(shock.s) * alpha);
}

double reduced_rhs_derivative(double V, const ShockData& shock, double alpha, const PressureLaw& law)
{
    require_alpha(alpha);
    const double g = g_of(V, shock, law);
    const double dg = shock.s * shock.s + d_pressure(V, law);
    return (dg * std::pow(V, 1.0 + alpha) + g * (1.0 + alpha) * std::pow(V, alpha)) / (std::abs(shock.s) * alpha);
}

TailRates tail_rates(const ShockData& shock, double alpha, const PressureLaw& law)
{
    require_alpha(alpha);
    auto rate = [&](double v) {
        return (shock.s * shock.s + d_pressure(v, law)) * std::pow(v, 1.0 + alpha) / (std::abs(shock.s) * alpha);
    };
    return {rate(shock.v_minus), rate(shock.v_plus)};
}

double tail_epsilon(const ShockData& shock, double tol)
{
    return std::max(tol, 1e-10 * shock.delta);
}

double suggested_span(const ShockData& shock, double alpha, const PressureLaw& law, double tol)
{
    const TailRates r = tail_rates(shock, alpha, law);
    const double slowest = std::min(r.minus, -r.plus);
    const double decades = std::log(shock.delta / tail_epsilon(shock, tol));
    return 1.25 * (std::max(decades, 1.0) + 4.0) / slowest;
}

// ---------------------------------------------------------------------------

ViscousProfile compute_profile(const ShockData& shock, double alpha, const PressureLaw& law,
                               const ProfileOptions& options)
{
    require_alpha(alpha);
    if (!(options.tol > 0.0))
        throw ValidationError("compute_profile: tol must be positive");
    if (options.n < 5)
        throw ValidationError("compute_profile: need at least 5 samples");
    const double anchor = options.anchor.value_or(0.5 * (shock.v_minus + shock.v_plus));
    if (!(anchor > shock.v_plus && anchor < shock.v_minus))
        throw ValidationError("compute_profile: anchor must lie strictly between v_plus and v_minus");

    ViscousProfile prof;
    prof.shock_ = shock;
    prof.law_ = law;
    prof.alpha_ = alpha;
    prof.tol_ = options.tol;
    prof.anchor_ = anchor;
    prof.rates_ = tail_rates(shock, alpha, law);
    prof.eps_tail_ = tail_epsilon(shock, options.tol);

    const double span = options.span > 0.0 ? options.span : suggested_span(shock, alpha, law, options.tol);
    const int half = options.n / 2; // n rounded up to 2*half + 1
    const int n = 2 * half + 1;
    prof.h_ = span / half;
    prof.xi_ = Eigen::VectorXd::LinSpaced(n, -span, span);
    prof.xi_(half) = 0.0;
    prof.V_.resize(n);
    prof.U_.resize(n);
    prof.dV_.resize(n);
    prof.dist_.resize(n);

    const double speed = std::abs(shock.s);
    const double eps = prof.eps_tail_;
    AdaptiveOptions ode;
    ode.rtol = options.tol;
    ode.atol = options.tol * 1e-3 * shock.delta;

    // xi >= 0: w = V - v+ decays to zero.
    auto rhs_plus = [&](double w) {
        return g_near_plus(w, shock, law) * std::pow(shock.v_plus + w, 1.0 + alpha) / (speed * alpha);
    };
    // xi <= 0: w = v- - V, dw/dxi = -dV/dxi, decays to zero as xi -> -infinity.
    auto rhs_minus = [&](double w) {
        return -g_near_minus(w, shock, law) * std::pow(shock.v_minus - w, 1.0 + alpha) / (speed * alpha);
    };

    prof.cut_plus_ = std::numeric_limits<double>::infinity();
    prof.cut_minus_ = -std::numeric_limits<double>::infinity();

    {
        double w = anchor - shock.v_plus;
        double step = 0.0;
        bool tail = false;
        double w_cut = 0.0;
        prof.dist_(half) = w;
        for (int k = half + 1; k < n; ++k) {
            const double xi = prof.xi_(k);
            if (tail) {
                w = w_cut * std::exp(prof.rates_.plus * (xi - prof.cut_plus_));
            } else {
                w = advance_adaptive(rhs_plus, prof.xi_(k - 1), w, xi, step, ode);
                if (!(w > 0.0))
                    throw NumericalError("compute_profile: right branch crossed v_plus");
                if (w < eps) {
                    tail = true;
                    w_cut = w;
                    prof.cut_plus_ = xi;
                }
            }
            prof.dist_(k) = w;
        }
        prof.span_warning_ = !tail;
    }
    {
        double w = shock.v_minus - anchor;
        double step = 0.0;
        bool tail = false;
        double w_cut = 0.0;
        for (int k = half - 1; k >= 0; --k) {
            const double xi = prof.xi_(k);
            if (tail) {
                w = w_cut * std::exp(prof.rates_.minus * (xi - prof.cut_minus_));
            } else {
                w = advance_adaptive(rhs_minus, prof.xi_(k + 1), w, xi, step, ode);
                if (!(w > 0.0))
                    throw NumericalError("compute_profile: left branch crossed v_minus");
                if (w < eps) {
                    tail = true;
                    w_cut = w;
                    prof.cut_minus_ = xi;
                }
            }
            prof.dist_(k) = w;
        }
        prof.span_warning_ = prof.span_warning_ || !tail;
    }

    for (int k = 0; k < n; ++k) {
        const double w = prof.dist_(k);
        const double xi = prof.xi_(k);
        if (k >= half) {
            prof.V_(k) = shock.v_plus + w;
            prof.U_(k) = shock.u_plus - shock.s * w;
            prof.dV_(k) = xi >= prof.cut_plus_ ? prof.rates_.plus * w : rhs_plus(w);
        } else {
            prof.V_(k) = shock.v_minus - w;
            prof.U_(k) = shock.u_minus + shock.s * w;
            prof.dV_(k) = xi <= prof.cut_minus_ ? -prof.rates_.minus * w : -rhs_minus(w);
        }
    }
    return prof;
}

// ---------------------------------------------------------------------------

namespace {

double hermite(double y0, double y1, double d0, double d1, double h, double t)
{
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

double hermite_slope(double y0, double y1, double d0, double d1, double h, double t)
{
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y0 + (-6 * t2 + 6 * t) * y1) / h + (3 * t2 - 4 * t + 1) * d0 + (3 * t2 - 2 * t) * d1;
}

} // namespace

double ViscousProfile::eval_tail_distance(double xi) const
{
    const Eigen::Index n = xi_.size();
    if (xi <= xi_(0))
        return dist_(0) * std::exp(rates_.minus * (xi - xi_(0)));
    if (xi >= xi_(n - 1))
        return dist_(n - 1) * std::exp(rates_.plus * (xi - xi_(n - 1)));
    const Eigen::Index half = n / 2;
    Eigen::Index k = static_cast<Eigen::Index>(std::floor((xi - xi_(0)) / h_));
    k = std::clamp<Eigen::Index>(k, 0, n - 2);
    const double t = (xi - xi_(k)) / h_;
    // right of xi = 0 the distance slope is dV, left of it -dV
    const double sign = k >= half ? 1.0 : -1.0;
    return hermite(dist_(k), dist_(k + 1), sign * dV_(k), sign * dV_(k + 1), h_, t);
}

State ViscousProfile::eval(double xi) const
{
    const double w = eval_tail_distance(xi);
    if (xi >= 0.0)
        return {shock_.v_plus + w, shock_.u_plus - shock_.s * w};
    return {shock_.v_minus - w, shock_.u_minus + shock_.s * w};
}

double ViscousProfile::eval_dV(double xi) const
{
    const Eigen::Index n = xi_.size();
    if (xi <= xi_(0))
        return -rates_.minus * eval_tail_distance(xi);
    if (xi >= xi_(n - 1))
        return rates_.plus * eval_tail_distance(xi);
    const Eigen::Index half = n / 2;
    Eigen::Index k = static_cast<Eigen::Index>(std::floor((xi - xi_(0)) / h_));
    k = std::clamp<Eigen::Index>(k, 0, n - 2);
    const double t = (xi - xi_(k)) / h_;
    const double sign = k >= half ? 1.0 : -1.0;
    return sign * hermite_slope(dist_(k), dist_(k + 1), sign * dV_(k), sign * dV_(k + 1), h_, t);
}

State rescaled_profile_eval(const ViscousProfile& profile, double y, double tau)
{
    return profile.eval(profile.alpha() * (y - profile.shock().s * tau));
}

double rescaled_velocity_gradient(const ViscousProfile& profile, double y, double tau)
{
    const double xi = profile.alpha() * (y - profile.shock().s * tau);
    return profile.alpha() * -profile.shock().s * profile.eval_dV(xi);
}

// ---------------------------------------------------------------------------

double traveling_wave_residual(const Eigen::VectorXd& xi, const Eigen::VectorXd& V, const Eigen::VectorXd& U,
                               const ShockData& shock, double alpha, const PressureLaw& law)
{
    const Eigen::Index n = xi.size();
    if (n < 5 || V.size() != n || U.size() != n)
        throw ValidationError("traveling_wave_residual: need at least 5 matching samples");
    const double s = shock.s;
    double worst = 0.0;
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        const double hl = xi(i) - xi(i - 1);
        const double hr = xi(i + 1) - xi(i);
        const double hc = xi(i + 1) - xi(i - 1);
        const double dV = (V(i + 1) - V(i - 1)) / hc;
        const double dU = (U(i + 1) - U(i - 1)) / hc;
        const double dp = (pressure(V(i + 1), law) - pressure(V(i - 1), law)) / hc;
        const double a_r = 0.5 * (std::pow(V(i), -1.0 - alpha) + std::pow(V(i + 1), -1.0 - alpha));
        const double a_l = 0.5 * (std::pow(V(i - 1), -1.0 - alpha) + std::pow(V(i), -1.0 - alpha));
        const double flux = (a_r * (U(i + 1) - U(i)) / hr - a_l * (U(i) - U(i - 1)) / hl) / (0.5 * hc);
        const double r_mass = -s * dV - dU;
        const double r_mom = -s * dU + dp - alpha * flux;
        worst = std::max({worst, std::abs(r_mass), std::abs(r_mom)});
    }
    return worst;
}

double profile_residual(const ViscousProfile& profile)
{
    return traveling_wave_residual(profile.xi(), profile.V(), profile.U(), profile.shock(), profile.alpha(),
                                   profile.law());
}

// ---------------------------------------------------------------------------

namespace {

ExponentialFit fit_log_linear(const std::vector<double>& x, const std::vector<double>& y)
{
    ExponentialFit fit;
    fit.samples = static_cast<int>(x.size());
    if (!fit.valid())
        return fit;
    Eigen::MatrixXd A(x.size(), 2);
    Eigen::VectorXd b(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = x[i];
        b(i) = std::log(y[i]);
    }
    const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
    fit.amplitude = std::exp(c(0));
    fit.rate = c(1);
    return fit;
}

} // namespace

ProfileAudit verify_proposition21(const ViscousProfile& profile, double h_probe)
{
    const ShockData& sh = profile.shock();
    const auto& xi = profile.xi();
    const auto& dist = profile.tail_distance();
    const auto& dV = profile.dV();
    const auto& U = profile.U();
    const Eigen::Index n = profile.size();
    const Eigen::Index half = n / 2;
    const double delta = sh.delta;
    const double alpha = profile.alpha();

    ProfileAudit rep;
    rep.bounds_ok = (dist.array() > 0.0).all() && (dist.array() < delta).all();

    bool mono = true;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (k + 1 < half)
            mono = mono && dist(k) < dist(k + 1);
        else if (k >= half)
            mono = mono && dist(k + 1) < dist(k);
    }
    // across xi = 0 the two distances are measured from opposite end states
    mono = mono && sh.v_minus - dist(half - 1) > profile.V()(half) && profile.V()(half) > sh.v_plus + dist(half + 1);
    rep.monotone_V = mono;

    bool u_mono = -sh.s > 0.0 && rep.monotone_V;
    for (Eigen::Index k = 0; k + 1 < n; ++k)
        u_mono = u_mono && U(k + 1) <= U(k);
    rep.monotone_U = u_mono;
    rep.dU_negative = ((-sh.s * dV).array() < 0.0).all();

    const double floor = 100.0 * profile.tail_epsilon();
    std::vector<double> xm, ym, xp, yp;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (dist(k) < floor)
            continue;
        if (xi(k) <= -h_probe && xi(k) > profile.cut_minus()) {
            xm.push_back(xi(k));
            ym.push_back(dist(k));
        } else if (xi(k) >= h_probe && xi(k) < profile.cut_plus()) {
            xp.push_back(xi(k));
            yp.push_back(dist(k));
        }
    }
    rep.fit_minus = fit_log_linear(xm, ym);
    rep.fit_plus = fit_log_linear(xp, yp);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rep.rate_error_minus = rep.fit_minus.valid()
                               ? std::abs(rep.fit_minus.rate - profile.lambda_minus()) / std::abs(profile.lambda_minus())
                               : nan;
    rep.rate_error_plus = rep.fit_plus.valid()
                              ? std::abs(rep.fit_plus.rate - profile.lambda_plus()) / std::abs(profile.lambda_plus())
                              : nan;
    rep.rates_ok = rep.rate_error_minus <= 0.05 && rep.rate_error_plus <= 0.05;
    rep.scaled_rate_minus = std::abs(rep.fit_minus.rate) * alpha / delta;
    rep.scaled_rate_plus = std::abs(rep.fit_plus.rate) * alpha / delta;
    rep.amplitude_minus = rep.fit_minus.amplitude / delta;
    rep.amplitude_plus = rep.fit_plus.amplitude / delta;

    const double speed = std::abs(sh.s);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double d1 = std::abs(dV(k));
        const double d2 = std::abs(reduced_rhs_derivative(profile.V()(k), sh, alpha, profile.law()) * dV(k));
        rep.sup_d1 = std::max(rep.sup_d1, std::max(d1, speed * d1));
        rep.sup_d2 = std::max(rep.sup_d2, std::max(d2, speed * d2));
    }
    rep.scaled_d1 = rep.sup_d1 * alpha / (delta * delta);
    rep.scaled_d2 = rep.sup_d2 * alpha * alpha / (delta * delta);
    return rep;
}

bool within_factor_of_median(const std::vector<double>& values, double factor)
{
    if (values.empty())
        return true;
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    return std::all_of(values.begin(), values.end(),
                       [&](double v) { return v >= median / factor && v <= median * factor; });
}

} // namespace viscoshock
