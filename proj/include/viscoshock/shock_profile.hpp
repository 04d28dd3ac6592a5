#pragma once

#include <optional>

#include <Eigen/Dense>

#include "viscoshock/euler_waves.hpp"

namespace viscoshock {

/// Right-hand side of the once-integrated traveling-wave system,
///   dV/dxi = g(V) V^(1+alpha) / (|s| alpha),  g(V) = s^2 (V - v-) + p(V) - p(v-),
/// evaluated in a form that is exactly zero at both end states.
/// Throws ValidationError for V outside [v+, v-] or alpha <= 0.
double reduced_rhs(double V, const ShockData& shock, double alpha, const PressureLaw& law);

/// d/dV of reduced_rhs.
double reduced_rhs_derivative(double V, const ShockData& shock, double alpha, const PressureLaw& law);

/// Exponential rates of the linearized profile ODE at the end states:
/// lambda = (s^2 + p'(v)) v^(1+alpha) / (|s| alpha); minus > 0, plus < 0.
struct TailRates {
    double minus = 0.0;
    double plus = 0.0;
};

TailRates tail_rates(const ShockData& shock, double alpha, const PressureLaw& law);

/// Tail cutoff used by compute_profile: max(tol, 1e-10 delta).
double tail_epsilon(const ShockData& shock, double tol);

/// Half-width in xi large enough for both tails to drop below tail_epsilon.
double suggested_span(const ShockData& shock, double alpha, const PressureLaw& law, double tol);

struct ProfileOptions {
    double tol = 1e-10;
    double span = 0.0;            // xi half-width; <= 0 selects suggested_span()
    int n = 2001;                 // sample count, rounded up to odd so xi = 0 is a node
    std::optional<double> anchor; // V(0); defaults to the midpoint of (v+, v-)
};

/// Sampled viscous shock profile (V, U)(xi), xi = x - s t, connecting the shock's end states.
/// Immutable once built by compute_profile().
class ViscousProfile {
public:
    const ShockData& shock() const { return shock_; }
    const PressureLaw& law() const { return law_; }
    double alpha() const { return alpha_; }
    double tolerance() const { return tol_; }

    const Eigen::VectorXd& xi() const { return xi_; }
    const Eigen::VectorXd& V() const { return V_; }
    const Eigen::VectorXd& U() const { return U_; }
    const Eigen::VectorXd& dV() const { return dV_; }
    /// Distance to the end state on the sample's side of xi = 0: v- - V for xi < 0, V - v+ for xi >= 0.
    /// Stays strictly positive in the far tails where V itself rounds to v+-.
    const Eigen::VectorXd& tail_distance() const { return dist_; }

    Eigen::Index size() const { return xi_.size(); }
    double spacing() const { return h_; }
    double lambda_minus() const { return rates_.minus; }
    double lambda_plus() const { return rates_.plus; }
    double normalization() const { return anchor_; }
    double tail_epsilon() const { return eps_tail_; }
    /// Samples with xi <= cut_minus or xi >= cut_plus come from the analytic exponential tail.
    double cut_minus() const { return cut_minus_; }
    double cut_plus() const { return cut_plus_; }
    /// Set when the span ends before a tail reached tail_epsilon().
    bool span_warning() const { return span_warning_; }

    /// (V, U) at any xi; cubic Hermite inside the table, analytic tails outside.
    State eval(double xi) const;
    double eval_dV(double xi) const;
    /// v-side / v+-side distance at xi, accurate in the far tails.
    double eval_tail_distance(double xi) const;

private:
    friend ViscousProfile compute_profile(const ShockData&, double, const PressureLaw&, const ProfileOptions&);

    ShockData shock_;
    PressureLaw law_;
    double alpha_ = 0.0;
    double tol_ = 0.0;
    double h_ = 0.0;
    double anchor_ = 0.0;
    double eps_tail_ = 0.0;
    double cut_minus_ = 0.0;
    double cut_plus_ = 0.0;
    bool span_warning_ = false;
    TailRates rates_;
    Eigen::VectorXd xi_, V_, U_, dV_, dist_;
};

/// Integrates the profile ODE outward from V(0) = anchor with adaptive error control and
/// continues each tail analytically once within tail_epsilon of its end state.
ViscousProfile compute_profile(const ShockData& shock, double alpha, const PressureLaw& law,
                               const ProfileOptions& options = {});

/// Max centered-difference residual of both traveling-wave equations over interior samples.
double traveling_wave_residual(const Eigen::VectorXd& xi, const Eigen::VectorXd& V, const Eigen::VectorXd& U,
                               const ShockData& shock, double alpha, const PressureLaw& law);
double profile_residual(const ViscousProfile& profile);

struct ExponentialFit {
    double rate = 0.0;      // d log|V - v| / d xi
    double amplitude = 0.0; // exp(intercept)
    int samples = 0;
    bool valid() const { return samples >= 3; }
};

/// Numerical audit of the profile's structural properties: bounds, monotonicity, tail rates
/// and derivative magnitudes against their delta / alpha scalings.
struct ProfileAudit {
    bool bounds_ok = false;     // v+ < V < v-,  u+ < U < u-
    bool monotone_V = false;
    bool monotone_U = false;
    bool dU_negative = false;
    ExponentialFit fit_minus, fit_plus;
    double rate_error_minus = 0.0; // relative mismatch against the analytic rate
    double rate_error_plus = 0.0;
    bool rates_ok = false;         // both mismatches <= 5 %
    double scaled_rate_minus = 0.0; // lambda alpha / delta
    double scaled_rate_plus = 0.0;
    double amplitude_minus = 0.0;   // fitted C in C delta exp(-c delta |xi| / alpha)
    double amplitude_plus = 0.0;
    double sup_d1 = 0.0;   // sup max(|V'|, |U'|)
    double sup_d2 = 0.0;   // sup max(|V''|, |U''|)
    double scaled_d1 = 0.0; // sup_d1 alpha / delta^2
    double scaled_d2 = 0.0; // sup_d2 alpha^2 / delta^2

    bool pass() const { return bounds_ok && monotone_V && monotone_U && dU_negative && rates_ok; }
};

/// Tail fits use samples with |xi| >= h_probe that were integrated rather than extrapolated.
ProfileAudit verify_proposition21(const ViscousProfile& profile, double h_probe);

/// True when every value lies within a factor `factor` of the median of `values`.
bool within_factor_of_median(const std::vector<double>& values, double factor);

/// Profile read in the rescaled variables y = x / alpha, tau = t / alpha, i.e. at xi = alpha (y - s tau).
State rescaled_profile_eval(const ViscousProfile& profile, double y, double tau);

/// d U~ / dy at (y, tau): alpha * (-s) * dV/dxi.
double rescaled_velocity_gradient(const ViscousProfile& profile, double y, double tau);

} // namespace viscoshock
