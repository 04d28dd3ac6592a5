#pragma once

#include <string>
#include <vector>

#include "viscoshock/energy_diagnostics.hpp"

namespace viscoshock {

/// Sampling of Omega = {(x, t): |x - s t| >= h, h <= t <= T} on a finite lattice:
/// t_samples times in [h, T] and x_samples offsets per side with |x - s t| in [h, h + x_extent].
struct OmegaSpec {
    double h = 1.0;
    double T = 2.0;
    int x_samples = 41;
    int t_samples = 5;
    double x_extent = 1.0;

    static OmegaSpec make(double h, double T, int x_samples, int t_samples, double x_extent);

    std::vector<double> times() const;
    /// Signed offsets x - s t, negatives first.
    std::vector<double> offsets() const;
};

/// sup over |xi| >= h of |V - v^s| + |U - u^s|, attained at xi = -h or xi = +h because
/// both tails decay monotonically.
double profile_only_error(const ViscousProfile& profile, double h);
double profile_only_error(const ShockData& shock, double alpha, const PressureLaw& law, const OmegaSpec& omega);

struct SolverConfig {
    double cells_per_width = 40.0; // cells per shock thickness delta / max|dV/dy|
    double cfl = 0.4;
    double tau_max = 400.0;
};

struct FullErrorResult {
    double error = 0.0;
    bool capped = false;
    double tau_end = 0.0;
    int n_cells = 0;
    double dy = 0.0;
    long steps = 0;
    double v_min = 0.0;
    double v_max = 0.0;
    bool window_ok = false; // v+/4 <= v <= 2 v+ throughout
    double N_max = 0.0;
    bool N_ok = false;      // N <= delta^(1/4) at every sampled time
};

/// Runs the rescaled solver from profile data to tau = T / alpha (capped at tau_max) and
/// takes the sup of |v - v^s| + |u - u^s| over the Omega lattice.
FullErrorResult full_error(const ShockData& shock, double alpha, const PressureLaw& law, const OmegaSpec& omega,
                           const SolverConfig& solver);

struct SweepConfig {
    ShockData shock;
    PressureLaw law;
    std::vector<double> alphas{0.4, 0.2, 0.1, 0.05};
    OmegaSpec omega;
    bool full = true;
    bool measure_floor = true; // rerun the smallest alpha at twice the resolution
    SolverConfig solver;
    int jobs = 1;
};

struct SweepResult {
    std::vector<double> alphas;
    std::vector<double> E_profile;
    std::vector<double> E_full; // NaN when not computed or failed
    std::vector<bool> capped;
    std::vector<std::string> errors;
    std::vector<FullErrorResult> details;
    // E_profile ~ C exp(-c / alpha)
    double c_fit = 0.0;
    double C_fit = 0.0;
    double r_squared = 0.0;
    bool monotone_flag = false;
    double scheme_floor = 0.0; // NaN unless measured
    bool full_monotone_until_floor = false;
};

/// Requires at least three strictly decreasing alphas. Per-alpha failures are recorded and
/// the sweep continues; results are ordered by alpha regardless of jobs.
SweepResult alpha_sweep(const SweepConfig& config);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace viscoshock
