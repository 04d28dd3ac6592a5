#pragma once

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "viscoshock/shock_profile.hpp"

namespace viscoshock {

/// Uniform grid on [y_min, y_max]: cells 0..n-1 and interfaces 0..n.
struct Grid1D {
    double y_min = 0.0;
    double y_max = 0.0;
    int n_cells = 0;

    static Grid1D make(double y_min, double y_max, int n_cells);

    double dy() const { return (y_max - y_min) / n_cells; }
    double center(int i) const { return y_min + (i + 0.5) * dy(); }
    double interface(int i) const { return y_min + i * dy(); }
    Eigen::VectorXd centers() const;
    Eigen::VectorXd interfaces() const;
};

/// Staggered fields of the rescaled system: v at cell centers, u at interfaces.
/// u(0) and u(n) are pinned to u- and u+.
struct SolverState {
    Grid1D grid;
    Eigen::VectorXd v;
    Eigen::VectorXd u;
    double tau = 0.0;
    double alpha = 0.0;
    PressureLaw law;
    ShockData shock;
    long step_count = 0;
};

/// Constant state (v, u) everywhere; boundary pins taken from `shock`.
SolverState uniform_state(const Grid1D& grid, const ShockData& shock, double alpha, const PressureLaw& law,
                          State value);

/// Samples the rescaled profile at tau = 0. Throws ValidationError when the profile at
/// y_min or y_max is farther than 1e-8 delta from the pinned end states.
SolverState init_state(const ViscousProfile& profile, const Grid1D& grid);

/// Adds amplitude * b((y - center) / width) to u at interior interfaces, where
/// b(z) = z exp(-z^2) scaled to unit maximum. The bump is odd, so it carries no momentum.
void add_velocity_dipole(SolverState& state, double amplitude, double center, double width);

/// Acoustic time-step limit cfl * dy / max sqrt(-p'(v)).
double cfl_limit(const SolverState& state, double cfl = 0.4);

/// One step: explicit pressure gradient with backward-Euler viscosity (coefficient
/// 1/v^(1+alpha) frozen at the old level) for u, then the mass update from the new u.
void advance(SolverState& state, double dtau);
SolverState step(const SolverState& state, double dtau);

/// Change of total mass and interior momentum over one step minus what the boundary
/// fluxes of that step predict; both vanish up to rounding for a conservative update.
struct StepBalance {
    double mass_defect = 0.0;
    double momentum_defect = 0.0;
};

StepBalance step_balance(const SolverState& before, const SolverState& after);

struct RunOptions {
    double tau_end = 0.0;
    double observe_every = std::numeric_limits<double>::infinity();
    double cfl = 0.4;
    double dtau_max = std::numeric_limits<double>::infinity();
    double dtau_min = 1e-12;
};

struct RunResult {
    SolverState state;
    std::vector<double> observed; // observer timestamps
    long steps = 0;
    double v_min = 0.0; // extremes of v over every step of the run
    double v_max = 0.0;
};

using Observer = std::function<void(const SolverState&)>;

/// Steps to tau_end under the CFL limit. The observer sees the state at every multiple of
/// observe_every past the start and at tau_end. Errors carry the tau of failure.
RunResult run(SolverState state, const RunOptions& options, const Observer& observer = {});

} // namespace viscoshock
