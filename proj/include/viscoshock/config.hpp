#pragma once

#include <filesystem>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "viscoshock/convergence.hpp"

namespace viscoshock {

/// Every key any subcommand reads, with defaults. Parsed from flat `key = value` text.
struct RunConfig {
    // shock and law
    double gamma = 2.0;
    double v_minus = 1.2;
    double v_plus = 1.0;
    double u_minus = 0.0;
    double alpha = 0.1;
    // solver
    double y_min = -64.0;
    double y_max = 64.0;
    int n_cells = 1600;
    double cfl = 0.4;
    double tau_end = 5.0;
    double observe_every = 1.0;
    double dtau_max = std::numeric_limits<double>::infinity();
    double dtau_per_dy2 = 0.0; // > 0 caps dtau at this multiple of dy^2
    // profile
    double tol = 1e-10;
    double span = 0.0;
    int n = 2001;
    // zero-mass velocity bump added to prepared data, amplitude relative to delta
    double bump_amplitude = 0.0;
    double bump_center = 0.0;
    double bump_width = 2.0;
    // convergence sweep
    std::vector<double> alphas{0.4, 0.2, 0.1, 0.05};
    double h = 1.0;
    double T = 2.0;
    int x_samples = 41;
    int t_samples = 5;
    double x_extent = 1.0;
    double cells_per_width = 40.0;
    double tau_max = 400.0;
    // no algorithm in this code base draws random numbers; the key only accepts true
    bool deterministic = true;

    std::set<std::string> explicit_keys;

    PressureLaw law() const { return PressureLaw::make(gamma); }
    ShockData shock() const { return build_shock(v_minus, v_plus, u_minus, law()); }
    Grid1D grid() const { return Grid1D::make(y_min, y_max, n_cells); }
    ProfileOptions profile_options() const;
    RunOptions run_options() const;
    OmegaSpec omega() const { return OmegaSpec::make(h, T, x_samples, t_samples, x_extent); }
    SolverConfig solver_config() const;
};

const std::vector<std::string>& config_keys();

/// Unknown keys, malformed values and violated ranges raise ValidationError naming the key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Cross-key and range checks; parse_config calls this.
void validate(const RunConfig& cfg);

} // namespace viscoshock
