#pragma once

#include <exception>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "viscoshock/config.hpp"

namespace viscoshock {

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_numerical = 2, exit_io = 3 };

/// Maps the library exception hierarchy onto process exit codes.
int exit_code_for(const std::exception& e);

/// s, u+, delta, characteristic speeds, jump residuals and the Lax verdict.
nlohmann::json shock_summary(const ShockData& shock, const PressureLaw& law);
std::string shock_text(const ShockData& shock, const PressureLaw& law);

/// Sidecar for a profile CSV: speeds, rates, residual and the structural audit.
nlohmann::json profile_summary(const ViscousProfile& profile);

/// Writes xi, V, U, dV_dxi to `csv` and the summary next to it (same stem, .json).
/// Returns the sidecar path.
std::filesystem::path write_profile(const ViscousProfile& profile, const std::filesystem::path& csv);

struct SolveOutcome {
    nlohmann::json summary;
    int observations = 0;
};

/// Runs the solver from the translated profile (plus the optional bump) and writes
/// obs_NNNN.csv per observation and summary.json into `out_dir`. Everything that can be
/// validated is validated before the directory is touched.
SolveOutcome solve_command(const RunConfig& cfg, const std::filesystem::path& out_dir, bool timing);

/// Energy functional history for the configured run.
EnergyReport energy_history(const RunConfig& cfg);
void energy_command(const RunConfig& cfg, const std::filesystem::path& out_csv);

/// sweep.csv and fit.json for the configured alpha list.
SweepResult converge_command(const RunConfig& cfg, const std::filesystem::path& out_dir, bool profile_only,
                             int jobs);
nlohmann::json sweep_summary(const SweepResult& sweep, const RunConfig& cfg, bool profile_only);

} // namespace viscoshock
