#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "viscoshock/commands.hpp"
#include "viscoshock/errors.hpp"
#include "viscoshock/io.hpp"
#include "viscoshock/selftest.hpp"

using namespace viscoshock;

namespace {

struct FlagShock {
    double gamma = 2.0;
    double v_minus = 1.2;
    double v_plus = 1.0;
    double u_minus = 0.0;
};

void add_shock_flags(CLI::App* cmd, FlagShock& f)
{
    cmd->add_option("--gamma", f.gamma, "pressure exponent, p(v) = v^-gamma")->capture_default_str();
    cmd->add_option("--v-minus", f.v_minus, "left specific volume")->capture_default_str();
    cmd->add_option("--v-plus", f.v_plus, "right specific volume")->capture_default_str();
    cmd->add_option("--u-minus", f.u_minus, "left velocity")->capture_default_str();
}

RunConfig flags_to_config(const FlagShock& f)
{
    RunConfig cfg;
    cfg.gamma = f.gamma;
    cfg.v_minus = f.v_minus;
    cfg.v_plus = f.v_plus;
    cfg.u_minus = f.u_minus;
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"viscous shock profiles and the vanishing-viscosity limit of the p-system"};
    app.require_subcommand(1);

    FlagShock shock_flags;
    bool as_json = false;
    auto* shock_cmd = app.add_subcommand("shock", "inviscid 1-shock data and admissibility");
    add_shock_flags(shock_cmd, shock_flags);
    shock_cmd->add_flag("--json", as_json, "print one JSON object");

    FlagShock profile_flags;
    double alpha = 0.1, span = 0.0, tol = 1e-10;
    int n = 2001;
    std::string profile_out;
    auto* profile_cmd = app.add_subcommand("profile", "viscous traveling-wave profile");
    add_shock_flags(profile_cmd, profile_flags);
    profile_cmd->add_option("--alpha", alpha, "viscosity strength")->capture_default_str();
    profile_cmd->add_option("--span", span, "xi half-width, 0 for automatic")->capture_default_str();
    profile_cmd->add_option("--n", n, "sample count (rounded up to odd)")->capture_default_str();
    profile_cmd->add_option("--tol", tol, "integration tolerance")->capture_default_str();
    profile_cmd->add_option("--out", profile_out, "CSV file; the JSON sidecar gets the same stem")->required();

    std::string config_path, out_path;
    bool timing = false;
    auto* solve_cmd = app.add_subcommand("solve", "time-dependent run from profile data");
    solve_cmd->add_option("--config", config_path, "flat key = value file")->required();
    solve_cmd->add_option("--out", out_path, "output directory")->default_val("solve_out");
    solve_cmd->add_flag("--timing", timing, "add wallclock seconds to summary.json");

    auto* energy_cmd = app.add_subcommand("energy", "energy functional history");
    energy_cmd->add_option("--config", config_path, "flat key = value file")->required();
    energy_cmd->add_option("--out", out_path, "CSV file")->required();

    bool profile_only = false;
    int jobs = 1;
    auto* converge_cmd = app.add_subcommand("converge", "vanishing-viscosity sweep over alpha");
    converge_cmd->add_option("--config", config_path, "flat key = value file")->required();
    converge_cmd->add_option("--out", out_path, "output directory")->required();
    converge_cmd->add_flag("--profile-only", profile_only, "skip the time-dependent runs");
    converge_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    auto* selftest_cmd = app.add_subcommand("selftest", "invariant suites; writes an output tree");
    selftest_cmd->add_option("--out", out_path, "output directory")->default_val("selftest_out");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_validation;
    }

    try {
        if (*shock_cmd) {
            RunConfig cfg = flags_to_config(shock_flags);
            validate(cfg);
            if (as_json)
                std::cout << shock_summary(cfg.shock(), cfg.law()).dump(2) << "\n";
            else
                std::cout << shock_text(cfg.shock(), cfg.law());
        } else if (*profile_cmd) {
            RunConfig cfg = flags_to_config(profile_flags);
            cfg.alpha = alpha;
            cfg.span = span;
            cfg.n = n;
            cfg.tol = tol;
            validate(cfg);
            const auto profile = compute_profile(cfg.shock(), cfg.alpha, cfg.law(), cfg.profile_options());
            const auto sidecar = write_profile(profile, profile_out);
            std::cout << "wrote " << profile_out << " and " << sidecar.string() << "\n";
        } else if (*solve_cmd) {
            const RunConfig cfg = load_config(config_path);
            const auto out = solve_command(cfg, out_path, timing);
            std::cout << "steps " << out.summary["steps"] << ", " << out.observations << " observations in "
                      << out_path << "\n";
        } else if (*energy_cmd) {
            const RunConfig cfg = load_config(config_path);
            energy_command(cfg, out_path);
            std::cout << "wrote " << out_path << "\n";
        } else if (*converge_cmd) {
            const RunConfig cfg = load_config(config_path);
            const auto sweep = converge_command(cfg, out_path, profile_only, jobs);
            std::cout << "R^2 " << format_real(sweep.r_squared) << ", c " << format_real(sweep.c_fit) << "\n";
            for (const auto& err : sweep.errors)
                if (!err.empty()) {
                    std::cerr << "error: " << err << "\n";
                    return exit_numerical;
                }
        } else if (*selftest_cmd) {
            const auto summary = run_selftest(out_path);
            for (const auto& c : summary["checks"])
                std::cout << (c["pass"].get<bool>() ? "ok   " : "FAIL ") << c["name"].get<std::string>() << "\n";
            if (!summary["all_pass"].get<bool>())
                return exit_numerical;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return exit_ok;
}
