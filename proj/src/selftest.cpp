#include "viscoshock/selftest.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "viscoshock/commands.hpp"
#include "viscoshock/io.hpp"

namespace viscoshock {

using nlohmann::json;

namespace {

struct CheckList {
    json items = json::array();
    bool all = true;

    void add(const std::string& name, bool ok, double value, double limit)
    {
        items.push_back({{"name", name}, {"pass", ok}, {"value", json_real(value)}, {"limit", json_real(limit)}});
        all = all && ok;
    }
};

// Additive low-discrepancy sequence in [0,1)^3 built from the plastic-number generalization
// of the golden ratio; fully determined by the index.
double lattice(int k, int dim)
{
    const double g = 1.2207440846057594754;
    const double a = 1.0 / std::pow(g, dim + 1);
    const double x = 0.5 + a * k;
    return x - std::floor(x);
}

void shock_suite(const std::filesystem::path& dir, CheckList& checks)
{
    std::vector<std::vector<double>> rows;
    double worst = 0.0;
    bool lax_all = true;
    for (int k = 0; k < 100; ++k) {
        const double gamma = 1.0 + 2.0 * lattice(k, 0);
        const double v_plus = 0.5 + 1.5 * lattice(k, 1);
        const double delta = 0.01 + (0.5 * v_plus - 0.01) * lattice(k, 2);
        const auto law = PressureLaw::make(gamma);
        const auto shock = build_shock(v_plus + delta, v_plus, 0.0, law);
        const double r = rankine_hugoniot_residuals(shock, law).relative_max();
        const bool lax = check_lax(shock, law).admissible;
        worst = std::max(worst, r);
        lax_all = lax_all && lax;
        rows.push_back({gamma, v_plus, delta, shock.s, shock.u_plus, r, lax ? 1.0 : 0.0});
    }
    emit_csv(dir / "shock_closure.csv", {"gamma", "v_plus", "delta", "s", "u_plus", "rh_relative", "lax"}, rows);
    checks.add("rankine_hugoniot_closure", worst <= 1e-12, worst, 1e-12);
    checks.add("lax_admissible", lax_all, lax_all ? 1.0 : 0.0, 1.0);

    const auto law = PressureLaw::make(2.0);
    const auto shock = build_shock(1.2, 1.0, 0.0, law);
    emit_json(dir / "shock_reference.json", shock_summary(shock, law));
}

void profile_suite(const std::filesystem::path& dir, CheckList& checks)
{
    const auto law = PressureLaw::make(2.0);
    const auto shock = build_shock(1.2, 1.0, 0.0, law);
    const double alpha = 0.1;
    const auto profile = compute_profile(shock, alpha, law);
    write_profile(profile, dir / "profile.csv");
    const auto audit = verify_proposition21(profile, 1.0);
    checks.add("profile_structure", audit.pass(), audit.pass() ? 1.0 : 0.0, 1.0);
    checks.add("profile_tail_rates", audit.rates_ok, std::max(audit.rate_error_minus, audit.rate_error_plus), 0.05);

    double defect = 0.0;
    for (Eigen::Index i = 0; i < profile.size(); ++i)
        defect = std::max(defect, std::abs(profile.U()(i) - shock.u_minus + shock.s * (profile.V()(i) - shock.v_minus)));
    checks.add("first_integral", defect <= 10.0 * profile.tolerance(), defect, 10.0 * profile.tolerance());

    double worst_rhs = -std::numeric_limits<double>::infinity();
    for (int k = 1; k < 1000; ++k) {
        const double V = shock.v_plus + shock.delta * k / 1000.0;
        worst_rhs = std::max(worst_rhs, reduced_rhs(V, shock, alpha, law));
    }
    checks.add("reduced_rhs_negative", worst_rhs < 0.0, worst_rhs, 0.0);
    checks.add("normalization", profile.eval(0.0).v == 0.5 * (shock.v_minus + shock.v_plus), profile.eval(0.0).v,
               0.5 * (shock.v_minus + shock.v_plus));
}

void solver_suite(const std::filesystem::path& dir, CheckList& checks)
{
    RunConfig cfg;
    cfg.n_cells = 400;
    cfg.tau_end = 2.0;
    cfg.observe_every = 0.5;
    cfg.dtau_per_dy2 = 0.25;
    validate(cfg);

    const auto profile = compute_profile(cfg.shock(), cfg.alpha, cfg.law(), cfg.profile_options());
    SolverState st = init_state(profile, cfg.grid());
    const double dtau = std::min(cfl_limit(st, cfg.cfl), cfg.run_options().dtau_max);
    double mass = 0.0, momentum = 0.0;
    for (int k = 0; k < 200; ++k) {
        SolverState next = step(st, dtau);
        const auto b = step_balance(st, next);
        mass = std::max(mass, b.mass_defect);
        momentum = std::max(momentum, b.momentum_defect);
        st = std::move(next);
    }
    checks.add("mass_balance_per_step", mass <= 1e-12, mass, 1e-12);
    checks.add("momentum_balance_per_step", momentum <= 1e-12, momentum, 1e-12);

    const auto history = energy_history(cfg);
    emit_csv(dir / "energy.csv", EnergyReport::columns(), history.table());
    const double N_end = history.rows.back().N;
    checks.add("prepared_data_energy_floor", N_end <= 1e-4, N_end, 1e-4);

    const auto out = solve_command(cfg, dir / "solve", false);
    const double v_min = out.summary["v_min"].get<double>();
    const double v_max = out.summary["v_max"].get<double>();
    checks.add("positivity_window_low", v_min >= 0.25 * cfg.v_plus, v_min, 0.25 * cfg.v_plus);
    checks.add("positivity_window_high", v_max <= 2.0 * cfg.v_plus, v_max, 2.0 * cfg.v_plus);
}

void convergence_suite(const std::filesystem::path& dir, CheckList& checks)
{
    RunConfig cfg;
    cfg.v_minus = 1.2;
    cfg.v_plus = 1.0;
    validate(cfg);
    const auto sweep = converge_command(cfg, dir / "converge", true, 2);
    checks.add("profile_error_decreasing", sweep.monotone_flag, sweep.monotone_flag ? 1.0 : 0.0, 1.0);
    checks.add("profile_error_exponential_fit", sweep.r_squared >= 0.99, sweep.r_squared, 0.99);
}

void io_suite(CheckList& checks)
{
    const auto row = parse_csv_row(format_real(0.1));
    checks.add("csv_round_trip", row.size() == 1 && row[0] == 0.1, row.empty() ? 0.0 : row[0], 0.1);
}

} // namespace

json run_selftest(const std::filesystem::path& out_dir)
{
    ensure_directory(out_dir);
    CheckList checks;
    shock_suite(out_dir, checks);
    profile_suite(out_dir, checks);
    solver_suite(out_dir, checks);
    convergence_suite(out_dir, checks);
    io_suite(checks);

    json summary;
    summary["checks"] = checks.items;
    summary["all_pass"] = checks.all;
    emit_json(out_dir / "selftest.json", summary);
    return summary;
}

} // namespace viscoshock
