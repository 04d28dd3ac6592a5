#include "viscoshock/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "viscoshock/errors.hpp"
#include "viscoshock/io.hpp"

namespace viscoshock {

using nlohmann::json;

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const ValidationError*>(&e))
        return exit_validation;
    if (dynamic_cast<const IoError*>(&e))
        return exit_io;
    if (dynamic_cast<const std::filesystem::filesystem_error*>(&e))
        return exit_io;
    return exit_numerical;
}

json shock_summary(const ShockData& shock, const PressureLaw& law)
{
    const auto rh = rankine_hugoniot_residuals(shock, law);
    const auto lax = check_lax(shock, law);
    json j;
    j["gamma"] = law.gamma;
    j["v_minus"] = shock.v_minus;
    j["v_plus"] = shock.v_plus;
    j["u_minus"] = shock.u_minus;
    j["u_plus"] = shock.u_plus;
    j["s"] = shock.s;
    j["delta"] = shock.delta;
    j["lambda_minus"] = lax.lambda_minus;
    j["lambda_plus"] = lax.lambda_plus;
    j["rh_mass_residual"] = rh.mass;
    j["rh_momentum_residual"] = rh.momentum;
    j["rh_relative_max"] = rh.relative_max();
    j["lax_velocity_drop"] = lax.velocity_drop;
    j["lax_characteristics"] = lax.characteristics_ok;
    j["lax_admissible"] = lax.admissible;
    return j;
}

std::string shock_text(const ShockData& shock, const PressureLaw& law)
{
    const auto rh = rankine_hugoniot_residuals(shock, law);
    const auto lax = check_lax(shock, law);
    std::ostringstream out;
    auto line = [&](const char* name, const std::string& value) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-22s %s\n", name, value.c_str());
        out << buf;
    };
    line("gamma", format_real(law.gamma));
    line("v_minus", format_real(shock.v_minus));
    line("v_plus", format_real(shock.v_plus));
    line("u_minus", format_real(shock.u_minus));
    line("u_plus", format_real(shock.u_plus));
    line("s", format_real(shock.s));
    line("delta", format_real(shock.delta));
    line("lambda(v_minus)", format_real(lax.lambda_minus));
    line("lambda(v_plus)", format_real(lax.lambda_plus));
    line("rh_mass_residual", format_real(rh.mass));
    line("rh_momentum_residual", format_real(rh.momentum));
    line("rh_relative_max", format_real(rh.relative_max()));
    line("lax", lax.admissible ? "admissible" : "not admissible");
    return out.str();
}

namespace {

json fit_json(const ExponentialFit& fit)
{
    return {{"rate", json_real(fit.rate)}, {"amplitude", json_real(fit.amplitude)}, {"samples", fit.samples}};
}

double first_integral_defect(const ViscousProfile& p)
{
    const auto& sh = p.shock();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        worst = std::max(worst, std::abs(p.U()(i) - sh.u_minus + sh.s * (p.V()(i) - sh.v_minus)));
    return worst;
}

} // namespace

json profile_summary(const ViscousProfile& p)
{
    const auto audit = verify_proposition21(p, 1.0);
    json a;
    a["bounds_ok"] = audit.bounds_ok;
    a["monotone_V"] = audit.monotone_V;
    a["monotone_U"] = audit.monotone_U;
    a["dU_negative"] = audit.dU_negative;
    a["fit_minus"] = fit_json(audit.fit_minus);
    a["fit_plus"] = fit_json(audit.fit_plus);
    a["rate_error_minus"] = json_real(audit.rate_error_minus);
    a["rate_error_plus"] = json_real(audit.rate_error_plus);
    a["rates_ok"] = audit.rates_ok;
    a["scaled_rate_minus"] = json_real(audit.scaled_rate_minus);
    a["scaled_rate_plus"] = json_real(audit.scaled_rate_plus);
    a["amplitude_minus"] = json_real(audit.amplitude_minus);
    a["amplitude_plus"] = json_real(audit.amplitude_plus);
    a["sup_d1"] = audit.sup_d1;
    a["sup_d2"] = audit.sup_d2;
    a["scaled_d1"] = audit.scaled_d1;
    a["scaled_d2"] = audit.scaled_d2;
    a["pass"] = audit.pass();

    json j;
    j["gamma"] = p.law().gamma;
    j["alpha"] = p.alpha();
    j["v_minus"] = p.shock().v_minus;
    j["v_plus"] = p.shock().v_plus;
    j["u_minus"] = p.shock().u_minus;
    j["u_plus"] = p.shock().u_plus;
    j["s"] = p.shock().s;
    j["delta"] = p.shock().delta;
    j["lambda_minus"] = p.lambda_minus();
    j["lambda_plus"] = p.lambda_plus();
    j["normalization"] = p.normalization();
    j["tol"] = p.tolerance();
    j["tail_epsilon"] = p.tail_epsilon();
    j["n"] = p.size();
    j["span"] = p.xi()(p.size() - 1);
    j["span_warning"] = p.span_warning();
    j["residual"] = profile_residual(p);
    j["first_integral_defect"] = first_integral_defect(p);
    j["audit"] = a;
    return j;
}

std::filesystem::path write_profile(const ViscousProfile& p, const std::filesystem::path& csv)
{
    std::filesystem::path sidecar = csv;
    if (sidecar.extension() == ".json")
        sidecar += ".meta.json";
    else
        sidecar.replace_extension(".json");

    const json summary = profile_summary(p);
    std::vector<std::vector<double>> rows;
    rows.reserve(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i)
        rows.push_back({p.xi()(i), p.V()(i), p.U()(i), p.dV()(i)});
    if (csv.has_parent_path())
        ensure_directory(csv.parent_path());
    emit_csv(csv, {"xi", "V", "U", "dV_dxi"}, rows);
    emit_json(sidecar, summary);
    return sidecar;
}

namespace {

SolverState prepared_state(const RunConfig& cfg, const ViscousProfile& profile)
{
    SolverState st = init_state(profile, cfg.grid());
    if (cfg.bump_amplitude != 0.0)
        add_velocity_dipole(st, cfg.bump_amplitude * profile.shock().delta, cfg.bump_center, cfg.bump_width);
    return st;
}

std::vector<std::vector<double>> observation_rows(const SolverState& st)
{
    std::vector<std::vector<double>> rows;
    const int n = st.grid.n_cells;
    rows.reserve(n);
    for (int i = 0; i < n; ++i)
        rows.push_back({st.grid.center(i), st.v(i), 0.5 * (st.u(i) + st.u(i + 1))});
    return rows;
}

std::string observation_name(int k)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "obs_%04d.csv", k);
    return buf;
}

double total_mass(const SolverState& st) { return st.v.sum() * st.grid.dy(); }

} // namespace

SolveOutcome solve_command(const RunConfig& cfg, const std::filesystem::path& out_dir, bool timing)
{
    const auto law = cfg.law();
    const auto shock = cfg.shock();
    const auto profile = compute_profile(shock, cfg.alpha, law, cfg.profile_options());
    SolverState st = prepared_state(cfg, profile);
    const RunOptions opt = cfg.run_options();

    ensure_directory(out_dir);
    json observations = json::array();
    int k = 0;
    auto record = [&](const SolverState& s) {
        const std::string name = observation_name(k++);
        emit_csv(out_dir / name, {"y", "v", "u"}, observation_rows(s));
        observations.push_back({{"tau", s.tau}, {"file", name}, {"step", s.step_count}});
    };

    const double mass0 = total_mass(st);
    const double tau0 = st.tau;
    record(st);
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult rr = run(st, opt, record);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const auto& fin = rr.state;
    const auto fields = perturbation(fin, profile);
    const auto norms = sobolev_norms(fields);
    const double mass_defect =
        total_mass(fin) - mass0 - (fin.tau - tau0) * (shock.u_plus - shock.u_minus);

    json s;
    s["steps"] = rr.steps;
    s["tau_end"] = fin.tau;
    s["n_cells"] = fin.grid.n_cells;
    s["dy"] = fin.grid.dy();
    s["alpha"] = cfg.alpha;
    s["s"] = shock.s;
    s["delta"] = shock.delta;
    s["v_min"] = rr.v_min;
    s["v_max"] = rr.v_max;
    s["positivity_window_ok"] = rr.v_min >= 0.25 * shock.v_plus && rr.v_max <= 2.0 * shock.v_plus;
    s["mass_defect"] = mass_defect;
    s["final_norms"] = {
        {"Phi_l2", norms.Phi.l2}, {"Phi_h1", norms.Phi.h1}, {"Phi_h2", norms.Phi.h2},
        {"Psi_l2", norms.Psi.l2}, {"Psi_h1", norms.Psi.h1}, {"Psi_h2", norms.Psi.h2},
        {"phi_sup", fields.phi.cwiseAbs().maxCoeff()}, {"psi_sup", fields.psi.cwiseAbs().maxCoeff()},
    };
    s["observations"] = observations;
    if (timing)
        s["wallclock_seconds"] = wall;
    emit_json(out_dir / "summary.json", s);
    return {s, k};
}

EnergyReport energy_history(const RunConfig& cfg)
{
    const auto law = cfg.law();
    const auto shock = cfg.shock();
    const auto profile = compute_profile(shock, cfg.alpha, law, cfg.profile_options());
    SolverState st = prepared_state(cfg, profile);

    EnergyReport report;
    EnergyAccumulators acc;
    auto record = [&](const SolverState& s) {
        report.rows.push_back(energy_snapshot(s, profile, acc));
        report.q_ratio_max = std::max(report.q_ratio_max, q_field(s, profile).ratio_max);
    };
    record(st);
    run(st, cfg.run_options(), record);
    return report;
}

void energy_command(const RunConfig& cfg, const std::filesystem::path& out_csv)
{
    const auto report = energy_history(cfg);
    if (out_csv.has_parent_path())
        ensure_directory(out_csv.parent_path());
    emit_csv(out_csv, EnergyReport::columns(), report.table());
}

json sweep_summary(const SweepResult& r, const RunConfig& cfg, bool profile_only)
{
    json per = json::array();
    for (std::size_t i = 0; i < r.alphas.size(); ++i) {
        json e;
        e["alpha"] = r.alphas[i];
        e["E_profile"] = json_real(r.E_profile[i]);
        e["E_full"] = json_real(r.E_full[i]);
        e["capped"] = static_cast<bool>(r.capped[i]);
        if (!r.errors[i].empty())
            e["error"] = r.errors[i];
        if (!profile_only) {
            const auto& d = r.details[i];
            e["tau_end"] = d.tau_end;
            e["n_cells"] = d.n_cells;
            e["dy"] = d.dy;
            e["steps"] = d.steps;
            e["v_min"] = json_real(d.v_min);
            e["v_max"] = json_real(d.v_max);
            e["window_ok"] = d.window_ok;
            e["N_max"] = json_real(d.N_max);
            e["N_ok"] = d.N_ok;
        }
        per.push_back(e);
    }
    json j;
    j["mode"] = profile_only ? "profile_only" : "full";
    j["h"] = cfg.h;
    j["T"] = cfg.T;
    j["delta"] = cfg.v_minus - cfg.v_plus;
    j["fit"] = {{"model", "E_profile = C exp(-c / alpha)"},
                {"c", json_real(r.c_fit)},
                {"C", json_real(r.C_fit)},
                {"r_squared", json_real(r.r_squared)}};
    j["E_profile_strictly_decreasing"] = r.monotone_flag;
    j["scheme_floor"] = json_real(r.scheme_floor);
    j["E_full_decreasing_until_floor"] = r.full_monotone_until_floor;
    j["per_alpha"] = per;
    j["note"] = "finite-T, finite-h desk-scale check: errors are sampled on a lattice of "
                "{|x - s t| >= h, h <= t <= T}; the limit alpha -> 0 itself is not computed";
    return j;
}

SweepResult converge_command(const RunConfig& cfg, const std::filesystem::path& out_dir, bool profile_only,
                             int jobs)
{
    if (jobs < 1)
        throw ValidationError("jobs must be >= 1");
    SweepConfig sc;
    sc.shock = cfg.shock();
    sc.law = cfg.law();
    sc.alphas = cfg.alphas;
    sc.omega = cfg.omega();
    sc.full = !profile_only;
    sc.measure_floor = !profile_only;
    sc.solver = cfg.solver_config();
    sc.jobs = jobs;
    const SweepResult r = alpha_sweep(sc);

    ensure_directory(out_dir);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < r.alphas.size(); ++i)
        rows.push_back({r.alphas[i], r.E_profile[i], r.E_full[i], r.capped[i] ? 1.0 : 0.0});
    emit_csv(out_dir / "sweep.csv", {"alpha", "E_profile", "E_full", "capped"}, rows);
    emit_json(out_dir / "fit.json", sweep_summary(r, cfg, profile_only));
    return r;
}

} // namespace viscoshock
