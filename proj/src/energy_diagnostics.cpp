#include "viscoshock/energy_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace viscoshock {

namespace {

void require_matching(const SolverState& st, const ViscousProfile& prof)
{
    const ShockData& a = st.shock;
    const ShockData& b = prof.shock();
    auto same = [](double x, double y) { return std::abs(x - y) <= 1e-14 * std::max(1.0, std::abs(x)); };
    if (!same(st.alpha, prof.alpha()) || !same(st.law.gamma, prof.law().gamma) || !same(a.v_minus, b.v_minus) ||
        !same(a.v_plus, b.v_plus) || !same(a.u_minus, b.u_minus) || !same(a.u_plus, b.u_plus))
        throw ValidationError("perturbation: solver state and profile use different shock/alpha/gamma parameters");
}

void require_samples(const Eigen::VectorXd& f)
{
    if (f.size() < 5)
        throw ValidationError("sobolev norms: need at least 5 samples");
}

} // namespace

PerturbationFields perturbation(const SolverState& state, const ViscousProfile& profile)
{
    require_matching(state, profile);
    const Grid1D& g = state.grid;
    const int n = g.n_cells;
    const double dy = g.dy();

    PerturbationFields f;
    f.tau = state.tau;
    f.dy = dy;
    f.phi.resize(n);
    f.psi.resize(n + 1);
    for (int c = 0; c < n; ++c)
        f.phi(c) = state.v(c) - rescaled_profile_eval(profile, g.center(c), state.tau).v;
    for (int i = 0; i <= n; ++i)
        f.psi(i) = state.u(i) - rescaled_profile_eval(profile, g.interface(i), state.tau).u;

    // Phi at interface j integrates phi over the j cells to its left, the discrete
    // antiderivative matching the conservative mass update.
    f.Phi.resize(n + 1);
    f.Psi.resize(n + 1);
    f.Phi(0) = 0.0;
    f.Psi(0) = 0.0;
    for (int j = 1; j <= n; ++j) {
        f.Phi(j) = f.Phi(j - 1) + dy * f.phi(j - 1);
        f.Psi(j) = f.Psi(j - 1) + 0.5 * dy * (f.psi(j - 1) + f.psi(j));
    }
    return f;
}

double trapezoid(const Eigen::VectorXd& f, double dy)
{
    if (f.size() < 2)
        return 0.0;
    return dy * (f.sum() - 0.5 * (f(0) + f(f.size() - 1)));
}

Eigen::VectorXd first_difference(const Eigen::VectorXd& f, double dy)
{
    require_samples(f);
    const Eigen::Index n = f.size();
    Eigen::VectorXd d(n);
    d(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * dy);
    d(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * dy);
    d.segment(1, n - 2) = (f.tail(n - 2) - f.head(n - 2)) / (2.0 * dy);
    return d;
}

Eigen::VectorXd second_difference(const Eigen::VectorXd& f, double dy)
{
    require_samples(f);
    const Eigen::Index n = f.size();
    const double h2 = dy * dy;
    Eigen::VectorXd d(n);
    d(0) = (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / h2;
    d(n - 1) = (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) / h2;
    d.segment(1, n - 2) = (f.tail(n - 2) - 2.0 * f.segment(1, n - 2) + f.head(n - 2)) / h2;
    return d;
}

SobolevNorms sobolev_norms(const Eigen::VectorXd& f, double dy)
{
    require_samples(f);
    const double n0 = trapezoid(f.array().square().matrix(), dy);
    const double n1 = trapezoid(first_difference(f, dy).array().square().matrix(), dy);
    const double n2 = trapezoid(second_difference(f, dy).array().square().matrix(), dy);
    return {std::sqrt(n0), std::sqrt(n0 + n1), std::sqrt(n0 + n1 + n2)};
}

PairNorms sobolev_norms(const PerturbationFields& fields)
{
    return {sobolev_norms(fields.Phi, fields.dy), sobolev_norms(fields.Psi, fields.dy)};
}

QField q_field(const SolverState& state, const ViscousProfile& profile)
{
    require_matching(state, profile);
    const Grid1D& g = state.grid;
    const int n = g.n_cells;
    const double dy = g.dy();
    const double alpha = state.alpha;
    const PerturbationFields f = perturbation(state, profile);

    QField q;
    q.Q = Eigen::VectorXd::Zero(n + 1);
    q.majorant = Eigen::VectorXd::Zero(n + 1);
    q.margin = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < n; ++i) {
        const double y = g.interface(i);
        // cell perturbations averaged onto the interface, so an unperturbed state gives phi = 0 exactly
        const double V = rescaled_profile_eval(profile, y, state.tau).v;
        const double Uy = rescaled_velocity_gradient(profile, y, state.tau);
        const double phi = 0.5 * (f.phi(i - 1) + f.phi(i));
        const double v = V + phi;
        const double psi_y = (f.psi(i + 1) - f.psi(i - 1)) / (2.0 * dy);
        const double nonlinear_p = pressure(v, state.law) - pressure(V, state.law) - d_pressure(V, state.law) * phi;
        const double visc = std::pow(v, -1.0 - alpha) - std::pow(V, -1.0 - alpha);
        const double Q = -nonlinear_p + visc * (psi_y + Uy);
        const double M = phi * phi + std::abs(phi * psi_y) + std::abs(phi * Uy);
        q.Q(i) = Q;
        q.majorant(i) = M;
        q.q_max = std::max(q.q_max, std::abs(Q));
        if (M > 0.0)
            q.ratio_max = std::max(q.ratio_max, std::abs(Q) / M);
        q.margin = std::max(q.margin, std::abs(Q) - M);
    }
    return q;
}

EnergyRow energy_snapshot(const SolverState& state, const ViscousProfile& profile, EnergyAccumulators& acc)
{
    const PerturbationFields f = perturbation(state, profile);
    const PairNorms pn = sobolev_norms(f);
    const double dy = f.dy;
    const Grid1D& g = state.grid;

    EnergyRow row;
    row.tau = state.tau;
    row.l2 = pn.Phi.l2 * pn.Phi.l2 + pn.Psi.l2 * pn.Psi.l2;
    row.h1 = pn.Phi.h1 * pn.Phi.h1 + pn.Psi.h1 * pn.Psi.h1;
    row.h2 = pn.Phi.h2 * pn.Phi.h2 + pn.Psi.h2 * pn.Psi.h2;

    Eigen::VectorXd weight(g.n_cells + 1);
    for (int i = 0; i <= g.n_cells; ++i)
        weight(i) = std::abs(rescaled_velocity_gradient(profile, g.interface(i), state.tau));
    const double w_now = trapezoid((weight.array() * f.Psi.array().square()).matrix(), dy);
    const SobolevNorms phi_n = sobolev_norms(f.phi, dy);
    const SobolevNorms psi_n = sobolev_norms(f.psi, dy);
    const double phi_now = phi_n.h1 * phi_n.h1;
    const double psi_now = psi_n.h2 * psi_n.h2;

    if (acc.started) {
        const double dt = state.tau - acc.tau;
        acc.weighted += 0.5 * dt * (acc.last_weighted + w_now);
        acc.phi += 0.5 * dt * (acc.last_phi + phi_now);
        acc.psi += 0.5 * dt * (acc.last_psi + psi_now);
    }
    acc.started = true;
    acc.tau = state.tau;
    acc.last_weighted = w_now;
    acc.last_phi = phi_now;
    acc.last_psi = psi_now;
    acc.N = std::max(acc.N, row.h2);

    row.N = acc.N;
    row.diss_weighted = acc.weighted;
    row.diss_phi = acc.phi;
    row.diss_psi = acc.psi;
    row.grad_norm = phi_n.l2 * phi_n.l2 + psi_n.l2 * psi_n.l2;
    row.sup_grad = std::max(f.phi.cwiseAbs().maxCoeff(), f.psi.cwiseAbs().maxCoeff());

    const QField q = q_field(state, profile);
    row.q_max = q.q_max;
    row.q_margin = q.margin;
    return row;
}

const std::vector<std::string>& EnergyReport::columns()
{
    static const std::vector<std::string> cols = {"tau",      "N",        "l2",        "h1",
                                                  "h2",       "diss_weighted", "diss_phi", "diss_psi",
                                                  "grad_norm", "q_max",    "q_margin"};
    return cols;
}

std::vector<std::vector<double>> EnergyReport::table() const
{
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (const EnergyRow& r : rows)
        out.push_back({r.tau, r.N, r.l2, r.h1, r.h2, r.diss_weighted, r.diss_phi, r.diss_psi, r.grad_norm, r.q_max,
                       r.q_margin});
    return out;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass:
        return "pass";
    case Verdict::fail:
        return "fail";
    case Verdict::inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

DecayVerdict longtime_decay_check(const EnergyReport& report, const DecayOptions& opt)
{
    DecayVerdict out;
    const auto& rows = report.rows;
    if (rows.size() < 4 || rows.back().tau - rows.front().tau < opt.tau_min) {
        out.verdict = Verdict::inconclusive;
        out.detail = "report spans less than tau_min";
        return out;
    }
    double g_max = 0.0, s_max = 0.0;
    for (const EnergyRow& r : rows) {
        g_max = std::max(g_max, r.grad_norm);
        s_max = std::max(s_max, r.sup_grad);
    }
    if (g_max == 0.0) {
        out.verdict = Verdict::pass;
        out.eventually_decreasing = true;
        out.detail = "gradient norm identically zero";
        return out;
    }
    const double tau_half = 0.5 * (rows.front().tau + rows.back().tau);
    bool decreasing = true;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (rows[k - 1].tau < tau_half)
            continue;
        decreasing = decreasing && rows[k].grad_norm <= rows[k - 1].grad_norm * (1.0 + 1e-9);
    }
    out.eventually_decreasing = decreasing;
    out.final_ratio = rows.back().grad_norm / g_max;
    out.sup_final_ratio = s_max > 0.0 ? rows.back().sup_grad / s_max : 0.0;
    const bool small = out.final_ratio <= opt.fraction;
    const bool sup_small = out.sup_final_ratio <= std::sqrt(opt.fraction);
    out.verdict = decreasing && small && sup_small ? Verdict::pass : Verdict::fail;
    std::ostringstream msg;
    msg << "decreasing=" << decreasing << " final/max=" << out.final_ratio << " sup final/max=" << out.sup_final_ratio;
    out.detail = msg.str();
    return out;
}

double interpolation_ratio(const Eigen::VectorXd& f, double dy)
{
    const double sup = f.cwiseAbs().maxCoeff();
    const double l2 = std::sqrt(trapezoid(f.array().square().matrix(), dy));
    const double d1 = std::sqrt(trapezoid(first_difference(f, dy).array().square().matrix(), dy));
    if (l2 == 0.0 || d1 == 0.0)
        return 0.0;
    return sup / std::sqrt(l2 * d1);
}

} // namespace viscoshock
