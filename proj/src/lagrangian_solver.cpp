#include "viscoshock/lagrangian_solver.hpp"

#include <cmath>
#include <sstream>

namespace viscoshock {

Grid1D Grid1D::make(double y_min, double y_max, int n_cells)
{
    if (!(y_min < y_max) || !std::isfinite(y_min) || !std::isfinite(y_max))
        throw ValidationError("grid: need y_min < y_max");
    if (n_cells < 16)
        throw ValidationError("grid: n_cells must be at least 16");
    return Grid1D{y_min, y_max, n_cells};
}

Eigen::VectorXd Grid1D::centers() const
{
    return Eigen::VectorXd::LinSpaced(n_cells, y_min + 0.5 * dy(), y_max - 0.5 * dy());
}

Eigen::VectorXd Grid1D::interfaces() const
{
    return Eigen::VectorXd::LinSpaced(n_cells + 1, y_min, y_max);
}

SolverState uniform_state(const Grid1D& grid, const ShockData& shock, double alpha, const PressureLaw& law,
                          State value)
{
    SolverState st;
    st.grid = grid;
    st.v = Eigen::VectorXd::Constant(grid.n_cells, value.v);
    st.u = Eigen::VectorXd::Constant(grid.n_cells + 1, value.u);
    st.u(0) = shock.u_minus;
    st.u(grid.n_cells) = shock.u_plus;
    st.alpha = alpha;
    st.law = law;
    st.shock = shock;
    return st;
}

SolverState init_state(const ViscousProfile& profile, const Grid1D& grid)
{
    const ShockData& sh = profile.shock();
    const double tol = 1e-8 * sh.delta;
    const double left = profile.eval_tail_distance(profile.alpha() * grid.y_min);
    const double right = profile.eval_tail_distance(profile.alpha() * grid.y_max);
    if (left > tol || right > tol) {
        std::ostringstream msg;
        msg << "init_state: grid too narrow for the profile tails (deviation " << std::max(left, right)
            << " > " << tol << " at the boundary)";
        throw ValidationError(msg.str());
    }
    SolverState st = uniform_state(grid, sh, profile.alpha(), profile.law(), sh.left());
    for (int i = 0; i < grid.n_cells; ++i)
        st.v(i) = rescaled_profile_eval(profile, grid.center(i), 0.0).v;
    for (int i = 1; i < grid.n_cells; ++i)
        st.u(i) = rescaled_profile_eval(profile, grid.interface(i), 0.0).u;
    return st;
}

void add_velocity_dipole(SolverState& state, double amplitude, double center, double width)
{
    if (!(width > 0.0))
        throw ValidationError("velocity dipole: width must be positive");
    const double peak = std::sqrt(0.5) * std::exp(-0.5);
    for (int i = 1; i < state.grid.n_cells; ++i) {
        const double z = (state.grid.interface(i) - center) / width;
        state.u(i) += amplitude * z * std::exp(-z * z) / peak;
    }
}

double cfl_limit(const SolverState& state, double cfl)
{
    const double c_max = (-d_pressure(state.v.array(), state.law)).sqrt().maxCoeff();
    return cfl * state.grid.dy() / c_max;
}

void advance(SolverState& st, double dtau)
{
    const int n = st.grid.n_cells;
    const double dy = st.grid.dy();
    const double r = dtau / (dy * dy);
    // both powers of v share one logarithm
    const Eigen::ArrayXd log_v = st.v.array().log();
    const Eigen::ArrayXd a = (-(1.0 + st.alpha) * log_v).exp();
    const Eigen::ArrayXd p = (-st.law.gamma * log_v).exp();

    // Interior interfaces i = 1..n-1; cell i-1 sits left of interface i, cell i right of it.
    const int m = n - 1;
    Eigen::VectorXd lower(m), diag(m), upper(m), rhs(m);
    for (int k = 0; k < m; ++k) {
        const int i = k + 1;
        lower(k) = -r * a(i - 1);
        upper(k) = -r * a(i);
        diag(k) = 1.0 + r * (a(i - 1) + a(i));
        rhs(k) = st.u(i) - dtau / dy * (p(i) - p(i - 1));
    }
    rhs(0) -= lower(0) * st.u(0);
    rhs(m - 1) -= upper(m - 1) * st.u(n);

    // Thomas elimination
    for (int k = 1; k < m; ++k) {
        if (!(diag(k - 1) > 0.0))
            throw NumericalError("tridiagonal solve: non-positive pivot");
        const double w = lower(k) / diag(k - 1);
        diag(k) -= w * upper(k - 1);
        rhs(k) -= w * rhs(k - 1);
    }
    if (!(diag(m - 1) > 0.0))
        throw NumericalError("tridiagonal solve: non-positive pivot");
    st.u(m) = rhs(m - 1) / diag(m - 1);
    for (int k = m - 2; k >= 0; --k)
        st.u(k + 1) = (rhs(k) - upper(k) * st.u(k + 2)) / diag(k);

    st.v += (dtau / dy) * (st.u.tail(n) - st.u.head(n));
    st.tau += dtau;
    ++st.step_count;

    const double v_min = st.v.minCoeff();
    if (!(v_min > 0.0)) {
        std::ostringstream msg;
        msg << "solver blow-up: specific volume " << v_min << " at tau=" << st.tau;
        throw NumericalError(msg.str());
    }
}

StepBalance step_balance(const SolverState& before, const SolverState& after)
{
    const int n = before.grid.n_cells;
    const double dy = before.grid.dy();
    const double dtau = after.tau - before.tau;

    // differences first, so the sums see increments and not totals
    const double dmass = (after.v - before.v).sum() * dy;
    const double dmom = (after.u.segment(1, n - 1) - before.u.segment(1, n - 1)).sum() * dy;

    const double a_left = std::pow(before.v(0), -1.0 - before.alpha);
    const double a_right = std::pow(before.v(n - 1), -1.0 - before.alpha);
    const double p_left = pressure(before.v(0), before.law);
    const double p_right = pressure(before.v(n - 1), before.law);
    const double mass_flux = after.u(n) - after.u(0);
    const double mom_flux = -(p_right - p_left) +
                            (a_right * (after.u(n) - after.u(n - 1)) - a_left * (after.u(1) - after.u(0))) / dy;
    return {std::abs(dmass - dtau * mass_flux), std::abs(dmom - dtau * mom_flux)};
}

SolverState step(const SolverState& state, double dtau)
{
    SolverState next = state;
    advance(next, dtau);
    return next;
}

RunResult run(SolverState state, const RunOptions& opt, const Observer& observer)
{
    if (!(opt.tau_end >= state.tau))
        throw ValidationError("run: tau_end precedes the current time");
    if (!(opt.observe_every > 0.0))
        throw ValidationError("run: observe_every must be positive");

    RunResult res;
    res.v_min = state.v.minCoeff();
    res.v_max = state.v.maxCoeff();
    const double tau0 = state.tau;
    const double span = opt.tau_end - tau0;
    // tolerance for landing on observation times
    const double eps = 1e-12 * std::max(1.0, std::abs(opt.tau_end));

    if (span <= 0.0) {
        res.state = std::move(state);
        return res;
    }

    long next_obs = 1;
    auto next_target = [&]() {
        const double t = tau0 + static_cast<double>(next_obs) * opt.observe_every;
        return std::isfinite(t) && t < opt.tau_end - eps ? t : opt.tau_end;
    };

    double target = next_target();
    while (true) {
        double dt = std::min(cfl_limit(state, opt.cfl), opt.dtau_max);
        const double remaining = target - state.tau;
        bool lands = false;
        if (dt >= remaining - eps) {
            dt = remaining;
            lands = true;
        }
        if (dt < opt.dtau_min && !lands) {
            std::ostringstream msg;
            msg << "run: time step " << dt << " below floor at tau=" << state.tau;
            throw NumericalError(msg.str());
        }
        try {
            advance(state, dt);
        } catch (const NumericalError& e) {
            std::ostringstream msg;
            msg << e.what() << " (run failed at tau=" << state.tau << ")";
            throw NumericalError(msg.str());
        }
        if (lands)
            state.tau = target;
        ++res.steps;
        res.v_min = std::min(res.v_min, state.v.minCoeff());
        res.v_max = std::max(res.v_max, state.v.maxCoeff());

        if (lands) {
            res.observed.push_back(state.tau);
            if (observer)
                observer(state);
            if (target >= opt.tau_end)
                break;
            ++next_obs;
            target = next_target();
        }
    }
    res.state = std::move(state);
    return res;
}

} // namespace viscoshock
