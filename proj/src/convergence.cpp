#include "viscoshock/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace viscoshock {

OmegaSpec OmegaSpec::make(double h, double T, int x_samples, int t_samples, double x_extent)
{
    if (!(h > 0.0) || !(T > h))
        throw ValidationError("omega: need 0 < h < T");
    if (x_samples < 2 || t_samples < 2)
        throw ValidationError("omega: need at least 2 samples in x and t");
    if (!(x_extent >= 0.0))
        throw ValidationError("omega: x_extent must be non-negative");
    return OmegaSpec{h, T, x_samples, t_samples, x_extent};
}

std::vector<double> OmegaSpec::times() const
{
    std::vector<double> t(t_samples);
    for (int k = 0; k < t_samples; ++k)
        t[k] = h + (T - h) * k / (t_samples - 1);
    t.back() = T;
    return t;
}

std::vector<double> OmegaSpec::offsets() const
{
    std::vector<double> out;
    out.reserve(2 * x_samples);
    for (int k = x_samples - 1; k >= 0; --k)
        out.push_back(-(h + x_extent * k / (x_samples - 1)));
    for (int k = 0; k < x_samples; ++k)
        out.push_back(h + x_extent * k / (x_samples - 1));
    return out;
}

double profile_only_error(const ViscousProfile& profile, double h)
{
    const ShockData& sh = profile.shock();
    const double speed = std::abs(sh.s);
    // |V - v-| + |U - u-| = (1 + |s|) (v- - V) on the left, likewise on the right
    const double left = (1.0 + speed) * profile.eval_tail_distance(-h);
    const double right = (1.0 + speed) * profile.eval_tail_distance(h);
    return std::max(left, right);
}

double profile_only_error(const ShockData& shock, double alpha, const PressureLaw& law, const OmegaSpec& omega)
{
    ProfileOptions opt;
    opt.tol = 1e-12;
    return profile_only_error(compute_profile(shock, alpha, law, opt), omega.h);
}

namespace {

// linear interpolation of a sampled field at y
double sample(const Eigen::VectorXd& f, double y0, double dy, double y)
{
    const Eigen::Index n = f.size();
    double t = (y - y0) / dy;
    Eigen::Index k = static_cast<Eigen::Index>(std::floor(t));
    k = std::clamp<Eigen::Index>(k, 0, n - 2);
    t -= static_cast<double>(k);
    return (1.0 - t) * f(k) + t * f(k + 1);
}

} // namespace

FullErrorResult full_error(const ShockData& shock, double alpha, const PressureLaw& law, const OmegaSpec& omega,
                           const SolverConfig& solver)
{
    if (!(solver.cells_per_width >= 20.0))
        throw ValidationError("full_error: need at least 20 cells per profile width");
    const ViscousProfile profile = compute_profile(shock, alpha, law);

    FullErrorResult res;
    res.tau_end = omega.T / alpha;
    if (res.tau_end > solver.tau_max) {
        res.tau_end = solver.tau_max;
        res.capped = true;
    }

    const TailRates r = tail_rates(shock, alpha, law);
    const double slowest_y = alpha * std::min(r.minus, -r.plus);
    const double margin = (std::log(1e8) + 4.0) / slowest_y;
    const double reach = (omega.h + omega.x_extent) / alpha;
    const double y_max = reach + margin;
    const double y_min = shock.s * res.tau_end - reach - margin;

    const double thickness = shock.delta / (alpha * profile.dV().cwiseAbs().maxCoeff());
    const double dy_target = thickness / solver.cells_per_width;
    const int n_cells = std::max(16, static_cast<int>(std::ceil((y_max - y_min) / dy_target)));
    const Grid1D grid = Grid1D::make(y_min, y_max, n_cells);
    res.n_cells = n_cells;
    res.dy = grid.dy();

    SolverState state = init_state(profile, grid);
    EnergyAccumulators acc;
    (void)energy_snapshot(state, profile, acc);
    const double N_limit = std::pow(shock.delta, 0.25);
    res.v_min = state.v.minCoeff();
    res.v_max = state.v.maxCoeff();
    res.N_ok = true;

    const std::vector<double> offsets = omega.offsets();
    RunOptions ro;
    ro.cfl = solver.cfl;
    for (double t : omega.times()) {
        const double tau = t / alpha;
        if (tau > res.tau_end * (1.0 + 1e-12))
            break;
        ro.tau_end = tau;
        RunResult rr = run(std::move(state), ro);
        state = std::move(rr.state);
        res.steps += rr.steps;
        res.v_min = std::min(res.v_min, rr.v_min);
        res.v_max = std::max(res.v_max, rr.v_max);

        const EnergyRow row = energy_snapshot(state, profile, acc);
        res.N_max = std::max(res.N_max, row.N);
        res.N_ok = res.N_ok && row.N <= N_limit;

        for (double xi : offsets) {
            const double y = shock.s * state.tau + xi / alpha;
            const double v = sample(state.v, grid.y_min + 0.5 * grid.dy(), grid.dy(), y);
            const double u = sample(state.u, grid.y_min, grid.dy(), y);
            const State ref = riemann_shock_eval(shock, alpha * y, alpha * state.tau);
            res.error = std::max(res.error, std::abs(v - ref.v) + std::abs(u - ref.u));
        }
    }
    res.window_ok = res.v_min >= 0.25 * shock.v_plus && res.v_max <= 2.0 * shock.v_plus;
    return res;
}

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    LineFit fit;
    if (n < 2 || y.size() != n)
        return fit;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return fit;
}

namespace {

void run_tasks(std::vector<std::function<void()>>& tasks, int jobs)
{
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
    if (jobs == 1) {
        for (auto& t : tasks)
            t();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < tasks.size(); i = next++)
                tasks[i]();
        });
    for (auto& th : pool)
        th.join();
}

} // namespace

SweepResult alpha_sweep(const SweepConfig& cfg)
{
    const auto& a = cfg.alphas;
    if (a.size() < 3)
        throw ValidationError("alpha_sweep: need at least 3 alpha values");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0))
            throw ValidationError("alpha_sweep: alphas must be positive");
        if (i > 0 && !(a[i] < a[i - 1]))
            throw ValidationError("alpha_sweep: alphas must be strictly decreasing");
    }

    const std::size_t m = a.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    SweepResult res;
    res.alphas = a;
    res.E_profile.assign(m, nan);
    res.E_full.assign(m, nan);
    res.capped.assign(m, false);
    res.errors.assign(m, "");
    res.details.assign(m, FullErrorResult{});
    res.scheme_floor = nan;
    std::vector<char> capped(m, 0);
    FullErrorResult fine;
    std::string fine_error;

    std::vector<std::function<void()>> tasks;
    for (std::size_t i = 0; i < m; ++i) {
        tasks.emplace_back([&, i] {
            try {
                res.E_profile[i] = profile_only_error(cfg.shock, a[i], cfg.law, cfg.omega);
                if (cfg.full) {
                    res.details[i] = full_error(cfg.shock, a[i], cfg.law, cfg.omega, cfg.solver);
                    res.E_full[i] = res.details[i].error;
                    capped[i] = res.details[i].capped;
                }
            } catch (const std::exception& e) {
                res.errors[i] = e.what();
            }
        });
    }
    if (cfg.full && cfg.measure_floor) {
        tasks.emplace_back([&] {
            try {
                SolverConfig finer = cfg.solver;
                finer.cells_per_width *= 2.0;
                fine = full_error(cfg.shock, a.back(), cfg.law, cfg.omega, finer);
            } catch (const std::exception& e) {
                fine_error = e.what();
            }
        });
    }
    run_tasks(tasks, cfg.jobs);
    for (std::size_t i = 0; i < m; ++i)
        res.capped[i] = capped[i] != 0;

    std::vector<double> x, y;
    bool monotone = true;
    for (std::size_t i = 0; i < m; ++i) {
        if (!(res.E_profile[i] > 0.0)) {
            monotone = false;
            continue;
        }
        x.push_back(1.0 / a[i]);
        y.push_back(std::log(res.E_profile[i]));
        if (i > 0)
            monotone = monotone && res.E_profile[i] < res.E_profile[i - 1];
    }
    res.monotone_flag = monotone;
    const LineFit fit = least_squares_line(x, y);
    res.c_fit = -fit.slope;
    res.C_fit = std::exp(fit.intercept);
    res.r_squared = fit.r_squared;

    if (cfg.full && cfg.measure_floor && fine_error.empty() && std::isfinite(res.E_full[m - 1]))
        res.scheme_floor = 2.0 * std::abs(res.E_full[m - 1] - fine.error);
    if (cfg.full) {
        bool ok = true;
        for (std::size_t i = 1; i < m; ++i) {
            const bool down = res.E_full[i] < res.E_full[i - 1];
            const bool at_floor = std::isfinite(res.scheme_floor) &&
                                  std::abs(res.E_full[i] - res.E_profile[i]) <= res.scheme_floor;
            ok = ok && (down || at_floor);
        }
        res.full_monotone_until_floor = ok;
    }
    return res;
}

} // namespace viscoshock
