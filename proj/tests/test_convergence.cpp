#include <doctest.h>

#include <cmath>
#include <vector>

#include "viscoshock/convergence.hpp"
#include "viscoshock/errors.hpp"
#include "viscoshock/io.hpp"

using namespace viscoshock;

namespace {

const PressureLaw law2 = PressureLaw::make(2.0);
const ShockData shock02 = build_shock(1.2, 1.0, 0.0, law2);

std::vector<double> log_errors(const std::vector<double>& alphas, const OmegaSpec& omega)
{
    std::vector<double> out;
    for (double a : alphas)
        out.push_back(std::log(profile_only_error(shock02, a, law2, omega)));
    return out;
}

std::vector<double> inverses(const std::vector<double>& alphas)
{
    std::vector<double> out;
    for (double a : alphas)
        out.push_back(1.0 / a);
    return out;
}

std::string sweep_rows(const SweepResult& r)
{
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < r.alphas.size(); ++i)
        rows.push_back({r.alphas[i], r.E_profile[i], r.E_full[i], r.capped[i] ? 1.0 : 0.0});
    return csv_text({"alpha", "E_profile", "E_full", "capped"}, rows);
}

} // namespace

TEST_CASE("Omega lattice stays inside the region")
{
    const auto om = OmegaSpec::make(1.0, 2.0, 41, 5, 1.0);
    for (double t : om.times()) {
        CHECK(t >= om.h);
        CHECK(t <= om.T);
    }
    CHECK(om.times().front() == 1.0);
    CHECK(om.times().back() == 2.0);
    for (double x : om.offsets())
        CHECK(std::abs(x) >= om.h);
    CHECK(om.offsets().size() == 82);

    CHECK_THROWS_AS(OmegaSpec::make(2.0, 2.0, 41, 5, 1.0), ValidationError);
    CHECK_THROWS_AS(OmegaSpec::make(0.0, 2.0, 41, 5, 1.0), ValidationError);
    CHECK_THROWS_AS(OmegaSpec::make(1.0, 2.0, 1, 5, 1.0), ValidationError);
}

TEST_CASE("profile-only error is the tail distance at the exclusion width")
{
    const auto p = compute_profile(shock02, 0.1, law2);
    const double e = profile_only_error(p, 1.0);
    const State l = p.eval(-1.0), r = p.eval(1.0);
    const double direct = std::max(std::abs(l.v - shock02.v_minus) + std::abs(l.u - shock02.u_minus),
                                   std::abs(r.v - shock02.v_plus) + std::abs(r.u - shock02.u_plus));
    CHECK(e == doctest::Approx(direct).epsilon(1e-8));
    // the sup over |xi| >= h sits at the edge
    for (double xi : {1.3, 2.0, 4.0})
        CHECK(profile_only_error(p, xi) < e);
    CHECK(profile_only_error(p, 50.0) <= 1e-12);
}

TEST_CASE("profile-only errors decay exponentially in 1/alpha")
{
    const std::vector<double> alphas{0.4, 0.2, 0.1, 0.05};
    const auto om = OmegaSpec::make(1.0, 2.0, 41, 5, 1.0);
    const auto y = log_errors(alphas, om);
    for (std::size_t i = 1; i < y.size(); ++i)
        CHECK(y[i] < y[i - 1]);
    const auto fit = least_squares_line(inverses(alphas), y);
    CHECK(fit.slope < 0.0);
    CHECK(fit.r_squared >= 0.99);

    // the slope is about -h times the tail rate at unit alpha, so it doubles with h
    const auto fit2 = least_squares_line(inverses(alphas), log_errors(alphas, OmegaSpec::make(2.0, 4.0, 41, 5, 1.0)));
    CHECK(fit2.slope / fit.slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("profile-only error under a change of normalization")
{
    ProfileOptions opt;
    const auto p1 = compute_profile(shock02, 0.1, law2, opt);
    opt.anchor = shock02.v_plus + 0.3 * shock02.delta;
    const auto p2 = compute_profile(shock02, 0.1, law2, opt);
    double lo = -1.0, hi = 1.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (p1.eval(mid).v > *opt.anchor ? lo : hi) = mid;
    }
    const double shift = std::abs(0.5 * (lo + hi));
    const double h = 1.0;
    const double gap = std::abs(profile_only_error(p2, h) - profile_only_error(p1, h));
    CHECK(gap <= profile_only_error(p1, h - shift) - profile_only_error(p1, h + shift));
}

TEST_CASE("least squares line")
{
    const auto fit = least_squares_line({1, 2, 3, 4}, {3, 5, 7, 9});
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
    CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("sweep preconditions")
{
    SweepConfig sc;
    sc.shock = shock02;
    sc.law = law2;
    sc.full = false;
    sc.alphas = {0.1};
    CHECK_THROWS_AS(alpha_sweep(sc), ValidationError);
    sc.alphas = {0.4, 0.2, 0.2};
    CHECK_THROWS_AS(alpha_sweep(sc), ValidationError);
    sc.alphas = {0.1, 0.2, 0.4};
    CHECK_THROWS_AS(alpha_sweep(sc), ValidationError);
    sc.alphas = {0.4, 0.2, 0.1};
    const auto r = alpha_sweep(sc);
    CHECK(r.monotone_flag);
    CHECK(std::isnan(r.E_full[0]));
}

TEST_CASE("serial and concurrent sweeps agree bit for bit")
{
    SweepConfig sc;
    sc.shock = shock02;
    sc.law = law2;
    sc.alphas = {0.4, 0.2, 0.1};
    sc.measure_floor = false;
    sc.jobs = 1;
    const auto serial = alpha_sweep(sc);
    sc.jobs = 3;
    const auto parallel = alpha_sweep(sc);
    CHECK(sweep_rows(serial) == sweep_rows(parallel));

    for (std::size_t i = 0; i < serial.alphas.size(); ++i) {
        CHECK(serial.errors[i].empty());
        // the solver only adds error on top of the profile tails
        CHECK(serial.E_full[i] >= serial.E_profile[i] - 1e-4);
        CHECK(serial.details[i].window_ok);
        CHECK(serial.details[i].N_ok);
    }
    CHECK(serial.E_full.back() < serial.E_full.front());
}
