#include "viscoshock/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace viscoshock {

ProfileOptions RunConfig::profile_options() const
{
    ProfileOptions opt;
    opt.tol = tol;
    opt.span = span;
    opt.n = n;
    return opt;
}

RunOptions RunConfig::run_options() const
{
    RunOptions opt;
    opt.tau_end = tau_end;
    opt.observe_every = observe_every;
    opt.cfl = cfl;
    opt.dtau_max = dtau_max;
    if (dtau_per_dy2 > 0.0) {
        const double dy = (y_max - y_min) / n_cells;
        opt.dtau_max = std::min(opt.dtau_max, dtau_per_dy2 * dy * dy);
    }
    return opt;
}

SolverConfig RunConfig::solver_config() const
{
    SolverConfig s;
    s.cells_per_width = cells_per_width;
    s.cfl = cfl;
    s.tau_max = tau_max;
    return s;
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, std::string_view value, const char* what)
{
    std::ostringstream msg;
    msg << "invalid value for " << key << ": '" << value << "' (" << what << ")";
    throw ValidationError(msg.str());
}

double to_real(const std::string& key, std::string_view value)
{
    if (value == "inf")
        return std::numeric_limits<double>::infinity();
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out))
        bad_value(key, value, "expected a finite real number");
    return out;
}

int to_int(const std::string& key, std::string_view value)
{
    int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        bad_value(key, value, "expected an integer");
    return out;
}

bool to_bool(const std::string& key, std::string_view value)
{
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    bad_value(key, value, "expected true or false");
}

std::vector<double> to_list(const std::string& key, std::string_view value)
{
    std::vector<double> out;
    while (!value.empty()) {
        const auto comma = value.find(',');
        out.push_back(to_real(key, trim(value.substr(0, comma))));
        if (comma == std::string_view::npos)
            break;
        value.remove_prefix(comma + 1);
    }
    if (out.empty())
        bad_value(key, value, "expected a comma-separated list");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, std::string_view)>;

template <typename T>
Setter real_key(T RunConfig::*field)
{
    return [field](RunConfig& c, const std::string& k, std::string_view v) { c.*field = to_real(k, v); };
}

Setter int_key(int RunConfig::*field)
{
    return [field](RunConfig& c, const std::string& k, std::string_view v) { c.*field = to_int(k, v); };
}

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"gamma", real_key(&RunConfig::gamma)},
        {"v_minus", real_key(&RunConfig::v_minus)},
        {"v_plus", real_key(&RunConfig::v_plus)},
        {"u_minus", real_key(&RunConfig::u_minus)},
        {"alpha", real_key(&RunConfig::alpha)},
        {"y_min", real_key(&RunConfig::y_min)},
        {"y_max", real_key(&RunConfig::y_max)},
        {"n_cells", int_key(&RunConfig::n_cells)},
        {"cfl", real_key(&RunConfig::cfl)},
        {"tau_end", real_key(&RunConfig::tau_end)},
        {"observe_every", real_key(&RunConfig::observe_every)},
        {"dtau_max", real_key(&RunConfig::dtau_max)},
        {"dtau_per_dy2", real_key(&RunConfig::dtau_per_dy2)},
        {"tol", real_key(&RunConfig::tol)},
        {"span", real_key(&RunConfig::span)},
        {"n", int_key(&RunConfig::n)},
        {"bump_amplitude", real_key(&RunConfig::bump_amplitude)},
        {"bump_center", real_key(&RunConfig::bump_center)},
        {"bump_width", real_key(&RunConfig::bump_width)},
        {"alphas", [](RunConfig& c, const std::string& k, std::string_view v) { c.alphas = to_list(k, v); }},
        {"h", real_key(&RunConfig::h)},
        {"T", real_key(&RunConfig::T)},
        {"x_samples", int_key(&RunConfig::x_samples)},
        {"t_samples", int_key(&RunConfig::t_samples)},
        {"x_extent", real_key(&RunConfig::x_extent)},
        {"cells_per_width", real_key(&RunConfig::cells_per_width)},
        {"tau_max", real_key(&RunConfig::tau_max)},
        {"deterministic",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.deterministic = to_bool(k, v); }},
    };
    return table;
}

[[noreturn]] void range_error(const char* key, const std::string& constraint)
{
    throw ValidationError(std::string("config: ") + key + " violates " + constraint);
}

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : setters())
            k.push_back(name);
        return k;
    }();
    return keys;
}

void validate(const RunConfig& c)
{
    if (!(c.gamma >= 1.0))
        range_error("gamma", "gamma >= 1");
    if (!(c.v_plus > 0.0))
        range_error("v_plus", "v_plus > 0");
    if (!(c.v_minus > c.v_plus))
        range_error("v_plus", "the 1-shock ordering v_minus > v_plus > 0");
    if (!(c.alpha > 0.0))
        range_error("alpha", "alpha > 0");
    if (!(c.y_min < c.y_max))
        range_error("y_min", "y_min < y_max");
    if (c.n_cells < 16)
        range_error("n_cells", "n_cells >= 16");
    if (!(c.cfl > 0.0 && c.cfl <= 1.0))
        range_error("cfl", "0 < cfl <= 1");
    if (!(c.tau_end >= 0.0))
        range_error("tau_end", "tau_end >= 0");
    if (!(c.observe_every > 0.0))
        range_error("observe_every", "observe_every > 0");
    if (!(c.dtau_max > 0.0))
        range_error("dtau_max", "dtau_max > 0");
    if (!(c.dtau_per_dy2 >= 0.0 && std::isfinite(c.dtau_per_dy2)))
        range_error("dtau_per_dy2", "0 <= dtau_per_dy2 < inf (0 disables the cap)");
    if (!(c.tol > 0.0 && c.tol < 1e-2))
        range_error("tol", "0 < tol < 1e-2");
    if (!(c.span >= 0.0))
        range_error("span", "span >= 0 (0 selects an automatic span)");
    if (c.n < 5)
        range_error("n", "n >= 5");
    if (!(std::abs(c.bump_amplitude) <= 0.1))
        range_error("bump_amplitude", "|bump_amplitude| <= 0.1");
    if (!(c.bump_width > 0.0))
        range_error("bump_width", "bump_width > 0");
    if (c.alphas.size() < 3)
        range_error("alphas", "at least 3 values");
    for (std::size_t i = 0; i < c.alphas.size(); ++i) {
        if (!(c.alphas[i] > 0.0))
            range_error("alphas", "alpha > 0");
        if (i > 0 && !(c.alphas[i] < c.alphas[i - 1]))
            range_error("alphas", "strictly decreasing order");
    }
    if (!(c.h > 0.0))
        range_error("h", "h > 0");
    if (!(c.T > c.h))
        range_error("T", "T > h");
    if (c.x_samples < 2)
        range_error("x_samples", "x_samples >= 2");
    if (c.t_samples < 2)
        range_error("t_samples", "t_samples >= 2");
    if (!(c.x_extent >= 0.0))
        range_error("x_extent", "x_extent >= 0");
    if (!(c.cells_per_width >= 20.0))
        range_error("cells_per_width", "cells_per_width >= 20");
    if (!(c.tau_max > 0.0))
        range_error("tau_max", "tau_max > 0");
    if (!c.deterministic)
        range_error("deterministic", "true (all algorithms are deterministic)");
}

RunConfig parse_config(std::string_view text)
{
    RunConfig cfg;
    int line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end())
            throw ValidationError("unknown key: " + key);
        if (!cfg.explicit_keys.insert(key).second)
            throw ValidationError("duplicate key: " + key);
        if (value.empty())
            bad_value(key, value, "missing value");
        it->second(cfg, key, value);
    }
    // T defaults to 2h when only h is given
    if (!cfg.explicit_keys.count("T"))
        cfg.T = 2.0 * cfg.h;
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace viscoshock
