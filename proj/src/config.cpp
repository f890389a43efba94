#include "bilgamma/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace bilgamma {

namespace {

std::string trim(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& key, const std::string& v)
{
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw DomainError("config: value for '" + key + "' is not a number: '" + v + "'");
    return x;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v)
{
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw DomainError("config: value for '" + key + "' is not an unsigned integer: '" + v + "'");
    return static_cast<std::uint64_t>(x);
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    throw DomainError("config: value for '" + key + "' is not a boolean: '" + v + "'");
}

} // namespace

RunConfig parse_config_text(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config: line " + std::to_string(lineno) +
                              " is not of the form key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw DomainError("config: line " + std::to_string(lineno) +
                              " has an empty key or value");
        if (kv.count(key))
            throw DomainError("config: duplicate key '" + key + "'");
        kv[key] = val;
    }

    auto take = [&](const char* key) -> std::optional<std::string> {
        const auto it = kv.find(key);
        if (it == kv.end())
            return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto require_number = [&](const char* key) {
        const auto v = take(key);
        if (!v)
            throw DomainError(std::string("config: missing required key '") + key + "'");
        return parse_number(key, *v);
    };

    const double ap = require_number("alpha_plus");
    const double lp = require_number("lambda_plus");
    const double am = require_number("alpha_minus");
    const double lm = require_number("lambda_minus");
    const double r = require_number("r");
    const double q = require_number("q");
    const double s0 = require_number("s0");

    SolverSettings solver;
    if (auto v = take("solver.root_tol"))
        solver.root_tol = parse_number("solver.root_tol", *v);
    if (auto v = take("solver.quad_rel_tol"))
        solver.quad_rel_tol = parse_number("solver.quad_rel_tol", *v);
    if (auto v = take("solver.max_bracket_expansions"))
        solver.max_bracket_expansions =
            static_cast<int>(parse_uint("solver.max_bracket_expansions", *v));
    if (auto v = take("solver.boundary_offset"))
        solver.boundary_offset = parse_number("solver.boundary_offset", *v);

    ContourSettings contour;
    if (auto v = take("contour.nu"))
        contour.nu = parse_number("contour.nu", *v);
    if (auto v = take("contour.abs_tol"))
        contour.abs_tol = parse_number("contour.abs_tol", *v);
    if (auto v = take("contour.rel_tol"))
        contour.rel_tol = parse_number("contour.rel_tol", *v);
    if (auto v = take("contour.max_truncation"))
        contour.max_truncation = parse_number("contour.max_truncation", *v);
    if (auto v = take("contour.panel_growth"))
        contour.panel_growth = parse_number("contour.panel_growth", *v);

    mc::SimConfig sim;
    if (auto v = take("sim.n_samples"))
        sim.n_samples = parse_uint("sim.n_samples", *v);
    if (auto v = take("sim.seed"))
        sim.seed = parse_uint("sim.seed", *v);
    if (auto v = take("sim.antithetic"))
        sim.antithetic = parse_bool("sim.antithetic", *v);

    if (!kv.empty())
        throw DomainError("config: unknown key '" + kv.begin()->first + "'");

    return RunConfig{BilateralGammaParams{ap, lp, am, lm}, MarketParams{r, q, s0},
                     solver, contour, sim};
}

RunConfig parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace bilgamma
