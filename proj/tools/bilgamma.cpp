#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bilgamma/bgcore.hpp"
#include "bilgamma/checks.hpp"
#include "bilgamma/config.hpp"
#include "bilgamma/hedging.hpp"
#include "bilgamma/io.hpp"

namespace {

using namespace bilgamma;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;      // parse / domain errors
constexpr int kExitNoSolution = 2; // a well-posed problem with no solution

RunConfig load_config(const std::string& path)
{
    RunConfig cfg = parse_config_file(path);
    if (const char* env = std::getenv("BILGAMMA_SEED")) {
        char* end = nullptr;
        const unsigned long long s = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw DomainError("BILGAMMA_SEED is not an unsigned integer");
        cfg.sim.seed = s;
    }
    return cfg;
}

struct Kind {
    std::string name; // esscher | memm | bilateral | p-optimal | mmm
    double pexp = 0.0;
};

Kind parse_kind(const std::string& s)
{
    if (s == "esscher" || s == "memm" || s == "bilateral" || s == "mmm")
        return {s, 0.0};
    const std::string prefix = "p-optimal:";
    if (s.rfind(prefix, 0) == 0) {
        char* end = nullptr;
        const double p = std::strtod(s.c_str() + prefix.size(), &end);
        if (end == s.c_str() + prefix.size() || *end != '\0' || !(p > 1.0))
            throw DomainError("kind: p-optimal exponent must be a number > 1");
        return {"p-optimal", p};
    }
    throw DomainError("kind must be one of esscher|memm|bilateral|p-optimal:<p>|mmm");
}

MeasureSolution solve_kind(const RunConfig& cfg, const Kind& kind)
{
    if (kind.name == "esscher")
        return solve_esscher(cfg.model, cfg.market, cfg.solver);
    if (kind.name == "memm")
        return solve_memm(cfg.model, cfg.market, cfg.solver);
    if (kind.name == "bilateral")
        return solve_bilateral_esscher(cfg.model, cfg.market, cfg.solver);
    if (kind.name == "p-optimal")
        return solve_p_optimal(cfg.model, cfg.market, kind.pexp, cfg.solver);
    return solve_mmm(cfg.model, cfg.market);
}

std::string law_to_string(const RiskNeutralLaw& law)
{
    if (const auto* bg = std::get_if<BilateralGammaParams>(&law)) {
        return "bilateral_gamma(" + format_double(bg->alpha_plus) + ", " +
               format_double(bg->lambda_plus) + "; " + format_double(bg->alpha_minus) +
               "; " + format_double(bg->lambda_minus) + ")";
    }
    if (const auto* cv = std::get_if<ConvolvedLaw>(&law)) {
        std::string out = "convolution[";
        for (std::size_t i = 0; i < cv->components.size(); ++i) {
            const auto& c = cv->components[i];
            if (i)
                out += " * ";
            out += "bilateral_gamma(" + format_double(c.alpha_plus) + ", " +
                   format_double(c.lambda_plus) + "; " + format_double(c.alpha_minus) +
                   ", " + format_double(c.lambda_minus) + ")";
        }
        return out + "]";
    }
    const auto& tl = std::get<TiltedLevy>(law);
    return "tilted_levy(base = bilateral_gamma(" + format_double(tl.base.alpha_plus) + ", " +
           format_double(tl.base.lambda_plus) + "; " + format_double(tl.base.alpha_minus) +
           ", " + format_double(tl.base.lambda_minus) +
           "), theta = " + format_double(tl.theta) + ")";
}

int cmd_solve(const std::string& config_path, const std::string& kind_str)
{
    const RunConfig cfg = load_config(config_path);
    const Kind kind = parse_kind(kind_str);
    const MeasureSolution sol = solve_kind(cfg, kind);

    std::cout << "kind = " << kind_str << "\n";
    if (const auto* e = std::get_if<EsscherParams>(&sol.scalars)) {
        std::cout << "theta = " << format_double(e->theta) << "\n";
    } else if (const auto* v = std::get_if<MemmParams>(&sol.scalars)) {
        std::cout << "vartheta = " << format_double(v->vartheta) << "\n";
    } else if (const auto* b = std::get_if<BilateralEsscherParams>(&sol.scalars)) {
        std::cout << "theta_plus = " << format_double(b->theta_plus) << "\n"
                  << "theta_minus = " << format_double(b->theta_minus) << "\n";
    } else if (const auto* po = std::get_if<POptimalParams>(&sol.scalars)) {
        std::cout << "p = " << format_double(po->p) << "\n"
                  << "theta_plus = " << format_double(po->theta_plus) << "\n"
                  << "theta_minus = " << format_double(po->theta_minus) << "\n";
    } else if (const auto* mm = std::get_if<MinimalMartingaleParams>(&sol.scalars)) {
        std::cout << "c = " << format_double(mm->c) << "\n";
    }
    std::cout << "law = " << law_to_string(sol.law) << "\n";
    if (sol.objective_value) {
        const char* label = (sol.kind == MeasureKind::POptimal) ? "p_distance" : "entropy";
        std::cout << label << " = " << format_double(*sol.objective_value) << "\n";
    }
    if (sol.kind == MeasureKind::Memm) {
        const auto& tl = std::get<TiltedLevy>(sol.law);
        std::cout << "drift_residual = "
                  << format_double(memm_drift(cfg.model, cfg.market, tl.theta, cfg.solver))
                  << "\n";
    } else {
        std::cout << "martingale_residual = "
                  << format_double(law_martingale_residual(sol.law, cfg.market)) << "\n";
    }
    return kExitOk;
}

int cmd_price(const std::string& config_path, const std::string& kind_str, double strike,
              double maturity, bool put)
{
    if (kind_str == "memm") {
        std::cerr << "no solution: the minimal entropy martingale measure has no "
                     "closed-form characteristic function; pricing under it is "
                     "unsupported\n";
        return kExitNoSolution;
    }
    const RunConfig cfg = load_config(config_path);
    const Kind kind = parse_kind(kind_str);
    const MeasureSolution sol = solve_kind(cfg, kind);
    const OptionSpec opt{strike, maturity, put ? OptionKind::Put : OptionKind::Call};
    ContourDiagnostics diag;
    const double price = lewis_price(sol.law, cfg.market, opt, cfg.contour, &diag);
    std::cout << "kind = " << kind_str << "\n"
              << "option = " << (put ? "put" : "call") << "\n"
              << "strike = " << format_double(strike) << "\n"
              << "maturity = " << format_double(maturity) << "\n"
              << "price = " << format_double(price) << "\n"
              << "nu = " << format_double(diag.nu_used) << "\n"
              << "truncation = " << format_double(diag.truncation) << "\n"
              << "evaluations = " << diag.evaluations << "\n";
    return kExitOk;
}

std::vector<double> parse_grid(const std::string& spec, const char* what)
{
    std::vector<double> out;
    const auto bad = [&] {
        throw DomainError(std::string(what) +
                          ": expected 'start:step:end' or a comma-separated list");
    };
    if (spec.find(':') != std::string::npos) {
        double a, s, b;
        char c1, c2;
        std::istringstream in(spec);
        if (!(in >> a >> c1 >> s >> c2 >> b) || c1 != ':' || c2 != ':' || !(s > 0.0) || b < a)
            bad();
        for (double x = a; x <= b + 1e-9 * s; x += s)
            out.push_back(x);
    } else {
        std::istringstream in(spec);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            char* end = nullptr;
            const double x = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || *end != '\0')
                bad();
            out.push_back(x);
        }
    }
    if (out.empty())
        bad();
    return out;
}

int cmd_surface(const std::string& config_path, const std::string& kind_str,
                const std::string& strikes_spec, const std::string& maturities_spec,
                const std::string& out_path)
{
    if (kind_str == "memm") {
        std::cerr << "no solution: pricing under the minimal entropy martingale measure "
                     "is unsupported\n";
        return kExitNoSolution;
    }
    const RunConfig cfg = load_config(config_path);
    const Kind kind = parse_kind(kind_str);
    const MeasureSolution sol = solve_kind(cfg, kind);
    const auto strikes = parse_grid(strikes_spec, "--strikes");
    const auto maturities = parse_grid(maturities_spec, "--maturities");
    const VolSurface surf =
        vol_surface(sol.law, cfg.market, strikes, maturities, cfg.contour);

    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw DomainError("cannot open output file '" + out_path + "'");
    out << "maturity,strike,price,implied_vol\n";
    for (std::size_t ti = 0; ti < maturities.size(); ++ti)
        for (std::size_t ki = 0; ki < strikes.size(); ++ki)
            out << format_double(maturities[ti]) << ',' << format_double(strikes[ki]) << ','
                << format_double(surf.prices[ti][ki]) << ','
                << format_double(surf.implied_vols[ti][ki]) << '\n';
    std::cout << "wrote " << maturities.size() * strikes.size() << " rows to " << out_path
              << "\n";
    return kExitOk;
}

int cmd_hedge(const std::string& config_path, double strike, double maturity, double t,
              double spot_arg)
{
    const RunConfig cfg = load_config(config_path);
    const MeasureSolution sol = solve_mmm(cfg.model, cfg.market);
    const double c = std::get<MinimalMartingaleParams>(sol.scalars).c;
    const double spot = (spot_arg > 0.0) ? spot_arg : cfg.market.s0;
    const OptionSpec opt{strike, maturity, OptionKind::Call};
    const double delta =
        hedge_delta(cfg.model, c, cfg.market, opt, t, spot, HedgeSettings{}, cfg.contour);
    std::cout << "c = " << format_double(c) << "\n"
              << "strike = " << format_double(strike) << "\n"
              << "maturity = " << format_double(maturity) << "\n"
              << "t = " << format_double(t) << "\n"
              << "spot = " << format_double(spot) << "\n"
              << "delta = " << format_double(delta) << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& config_path)
{
    const RunConfig cfg = load_config(config_path);
    const auto results = run_validation(cfg);
    int failed = 0;
    for (const auto& r : results) {
        const char* tag = r.status == CheckStatus::Pass   ? "PASS"
                          : r.status == CheckStatus::Fail ? "FAIL"
                                                          : "SKIP";
        if (r.status == CheckStatus::Fail)
            ++failed;
        std::printf("[%2d] %-4s %-32s (%9.1f ms)  %s\n", r.id, tag, r.name.c_str(), r.millis,
                    r.detail.c_str());
    }
    if (failed) {
        std::printf("%d check(s) failed\n", failed);
        return kExitInput;
    }
    std::printf("all runnable checks passed\n");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"bilateral Gamma stock-model pricing toolkit"};
    app.require_subcommand(1);

    std::string config_path, kind = "bilateral";
    double strike = 0.0, maturity = 0.0, tval = 0.0, spot = 0.0;
    bool put = false;
    std::string strikes_spec = "4000:250:6000";
    std::string maturities_spec = "0.25,0.5,1,2";
    std::string out_path = "surface.csv";

    auto* solve = app.add_subcommand("solve", "solve for a martingale measure");
    solve->add_option("--config", config_path, "configuration file")->required();
    solve->add_option("--kind", kind, "esscher|memm|bilateral|p-optimal:<p>|mmm")->required();

    auto* price = app.add_subcommand("price", "price a European option");
    price->add_option("--config", config_path)->required();
    price->add_option("--kind", kind)->required();
    price->add_option("--strike", strike)->required();
    price->add_option("--maturity", maturity)->required();
    price->add_flag("--put", put, "price a put (default call)");

    auto* surface = app.add_subcommand("surface", "write a price / implied-vol grid as CSV");
    surface->add_option("--config", config_path)->required();
    surface->add_option("--kind", kind);
    surface->add_option("--strikes", strikes_spec, "start:step:end or comma list");
    surface->add_option("--maturities", maturities_spec, "start:step:end or comma list");
    surface->add_option("--out", out_path)->required();

    auto* hedge = app.add_subcommand("hedge", "quadratic-hedging delta under the minimal martingale measure");
    hedge->add_option("--config", config_path)->required();
    hedge->add_option("--strike", strike)->required();
    hedge->add_option("--maturity", maturity)->required();
    hedge->add_option("--time", tval, "valuation time in [0, maturity)");
    hedge->add_option("--spot", spot, "spot override (default s0)");

    auto* validate = app.add_subcommand("validate", "run the validation battery");
    validate->add_option("--config", config_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (solve->parsed())
            return cmd_solve(config_path, kind);
        if (price->parsed())
            return cmd_price(config_path, kind, strike, maturity, put);
        if (surface->parsed())
            return cmd_surface(config_path, kind, strikes_spec, maturities_spec, out_path);
        if (hedge->parsed())
            return cmd_hedge(config_path, strike, maturity, tval, spot);
        if (validate->parsed())
            return cmd_validate(config_path);
    } catch (const NoSolutionError& e) {
        std::cerr << "no solution: " << e.what() << "\n";
        return kExitNoSolution;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
