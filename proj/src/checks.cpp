#include "bilgamma/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "bilgamma/bgcore.hpp"
#include "bilgamma/hedging.hpp"
#include "bilgamma/numerics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bilgamma {

namespace {

struct SkipCheck {
    std::string reason;
};

[[noreturn]] void fail(const std::string& msg) { throw NumericError(msg); }

void expect(bool ok, const std::string& msg)
{
    if (!ok)
        fail(msg);
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

// the calibrated reference parameter set all golden-value checks are tied to
bool ref_params(const RunConfig& c)
{
    return near(c.model.alpha_plus, 1.55) && near(c.model.lambda_plus, 133.96) &&
           near(c.model.alpha_minus, 0.94) && near(c.model.lambda_minus, 88.92) &&
           near(c.market.s0, 5000.0);
}

bool ref_config(const RunConfig& c)
{
    return ref_params(c) && c.market.r == 0.0 && c.market.q == 0.0;
}

// market used for the minimal-martingale checks: the reference set keeps its
// published rate bump; otherwise pick the rate putting c at -1/2, when legal
MarketParams mmm_market(const RunConfig& cfg)
{
    if (ref_params(cfg))
        return {0.0012, 0.0, cfg.market.s0};
    const auto& p = cfg.model;
    if (!(p.lambda_plus > 2.0))
        throw SkipCheck{"lambda_plus <= 2: no minimal-martingale constant"};
    const double psi1 = cumulant(p, 1.0);
    const double denom = cumulant(p, 2.0) - 2.0 * psi1;
    const double r = cfg.market.q + psi1 + 0.5 * denom;
    if (!(r >= cfg.market.q))
        throw SkipCheck{"no admissible rate puts c inside [-1, 0]"};
    return {r, cfg.market.q, cfg.market.s0};
}

template <typename F>
CheckResult run_check(int id, const char* name, F&& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r{id, name, CheckStatus::Pass, "", 0.0};
    try {
        r.detail = body();
    } catch (const SkipCheck& s) {
        r.status = CheckStatus::Skip;
        r.detail = s.reason;
    } catch (const std::exception& e) {
        r.status = CheckStatus::Fail;
        r.detail = e.what();
    }
    r.millis = std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
    return r;
}

double timed_ms(const std::function<void()>& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

// ---------------------------------------------------------------------------

std::string check_esscher(const RunConfig& cfg)
{
    if (!ref_config(cfg))
        throw SkipCheck{"reference-value check requires the calibrated parameter set with r = q = 0"};
    if (!(cfg.model.lambda_plus + cfg.model.lambda_minus > 1.0))
        throw SkipCheck{"lambda_plus + lambda_minus <= 1: Esscher transform does not exist"};
    MeasureSolution sol{MeasureKind::Esscher, EsscherParams{0}, cfg.model, 0.0};
    const double ms = timed_ms([&] { sol = solve_esscher(cfg.model, cfg.market, cfg.solver); });
    const double theta = std::get<EsscherParams>(sol.scalars).theta;
    const auto& law = std::get<BilateralGammaParams>(sol.law);
    expect(std::abs(theta - (-5.28)) < 0.005, "theta = " + fmt(theta) + " not within -5.28 +- 0.005");
    expect(std::abs(law.lambda_plus - 139.24) < 0.01 && std::abs(law.lambda_minus - 83.64) < 0.01,
           "transformed rates (" + fmt(law.lambda_plus) + ", " + fmt(law.lambda_minus) +
               ") not within 0.01 of (139.24, 83.64)");
    expect(std::abs(*sol.objective_value - 0.00294113) < 5e-6,
           "entropy " + fmt(*sol.objective_value) + " not within 5e-6 of 0.00294113");
    expect(ms < 100.0, "runtime " + fmt(ms) + " ms exceeds 100 ms");
    return "theta = " + fmt(theta) + ", law (1.55, " + fmt(law.lambda_plus) + "; 0.94, " +
           fmt(law.lambda_minus) + "), entropy = " + fmt(*sol.objective_value) + ", " +
           fmt(ms) + " ms";
}

std::string check_memm(const RunConfig& cfg)
{
    if (!ref_config(cfg))
        throw SkipCheck{"reference-value check requires the calibrated parameter set with r = q = 0"};
    MeasureSolution sol{MeasureKind::Memm, MemmParams{0}, cfg.model, 0.0};
    const double ms = timed_ms([&] { sol = solve_memm(cfg.model, cfg.market, cfg.solver); });
    const double vt = std::get<MemmParams>(sol.scalars).vartheta;
    expect(std::abs(vt - (-5.30)) < 0.005, "vartheta = " + fmt(vt) + " not within -5.30 +- 0.005");
    expect(std::abs(*sol.objective_value - 0.00294091) < 5e-6,
           "entropy " + fmt(*sol.objective_value) + " not within 5e-6 of 0.00294091");
    expect(ms < 2000.0, "runtime " + fmt(ms) + " ms exceeds 2000 ms");
    return "vartheta = " + fmt(vt) + ", entropy = " + fmt(*sol.objective_value) + ", " +
           fmt(ms) + " ms";
}

std::string check_bilateral(const RunConfig& cfg)
{
    if (!ref_config(cfg))
        throw SkipCheck{"reference-value check requires the calibrated parameter set with r = q = 0"};
    MeasureSolution sol{MeasureKind::BilateralEsscher, BilateralEsscherParams{0, 0}, cfg.model, 0.0};
    const double ms =
        timed_ms([&] { sol = solve_bilateral_esscher(cfg.model, cfg.market, cfg.solver); });
    const double theta = std::get<BilateralEsscherParams>(sol.scalars).theta_plus;
    const auto& law = std::get<BilateralGammaParams>(sol.law);
    expect(std::abs(theta - (-5.34)) < 0.005, "theta = " + fmt(theta) + " not within -5.34 +- 0.005");
    expect(std::abs(law.lambda_plus - 139.30) < 0.01 && std::abs(law.lambda_minus - 83.68) < 0.01,
           "transformed rates (" + fmt(law.lambda_plus) + ", " + fmt(law.lambda_minus) +
               ") not within 0.01 of (139.30, 83.68)");
    expect(std::abs(*sol.objective_value - 0.00294107) < 5e-6,
           "entropy " + fmt(*sol.objective_value) + " not within 5e-6 of 0.00294107");
    expect(ms < 500.0, "runtime " + fmt(ms) + " ms exceeds 500 ms");
    return "theta = " + fmt(theta) + ", law (1.55, " + fmt(law.lambda_plus) + "; 0.94, " +
           fmt(law.lambda_minus) + "), entropy = " + fmt(*sol.objective_value) + ", " +
           fmt(ms) + " ms";
}

std::string check_p_optimal(const RunConfig& cfg)
{
    if (!ref_config(cfg))
        throw SkipCheck{"reference-value check requires the calibrated parameter set with r = q = 0"};
    const auto bil = solve_bilateral_esscher(cfg.model, cfg.market, cfg.solver);
    const double theta_star = std::get<BilateralEsscherParams>(bil.scalars).theta_plus;
    const double pexps[] = {2.0, 1.5, 1.1, 1.01};
    double prev_gap = std::numeric_limits<double>::infinity();
    double theta2 = 0.0, theta101 = 0.0;
    std::ostringstream seq;
    for (double pe : pexps) {
        const auto sol = solve_p_optimal(cfg.model, cfg.market, pe, cfg.solver);
        const double th = std::get<POptimalParams>(sol.scalars).theta_plus;
        if (pe == 2.0)
            theta2 = th;
        if (pe == 1.01)
            theta101 = th;
        const double gap = std::abs(th - theta_star);
        expect(gap < prev_gap + 1e-12,
               "theta_p sequence not monotone in |theta_p - theta| at p = " + fmt(pe));
        prev_gap = gap;
        seq << " theta_" << pe << " = " << fmt(th);
    }
    expect(std::abs(theta2 - (-5.68)) < 0.005,
           "theta_2 = " + fmt(theta2) + " not within -5.68 +- 0.005");
    expect(std::abs(theta101 - theta_star) < 0.05,
           "|theta_1.01 - theta| = " + fmt(std::abs(theta101 - theta_star)) + " not < 0.05");
    return seq.str() + " (theta = " + fmt(theta_star) + ")";
}

std::string check_entropy_ordering(const RunConfig& cfg)
{
    double h_ess, h_bil, h_memm;
    try {
        h_ess = *solve_esscher(cfg.model, cfg.market, cfg.solver).objective_value;
        h_memm = *solve_memm(cfg.model, cfg.market, cfg.solver).objective_value;
        h_bil = *solve_bilateral_esscher(cfg.model, cfg.market, cfg.solver).objective_value;
    } catch (const NoSolutionError& e) {
        throw SkipCheck{std::string("a required measure does not exist: ") + e.what()};
    }
    expect(h_memm <= h_bil + 1e-12 && h_bil <= h_ess + 1e-12,
           "ordering violated: memm = " + fmt(h_memm) + ", bilateral = " + fmt(h_bil) +
               ", esscher = " + fmt(h_ess));
    return "memm " + fmt(h_memm) + " <= bilateral " + fmt(h_bil) + " <= esscher " + fmt(h_ess);
}

std::string check_fixed_point(const RunConfig& cfg)
{
    double worst = 0.0;
    if (cfg.model.lambda_plus + cfg.model.lambda_minus > 1.0) {
        const auto sol = solve_esscher(cfg.model, cfg.market, cfg.solver);
        const double direct = std::get<EsscherParams>(sol.scalars).theta;
        const double fp = esscher_via_fixed_point(cfg.model, cfg.market, cfg.solver);
        worst = std::abs(direct - fp);
        expect(worst < 1e-10, "configured parameters: |direct - fixed point| = " + fmt(worst));
    }
    std::mt19937 gen(20240810u);
    auto logu = [&](double lo, double hi) {
        std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
        return std::exp(d(gen));
    };
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        double lp, lm;
        do {
            lp = logu(0.35, 150.0);
            lm = logu(0.35, 150.0);
        } while (!(lp + lm > 1.05));
        const BilateralGammaParams p{logu(0.2, 4.0), lp, logu(0.2, 4.0), lm};
        const MarketParams m{(i % 2 == 0) ? 0.0 : 0.05 * u01(gen), 0.0, 100.0};
        const auto sol = solve_esscher(p, m, cfg.solver);
        const double direct = std::get<EsscherParams>(sol.scalars).theta;
        const double fp = esscher_via_fixed_point(p, m, cfg.solver);
        worst = std::max(worst, std::abs(direct - fp));
        expect(std::abs(direct - fp) < 1e-10,
               "random set " + std::to_string(i) + ": |direct - fixed point| = " +
                   fmt(std::abs(direct - fp)));
    }
    return "max |direct - fixed point| over 50 random sets = " + fmt(worst);
}

std::string check_mmm_gate(const RunConfig& cfg)
{
    if (!(cfg.model.lambda_plus > 2.0))
        throw SkipCheck{"lambda_plus <= 2: minimal-martingale constant undefined"};
    std::ostringstream out;
    if (ref_params(cfg)) {
        const MarketParams flat{0.0, 0.0, cfg.market.s0};
        const double c0 = mmm_constant(cfg.model, flat);
        expect(c0 > 0.0, "expected c > 0 at r = q = 0, got " + fmt(c0));
        bool rejected = false;
        try {
            solve_mmm(cfg.model, flat);
        } catch (const NoSolutionError&) {
            rejected = true;
        }
        expect(rejected, "solve_mmm unexpectedly succeeded at r = q = 0");
        out << "r=0: c = " << fmt(c0) << " -> correctly rejected; ";
    }
    const MarketParams m2 = mmm_market(cfg);
    const double c = mmm_constant(cfg.model, m2);
    expect(c >= -1.0 && c <= 0.0, "c = " + fmt(c) + " outside [-1, 0] at the bumped rate");
    const auto sol = solve_mmm(cfg.model, m2);
    const double psi1 = cumulant(cfg.model, 1.0);
    const double psi2 = cumulant(cfg.model, 2.0);
    expect(psi1 <= m2.r - m2.q + 1e-14, "first existence inequality violated");
    expect(psi2 - psi1 >= m2.r - m2.q - 1e-14, "second existence inequality violated");
    const double resid = law_martingale_residual(sol.law, m2);
    expect(std::abs(resid) < 1e-10, "convolved-law residual = " + fmt(resid));
    out << "r=" << fmt(m2.r) << ": c = " << fmt(c) << ", residual = " << fmt(resid);
    return out.str();
}

std::string check_pricing_mc(const RunConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto bil = solve_bilateral_esscher(cfg.model, cfg.market, cfg.solver);
    std::ostringstream out;
    double worst_z = 0.0;
    int idx = 0;
    auto crossval = [&](const RiskNeutralLaw& law, const MarketParams& m, double kf, double t) {
        const OptionSpec opt(kf * m.s0, t, OptionKind::Call);
        const double fourier = lewis_price(law, m, opt, cfg.contour);
        mc::SimConfig sim = cfg.sim;
        sim.seed = cfg.sim.seed + 1000 + static_cast<std::uint64_t>(idx++);
        const auto est = mc::mc_price(law, m, opt, sim);
        expect(est.std_error > 0.0, "Monte Carlo standard error is zero");
        const double z = std::abs(fourier - est.value) / est.std_error;
        worst_z = std::max(worst_z, z);
        expect(z < 3.0, "K/s0 = " + fmt(kf) + ", T = " + fmt(t) + ": |fourier - mc| = " +
                            fmt(std::abs(fourier - est.value)) + " exceeds 3 SE = " +
                            fmt(3.0 * est.std_error));
    };
    for (double t : {0.5, 1.0})
        for (double kf : {0.95, 1.0, 1.05})
            crossval(bil.law, cfg.market, kf, t);
    try {
        const MarketParams m2 = mmm_market(cfg);
        const auto mmm = solve_mmm(cfg.model, m2);
        for (double kf : {0.95, 1.0, 1.05})
            crossval(mmm.law, m2, kf, 0.5);
        out << "9 points";
    } catch (const SkipCheck&) {
        out << "6 points (no minimal-martingale leg)";
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    expect(ms < 60000.0, "runtime " + fmt(ms) + " ms exceeds 60 s");
    out << ", max |diff|/SE = " << fmt(worst_z) << ", " << fmt(ms) << " ms";
    return out.str();
}

std::string check_contour_invariance(const RunConfig& cfg)
{
    const auto bil = solve_bilateral_esscher(cfg.model, cfg.market, cfg.solver);
    const double lpe = law_right_rate(bil.law);
    if (!(lpe > 1.0))
        throw SkipCheck{"transformed law has no exponential moment for pricing"};
    double worst = 0.0;
    for (auto [kf, t] : {std::pair{1.0, 1.0}, std::pair{1.05, 0.5}}) {
        const OptionSpec opt(kf * cfg.market.s0, t, OptionKind::Call);
        double lo = 0.0, hi = 0.0;
        for (double qtl : {0.15, 0.3, 0.5, 0.7, 0.85}) {
            ContourSettings cs = cfg.contour;
            cs.nu = 1.0 + qtl * (lpe - 1.0);
            const double v = lewis_price(bil.law, cfg.market, opt, cs);
            lo = (lo == 0.0) ? v : std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double rel = (hi - lo) / std::max(std::abs(hi), 1e-300);
        worst = std::max(worst, rel);
        expect(rel <= 1e-8, "K/s0 = " + fmt(kf) + ", T = " + fmt(t) +
                                ": relative spread over contours = " + fmt(rel));
    }
    return "max relative spread over 5 contours = " + fmt(worst);
}

std::string check_parity(const RunConfig& cfg)
{
    const auto bil = solve_bilateral_esscher(cfg.model, cfg.market, cfg.solver);
    double worst = 0.0;
    for (double t : {0.25, 0.5, 1.0, 1.5, 2.0}) {
        for (double kf : {0.9, 0.95, 1.0, 1.05, 1.1}) {
            const double strike = kf * cfg.market.s0;
            const double call = lewis_price(bil.law, cfg.market,
                                            {strike, t, OptionKind::Call}, cfg.contour);
            const double put = lewis_price(bil.law, cfg.market,
                                           {strike, t, OptionKind::Put}, cfg.contour);
            const double gap = cfg.market.s0 * std::exp(-cfg.market.q * t) -
                               strike * std::exp(-cfg.market.r * t);
            const double rel = std::abs(call - put - gap) / cfg.market.s0;
            worst = std::max(worst, rel);
            expect(rel <= 1e-8, "parity violated at K/s0 = " + fmt(kf) + ", T = " + fmt(t) +
                                    ": relative error " + fmt(rel));
        }
    }
    return "max relative parity error on the 5x5 grid = " + fmt(worst);
}

std::string check_surface(const RunConfig& cfg)
{
    const auto bil = solve_bilateral_esscher(cfg.model, cfg.market, cfg.solver);
    std::vector<double> strikes;
    for (int j = 0; j <= 8; ++j)
        strikes.push_back(cfg.market.s0 * (16 + j) / 20.0);
    const std::vector<double> mats{0.25, 0.5, 1.0, 2.0};
    const auto surf = vol_surface(bil.law, cfg.market, strikes, mats, cfg.contour);

    std::ostringstream out;
    bool all_decreasing = true;
    std::vector<double> spreads;
    for (std::size_t ti = 0; ti < mats.size(); ++ti) {
        double vmax = surf.implied_vols[ti][0], vmin = surf.implied_vols[ti][0];
        bool dec = true;
        for (std::size_t ki = 0; ki < strikes.size(); ++ki) {
            const double price = surf.prices[ti][ki];
            const double lb = std::max(cfg.market.s0 * std::exp(-cfg.market.q * mats[ti]) -
                                           strikes[ki] * std::exp(-cfg.market.r * mats[ti]),
                                       0.0);
            expect(price > lb && price < cfg.market.s0 * std::exp(-cfg.market.q * mats[ti]),
                   "price outside no-arbitrage bounds at T = " + fmt(mats[ti]) +
                       ", K = " + fmt(strikes[ki]));
            if (ki > 0 && !(surf.implied_vols[ti][ki] < surf.implied_vols[ti][ki - 1]))
                dec = false;
            vmax = std::max(vmax, surf.implied_vols[ti][ki]);
            vmin = std::min(vmin, surf.implied_vols[ti][ki]);
        }
        spreads.push_back(vmax - vmin);
        all_decreasing = all_decreasing && dec;
        out << "T=" << fmt(mats[ti]) << ": dec=" << (dec ? "yes" : "NO")
            << " spread=" << fmt(vmax - vmin) << "; ";
    }
    bool spread_dec = true;
    for (std::size_t i = 1; i < spreads.size(); ++i)
        spread_dec = spread_dec && (spreads[i] < spreads[i - 1]);
    out << "spread decreasing in T: " << (spread_dec ? "yes" : "NO");
    if (!ref_config(cfg)) // the qualitative clauses are tied to the reference grid
        return out.str();
    expect(spread_dec, "strike-range vol spread is not decreasing in maturity | " + out.str());
    expect(all_decreasing,
           "implied vol not strictly decreasing in strike on the stated grid (the smile's "
           "right wing rises; at these parameters the strict skew emerges only for longer "
           "maturities) | " + out.str());
    return out.str();
}

std::string check_hedge(const RunConfig& cfg)
{
    if (!(cfg.model.lambda_plus > 3.0))
        throw SkipCheck{"lambda_plus <= 3: hedge-ratio cumulants undefined"};
    const MarketParams m2 = mmm_market(cfg);
    const double c = mmm_constant(cfg.model, m2);
    if (!(c >= -1.0 && c <= 0.0))
        throw SkipCheck{"minimal martingale measure does not exist at the bumped rate"};
    const double s0 = m2.s0;
    const double maturity = 0.5;

    const double d_low =
        hedge_delta(cfg.model, c, m2, {1e-9 * s0, maturity, OptionKind::Call}, 0.0, s0);
    expect(std::abs(d_low - std::exp(-m2.q * maturity)) < 1e-4,
           "K->0 limit: delta = " + fmt(d_low));
    const double d_high =
        hedge_delta(cfg.model, c, m2, {1e6 * s0, maturity, OptionKind::Call}, 0.0, s0);
    expect(std::abs(d_high) < 1e-6, "K->inf limit: delta = " + fmt(d_high));

    const OptionSpec atm{s0, maturity, OptionKind::Call};
    const double delta = hedge_delta(cfg.model, c, m2, atm, 0.0, s0);
    expect(delta > 0.0 && delta < 1.0, "ATM delta outside (0, 1): " + fmt(delta));

    // independent dense-grid trapezoid evaluation of the same integral;
    // the inner prices need far less accuracy than standalone quotes
    const RiskNeutralLaw law = mmm_law(cfg.model, c);
    ContourSettings cs_pi = cfg.contour;
    cs_pi.abs_tol = std::max(cs_pi.abs_tol, 1e-7);
    cs_pi.rel_tol = std::max(cs_pi.rel_tol, 1e-7);
    const double x_left = -(50.0 / cfg.model.lambda_minus + 0.05);
    const double x_right = 50.0 / (cfg.model.lambda_plus - 3.0) + 0.05;
    const int n = 4000;
    const double h = (x_right - x_left) / n;
    const double pi0 = lewis_price(law, m2, atm, cs_pi);
    num::CompensatedSum acc;
    for (int i = 0; i <= n; ++i) {
        const double x = x_left + i * h;
        double val = 0.0;
        if (x != 0.0) {
            const MarketParams mx{m2.r, m2.q, s0 * std::exp(x)};
            const double pix = lewis_price(law, mx, atm, cs_pi);
            val = std::expm1(x) * (pix - pi0) * mmm_levy_density(cfg.model, c, x);
        }
        acc.add(val * ((i == 0 || i == n) ? 0.5 : 1.0));
    }
    const double denom = mmm_cumulant(cfg.model, c, 2.0) - 2.0 * mmm_cumulant(cfg.model, c, 1.0);
    const double oracle = acc.value() * h / (s0 * denom);
    const double rel = std::abs(delta - oracle) / std::abs(oracle);
    expect(rel < 1e-4, "ATM delta " + fmt(delta) + " vs dense-grid oracle " + fmt(oracle) +
                           ": relative gap " + fmt(rel));
    return "delta(K->0) = " + fmt(d_low) + ", delta(K->inf) = " + fmt(d_high) +
           ", ATM delta = " + fmt(delta) + " (oracle " + fmt(oracle) + ", rel " + fmt(rel) + ")";
}

std::string check_properties(const RunConfig& cfg)
{
    const auto& p = cfg.model;
    expect(std::abs(cumulant(p, 0.0)) <= 1e-16, "Psi(0) != 0");
    expect(std::abs(char_fn(p, {0.0, 0.0}) - 1.0) <= 1e-15, "phi(0) != 1");

    std::mt19937 gen(99u);
    std::uniform_real_distribution<double> uz(-p.lambda_minus, p.lambda_plus);
    for (int i = 0; i < 20; ++i) {
        const double u = 37.0 * (i + 1) / 20.0;
        const auto a = char_fn(p, {u, 0.0});
        const auto b = char_fn(p, {-u, 0.0});
        expect(std::abs(a - std::conj(b)) <= 1e-14 * std::max(1.0, std::abs(a)),
               "Hermitian symmetry violated at u = " + fmt(u));
        expect(std::abs(a) <= 1.0 + 1e-12, "|phi(u)| > 1 at u = " + fmt(u));
    }
    for (int i = 0; i < 100; ++i) {
        double z;
        do {
            z = uz(gen);
        } while (!(z > -p.lambda_minus && z < p.lambda_plus));
        const double lhs = cumulant(p, z);
        const double rhs = cumulant_onesided(p.alpha_plus, p.lambda_plus, z) +
                           cumulant_onesided(p.alpha_minus, p.lambda_minus, -z);
        expect(std::abs(lhs - rhs) <= 1e-14 * std::max(1.0, std::abs(lhs)),
               "two-sided / one-sided cumulant identity violated at z = " + fmt(z));
    }

    std::ostringstream out;
    if (p.lambda_plus > 2.0) {
        const double closed = cumulant(p, 2.0) - 2.0 * cumulant(p, 1.0);
        // (e^x - 1)^2 e^{-l x} written as (1 - e^{-x})^2 e^{(2-l) x}: overflow-free
        const double up = num::integrate_zero_to_inf(
            [&](double x) {
                if (x == 0.0)
                    return 0.0;
                const double g = -std::expm1(-x);
                return p.alpha_plus * g * g / x * std::exp((2.0 - p.lambda_plus) * x);
            },
            cfg.solver.quad_rel_tol);
        const double dn = num::integrate_zero_to_inf(
            [&](double x) {
                if (x == 0.0)
                    return 0.0;
                const double e = std::expm1(-x);
                return p.alpha_minus * e * e / x * std::exp(-p.lambda_minus * x);
            },
            cfg.solver.quad_rel_tol);
        const double rel = std::abs(up + dn - closed) / std::abs(closed);
        expect(rel <= 1e-8, "jump-integral identity: relative error " + fmt(rel));
        out << "jump identity rel err " << fmt(rel) << "; ";
    } else {
        out << "jump identity skipped (lambda_plus <= 2); ";
    }

    // Monte Carlo moment checks, 4 standard errors
    mc::SimConfig sim = cfg.sim;
    const auto xs = mc::sample_terminal(p, 1.0, sim);
    num::CompensatedSum s1;
    for (double x : xs)
        s1.add(x);
    const double n = static_cast<double>(xs.size());
    const double mean = s1.value() / n;
    num::CompensatedSum s2, s4;
    for (double x : xs) {
        const double d = x - mean;
        s2.add(d * d);
        s4.add(d * d * d * d);
    }
    const double var = s2.value() / (n - 1.0);
    const double mu4 = s4.value() / n;
    const double mean_true = p.alpha_plus / p.lambda_plus - p.alpha_minus / p.lambda_minus;
    const double var_true = p.alpha_plus / (p.lambda_plus * p.lambda_plus) +
                            p.alpha_minus / (p.lambda_minus * p.lambda_minus);
    const double se_mean = std::sqrt(var / n);
    const double se_var = std::sqrt(std::max(mu4 - var * var, 0.0) / n);
    expect(std::abs(mean - mean_true) < 4.0 * se_mean,
           "sample mean off by " + fmt(std::abs(mean - mean_true) / se_mean) + " SE");
    expect(std::abs(var - var_true) < 4.0 * se_var,
           "sample variance off by " + fmt(std::abs(var - var_true) / se_var) + " SE");
    out << "mean z = " << fmt(std::abs(mean - mean_true) / se_mean)
        << ", var z = " << fmt(std::abs(var - var_true) / se_var) << "; ";

    // bit-exact determinism across execution modes and worker counts
    mc::SimConfig dsim = cfg.sim;
    dsim.n_samples = std::min<std::uint64_t>(cfg.sim.n_samples, 200000);
    const auto ref = mc::sample_terminal(p, 1.0, dsim, Execution::Serial);
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    for (int nt : {1, 2, 5}) {
        omp_set_num_threads(nt);
        const auto par = mc::sample_terminal(p, 1.0, dsim, Execution::Parallel);
        const bool same = std::equal(ref.begin(), ref.end(), par.begin(), par.end());
        if (!same)
            omp_set_num_threads(saved);
        expect(same, "parallel generation differs from the serial reference at " +
                         std::to_string(nt) + " threads");
    }
    omp_set_num_threads(saved);
    out << "determinism bit-exact across {1,2,5} threads";
#else
    const auto par = mc::sample_terminal(p, 1.0, dsim, Execution::Parallel);
    expect(std::equal(ref.begin(), ref.end(), par.begin(), par.end()),
           "parallel generation differs from the serial reference");
    out << "determinism bit-exact (single-threaded build)";
#endif
    return out.str();
}

std::string check_rhs_figure(const RunConfig& cfg)
{
    if (!ref_config(cfg))
        throw SkipCheck{"tied to the calibrated reference parameter set with r = q = 0"};
    const double v = cumulant(cfg.model, 1.0);
    expect(v >= cfg.market.r - cfg.market.q,
           "existence inequality Psi(1) >= r - q violated: Psi(1) = " + fmt(v));
    const double published = 0.0000221;
    std::ostringstream out;
    out << "Psi(1) computed = " << fmt(v);
    if (std::abs(v - published) > 1e-3 * std::max(std::abs(v), published))
        out << "; published figure " << fmt(published)
            << " FLAGGED as inconsistent (off by " << fmt(std::abs(v - published))
            << "); the load-bearing sign condition Psi(1) >= r - q holds";
    else
        out << "; matches the published figure";
    return out.str();
}

} // namespace

std::vector<CheckResult> run_validation(const RunConfig& cfg)
{
    std::vector<CheckResult> out;
    out.push_back(run_check(1, "esscher reproduction", [&] { return check_esscher(cfg); }));
    out.push_back(run_check(2, "minimal entropy reproduction", [&] { return check_memm(cfg); }));
    out.push_back(run_check(3, "bilateral esscher reproduction", [&] { return check_bilateral(cfg); }));
    out.push_back(run_check(4, "p-optimal reproduction", [&] { return check_p_optimal(cfg); }));
    out.push_back(run_check(5, "entropy ordering", [&] { return check_entropy_ordering(cfg); }));
    out.push_back(run_check(6, "fixed-point equivalence", [&] { return check_fixed_point(cfg); }));
    out.push_back(run_check(7, "minimal martingale gate", [&] { return check_mmm_gate(cfg); }));
    out.push_back(run_check(8, "pricing cross-validation", [&] { return check_pricing_mc(cfg); }));
    out.push_back(run_check(9, "contour invariance", [&] { return check_contour_invariance(cfg); }));
    out.push_back(run_check(10, "put-call parity", [&] { return check_parity(cfg); }));
    out.push_back(run_check(11, "surface qualitative", [&] { return check_surface(cfg); }));
    out.push_back(run_check(12, "hedge delta", [&] { return check_hedge(cfg); }));
    out.push_back(run_check(13, "property suite", [&] { return check_properties(cfg); }));
    out.push_back(run_check(14, "published-figure consistency", [&] { return check_rhs_figure(cfg); }));
    return out;
}

bool all_passed(const std::vector<CheckResult>& results)
{
    for (const auto& r : results)
        if (r.status == CheckStatus::Fail)
            return false;
    return true;
}

} // namespace bilgamma
