#include "bilgamma/pricer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "bilgamma/bgcore.hpp"
#include "bilgamma/numerics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bilgamma {

namespace {

using cd = std::complex<double>;

double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865476); }

struct ContourWorkspace {
    std::vector<BilateralGammaParams> comps_t; // shapes pre-scaled by maturity
    double s0, strike, r, maturity;
    double log_moneyness;   // ln(K / s0)
    double lambda_plus_eff; // right strip edge of the scaled law
    double lambda_minus_eff;
    double shape_sum;       // sum of scaled shape parameters (tail decay power - 2)
    std::size_t evals = 0;

    cd integrand(double u, double nu)
    {
        ++evals;
        const cd z(u, nu);
        // characteristic exponent of the scaled law at -z, principal logs
        cd ce(0.0, 0.0);
        for (const auto& c : comps_t) {
            const cd iz(nu, -u); // i * (-z)
            ce += c.alpha_plus * (std::log(c.lambda_plus) - std::log(c.lambda_plus - iz));
            ce += c.alpha_minus * (std::log(c.lambda_minus) - std::log(c.lambda_minus + iz));
        }
        const cd amp = std::exp(cd(-nu * log_moneyness, u * log_moneyness));
        return amp * std::exp(ce) / (z * z - cd(0.0, 1.0) * z);
    }
};

// One full truncation ladder at a fixed stopping threshold tau (price units).
// Panels [0,L],[L,gL],... grow by cs.panel_growth; a certified tail bound
// (power-decay and oscillatory integration-by-parts variants) must fall
// below tau as well before the ladder stops.
double ladder(ContourWorkspace& ws, double nu, const ContourSettings& cs,
              double tau, double* truncation_out)
{
    const double k = ws.log_moneyness;
    if (-nu * k > 700.0)
        throw NumericError("lewis_price: contour amplitude overflows; "
                           "choose nu closer to the admissible lower end");
    if (-nu * k < -745.0) {
        // the moneyness amplitude underflows uniformly in u: the contour
        // integral is zero to double precision
        if (truncation_out)
            *truncation_out = 0.0;
        return 0.0;
    }
    const double pref = -ws.strike * std::exp(-ws.r * ws.maturity) / 3.14159265358979323846;
    const double apref = std::abs(pref);
    const double p_asy = 2.0 + ws.shape_sum;
    double rate_max = 0.0;
    for (const auto& c : ws.comps_t)
        rate_max = std::max({rate_max, c.lambda_plus, c.lambda_minus});
    const double u_asy = 4.0 * (1.0 + std::abs(nu) + rate_max);

    auto f = [&](double u) { return ws.integrand(u, nu); };
    const double tol_int = tau / (16.0 * apref);

    num::CompensatedSum acc_re;
    num::CompensatedSum acc_im;
    double a = 0.0, b = 1.0;
    double last_panel_price = std::numeric_limits<double>::infinity();
    for (int panel = 0; panel < 256; ++panel) {
        // certified tail bound at the panel start: power-decay envelope and,
        // off the zero-oscillation axis, the integration-by-parts variant
        if (panel >= 1 && a >= u_asy) {
            const double g_start = std::abs(f(a));
            double bound = 4.0 * apref * g_start * a / (p_asy - 1.0);
            if (k != 0.0)
                bound = std::min(bound, 12.0 * apref * g_start / std::abs(k));
            if (last_panel_price <= tau && bound <= tau) {
                if (truncation_out)
                    *truncation_out = a;
                return pref * acc_re.value();
            }
        }
        if (b > cs.max_truncation)
            throw NumericError(
                "lewis_price: truncation ladder exceeded max_truncation before "
                "reaching the requested tolerance");

        // force enough subdivision to resolve the e^{i u k} oscillation
        // (>= 4 Simpson intervals per period) before trusting the error test
        const double periods = (b - a) * std::abs(k) / 6.283185307179586;
        int min_depth = 0;
        while ((1 << min_depth) < 4.0 * periods && min_depth < 40)
            ++min_depth;
        const cd part = num::integrate_adaptive(f, a, b, tol_int, 52, min_depth);
        acc_re.add(part.real());
        acc_im.add(part.imag());
        last_panel_price = apref * std::abs(part);

        a = b;
        b *= cs.panel_growth;
    }
    throw NumericError("lewis_price: panel budget exhausted");
}

double contour_value(ContourWorkspace& ws, double nu, const ContourSettings& cs,
                     ContourDiagnostics* diag)
{
    // two-pass thresholding: resolve to abs_tol first; tighten relative to the
    // observed magnitude when the price is small (deep out-of-the-money tails)
    double trunc = 0.0;
    double value = ladder(ws, nu, cs, cs.abs_tol, &trunc);
    const double tau_rel = cs.rel_tol * std::abs(value);
    if (tau_rel > 0.0 && tau_rel < cs.abs_tol) {
        const double tau = std::max(tau_rel, 1e-18 * (ws.s0 + ws.strike));
        value = ladder(ws, nu, cs, tau, &trunc);
    }
    if (diag) {
        diag->nu_used = nu;
        diag->truncation = trunc;
        diag->evaluations = ws.evals;
    }
    return value;
}

} // namespace

double lewis_price(const RiskNeutralLaw& law, const MarketParams& m,
                   const OptionSpec& opt, const ContourSettings& cs,
                   ContourDiagnostics* diag)
{
    if (std::holds_alternative<TiltedLevy>(law))
        throw DomainError("lewis_price: tilted law has no closed-form "
                          "characteristic function; pricing unsupported");
    if (!(cs.abs_tol > 0.0) || !(cs.rel_tol > 0.0) || !(cs.max_truncation > 1.0) ||
        !(cs.panel_growth > 1.0))
        throw DomainError("ContourSettings: invalid tolerances");

    ContourWorkspace ws;
    for (const auto& c : law_components(law))
        ws.comps_t.push_back(scale_time(c, opt.maturity));
    ws.s0 = m.s0;
    ws.strike = opt.strike;
    ws.r = m.r;
    ws.maturity = opt.maturity;
    ws.log_moneyness = std::log(opt.strike / m.s0);
    ws.lambda_plus_eff = law_right_rate(law);
    ws.lambda_minus_eff = law_left_rate(law);
    ws.shape_sum = 0.0;
    for (const auto& c : ws.comps_t)
        ws.shape_sum += c.alpha_plus + c.alpha_minus;

    if (!(ws.lambda_plus_eff > 1.0))
        throw DomainError("lewis_price: admissible contour interval (1, lambda_plus_eff) "
                          "is empty (effective lambda_plus <= 1)");

    // model-consistent forward: E[e^{X_T}] from the law's own cumulant
    double psi1_t = 0.0;
    for (const auto& c : ws.comps_t)
        psi1_t += cumulant(c, 1.0);
    const double discounted_forward_gap =
        std::exp(-m.r * opt.maturity) * (m.s0 * std::exp(psi1_t) - opt.strike);

    double call;
    bool via_parity = false;
    if (cs.nu) {
        const double nu = *cs.nu;
        if (!(nu > 1.0 && nu < ws.lambda_plus_eff))
            throw DomainError("ContourSettings: nu outside (1, lambda_plus_eff)");
        call = contour_value(ws, nu, cs, diag);
    } else if (ws.log_moneyness >= 0.0) {
        call = contour_value(ws, 0.5 * (1.0 + ws.lambda_plus_eff), cs, diag);
    } else {
        // in-the-money call: integrate the out-of-the-money put side, where
        // the amplitude factor damps the integrand, and shift by parity
        const double put = contour_value(ws, -0.5 * ws.lambda_minus_eff, cs, diag);
        if (opt.kind == OptionKind::Put) {
            if (diag)
                diag->priced_via_parity = false;
            return put;
        }
        call = put + discounted_forward_gap;
        via_parity = true;
    }
    if (diag)
        diag->priced_via_parity = via_parity || (opt.kind == OptionKind::Put);
    if (opt.kind == OptionKind::Put)
        return call - discounted_forward_gap;
    return call;
}

double bs_price(double s0, double strike, double maturity, double r, double q,
                double sigma, OptionKind kind)
{
    if (!(s0 > 0.0) || !(strike > 0.0) || !(maturity > 0.0) || !(sigma > 0.0))
        throw DomainError("bs_price: s0, strike, maturity, sigma must be > 0");
    const double srt = sigma * std::sqrt(maturity);
    const double d1 = (std::log(s0 / strike) + (r - q) * maturity) / srt + 0.5 * srt;
    const double d2 = d1 - srt;
    const double fq = s0 * std::exp(-q * maturity);
    const double fr = strike * std::exp(-r * maturity);
    if (kind == OptionKind::Call)
        return fq * norm_cdf(d1) - fr * norm_cdf(d2);
    return fr * norm_cdf(-d2) - fq * norm_cdf(-d1);
}

double implied_vol(double price, double s0, double strike, double maturity,
                   double r, double q, OptionKind kind)
{
    if (!(s0 > 0.0) || !(strike > 0.0) || !(maturity > 0.0))
        throw DomainError("implied_vol: s0, strike, maturity must be > 0");
    const double fq = s0 * std::exp(-q * maturity);
    const double fr = strike * std::exp(-r * maturity);
    const double lb = (kind == OptionKind::Call) ? std::max(fq - fr, 0.0)
                                                 : std::max(fr - fq, 0.0);
    const double ub = (kind == OptionKind::Call) ? fq : fr;
    if (!(price > lb && price < ub))
        throw DomainError("implied_vol: price violates the no-arbitrage bounds");

    auto fn = [&](double sig) {
        return bs_price(s0, strike, maturity, r, q, sig, kind) - price;
    };
    const double sig_lo = 1e-12, sig_hi = 5.0;
    const double flo = fn(sig_lo);
    if (flo >= 0.0)
        return sig_lo; // price sits within rounding of the zero-vol limit
    const double fhi = fn(sig_hi);
    if (fhi < 0.0)
        throw NumericError("implied_vol: implied volatility exceeds the bracket top (5.0)");
    const double sig = num::brent_root(fn, sig_lo, sig_hi, flo, fhi, 1e-14);
    if (!(std::abs(fn(sig)) < 1e-10 * s0))
        throw NumericError("implied_vol: root refinement failed the price-residual check");
    return sig;
}

VolSurface vol_surface(const RiskNeutralLaw& law, const MarketParams& m,
                       const std::vector<double>& strikes,
                       const std::vector<double>& maturities,
                       const ContourSettings& cs, Execution exec)
{
    if (strikes.empty() || maturities.empty())
        throw DomainError("vol_surface: empty grid");
    for (std::size_t i = 0; i < strikes.size(); ++i)
        if (!(strikes[i] > 0.0) || (i > 0 && !(strikes[i] > strikes[i - 1])))
            throw DomainError("vol_surface: strikes must be positive and strictly ascending");
    for (std::size_t i = 0; i < maturities.size(); ++i)
        if (!(maturities[i] > 0.0) || (i > 0 && !(maturities[i] > maturities[i - 1])))
            throw DomainError("vol_surface: maturities must be positive and strictly ascending");

    VolSurface out;
    out.strikes = strikes;
    out.maturities = maturities;
    const std::size_t nt = maturities.size();
    const std::size_t nk = strikes.size();
    out.prices.assign(nt, std::vector<double>(nk, 0.0));
    out.implied_vols.assign(nt, std::vector<double>(nk, 0.0));

    struct PointError {
        bool domain = false;
        std::string msg;
    };
    std::vector<PointError> errs(nt * nk);
    std::vector<char> failed(nt * nk, 0);

    auto run_point = [&](std::size_t idx) {
        const std::size_t ti = idx / nk;
        const std::size_t ki = idx % nk;
        try {
            const OptionSpec opt(strikes[ki], maturities[ti], OptionKind::Call);
            const double price = lewis_price(law, m, opt, cs);
            out.prices[ti][ki] = price;
            out.implied_vols[ti][ki] =
                implied_vol(price, m.s0, strikes[ki], maturities[ti], m.r, m.q);
        } catch (const std::exception& e) {
            failed[idx] = 1;
            errs[idx].domain = dynamic_cast<const DomainError*>(&e) != nullptr;
            errs[idx].msg = "vol_surface point (maturity=" + std::to_string(maturities[ti]) +
                            ", strike=" + std::to_string(strikes[ki]) + "): " + e.what();
        }
    };

    const std::int64_t total = static_cast<std::int64_t>(nt * nk);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < total; ++i)
            run_point(static_cast<std::size_t>(i));
    } else {
        for (std::int64_t i = 0; i < total; ++i)
            run_point(static_cast<std::size_t>(i));
    }

    for (std::int64_t i = 0; i < total; ++i) {
        if (failed[static_cast<std::size_t>(i)]) {
            const auto& pe = errs[static_cast<std::size_t>(i)];
            if (pe.domain)
                throw DomainError(pe.msg);
            throw NumericError(pe.msg);
        }
    }
    return out;
}

} // namespace bilgamma
