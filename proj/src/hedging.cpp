#include "bilgamma/hedging.hpp"

#include <cmath>
#include <cstring>
#include <unordered_map>

#include "bilgamma/bgcore.hpp"
#include "bilgamma/measures.hpp"
#include "bilgamma/numerics.hpp"

namespace bilgamma {

namespace {

void check_c(double c)
{
    if (!(c >= -1.0 - 1e-13 && c <= 1e-13))
        throw DomainError("hedging: c must lie in [-1, 0]");
}

std::uint64_t key_of(double x)
{
    std::uint64_t k;
    std::memcpy(&k, &x, sizeof k);
    return k;
}

} // namespace

double mmm_levy_density(const BilateralGammaParams& p, double c, double x)
{
    check_c(c);
    return (c + 1.0 - c * std::exp(x)) * levy_density(p, x);
}

double mmm_cumulant(const BilateralGammaParams& p, double c, double z)
{
    check_c(c);
    if (!(z > -p.lambda_minus && z < p.lambda_plus - 1.0))
        throw DomainError("mmm_cumulant: z outside (-lambda_minus, lambda_plus - 1)");
    return (c + 1.0) * (cumulant_onesided(p.alpha_plus, p.lambda_plus, z)
                        + cumulant_onesided(p.alpha_minus, p.lambda_minus, -z))
           + (-c) * (cumulant_onesided(p.alpha_plus, p.lambda_plus - 1.0, z)
                     + cumulant_onesided(p.alpha_minus, p.lambda_minus + 1.0, -z));
}

double hedge_delta(const BilateralGammaParams& p, double c, const MarketParams& m,
                   const OptionSpec& opt, double t, double spot,
                   const HedgeSettings& hs, const ContourSettings& cs)
{
    check_c(c);
    if (!(p.lambda_plus > 3.0))
        throw DomainError("hedge_delta: requires lambda_plus > 3");
    if (!(t >= 0.0 && t < opt.maturity))
        throw DomainError("hedge_delta: need 0 <= t < maturity");
    if (!(spot > 0.0))
        throw DomainError("hedge_delta: spot must be > 0");
    if (!(hs.quad_rel_tol > 0.0) || !(hs.tail_cut > 0.0))
        throw DomainError("HedgeSettings: tolerances must be positive");

    const double horizon = opt.maturity - t;
    const RiskNeutralLaw law = mmm_law(p, c);

    // inner prices enter the ratio through an integral whose weight is of
    // order the jump variance, so their tolerance can sit well above the
    // standalone pricing default without moving the delta at the 1e-8 level
    ContourSettings cs_pi = cs;
    cs_pi.abs_tol = std::max(cs.abs_tol, 1e-7);
    cs_pi.rel_tol = std::max(cs.rel_tol, 1e-7);

    // price at time t as a function of the jump-displaced spot, memoized:
    // every call is a full contour integral
    std::unordered_map<std::uint64_t, double> cache;
    auto pi = [&](double x) {
        const auto it = cache.find(key_of(x));
        if (it != cache.end())
            return it->second;
        const MarketParams mx{m.r, m.q, spot * std::exp(x)};
        const OptionSpec ox{opt.strike, horizon, opt.kind};
        const double v = lewis_price(law, mx, ox, cs_pi);
        cache.emplace(key_of(x), v);
        return v;
    };
    const double pi0 = pi(0.0);

    auto integrand = [&](double x) {
        if (x == 0.0)
            return 0.0; // (e^x - 1)(pi(S e^x) - pi(S)) kills the 1/x pole twice over
        return std::expm1(x) * (pi(x) - pi0) * mmm_levy_density(p, c, x);
    };

    // both wings through the octave/doubling panel scheme: split at +-1,
    // per-octave tolerance scaling, tail cut against the running total;
    // jumps beyond +-700 would overflow the displaced spot
    const double up = num::integrate_zero_to_inf(
        [&](double x) { return integrand(x); }, hs.quad_rel_tol, hs.tail_cut, 700.0);
    const double down = num::integrate_zero_to_inf(
        [&](double x) { return integrand(-x); }, hs.quad_rel_tol, hs.tail_cut, 700.0);

    const double denom = mmm_cumulant(p, c, 2.0) - 2.0 * mmm_cumulant(p, c, 1.0);
    return (up + down) / (spot * denom);
}

} // namespace bilgamma
