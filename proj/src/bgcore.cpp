#include "bilgamma/bgcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bilgamma {

double cumulant_onesided(double alpha, double lambda, double z)
{
    if (!(alpha > 0.0) || !(lambda > 0.0))
        throw DomainError("cumulant_onesided: alpha, lambda must be > 0");
    if (!(z < lambda))
        throw DomainError("cumulant_onesided: need z < lambda");
    // alpha * ln(lambda / (lambda - z)) = -alpha * log1p(-z / lambda)
    return -alpha * std::log1p(-z / lambda);
}

double cumulant(const BilateralGammaParams& p, double z)
{
    if (!(z > -p.lambda_minus && z < p.lambda_plus))
        throw DomainError("cumulant: z outside (-lambda_minus, lambda_plus)");
    return -p.alpha_plus * std::log1p(-z / p.lambda_plus)
           - p.alpha_minus * std::log1p(z / p.lambda_minus);
}

std::complex<double> cumulant_complex(const BilateralGammaParams& p,
                                      std::complex<double> w)
{
    if (!(w.real() > -p.lambda_minus && w.real() < p.lambda_plus))
        throw DomainError("cumulant_complex: Re(w) outside the strip");
    const std::complex<double> plus = p.lambda_plus - w;
    const std::complex<double> minus = p.lambda_minus + w;
    return p.alpha_plus * (std::log(p.lambda_plus) - std::log(plus))
         + p.alpha_minus * (std::log(p.lambda_minus) - std::log(minus));
}

namespace {

std::complex<double> char_exponent_one(const BilateralGammaParams& p,
                                       std::complex<double> z)
{
    // strip: Im(z) in (-lambda_plus, lambda_minus) keeps Re of both bases > 0
    if (!(z.imag() > -p.lambda_plus && z.imag() < p.lambda_minus))
        throw DomainError("char_fn: z outside the analyticity strip");
    const std::complex<double> iz(-z.imag(), z.real());
    const std::complex<double> plus = p.lambda_plus - iz;
    const std::complex<double> minus = p.lambda_minus + iz;
    return p.alpha_plus * (std::log(p.lambda_plus) - std::log(plus))
         + p.alpha_minus * (std::log(p.lambda_minus) - std::log(minus));
}

} // namespace

std::complex<double> char_fn(const RiskNeutralLaw& law, std::complex<double> z)
{
    if (std::holds_alternative<TiltedLevy>(law))
        throw DomainError("char_fn: tilted law has no closed-form characteristic function");
    std::complex<double> expo(0.0, 0.0);
    if (const auto* bg = std::get_if<BilateralGammaParams>(&law)) {
        expo = char_exponent_one(*bg, z);
    } else {
        for (const auto& comp : std::get<ConvolvedLaw>(law).components)
            expo += char_exponent_one(comp, z);
    }
    return std::exp(expo);
}

double levy_density(const BilateralGammaParams& p, double x)
{
    if (x == 0.0)
        throw DomainError("levy_density: x = 0 is outside the domain");
    if (x > 0.0)
        return p.alpha_plus / x * std::exp(-p.lambda_plus * x);
    return p.alpha_minus / (-x) * std::exp(p.lambda_minus * x);
}

BilateralGammaParams scale_time(const BilateralGammaParams& p, double t)
{
    if (!(t > 0.0))
        throw DomainError("scale_time: t must be > 0");
    return {p.alpha_plus * t, p.lambda_plus, p.alpha_minus * t, p.lambda_minus};
}

double martingale_residual(const BilateralGammaParams& p, const MarketParams& m)
{
    if (!(p.lambda_plus > 1.0))
        throw NoSolutionError(
            "martingale_residual: lambda_plus <= 1, the law can never be a "
            "martingale measure (E[e^{X_1}] = infinity)");
    return cumulant(p, 1.0) - (m.r - m.q);
}

std::vector<BilateralGammaParams> law_components(const RiskNeutralLaw& law)
{
    if (const auto* bg = std::get_if<BilateralGammaParams>(&law))
        return {*bg};
    if (const auto* cv = std::get_if<ConvolvedLaw>(&law)) {
        if (cv->components.empty())
            throw DomainError("law_components: empty convolved law");
        return cv->components;
    }
    throw DomainError("law_components: tilted law has no bilateral Gamma components");
}

double law_cumulant(const RiskNeutralLaw& law, double z)
{
    double out = 0.0;
    for (const auto& comp : law_components(law))
        out += cumulant(comp, z);
    return out;
}

double law_right_rate(const RiskNeutralLaw& law)
{
    double rate = std::numeric_limits<double>::infinity();
    for (const auto& comp : law_components(law))
        rate = std::min(rate, comp.lambda_plus);
    return rate;
}

double law_left_rate(const RiskNeutralLaw& law)
{
    double rate = std::numeric_limits<double>::infinity();
    for (const auto& comp : law_components(law))
        rate = std::min(rate, comp.lambda_minus);
    return rate;
}

RiskNeutralLaw scale_law_time(const RiskNeutralLaw& law, double t)
{
    const auto comps = law_components(law);
    if (comps.size() == 1)
        return scale_time(comps.front(), t);
    ConvolvedLaw out;
    out.components.reserve(comps.size());
    for (const auto& comp : comps)
        out.components.push_back(scale_time(comp, t));
    return out;
}

double law_martingale_residual(const RiskNeutralLaw& law, const MarketParams& m)
{
    if (!(law_right_rate(law) > 1.0))
        throw NoSolutionError(
            "law_martingale_residual: effective lambda_plus <= 1, the law can "
            "never be a martingale measure");
    return law_cumulant(law, 1.0) - (m.r - m.q);
}

} // namespace bilgamma
