#ifndef BILGAMMA_BGCORE_HPP
#define BILGAMMA_BGCORE_HPP

#include <complex>
#include <vector>

#include "bilgamma/types.hpp"

namespace bilgamma {

/// Cumulant generating function ln E[e^{z X_1}] on the open strip
/// (-lambda_minus, lambda_plus).
double cumulant(const BilateralGammaParams& p, double z);

/// One-sided Gamma cumulant alpha * ln(lambda / (lambda - z)), z < lambda.
/// The two-sided function satisfies
/// cumulant(p, z) = cumulant_onesided(a+, l+, z) + cumulant_onesided(a-, l-, -z).
double cumulant_onesided(double alpha, double lambda, double z);

/// Cumulant extended to complex argument with principal logarithms;
/// requires Re(w) in (-lambda_minus, lambda_plus) so both log bases keep a
/// strictly positive real part.
std::complex<double> cumulant_complex(const BilateralGammaParams& p,
                                      std::complex<double> w);

/// Characteristic function of X_1 under the given law, extended to complex z
/// with Im(z) inside the analyticity strip (-lambda_plus_eff, lambda_minus_eff).
/// Convolved laws multiply component factors; TiltedLevy has no closed form
/// and is rejected.
std::complex<double> char_fn(const RiskNeutralLaw& law, std::complex<double> z);

/// Two-sided exponential Levy density; x != 0.
double levy_density(const BilateralGammaParams& p, double x);

/// Law of X_t: shapes scale linearly with t, rates are unchanged.
BilateralGammaParams scale_time(const BilateralGammaParams& p, double t);

/// Log-form martingale residual cumulant(p,1) - (r-q) for the discounted,
/// dividend-adjusted price. Zero (within tolerance) iff p is a martingale
/// measure. Throws NoSolutionError when lambda_plus <= 1 (no martingale
/// measure possible for any r, q).
double martingale_residual(const BilateralGammaParams& p, const MarketParams& m);

// --- helpers over the law variant ------------------------------------------

/// Component view; TiltedLevy rejected.
std::vector<BilateralGammaParams> law_components(const RiskNeutralLaw& law);

/// Sum of component cumulants; domain is the intersection of component strips.
double law_cumulant(const RiskNeutralLaw& law, double z);

/// Smallest right / left rate over components (edge of the exponential-moment
/// strip of the whole law).
double law_right_rate(const RiskNeutralLaw& law);
double law_left_rate(const RiskNeutralLaw& law);

/// scale_time applied per component.
RiskNeutralLaw scale_law_time(const RiskNeutralLaw& law, double t);

/// Log-form residual for an arbitrary (non-tilted) law.
double law_martingale_residual(const RiskNeutralLaw& law, const MarketParams& m);

} // namespace bilgamma

#endif
