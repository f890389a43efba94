#ifndef BILGAMMA_HEDGING_HPP
#define BILGAMMA_HEDGING_HPP

#include "bilgamma/pricer.hpp"
#include "bilgamma/types.hpp"

namespace bilgamma {

struct HedgeSettings {
    double quad_rel_tol = 1e-8;
    double tail_cut = 1e-14; // stop the tail ladder below this fraction of the total
};

/// Jump density under the minimal martingale measure:
/// (c + 1 - c e^x) times the physical density, c in [-1, 0], x != 0.
double mmm_levy_density(const BilateralGammaParams& p, double c, double x);

/// Cumulant of X_1 under the minimal martingale measure on
/// (-lambda_minus, lambda_plus - 1); equals the sum of the component
/// cumulants of the convolved law.
double mmm_cumulant(const BilateralGammaParams& p, double c, double z);

/// Quadratic-hedging ratio at time t and spot S for a European option under
/// the minimal martingale measure: the jump-weighted price-difference
/// integral divided by S (Psi_hat(2) - 2 Psi_hat(1)). Requires
/// lambda_plus > 3 and c in [-1, 0]. Option prices inside the integral are
/// contour prices under the convolved law with maturity T - t and are cached
/// per abscissa.
double hedge_delta(const BilateralGammaParams& p, double c, const MarketParams& m,
                   const OptionSpec& opt, double t, double spot,
                   const HedgeSettings& hs = {}, const ContourSettings& cs = {});

} // namespace bilgamma

#endif
