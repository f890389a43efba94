#ifndef BILGAMMA_TESTS_FIXTURES_HPP
#define BILGAMMA_TESTS_FIXTURES_HPP

#include "bilgamma/types.hpp"

namespace fixtures {

// DAX-calibrated parameter set used across the suites
inline bilgamma::BilateralGammaParams dax()
{
    return {1.55, 133.96, 0.94, 88.92};
}

inline bilgamma::MarketParams flat_market()
{
    return {0.0, 0.0, 5000.0};
}

// small rate bump for which the minimal martingale measure exists
inline bilgamma::MarketParams bumped_market()
{
    return {0.0012, 0.0, 5000.0};
}

} // namespace fixtures

#endif
