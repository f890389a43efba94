#ifndef BILGAMMA_MCORACLE_HPP
#define BILGAMMA_MCORACLE_HPP

#include <cstdint>
#include <vector>

#include "bilgamma/types.hpp"

namespace bilgamma::mc {

/// Simulation configuration. Given (law, t, cfg) the output is a pure
/// function of the seed: generation is chunked, each chunk's generator is
/// derived from (seed, chunk index), and reductions run in fixed chunk order,
/// so results are bit-identical for any worker count.
struct SimConfig {
    std::uint64_t n_samples = 100000;
    std::uint64_t seed = 1;
    bool antithetic = false;
};

struct McEstimate {
    double value;
    double std_error;
    std::uint64_t n;
};

/// Draws of X_t under the law (difference of Gamma variates per component,
/// summed over components). TiltedLevy is rejected.
std::vector<double> sample_terminal(const RiskNeutralLaw& law, double t,
                                    const SimConfig& cfg,
                                    Execution exec = Execution::Parallel);

/// Separate draws of the positive and negative Gamma components of X_t,
/// paired per sample (needed for likelihood-ratio oracles).
struct ComponentSamples {
    std::vector<double> plus;
    std::vector<double> minus;
};
ComponentSamples sample_components(const BilateralGammaParams& p, double t,
                                   const SimConfig& cfg,
                                   Execution exec = Execution::Parallel);

/// Discounted Monte Carlo option price e^{-rT} mean((s0 e^{X_T} - K)^+ or the
/// put analogue) with its standard error. The drift is whatever the law
/// embeds; for solved martingale laws that is exactly (r - q).
McEstimate mc_price(const RiskNeutralLaw& law, const MarketParams& m,
                    const OptionSpec& opt, const SimConfig& cfg,
                    Execution exec = Execution::Parallel);

/// Sample mean of e^{z X_1} and its standard error; ln(value) estimates
/// cumulant(p, z). Requires z inside the strip with margin 0.5 so the
/// estimator variance is finite and controlled.
McEstimate mc_exp_moment(const BilateralGammaParams& p, double z,
                         const SimConfig& cfg,
                         Execution exec = Execution::Parallel);

} // namespace bilgamma::mc

#endif
