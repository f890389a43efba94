#ifndef BILGAMMA_CONFIG_HPP
#define BILGAMMA_CONFIG_HPP

#include <string>

#include "bilgamma/mcoracle.hpp"
#include "bilgamma/measures.hpp"
#include "bilgamma/pricer.hpp"
#include "bilgamma/types.hpp"

namespace bilgamma {

/// Fully resolved run configuration: model and market are required in the
/// file, solver / contour / sim sections are optional with defaults.
struct RunConfig {
    BilateralGammaParams model;
    MarketParams market;
    SolverSettings solver;
    ContourSettings contour;
    mc::SimConfig sim;
};

/// Parses the key-value configuration format:
///   alpha_plus = 1.55          # model (required, all four)
///   r = 0.0                    # market (required: r, q, s0)
///   solver.root_tol = 1e-12    # optional dotted sections
/// '#' starts a comment; unknown keys are rejected.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

} // namespace bilgamma

#endif
