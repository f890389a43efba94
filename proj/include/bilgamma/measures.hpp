#ifndef BILGAMMA_MEASURES_HPP
#define BILGAMMA_MEASURES_HPP

#include <optional>
#include <variant>

#include "bilgamma/types.hpp"

namespace bilgamma {

struct SolverSettings {
    double root_tol = 1e-12;          // absolute tolerance on the solved parameter
    double quad_rel_tol = 1e-10;      // relative tolerance for quadratures
    int max_bracket_expansions = 200;
    double boundary_offset = 1e-9;    // relative offset from open-interval endpoints
};

enum class MeasureKind { Esscher, Memm, BilateralEsscher, POptimal, MinimalMartingale };

struct EsscherParams {
    double theta; // in (-lambda_minus, lambda_plus - 1)
};
struct MemmParams {
    double vartheta; // <= 0
};
struct BilateralEsscherParams {
    double theta_plus;
    double theta_minus; // = phi_map(theta_plus)
};
struct POptimalParams {
    double p; // > 1
    double theta_plus;
    double theta_minus;
};
struct MinimalMartingaleParams {
    double c; // in [-1, 0]
};

using MeasureScalars = std::variant<EsscherParams, MemmParams, BilateralEsscherParams,
                                    POptimalParams, MinimalMartingaleParams>;

/// Outcome of a measure construction: which transform, its scalar
/// parameter(s), the risk-neutral law of X under it, and the objective
/// (relative entropy, or the p-distance; absent for the minimal martingale
/// measure, which optimizes no scalar functional here).
struct MeasureSolution {
    MeasureKind kind;
    MeasureScalars scalars;
    RiskNeutralLaw law;
    std::optional<double> objective_value;
};

/// Classical Esscher transform: the unique Theta in (-lambda_minus,
/// lambda_plus - 1) with f(Theta) = r - q. Exists iff
/// lambda_plus + lambda_minus > 1. Transformed law
/// (a+, l+ - Theta; a-, l- + Theta); objective = relative entropy.
MeasureSolution solve_esscher(const BilateralGammaParams& p, const MarketParams& m,
                              const SolverSettings& s = {});

/// Drift of the exponential transform under the tilt theta <= 0: the
/// two-integral expression minus (r - q). Strictly increasing in theta.
/// theta = 0 requires lambda_plus > 1 and evaluates in closed form.
double memm_drift(const BilateralGammaParams& p, const MarketParams& m,
                  double theta, const SolverSettings& s = {});

/// Relative entropy of the tilted measure for a given theta <= 0
/// (two quadratures plus the (r - q) * theta term).
double memm_entropy(const BilateralGammaParams& p, const MarketParams& m,
                    double theta, const SolverSettings& s = {});

/// Minimal entropy martingale measure: vartheta <= 0 with drift zero.
/// Exists always if lambda_plus <= 1; for lambda_plus > 1 exists iff
/// Psi(1) >= r - q. Law is TiltedLevy (no closed-form CF).
MeasureSolution solve_memm(const BilateralGammaParams& p, const MarketParams& m,
                           const SolverSettings& s = {});

/// Lower endpoint of the bilateral-Esscher parameter interval
/// (-inf when r = q).
double phi_domain_lower(const BilateralGammaParams& p, const MarketParams& m);

/// The map theta_minus = Phi(theta_plus) making the bilateral Esscher
/// transform a martingale measure; strictly increasing on
/// (phi_domain_lower, lambda_plus - 1).
double phi_map(const BilateralGammaParams& p, const MarketParams& m, double theta);

/// Esscher parameter via the fixed-point equation Phi(Theta) = -Theta;
/// must agree with solve_esscher.
double esscher_via_fixed_point(const BilateralGammaParams& p, const MarketParams& m,
                               const SolverSettings& s = {});

/// Relative entropy of the bilateral Esscher transform,
/// a+ g(l+/(l+-t+)) + a- g(l-/(l--t-)) with g(x) = x - 1 - ln x.
double bilateral_entropy(const BilateralGammaParams& p, double theta_plus,
                         double theta_minus);

/// Entropy-minimal martingale measure within the bilateral Gamma class:
/// minimizes f over the admissible interval; exists for all parameters.
MeasureSolution solve_bilateral_esscher(const BilateralGammaParams& p,
                                        const MarketParams& m,
                                        const SolverSettings& s = {});

/// E[(dP'/dP)^p] for the bilateral Esscher transform; >= 1, equality iff
/// both tilts vanish. Requires theta_plus < l+/p and theta_minus < l-/p.
double p_distance(const BilateralGammaParams& p, double pexp, double theta_plus,
                  double theta_minus);

/// p-optimal martingale measure within the bilateral Gamma class
/// (minimizer of f_p on the feasible sub-interval).
MeasureSolution solve_p_optimal(const BilateralGammaParams& p, const MarketParams& m,
                                double pexp, const SolverSettings& s = {});

/// The structure-condition constant c = (Psi(1)-(r-q)) / (Psi(2)-2 Psi(1));
/// requires lambda_plus > 2 (denominator positive).
double mmm_constant(const BilateralGammaParams& p, const MarketParams& m);

/// The law of X under the minimal martingale measure for a given c in [-1,0]:
/// a convolution of two bilateral Gamma laws, degenerate components dropped
/// at the endpoints.
RiskNeutralLaw mmm_law(const BilateralGammaParams& p, double c);

/// Minimal martingale measure; exists iff c in [-1, 0].
MeasureSolution solve_mmm(const BilateralGammaParams& p, const MarketParams& m);

} // namespace bilgamma

#endif
