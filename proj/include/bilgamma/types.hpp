#ifndef BILGAMMA_TYPES_HPP
#define BILGAMMA_TYPES_HPP

#include <variant>
#include <vector>

#include "bilgamma/errors.hpp"

namespace bilgamma {

/// Parameters of a bilateral Gamma law per unit time: the difference of a
/// Gamma(alpha_plus, lambda_plus) and an independent Gamma(alpha_minus,
/// lambda_minus) variable. All four strictly positive.
struct BilateralGammaParams {
    double alpha_plus;
    double lambda_plus;
    double alpha_minus;
    double lambda_minus;

    BilateralGammaParams(double ap, double lp, double am, double lm)
        : alpha_plus(ap), lambda_plus(lp), alpha_minus(am), lambda_minus(lm)
    {
        if (!(ap > 0.0) || !(lp > 0.0) || !(am > 0.0) || !(lm > 0.0))
            throw DomainError("BilateralGammaParams: all four parameters must be > 0");
    }
};

/// Market environment: interest rate r, dividend rate q (same time unit as
/// the process parameters), spot s0. Requires r >= q >= 0 and s0 > 0.
struct MarketParams {
    double r;
    double q;
    double s0;

    MarketParams(double r_, double q_, double s0_) : r(r_), q(q_), s0(s0_)
    {
        if (!(r >= q && q >= 0.0))
            throw DomainError("MarketParams: need r >= q >= 0");
        if (!(s0 > 0.0))
            throw DomainError("MarketParams: need s0 > 0");
    }
};

/// Sum of independent bilateral Gamma processes; the characteristic function
/// is the product over components.
struct ConvolvedLaw {
    std::vector<BilateralGammaParams> components;
};

/// Exponential tilt of the exponential transform of a bilateral Gamma base
/// law. No closed-form characteristic function; carried for reporting only.
struct TiltedLevy {
    BilateralGammaParams base;
    double theta; // <= 0

    TiltedLevy(const BilateralGammaParams& b, double th) : base(b), theta(th)
    {
        if (!(th <= 0.0))
            throw DomainError("TiltedLevy: tilt parameter must be <= 0");
    }
};

using RiskNeutralLaw = std::variant<BilateralGammaParams, ConvolvedLaw, TiltedLevy>;

/// Kernel execution mode. Parallel and Serial are required to produce
/// bit-identical results; the serial path is the reference the parallel one
/// is tested against.
enum class Execution { Serial, Parallel };

enum class OptionKind { Call, Put };

/// European option contract. Maturity is in the same time unit as the rate
/// parameters of the driving process.
struct OptionSpec {
    double strike;
    double maturity;
    OptionKind kind = OptionKind::Call;

    OptionSpec(double k, double t, OptionKind kd = OptionKind::Call)
        : strike(k), maturity(t), kind(kd)
    {
        if (!(k > 0.0)) throw DomainError("OptionSpec: strike must be > 0");
        if (!(t > 0.0)) throw DomainError("OptionSpec: maturity must be > 0");
    }
};

} // namespace bilgamma

#endif
