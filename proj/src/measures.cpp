#include "bilgamma/measures.hpp"

#include <cmath>
#include <limits>

#include "bilgamma/bgcore.hpp"
#include "bilgamma/numerics.hpp"

namespace bilgamma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kResidualTol = 1e-10;   // martingale residual acceptance
constexpr double kAlreadyMartingale = 1e-13; // short-circuit threshold
constexpr double kGoldenTol = 1e-10;     // parameter tolerance for 1-D minimization

void validate(const SolverSettings& s)
{
    if (!(s.root_tol > 0.0) || !(s.quad_rel_tol > 0.0) ||
        !(s.max_bracket_expansions > 0) || !(s.boundary_offset > 0.0))
        throw DomainError("SolverSettings: all fields must be positive");
}

// x - 1 - ln x evaluated as t - log1p(t) with x = 1 + t
double g_entropy(double t) { return t - std::log1p(t); }

double esscher_f(const BilateralGammaParams& p, double theta)
{
    // alpha+ [ln(l+ - th) - ln(l+ - 1 - th)] + alpha- [ln(l- + th) - ln(l- + 1 + th)]
    return p.alpha_plus * std::log1p(1.0 / (p.lambda_plus - 1.0 - theta))
         - p.alpha_minus * std::log1p(1.0 / (p.lambda_minus + theta));
}

bool physical_is_martingale(const BilateralGammaParams& p, const MarketParams& m)
{
    return p.lambda_plus > 1.0 &&
           std::abs(cumulant(p, 1.0) - (m.r - m.q)) < kAlreadyMartingale;
}

void verify_residual(const RiskNeutralLaw& law, const MarketParams& m,
                     const char* who)
{
    const double res = law_martingale_residual(law, m);
    if (!(std::abs(res) < kResidualTol))
        throw NumericError(std::string(who) + ": martingale residual " +
                           std::to_string(res) + " exceeds tolerance");
}

} // namespace

MeasureSolution solve_esscher(const BilateralGammaParams& p, const MarketParams& m,
                              const SolverSettings& s)
{
    validate(s);
    if (!(p.lambda_plus + p.lambda_minus > 1.0))
        throw NoSolutionError(
            "solve_esscher: lambda_plus + lambda_minus <= 1, no Esscher "
            "martingale measure exists");

    if (physical_is_martingale(p, m)) {
        return {MeasureKind::Esscher, EsscherParams{0.0}, RiskNeutralLaw{p}, 0.0};
    }

    const double lo = -p.lambda_minus;
    const double hi = p.lambda_plus - 1.0;
    const double width = hi - lo;
    const double target = m.r - m.q;
    auto fn = [&](double th) { return esscher_f(p, th) - target; };

    double a = lo + s.boundary_offset * width;
    double fa = fn(a);
    for (int i = 0; fa > 0.0; ++i) {
        if (i >= s.max_bracket_expansions)
            throw NumericError("solve_esscher: could not bracket near the lower endpoint");
        a = lo + 0.25 * (a - lo);
        fa = fn(a);
    }
    double b = hi - s.boundary_offset * width;
    double fb = fn(b);
    for (int i = 0; fb < 0.0; ++i) {
        if (i >= s.max_bracket_expansions)
            throw NumericError("solve_esscher: could not bracket near the upper endpoint");
        b = hi - 0.25 * (hi - b);
        fb = fn(b);
    }

    const double theta = num::brent_root(fn, a, b, fa, fb, s.root_tol);
    const BilateralGammaParams law{p.alpha_plus, p.lambda_plus - theta,
                                   p.alpha_minus, p.lambda_minus + theta};
    verify_residual(law, m, "solve_esscher");
    const double entropy = bilateral_entropy(p, theta, -theta);
    return {MeasureKind::Esscher, EsscherParams{theta}, RiskNeutralLaw{law}, entropy};
}

namespace {

// integrand of the positive-jump drift integral, finite at x = 0
double memm_drift_plus(double lambda_plus, double theta, double x)
{
    if (x == 0.0)
        return 1.0;
    const double em = std::expm1(x);
    if (em > 1e300)
        return 0.0; // theta < 0: the tilt factor has long since underflowed
    return em / x * std::exp(theta * em - lambda_plus * x);
}

double memm_drift_minus(double lambda_minus, double theta, double x)
{
    if (x == 0.0)
        return -1.0;
    const double em = std::expm1(-x); // in (-1, 0)
    return em / x * std::exp(theta * em - lambda_minus * x);
}

void check_tilt(double theta)
{
    if (!(theta <= 0.0))
        throw DomainError("memm: tilt parameter must be <= 0");
    if (theta < -700.0)
        throw NumericError("memm: tilt parameter too extreme for double-precision quadrature");
}

} // namespace

double memm_drift(const BilateralGammaParams& p, const MarketParams& m,
                  double theta, const SolverSettings& s)
{
    validate(s);
    check_tilt(theta);
    if (theta == 0.0) {
        if (!(p.lambda_plus > 1.0))
            throw DomainError("memm_drift: theta = 0 requires lambda_plus > 1");
        return cumulant(p, 1.0) - (m.r - m.q);
    }
    const double ip = num::integrate_zero_to_inf(
        [&](double x) { return memm_drift_plus(p.lambda_plus, theta, x); },
        s.quad_rel_tol);
    const double im = num::integrate_zero_to_inf(
        [&](double x) { return memm_drift_minus(p.lambda_minus, theta, x); },
        s.quad_rel_tol);
    return p.alpha_plus * ip + p.alpha_minus * im - (m.r - m.q);
}

double memm_entropy(const BilateralGammaParams& p, const MarketParams& m,
                    double theta, const SolverSettings& s)
{
    validate(s);
    check_tilt(theta);
    if (theta == 0.0)
        return 0.0;
    const double ip = num::integrate_zero_to_inf(
        [&](double x) {
            if (x == 0.0)
                return theta;
            const double em = std::expm1(x);
            return std::expm1(theta * em) / x * std::exp(-p.lambda_plus * x);
        },
        s.quad_rel_tol);
    const double im = num::integrate_zero_to_inf(
        [&](double x) {
            if (x == 0.0)
                return -theta;
            const double em = std::expm1(-x);
            return std::expm1(theta * em) / x * std::exp(-p.lambda_minus * x);
        },
        s.quad_rel_tol);
    return -p.alpha_plus * ip - p.alpha_minus * im + (m.r - m.q) * theta;
}

MeasureSolution solve_memm(const BilateralGammaParams& p, const MarketParams& m,
                           const SolverSettings& s)
{
    validate(s);
    if (p.lambda_plus > 1.0) {
        const double boundary = cumulant(p, 1.0) - (m.r - m.q);
        if (boundary < 0.0)
            throw NoSolutionError(
                "solve_memm: lambda_plus > 1 and Psi(1) < r - q, no minimal "
                "entropy martingale measure exists");
        if (boundary < kAlreadyMartingale) {
            return {MeasureKind::Memm, MemmParams{0.0},
                    RiskNeutralLaw{TiltedLevy{p, 0.0}}, 0.0};
        }
    }

    auto drift = [&](double th) { return memm_drift(p, m, th, s); };

    // right end of the bracket: at 0 for lambda_plus > 1 (drift(0) > 0 by the
    // gate above); otherwise slide toward 0 until the drift turns positive
    double b, fb;
    if (p.lambda_plus > 1.0) {
        b = 0.0;
        fb = cumulant(p, 1.0) - (m.r - m.q);
    } else {
        b = -1.0;
        fb = drift(b);
        for (int i = 0; fb < 0.0; ++i) {
            if (i >= s.max_bracket_expansions)
                throw NumericError("solve_memm: could not bracket toward zero tilt");
            b *= 0.25;
            fb = drift(b);
        }
    }
    double a = (b == 0.0) ? -1.0 : 2.0 * b;
    double fa = drift(a);
    for (int i = 0; fa > 0.0; ++i) {
        if (i >= s.max_bracket_expansions || a < -690.0)
            throw NumericError("solve_memm: could not bracket the tilt parameter");
        a *= 2.0;
        fa = drift(a);
    }

    const double vartheta = num::brent_root(drift, a, b, fa, fb, s.root_tol);

    // residual acceptance scaled by the size of the drift terms
    const double scale =
        p.alpha_plus * std::abs(num::integrate_zero_to_inf(
            [&](double x) { return std::abs(memm_drift_plus(p.lambda_plus, vartheta, x)); },
            s.quad_rel_tol)) +
        std::abs(m.r - m.q) + 1.0;
    if (!(std::abs(drift(vartheta)) < 10.0 * s.quad_rel_tol * scale))
        throw NumericError("solve_memm: drift residual exceeds tolerance at the solution");

    const double entropy = memm_entropy(p, m, vartheta, s);
    return {MeasureKind::Memm, MemmParams{vartheta},
            RiskNeutralLaw{TiltedLevy{p, vartheta}}, entropy};
}

double phi_domain_lower(const BilateralGammaParams& p, const MarketParams& m)
{
    if (m.r == m.q)
        return -kInf;
    return p.lambda_plus - 1.0 - 1.0 / std::expm1((m.r - m.q) / p.alpha_plus);
}

double phi_map(const BilateralGammaParams& p, const MarketParams& m, double theta)
{
    const double hi = p.lambda_plus - 1.0;
    const double lo = phi_domain_lower(p, m);
    if (!(theta > lo && theta < hi))
        throw DomainError("phi_map: theta outside the admissible interval");
    // ((l+ - th)/(l+ - 1 - th))^{a+} e^{-(r-q)} = exp(fplus - (r-q));
    // the domain guarantees the exponent is positive.
    const double fplus = p.alpha_plus * std::log1p(1.0 / (hi - theta));
    const double am1 = std::expm1((fplus - (m.r - m.q)) / p.alpha_minus);
    return p.lambda_minus - 1.0 / am1;
}

double esscher_via_fixed_point(const BilateralGammaParams& p, const MarketParams& m,
                               const SolverSettings& s)
{
    validate(s);
    if (!(p.lambda_plus + p.lambda_minus > 1.0))
        throw NoSolutionError(
            "esscher_via_fixed_point: lambda_plus + lambda_minus <= 1, no "
            "Esscher martingale measure exists");
    if (physical_is_martingale(p, m))
        return 0.0;

    const double hi = p.lambda_plus - 1.0;
    const double lo = phi_domain_lower(p, m);
    auto fn = [&](double th) { return phi_map(p, m, th) + th; };

    double b = hi - s.boundary_offset * std::max(1.0, std::abs(hi));
    double fb = fn(b);
    for (int i = 0; fb < 0.0; ++i) {
        if (i >= s.max_bracket_expansions)
            throw NumericError("esscher_via_fixed_point: no bracket near the upper endpoint");
        b = hi - 0.25 * (hi - b);
        fb = fn(b);
    }
    double a, fa;
    if (lo == -kInf) {
        a = b - 1.0;
        fa = fn(a);
        double step = 2.0;
        for (int i = 0; fa > 0.0; ++i) {
            if (i >= s.max_bracket_expansions)
                throw NumericError("esscher_via_fixed_point: no bracket expanding left");
            a -= step;
            step *= 2.0;
            fa = fn(a);
        }
    } else {
        a = lo + s.boundary_offset * (hi - lo);
        fa = fn(a);
        for (int i = 0; fa > 0.0; ++i) {
            if (i >= s.max_bracket_expansions)
                throw NumericError("esscher_via_fixed_point: no bracket near the lower endpoint");
            a = lo + 0.25 * (a - lo);
            fa = fn(a);
        }
    }
    return num::brent_root(fn, a, b, fa, fb, s.root_tol);
}

double bilateral_entropy(const BilateralGammaParams& p, double theta_plus,
                         double theta_minus)
{
    if (!(theta_plus < p.lambda_plus) || !(theta_minus < p.lambda_minus))
        throw DomainError("bilateral_entropy: tilts must satisfy theta < lambda");
    const double tp = theta_plus / (p.lambda_plus - theta_plus);
    const double tm = theta_minus / (p.lambda_minus - theta_minus);
    return p.alpha_plus * g_entropy(tp) + p.alpha_minus * g_entropy(tm);
}

namespace {

// shared minimization driver for f (entropy) and ln f_p over (lo, hi)
template <typename F>
double minimize_on_interval(F&& f, double lo, double hi, int max_steps)
{
    double x0, h0;
    if (lo == -kInf) {
        x0 = hi - 1.0;
        h0 = 1.0;
    } else {
        x0 = lo + 0.5 * (hi - lo);
        h0 = 0.125 * (hi - lo);
    }
    const auto br = num::expand_min_bracket(f, lo, hi, x0, h0, max_steps);
    return num::golden_min(f, br.a, br.m, br.b, kGoldenTol);
}

} // namespace

MeasureSolution solve_bilateral_esscher(const BilateralGammaParams& p,
                                        const MarketParams& m,
                                        const SolverSettings& s)
{
    validate(s);
    if (physical_is_martingale(p, m)) {
        return {MeasureKind::BilateralEsscher, BilateralEsscherParams{0.0, 0.0},
                RiskNeutralLaw{p}, 0.0};
    }
    const double hi = p.lambda_plus - 1.0;
    const double lo = phi_domain_lower(p, m);
    auto f = [&](double th) {
        return bilateral_entropy(p, th, phi_map(p, m, th));
    };
    const double theta = minimize_on_interval(f, lo, hi, s.max_bracket_expansions);
    const double theta_minus = phi_map(p, m, theta);
    const BilateralGammaParams law{p.alpha_plus, p.lambda_plus - theta,
                                   p.alpha_minus, p.lambda_minus - theta_minus};
    verify_residual(law, m, "solve_bilateral_esscher");
    return {MeasureKind::BilateralEsscher, BilateralEsscherParams{theta, theta_minus},
            RiskNeutralLaw{law}, f(theta)};
}

double p_distance(const BilateralGammaParams& p, double pexp, double theta_plus,
                  double theta_minus)
{
    if (!(pexp > 1.0))
        throw DomainError("p_distance: exponent must be > 1");
    if (!(theta_plus < p.lambda_plus / pexp) || !(theta_minus < p.lambda_minus / pexp))
        throw DomainError("p_distance: tilts must satisfy theta < lambda / p");
    const double lg =
        -p.alpha_plus * std::log1p(-pexp * theta_plus / p.lambda_plus)
        - p.alpha_minus * std::log1p(-pexp * theta_minus / p.lambda_minus)
        + pexp * p.alpha_plus * std::log1p(-theta_plus / p.lambda_plus)
        + pexp * p.alpha_minus * std::log1p(-theta_minus / p.lambda_minus);
    return std::exp(lg);
}

MeasureSolution solve_p_optimal(const BilateralGammaParams& p, const MarketParams& m,
                                double pexp, const SolverSettings& s)
{
    validate(s);
    if (!(pexp > 1.0))
        throw DomainError("solve_p_optimal: exponent must be > 1");

    const double lo = phi_domain_lower(p, m);
    double hi = std::min(p.lambda_plus - 1.0, p.lambda_plus / pexp);
    if (!(lo < hi))
        throw NoSolutionError("solve_p_optimal: feasible interval is empty");

    // the constraint Phi(theta) < lambda_minus / p always binds before the
    // upper endpoint; locate its boundary by bisection on the monotone Phi
    const double phi_cap = p.lambda_minus / pexp;
    const double margin = s.boundary_offset * std::max(1.0, std::abs(hi));
    double ub = std::min(hi, p.lambda_plus - 1.0) - margin;
    if (phi_map(p, m, ub) >= phi_cap) {
        double a = ub;
        double step = std::max(1.0, std::abs(ub));
        for (int i = 0;; ++i) {
            if (i >= s.max_bracket_expansions)
                throw NumericError("solve_p_optimal: could not bracket the Phi constraint");
            const double cand = a - step;
            step *= 2.0;
            if (lo != -kInf && cand <= lo) {
                a = lo + s.boundary_offset * (ub - lo);
                if (phi_map(p, m, a) >= phi_cap)
                    throw NoSolutionError("solve_p_optimal: feasible interval is empty");
                break;
            }
            a = cand;
            if (phi_map(p, m, a) < phi_cap)
                break;
        }
        double b = ub;
        for (int i = 0; i < 200 && b - a > 0.5 * s.root_tol; ++i) {
            const double mid = 0.5 * (a + b);
            (phi_map(p, m, mid) < phi_cap ? a : b) = mid;
        }
        hi = a;
    } else {
        hi = ub;
    }
    if (!(lo < hi))
        throw NoSolutionError("solve_p_optimal: feasible interval is empty");

    if (physical_is_martingale(p, m) && 0.0 > lo && 0.0 < hi) {
        return {MeasureKind::POptimal, POptimalParams{pexp, 0.0, 0.0},
                RiskNeutralLaw{p}, 1.0};
    }

    auto lnfp = [&](double th) {
        const double phi = phi_map(p, m, th);
        return -p.alpha_plus * std::log1p(-pexp * th / p.lambda_plus)
               - p.alpha_minus * std::log1p(-pexp * phi / p.lambda_minus)
               + pexp * p.alpha_plus * std::log1p(-th / p.lambda_plus)
               + pexp * p.alpha_minus * std::log1p(-phi / p.lambda_minus);
    };
    const double theta = minimize_on_interval(lnfp, lo, hi, s.max_bracket_expansions);
    const double theta_minus = phi_map(p, m, theta);
    const BilateralGammaParams law{p.alpha_plus, p.lambda_plus - theta,
                                   p.alpha_minus, p.lambda_minus - theta_minus};
    verify_residual(law, m, "solve_p_optimal");
    return {MeasureKind::POptimal, POptimalParams{pexp, theta, theta_minus},
            RiskNeutralLaw{law}, std::exp(lnfp(theta))};
}

double mmm_constant(const BilateralGammaParams& p, const MarketParams& m)
{
    if (!(p.lambda_plus > 2.0))
        throw DomainError("mmm_constant: requires lambda_plus > 2");
    const double denom = cumulant(p, 2.0) - 2.0 * cumulant(p, 1.0);
    return (cumulant(p, 1.0) - (m.r - m.q)) / denom;
}

RiskNeutralLaw mmm_law(const BilateralGammaParams& p, double c)
{
    if (!(c >= -1.0 - 1e-13 && c <= 1e-13))
        throw DomainError("mmm_law: c outside [-1, 0]");
    if (std::abs(c) < 1e-13)
        return p; // physical measure
    if (std::abs(c + 1.0) < 1e-13)
        return BilateralGammaParams{p.alpha_plus, p.lambda_plus - 1.0,
                                    p.alpha_minus, p.lambda_minus + 1.0};
    ConvolvedLaw law;
    law.components.push_back({(c + 1.0) * p.alpha_plus, p.lambda_plus,
                              (c + 1.0) * p.alpha_minus, p.lambda_minus});
    law.components.push_back({-c * p.alpha_plus, p.lambda_plus - 1.0,
                              -c * p.alpha_minus, p.lambda_minus + 1.0});
    return law;
}

MeasureSolution solve_mmm(const BilateralGammaParams& p, const MarketParams& m)
{
    const double c = mmm_constant(p, m);
    if (!(c >= -1.0 - 1e-13 && c <= 1e-13))
        throw NoSolutionError(
            "solve_mmm: c = " + std::to_string(c) +
            " lies outside [-1, 0], the minimal martingale measure does not exist");

    // cross-check of the equivalent inequality pair
    const double psi1 = cumulant(p, 1.0);
    const double psi2 = cumulant(p, 2.0);
    const double slack = 1e-12 * (1.0 + std::abs(psi1) + std::abs(psi2));
    if (!(psi1 <= m.r - m.q + slack) || !(psi2 - psi1 >= m.r - m.q - slack))
        throw NumericError("solve_mmm: inequality cross-check disagrees with the c-interval test");

    const double cc = std::min(std::max(c, -1.0), 0.0);
    RiskNeutralLaw law = mmm_law(p, cc);
    verify_residual(law, m, "solve_mmm");
    return {MeasureKind::MinimalMartingale, MinimalMartingaleParams{cc}, law,
            std::nullopt};
}

} // namespace bilgamma
