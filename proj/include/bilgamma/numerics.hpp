#ifndef BILGAMMA_NUMERICS_HPP
#define BILGAMMA_NUMERICS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <utility>

#include "bilgamma/errors.hpp"

namespace bilgamma::num {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }

/// Neumaier-compensated accumulator. Addition order is part of the contract:
/// callers feed values in a fixed order so results do not depend on threading.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

// min_depth forces subdivision before the error estimate is trusted; without
// it the 3-vs-5-point comparison can alias on oscillatory integrands and
// terminate with an O(1) error.
template <typename F, typename T>
T simpson_rec(F& f, double a, double b, T fa, T fm, T fb, T whole, double tol, int depth,
              int min_depth = 0)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const T flm = f(lm);
    const T frm = f(rm);
    const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const T delta = left + right - whole;
    // negated comparison so a non-finite delta terminates instead of recursing
    if (depth <= 0 || (min_depth <= 0 && !(magnitude(delta) > 15.0 * tol)))
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, min_depth - 1)
         + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, min_depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance `tol`.
/// Works for real and complex integrands; function values are passed down
/// the recursion, so each abscissa is evaluated exactly once. `min_depth`
/// levels of subdivision are forced before convergence may be declared
/// (callers set it from a known oscillation scale).
template <typename F, typename T = std::invoke_result_t<F, double>>
T integrate_adaptive(F&& f, double a, double b, double tol, int max_depth = 52,
                     int min_depth = 0)
{
    if (!(b > a)) {
        if (b == a) return T{};
        throw DomainError("integrate_adaptive: inverted interval");
    }
    const T fa = f(a);
    const T fm = f(0.5 * (a + b));
    const T fb = f(b);
    const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth, min_depth);
}

/// Integral of f over [0, inf) for integrands with decaying tails.
/// Panel layout: dyadic octaves [0, 2^-24], ..., [1/2, 1] below the split
/// point at 1, then [1,2], [2,4], ... doubling above it; the ladder stops
/// once a tail panel contributes less than `tail_cut` of the running total.
/// The integrand must be finite at 0 (callers supply the limiting value).
/// Tolerances are self-scaled per octave, so integrands concentrated at any
/// rate up to ~2^24 are resolved to rel_tol without caller hints.
template <typename F>
double integrate_zero_to_inf(F&& f, double rel_tol, double tail_cut = 1e-16,
                             double hard_cap = 1e9)
{
    CompensatedSum acc;
    double scale = 0.0;

    auto do_panel = [&](double a, double b) {
        const double fa = f(a);
        const double fm = f(0.5 * (a + b));
        const double fb = f(b);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        const double probe =
            (b - a) * std::max({std::abs(fa), std::abs(fm), std::abs(fb)});
        const double tol =
            0.0625 * rel_tol * std::max({scale, std::abs(whole), probe});
        const double part = detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
        if (!std::isfinite(part))
            throw NumericError("integrate_zero_to_inf: non-finite panel value");
        acc.add(part);
        scale = std::max(scale, std::abs(acc.value()));
        return part;
    };

    do_panel(0.0, 0x1.0p-24);
    for (int k = -24; k < 0; ++k)
        do_panel(std::ldexp(1.0, k), std::ldexp(1.0, k + 1));

    double a = 1.0, b = 2.0;
    for (int panel = 0; panel < 64; ++panel) {
        const double part = do_panel(a, b);
        if (std::abs(part) <= tail_cut * scale)
            return acc.value();
        a = b;
        b *= 2.0;
        if (a > hard_cap)
            throw NumericError("integrate_zero_to_inf: tail did not die off");
    }
    throw NumericError("integrate_zero_to_inf: panel budget exhausted");
}

/// Bracketed root finding, Brent's method (bisection safeguarded by
/// secant / inverse quadratic steps). Requires f(a), f(b) of opposite sign.
/// Terminates when the bracket width falls below xtol (plus rounding slack).
template <typename F>
double brent_root(F&& f, double a, double b, double fa, double fb,
                  double xtol, int max_iter = 200)
{
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw NumericError("brent_root: endpoints do not bracket a root");

    double c = a, fc = fa;
    double d = b - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa; d = b - a; e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0)
            return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double rr = fb / fc;
                p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
                q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = f(b);
    }
    return b;
}

/// Golden-section minimization given a bracketing triple a < m < b with
/// f(m) below both endpoint values. Derivative-free; runs to interval width
/// xtol or the machine plateau, whichever comes first.
template <typename F>
double golden_min(F&& f, double a, double m, double b, double xtol,
                  int max_iter = 400)
{
    constexpr double invphi = 0.6180339887498949;
    double x0 = a, x3 = b, x1, x2;
    if (b - m > m - a) {
        x1 = m;
        x2 = m + (1.0 - invphi) * (b - m);
    } else {
        x2 = m;
        x1 = m - (1.0 - invphi) * (m - a);
    }
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && std::abs(x3 - x0) > xtol; ++it) {
        if (f1 < f2) {
            x3 = x2; x2 = x1; f2 = f1;
            x1 = invphi * x2 + (1.0 - invphi) * x0;
            f1 = f(x1);
        } else {
            x0 = x1; x1 = x2; f1 = f2;
            x2 = invphi * x1 + (1.0 - invphi) * x3;
            f2 = f(x2);
        }
    }
    return (f1 < f2) ? x1 : x2;
}

/// Expanding search for a three-point minimization bracket on the open
/// interval (lo, hi); lo may be -inf. Assumes f is continuous, tends to
/// +inf at both ends, and has a single interior minimum. Starts at x0 and
/// marches away from hi with doubling steps (halving the gap to a finite lo).
struct MinBracket {
    double a, m, b;
};

template <typename F>
MinBracket expand_min_bracket(F&& f, double lo, double hi, double x0, double h0,
                              int max_steps)
{
    const double inf = std::numeric_limits<double>::infinity();
    double xr = x0;
    double fr = f(xr);

    // first probe sits to the right of x0, offset toward hi
    double probe = x0 + 0.5 * (hi - x0);
    double fprobe = f(probe);
    if (fprobe < fr) {
        // minimum lies between x0 and hi: march right, halving the gap to hi
        double xm = probe, fm = fprobe, xl = x0;
        for (int i = 0; i < max_steps; ++i) {
            double xn = xm + 0.5 * (hi - xm);
            double fn = f(xn);
            if (fn > fm)
                return {xl, xm, xn};
            xl = xm; xm = xn; fm = fn;
        }
        throw NumericError("expand_min_bracket: no bracket marching toward upper endpoint");
    }

    // minimum lies at or left of x0: march left with growing steps
    double xm = xr, fm = fr;
    double xright = probe;
    double h = h0;
    for (int i = 0; i < max_steps; ++i) {
        double xn;
        if (lo == -inf) {
            xn = xm - h;
            h *= 2.0;
        } else {
            xn = std::max(xm - h, lo + 0.5 * (xm - lo));
            h *= 2.0;
        }
        const double fn = f(xn);
        if (fn > fm)
            return {xn, xm, xright};
        xright = xm;
        xm = xn; fm = fn;
    }
    throw NumericError("expand_min_bracket: no bracket within step budget");
}

} // namespace bilgamma::num

#endif
