#include "bilgamma/mcoracle.hpp"

#include <cmath>
#include <random>

#include <boost/math/special_functions/gamma.hpp>

#include "bilgamma/bgcore.hpp"
#include "bilgamma/numerics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bilgamma::mc {

namespace {

// Generation is pinned for reproducibility: per-chunk MT19937-64 seeded via a
// SplitMix64 finalizer of (seed, chunk index); uniforms are (x>>11 + 0.5)/2^53
// in the open interval (0,1); normals via the Marsaglia polar method (second
// variate discarded); Gamma shape >= 1 via Marsaglia-Tsang (2000) squeeze
// accept-reject, shape < 1 via the boost-by-uniform-power trick. The
// antithetic path replaces accept-reject by Gamma quantile inversion so that
// (u, 1-u) pairs stay antithetic.
constexpr std::uint64_t kChunkSize = 65536; // even: antithetic pairs never straddle chunks

std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk)
{
    return splitmix64(seed + (chunk + 1) * 0x9E3779B97F4A7C15ULL);
}

class Rng {
public:
    explicit Rng(std::uint64_t s) : eng_(s) {}

    double u01()
    {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal()
    {
        for (;;) {
            const double v1 = 2.0 * u01() - 1.0;
            const double v2 = 2.0 * u01() - 1.0;
            const double s = v1 * v1 + v2 * v2;
            if (s < 1.0 && s > 0.0)
                return v1 * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    // unit-rate Gamma(a)
    double gamma_shape(double a)
    {
        if (a < 1.0)
            return gamma_shape(a + 1.0) * std::pow(u01(), 1.0 / a);
        const double d = a - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = u01();
            if (u < 1.0 - 0.0331 * (x * x) * (x * x))
                return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return d * v;
        }
    }

    double gamma(double shape, double rate) { return gamma_shape(shape) / rate; }

private:
    std::mt19937_64 eng_;
};

double gamma_quantile(double shape, double rate, double u)
{
    return boost::math::gamma_p_inv(shape, u) / rate;
}

struct LawView {
    std::vector<BilateralGammaParams> comps; // shapes already scaled by t
};

// one draw of X_t (sum over components of Gamma difference)
double draw_x(Rng& rng, const LawView& lv)
{
    double x = 0.0;
    for (const auto& c : lv.comps)
        x += rng.gamma(c.alpha_plus, c.lambda_plus) - rng.gamma(c.alpha_minus, c.lambda_minus);
    return x;
}

double draw_x_from_uniforms(const LawView& lv, const double* u, bool flip)
{
    double x = 0.0;
    std::size_t j = 0;
    for (const auto& c : lv.comps) {
        const double up = flip ? 1.0 - u[j] : u[j];
        const double um = flip ? 1.0 - u[j + 1] : u[j + 1];
        j += 2;
        x += gamma_quantile(c.alpha_plus, c.lambda_plus, up)
           - gamma_quantile(c.alpha_minus, c.lambda_minus, um);
    }
    return x;
}

void fill_chunk(const LawView& lv, const SimConfig& cfg, std::uint64_t chunk,
                std::uint64_t n, std::vector<double>& out)
{
    const std::uint64_t lo = chunk * kChunkSize;
    const std::uint64_t hi = std::min(n, lo + kChunkSize);
    Rng rng(chunk_seed(cfg.seed, chunk));
    if (!cfg.antithetic) {
        for (std::uint64_t i = lo; i < hi; ++i)
            out[i] = draw_x(rng, lv);
        return;
    }
    const std::size_t nuni = 2 * lv.comps.size();
    std::vector<double> u(nuni);
    for (std::uint64_t i = lo; i < hi; i += 2) {
        for (auto& uj : u)
            uj = rng.u01();
        out[i] = draw_x_from_uniforms(lv, u.data(), false);
        if (i + 1 < hi)
            out[i + 1] = draw_x_from_uniforms(lv, u.data(), true);
    }
}

LawView make_view(const RiskNeutralLaw& law, double t)
{
    if (!(t > 0.0))
        throw DomainError("sample_terminal: t must be > 0");
    LawView lv;
    for (const auto& comp : law_components(law))
        lv.comps.push_back(scale_time(comp, t));
    return lv;
}

std::vector<double> generate(const LawView& lv, const SimConfig& cfg, Execution exec)
{
    if (cfg.n_samples < 1)
        throw DomainError("SimConfig: n_samples must be >= 1");
    const std::uint64_t n = cfg.n_samples;
    const std::uint64_t nchunks = (n + kChunkSize - 1) / kChunkSize;
    std::vector<double> out(n);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c)
            fill_chunk(lv, cfg, static_cast<std::uint64_t>(c), n, out);
    } else {
        for (std::uint64_t c = 0; c < nchunks; ++c)
            fill_chunk(lv, cfg, c, n, out);
    }
    return out;
}

// mean / standard error with a fixed-order compensated two-pass reduction;
// antithetic estimates use pair means for the variance.
McEstimate summarize(const std::vector<double>& v, bool antithetic)
{
    const std::uint64_t n = v.size();
    num::CompensatedSum s;
    for (double x : v)
        s.add(x);
    const double mean = s.value() / static_cast<double>(n);
    if (n == 1)
        return {mean, 0.0, n};

    num::CompensatedSum dev2;
    std::uint64_t neff = 0;
    if (!antithetic) {
        for (double x : v)
            dev2.add((x - mean) * (x - mean));
        neff = n;
    } else {
        for (std::uint64_t i = 0; i < n; i += 2) {
            const double pm = (i + 1 < n) ? 0.5 * (v[i] + v[i + 1]) : v[i];
            dev2.add((pm - mean) * (pm - mean));
            ++neff;
        }
    }
    if (neff < 2)
        return {mean, 0.0, n};
    const double var = dev2.value() / static_cast<double>(neff - 1);
    return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(neff)), n};
}

} // namespace

std::vector<double> sample_terminal(const RiskNeutralLaw& law, double t,
                                    const SimConfig& cfg, Execution exec)
{
    return generate(make_view(law, t), cfg, exec);
}

ComponentSamples sample_components(const BilateralGammaParams& p, double t,
                                   const SimConfig& cfg, Execution exec)
{
    // reuse the X sampler twice would desynchronize streams; draw pairs directly
    if (!(t > 0.0))
        throw DomainError("sample_components: t must be > 0");
    if (cfg.n_samples < 1)
        throw DomainError("SimConfig: n_samples must be >= 1");
    const BilateralGammaParams pt = scale_time(p, t);
    const std::uint64_t n = cfg.n_samples;
    const std::uint64_t nchunks = (n + kChunkSize - 1) / kChunkSize;
    ComponentSamples out;
    out.plus.resize(n);
    out.minus.resize(n);

    auto fill = [&](std::uint64_t chunk) {
        const std::uint64_t lo = chunk * kChunkSize;
        const std::uint64_t hi = std::min(n, lo + kChunkSize);
        Rng rng(chunk_seed(cfg.seed, chunk));
        if (!cfg.antithetic) {
            for (std::uint64_t i = lo; i < hi; ++i) {
                out.plus[i] = rng.gamma(pt.alpha_plus, pt.lambda_plus);
                out.minus[i] = rng.gamma(pt.alpha_minus, pt.lambda_minus);
            }
        } else {
            for (std::uint64_t i = lo; i < hi; i += 2) {
                const double up = rng.u01();
                const double um = rng.u01();
                out.plus[i] = gamma_quantile(pt.alpha_plus, pt.lambda_plus, up);
                out.minus[i] = gamma_quantile(pt.alpha_minus, pt.lambda_minus, um);
                if (i + 1 < hi) {
                    out.plus[i + 1] = gamma_quantile(pt.alpha_plus, pt.lambda_plus, 1.0 - up);
                    out.minus[i + 1] = gamma_quantile(pt.alpha_minus, pt.lambda_minus, 1.0 - um);
                }
            }
        }
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c)
            fill(static_cast<std::uint64_t>(c));
    } else {
        for (std::uint64_t c = 0; c < nchunks; ++c)
            fill(c);
    }
    return out;
}

McEstimate mc_price(const RiskNeutralLaw& law, const MarketParams& m,
                    const OptionSpec& opt, const SimConfig& cfg, Execution exec)
{
    if (!(law_right_rate(law) > 1.0))
        throw DomainError("mc_price: E[e^{X_T}] infinite (effective lambda_plus <= 1)");
    const std::vector<double> x = sample_terminal(law, opt.maturity, cfg, exec);
    const double disc = std::exp(-m.r * opt.maturity);
    std::vector<double> pay(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double st = m.s0 * std::exp(x[i]);
        const double intrinsic = (opt.kind == OptionKind::Call) ? st - opt.strike
                                                                : opt.strike - st;
        pay[i] = disc * std::max(intrinsic, 0.0);
    }
    return summarize(pay, cfg.antithetic);
}

McEstimate mc_exp_moment(const BilateralGammaParams& p, double z,
                         const SimConfig& cfg, Execution exec)
{
    if (!(z > -p.lambda_minus + 0.5 && z < p.lambda_plus - 0.5))
        throw DomainError("mc_exp_moment: z must sit inside the strip with margin 0.5");
    const std::vector<double> x = sample_terminal(p, 1.0, cfg, exec);
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        w[i] = std::exp(z * x[i]);
    return summarize(w, cfg.antithetic);
}

} // namespace bilgamma::mc
