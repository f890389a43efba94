#include <doctest.h>

#include <cmath>

#include "bilgamma/bgcore.hpp"
#include "bilgamma/measures.hpp"
#include "bilgamma/mcoracle.hpp"
#include "bilgamma/numerics.hpp"
#include "fixtures.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace bilgamma;

namespace {

struct Moments {
    double mean, var, se_mean, se_var;
};

Moments moments(const std::vector<double>& xs)
{
    const double n = static_cast<double>(xs.size());
    num::CompensatedSum s;
    for (double x : xs)
        s.add(x);
    const double mean = s.value() / n;
    num::CompensatedSum s2, s4;
    for (double x : xs) {
        const double d = x - mean;
        s2.add(d * d);
        s4.add(d * d * d * d);
    }
    const double var = s2.value() / (n - 1.0);
    const double mu4 = s4.value() / n;
    return {mean, var, std::sqrt(var / n), std::sqrt(std::max(mu4 - var * var, 0.0) / n)};
}

} // namespace

TEST_CASE("terminal sampling reproduces the Gamma-difference moments")
{
    const auto p = fixtures::dax();
    mc::SimConfig cfg;
    cfg.n_samples = 400000;
    cfg.seed = 42;
    const double t = 2.0;
    const auto xs = mc::sample_terminal(p, t, cfg);
    const auto mo = moments(xs);
    const double mean_true = t * (p.alpha_plus / p.lambda_plus - p.alpha_minus / p.lambda_minus);
    const double var_true = t * (p.alpha_plus / (p.lambda_plus * p.lambda_plus) +
                                 p.alpha_minus / (p.lambda_minus * p.lambda_minus));
    CHECK(std::abs(mo.mean - mean_true) < 4.0 * mo.se_mean);
    CHECK(std::abs(mo.var - var_true) < 4.0 * mo.se_var);
}

TEST_CASE("determinism: same seed gives the bit-identical sample vector")
{
    const auto p = fixtures::dax();
    mc::SimConfig cfg;
    cfg.n_samples = 150000; // spans multiple chunks
    cfg.seed = 977;
    const auto a = mc::sample_terminal(p, 1.0, cfg);
    const auto b = mc::sample_terminal(p, 1.0, cfg);
    CHECK(a == b);

    const auto serial = mc::sample_terminal(p, 1.0, cfg, Execution::Serial);
    CHECK(a == serial);

#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    for (int nt : {1, 3}) {
        omp_set_num_threads(nt);
        const auto c = mc::sample_terminal(p, 1.0, cfg, Execution::Parallel);
        CHECK(c == serial);
    }
    omp_set_num_threads(saved);
#endif

    mc::SimConfig other = cfg;
    other.seed = 978;
    CHECK(mc::sample_terminal(p, 1.0, other) != a);
}

TEST_CASE("mc_price: forward limit and worthless limit under a martingale law")
{
    const auto p = fixtures::dax();
    // make the physical law a martingale law by matching the rate gap
    const MarketParams m{cumulant(p, 1.0), 0.0, 5000.0};
    mc::SimConfig cfg;
    cfg.n_samples = 300000;
    cfg.seed = 10101;

    const OptionSpec tiny{1e-9 * m.s0, 1.0, OptionKind::Call};
    const auto fwd = mc::mc_price(p, m, tiny, cfg);
    const double forward = m.s0 * std::exp(-m.q * 1.0);
    CHECK(std::abs(fwd.value - forward) < 3.0 * fwd.std_error + 1e-6);

    const OptionSpec far{1e6 * m.s0, 1.0, OptionKind::Call};
    const auto zero = mc::mc_price(p, m, far, cfg);
    CHECK(zero.value == doctest::Approx(0.0));

    const BilateralGammaParams heavy{1.0, 0.9, 1.0, 2.0};
    CHECK_THROWS_AS(mc::mc_price(heavy, m, tiny, cfg), DomainError);
}

TEST_CASE("mc_exp_moment: degenerate point, symmetry, margin guard")
{
    const BilateralGammaParams sym{1.2, 8.0, 1.2, 8.0};
    mc::SimConfig cfg;
    cfg.n_samples = 200000;
    cfg.seed = 31;

    const auto one = mc::mc_exp_moment(sym, 0.0, cfg);
    CHECK(one.value == doctest::Approx(1.0));
    CHECK(one.std_error == doctest::Approx(0.0));

    const auto up = mc::mc_exp_moment(sym, 1.5, cfg);
    mc::SimConfig cfg2 = cfg;
    cfg2.seed = 32;
    const auto dn = mc::mc_exp_moment(sym, -1.5, cfg2);
    CHECK(std::abs(up.value - dn.value) <
          3.0 * std::sqrt(up.std_error * up.std_error + dn.std_error * dn.std_error));

    CHECK_THROWS_AS(mc::mc_exp_moment(sym, 7.8, cfg), DomainError);
}

TEST_CASE("component samples expose the Gamma legs")
{
    const auto p = fixtures::dax();
    mc::SimConfig cfg;
    cfg.n_samples = 200000;
    cfg.seed = 6400;
    const auto cs = mc::sample_components(p, 1.0, cfg);
    const auto mp = moments(cs.plus);
    const auto mm = moments(cs.minus);
    CHECK(std::abs(mp.mean - p.alpha_plus / p.lambda_plus) < 4.0 * mp.se_mean);
    CHECK(std::abs(mm.mean - p.alpha_minus / p.lambda_minus) < 4.0 * mm.se_mean);
}

TEST_CASE("solved measures are martingale laws in simulation")
{
    const auto p = fixtures::dax();
    const bilgamma::MarketParams flat{0.0, 0.0, 5000.0};
    const bilgamma::MarketParams bumped{0.0012, 0.0, 5000.0};

    std::vector<std::pair<bilgamma::RiskNeutralLaw, const bilgamma::MarketParams*>> laws;
    laws.emplace_back(bilgamma::solve_esscher(p, flat).law, &flat);
    laws.emplace_back(bilgamma::solve_bilateral_esscher(p, flat).law, &flat);
    laws.emplace_back(bilgamma::solve_p_optimal(p, flat, 2.0).law, &flat);
    laws.emplace_back(bilgamma::solve_mmm(p, bumped).law, &bumped);

    mc::SimConfig cfg;
    cfg.n_samples = 400000;
    std::uint64_t seed = 5150;
    for (const auto& [law, m] : laws) {
        cfg.seed = seed++;
        const auto xs = mc::sample_terminal(law, 1.0, cfg);
        std::vector<double> w(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            w[i] = std::exp(xs[i] - (m->r - m->q));
        const auto mo = moments(w);
        CHECK(std::abs(mo.mean - 1.0) < 3.0 * mo.se_mean);
    }
}

TEST_CASE("antithetic path: correct mean, determinism, variance no worse on the forward")
{
    const auto p = fixtures::dax();
    const MarketParams m{cumulant(p, 1.0), 0.0, 5000.0};
    mc::SimConfig anti;
    anti.n_samples = 100000;
    anti.seed = 2024;
    anti.antithetic = true;

    const auto a = mc::sample_terminal(p, 1.0, anti);
    const auto b = mc::sample_terminal(p, 1.0, anti, Execution::Serial);
    CHECK(a == b);

    const auto mo = moments(a);
    const double mean_true = p.alpha_plus / p.lambda_plus - p.alpha_minus / p.lambda_minus;
    // pairs are dependent: use the pair-mean standard error scale (2x slack)
    CHECK(std::abs(mo.mean - mean_true) < 8.0 * mo.se_mean);

    const OptionSpec fwd{1e-9 * m.s0, 1.0, OptionKind::Call};
    mc::SimConfig plain = anti;
    plain.antithetic = false;
    const auto est_anti = mc::mc_price(p, m, fwd, anti);
    const auto est_plain = mc::mc_price(p, m, fwd, plain);
    CHECK(est_anti.std_error < 1.2 * est_plain.std_error);
    CHECK(std::abs(est_anti.value - est_plain.value) <
          4.0 * (est_anti.std_error + est_plain.std_error));
}
