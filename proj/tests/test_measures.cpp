#include <doctest.h>

#include <cmath>
#include <random>

#include "bilgamma/bgcore.hpp"
#include "bilgamma/mcoracle.hpp"
#include "bilgamma/measures.hpp"
#include "bilgamma/numerics.hpp"
#include "fixtures.hpp"

using namespace bilgamma;

TEST_CASE("esscher: reference values, closed-form special case, existence gate")
{
    const auto p = fixtures::dax();
    const auto m = fixtures::flat_market();
    const auto sol = solve_esscher(p, m);
    const double theta = std::get<EsscherParams>(sol.scalars).theta;
    CHECK(std::abs(theta - (-5.28)) < 0.005);
    const auto& law = std::get<BilateralGammaParams>(sol.law);
    CHECK(std::abs(law.lambda_plus - 139.24) < 0.01);
    CHECK(std::abs(law.lambda_minus - 83.64) < 0.01);
    CHECK(std::abs(*sol.objective_value - 0.00294113) < 5e-6);
    CHECK(std::abs(law_martingale_residual(sol.law, m)) < 1e-10);

    // alpha+ = alpha-, r = q: theta = (lambda_plus - lambda_minus - 1)/2
    const BilateralGammaParams vg{1.2, 5.0, 1.2, 3.0};
    const MarketParams mf{0.0, 0.0, 100.0};
    const auto vs = solve_esscher(vg, mf);
    CHECK(std::get<EsscherParams>(vs.scalars).theta == doctest::Approx(0.5).epsilon(1e-10));

    const BilateralGammaParams small{1.0, 0.4, 1.0, 0.5};
    CHECK_THROWS_AS(solve_esscher(small, mf), NoSolutionError);
}

TEST_CASE("memm drift: boundary value, reference zero, monotonicity, domain")
{
    const auto p = fixtures::dax();
    const auto m = fixtures::flat_market();
    CHECK(memm_drift(p, m, 0.0) == doctest::Approx(cumulant(p, 1.0)).epsilon(1e-12));
    CHECK(std::abs(memm_drift(p, m, -5.30)) < 5e-6);
    CHECK(memm_drift(p, m, -10.0) < memm_drift(p, m, -1.0));
    CHECK_THROWS_AS(memm_drift(p, m, 0.5), DomainError);

    const BilateralGammaParams heavy{1.0, 0.8, 1.0, 2.0};
    CHECK_THROWS_AS(memm_drift(heavy, m, 0.0), DomainError);
}

TEST_CASE("memm: reference solution and existence conditions")
{
    const auto p = fixtures::dax();
    const auto m = fixtures::flat_market();
    const auto sol = solve_memm(p, m);
    const double vt = std::get<MemmParams>(sol.scalars).vartheta;
    CHECK(std::abs(vt - (-5.30)) < 0.005);
    CHECK(std::abs(*sol.objective_value - 0.00294091) < 5e-6);
    CHECK(std::holds_alternative<TiltedLevy>(sol.law));

    // lambda_plus > 1 with Psi(1) < r - q: no solution
    const MarketParams too_high{0.01, 0.0, 5000.0};
    CHECK_THROWS_AS(solve_memm(p, too_high), NoSolutionError);

    // lambda_plus <= 1: always solvable with a strictly negative tilt
    const BilateralGammaParams heavy{1.0, 0.8, 1.0, 2.0};
    const MarketParams mf{0.0, 0.0, 100.0};
    const auto hs = solve_memm(heavy, mf);
    const double hvt = std::get<MemmParams>(hs.scalars).vartheta;
    CHECK(hvt < 0.0);
    CHECK(std::abs(memm_drift(heavy, mf, hvt)) < 1e-8);
}

TEST_CASE("entropy ordering across the three measures")
{
    const auto p = fixtures::dax();
    const auto m = fixtures::flat_market();
    const double h_ess = *solve_esscher(p, m).objective_value;
    const double h_memm = *solve_memm(p, m).objective_value;
    const double h_bil = *solve_bilateral_esscher(p, m).objective_value;
    CHECK(h_memm <= h_bil + 1e-12);
    CHECK(h_bil <= h_ess + 1e-12);
}

TEST_CASE("phi map: linear special case, fixed point at the Esscher parameter")
{
    // alpha+ = alpha-, r = q: Phi(theta) = lambda_minus - lambda_plus + theta + 1
    const BilateralGammaParams vg{1.2, 5.0, 1.2, 3.0};
    const MarketParams mf{0.0, 0.0, 100.0};
    for (double th : {-3.0, -1.0, 0.0, 2.0, 3.9}) {
        CHECK(phi_map(vg, mf, th) ==
              doctest::Approx(vg.lambda_minus - vg.lambda_plus + th + 1.0).epsilon(1e-12));
    }

    const auto p = fixtures::dax();
    const auto m = fixtures::flat_market();
    CHECK(std::abs(phi_map(p, m, -5.28) - 5.28) < 0.01);
    CHECK_THROWS_AS(phi_map(p, m, p.lambda_plus - 1.0), DomainError);

    // martingale property along the parameter curve
    std::mt19937 gen(11u);
    std::uniform_real_distribution<double> uth(-40.0, p.lambda_plus - 1.0 - 1e-6);
    for (int i = 0; i < 20; ++i) {
        const double th = uth(gen);
        const double tm = phi_map(p, m, th);
        const BilateralGammaParams law{p.alpha_plus, p.lambda_plus - th, p.alpha_minus,
                                       p.lambda_minus - tm};
        CHECK(std::abs(law_martingale_residual(law, m)) < 1e-10);
    }
}

TEST_CASE("fixed-point route agrees with the direct Esscher solve")
{
    const auto p = fixtures::dax();
    const auto m = fixtures::flat_market();
    const double fp = esscher_via_fixed_point(p, m);
    CHECK(std::abs(fp - (-5.28)) < 0.005);
    const double direct = std::get<EsscherParams>(solve_esscher(p, m).scalars).theta;
    CHECK(std::abs(fp - direct) < 1e-10);

    const BilateralGammaParams vg{1.2, 5.0, 1.2, 3.0};
    const MarketParams mf{0.0, 0.0, 100.0};
    CHECK(esscher_via_fixed_point(vg, mf) == doctest::Approx(0.5).epsilon(1e-10));

    std::mt19937 gen(3u);
    auto logu = [&](double lo, double hi) {
        std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
        return std::exp(d(gen));
    };
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        double lp, lm;
        do {
            lp = logu(0.35, 150.0);
            lm = logu(0.35, 150.0);
        } while (!(lp + lm > 1.05));
        const BilateralGammaParams q{logu(0.2, 4.0), lp, logu(0.2, 4.0), lm};
        const MarketParams mr{(i % 2) ? 0.04 * u01(gen) : 0.0, 0.0, 100.0};
        const double a = std::get<EsscherParams>(solve_esscher(q, mr).scalars).theta;
        const double b = esscher_via_fixed_point(q, mr);
        CHECK(std::abs(a - b) < 1e-10);
    }
}

TEST_CASE("bilateral entropy: zero point, reference value, nonnegativity, consistency")
{
    const auto p = fixtures::dax();
    CHECK(bilateral_entropy(p, 0.0, 0.0) == 0.0);
    CHECK(std::abs(bilateral_entropy(p, -5.28, 5.28) - 0.00294113) < 5e-6);

    std::mt19937 gen(13u);
    std::uniform_real_distribution<double> up(-50.0, p.lambda_plus - 1e-3);
    std::uniform_real_distribution<double> um(-50.0, p.lambda_minus - 1e-3);
    for (int i = 0; i < 100; ++i)
        CHECK(bilateral_entropy(p, up(gen), um(gen)) >= 0.0);

    const auto m = fixtures::flat_market();
    const auto sol = solve_esscher(p, m);
    const double theta = std::get<EsscherParams>(sol.scalars).theta;
    const double via_g = bilateral_entropy(p, theta, -theta);
    CHECK(std::abs(via_g - *sol.objective_value) <= 1e-12 * via_g);

    CHECK_THROWS_AS(bilateral_entropy(p, p.lambda_plus, 0.0), DomainError);
}

TEST_CASE("bilateral esscher: reference solution and entropy dominance")
{
    const auto p = fixtures::dax();
    const auto m = fixtures::flat_market();
    const auto sol = solve_bilateral_esscher(p, m);
    const auto par = std::get<BilateralEsscherParams>(sol.scalars);
    CHECK(std::abs(par.theta_plus - (-5.34)) < 0.005);
    const auto& law = std::get<BilateralGammaParams>(sol.law);
    CHECK(std::abs(law.lambda_plus - 139.30) < 0.01);
    CHECK(std::abs(law.lambda_minus - 83.68) < 0.01);
    CHECK(std::abs(*sol.objective_value - 0.00294107) < 5e-6);
    CHECK(std::abs(law_martingale_residual(sol.law, m)) < 1e-10);
    CHECK(*sol.objective_value <= *solve_esscher(p, m).objective_value);
}

TEST_CASE("p-distance: unit point, lower bound, Monte Carlo oracle")
{
    const auto p = fixtures::dax();
    CHECK(p_distance(p, 2.0, 0.0, 0.0) == doctest::Approx(1.0));

    std::mt19937 gen(17u);
    std::uniform_real_distribution<double> upl(1.01, 4.0);
    for (int i = 0; i < 100; ++i) {
        const double pe = upl(gen);
        std::uniform_real_distribution<double> up(-30.0, p.lambda_plus / pe - 1e-3);
        std::uniform_real_distribution<double> um(-30.0, p.lambda_minus / pe - 1e-3);
        CHECK(p_distance(p, pe, up(gen), um(gen)) >= 1.0 - 1e-14);
    }

    // Monte Carlo: mean of the likelihood ratio to the power p
    const double tp = -1.0, tm = 0.5, pe = 2.0;
    mc::SimConfig cfg;
    cfg.n_samples = 1000000;
    cfg.seed = 909090;
    const auto cs = mc::sample_components(p, 1.0, cfg);
    const double psi_p = cumulant_onesided(p.alpha_plus, p.lambda_plus, tp);
    const double psi_m = cumulant_onesided(p.alpha_minus, p.lambda_minus, tm);
    num::CompensatedSum s, s2;
    for (std::size_t i = 0; i < cs.plus.size(); ++i) {
        const double w =
            std::exp(pe * (tp * cs.plus[i] - psi_p + tm * cs.minus[i] - psi_m));
        s.add(w);
        s2.add(w * w);
    }
    const double n = static_cast<double>(cs.plus.size());
    const double mean = s.value() / n;
    const double var = (s2.value() - n * mean * mean) / (n - 1.0);
    const double se = std::sqrt(var / n);
    CHECK(std::abs(mean - p_distance(p, pe, tp, tm)) < 3.0 * se);

    CHECK_THROWS_AS(p_distance(p, 2.0, p.lambda_plus / 2.0, 0.0), DomainError);
    CHECK_THROWS_AS(p_distance(p, 1.0, 0.0, 0.0), DomainError);
}

TEST_CASE("p-optimal: reference value, convergence to the entropy minimizer, certificate")
{
    const auto p = fixtures::dax();
    const auto m = fixtures::flat_market();
    const auto bil = solve_bilateral_esscher(p, m);
    const double theta_star = std::get<BilateralEsscherParams>(bil.scalars).theta_plus;

    const auto s2 = solve_p_optimal(p, m, 2.0);
    const auto par2 = std::get<POptimalParams>(s2.scalars);
    CHECK(std::abs(par2.theta_plus - (-5.68)) < 0.005);
    CHECK(std::abs(law_martingale_residual(s2.law, m)) < 1e-10);
    CHECK(*s2.objective_value >= 1.0);

    // local-minimum certificate on the p-distance along the martingale curve
    for (double d : {-1e-4, 1e-4}) {
        const double th = par2.theta_plus + d;
        const double fp = p_distance(p, 2.0, th, phi_map(p, m, th));
        CHECK(fp >= *s2.objective_value - 1e-15);
    }

    double prev_gap = std::abs(par2.theta_plus - theta_star);
    double t101 = 0.0;
    for (double pe : {1.5, 1.1, 1.01}) {
        const auto sp = solve_p_optimal(p, m, pe);
        const double th = std::get<POptimalParams>(sp.scalars).theta_plus;
        const double gap = std::abs(th - theta_star);
        CHECK(gap < prev_gap);
        prev_gap = gap;
        if (pe == 1.01)
            t101 = th;
    }
    CHECK(std::abs(t101 - theta_star) < 0.05);

    // empty feasible interval: the lambda_plus / p cap falls below the
    // admissible lower endpoint once the rate gap is steep enough
    const BilateralGammaParams tiny{1.0, 3.0, 1.0, 2.0};
    const MarketParams steep{1.0, 0.0, 100.0};
    CHECK_THROWS_AS(solve_p_optimal(tiny, steep, 10.0), NoSolutionError);
}

TEST_CASE("minimal martingale constant and measure")
{
    const auto p = fixtures::dax();
    const auto m0 = fixtures::flat_market();
    const auto m2 = fixtures::bumped_market();

    CHECK(mmm_constant(p, m0) > 0.0);
    CHECK_THROWS_AS(solve_mmm(p, m0), NoSolutionError);

    const double c = mmm_constant(p, m2);
    CHECK(c >= -1.0);
    CHECK(c <= 0.0);
    const auto sol = solve_mmm(p, m2);
    CHECK(std::abs(law_martingale_residual(sol.law, m2)) < 1e-10);
    const auto& cv = std::get<ConvolvedLaw>(sol.law);
    REQUIRE(cv.components.size() == 2);
    CHECK(cv.components[0].alpha_plus == doctest::Approx((c + 1.0) * p.alpha_plus));
    CHECK(cv.components[0].lambda_plus == doctest::Approx(p.lambda_plus));
    CHECK(cv.components[1].alpha_plus == doctest::Approx(-c * p.alpha_plus));
    CHECK(cv.components[1].lambda_plus == doctest::Approx(p.lambda_plus - 1.0));
    CHECK(cv.components[1].lambda_minus == doctest::Approx(p.lambda_minus + 1.0));
    CHECK_FALSE(sol.objective_value.has_value());

    const BilateralGammaParams low{1.0, 1.8, 1.0, 2.0};
    CHECK_THROWS_AS(mmm_constant(low, m0), DomainError);
}

TEST_CASE("minimal martingale endpoints collapse to single laws")
{
    const auto p = fixtures::dax();
    // c = 0: physical measure is already a martingale measure
    const MarketParams mc0{cumulant(p, 1.0), 0.0, 5000.0};
    CHECK(std::abs(mmm_constant(p, mc0)) < 1e-12);
    const auto s0 = solve_mmm(p, mc0);
    const auto* bg0 = std::get_if<BilateralGammaParams>(&s0.law);
    REQUIRE(bg0 != nullptr);
    CHECK(bg0->lambda_plus == doctest::Approx(p.lambda_plus));

    // characteristic function at c = 0 equals the physical one
    for (int i = 1; i <= 20; ++i) {
        const double u = 2.3 * i;
        const auto a = char_fn(s0.law, {u, 0.0});
        const auto b = char_fn(p, {u, 0.0});
        CHECK(std::abs(a - b) <= 1e-12);
    }

    // c = -1: the unit-tilt Esscher transform
    const MarketParams mc1{cumulant(p, 2.0) - cumulant(p, 1.0), 0.0, 5000.0};
    CHECK(mmm_constant(p, mc1) == doctest::Approx(-1.0).epsilon(1e-12));
    const auto s1 = solve_mmm(p, mc1);
    const auto* bg1 = std::get_if<BilateralGammaParams>(&s1.law);
    REQUIRE(bg1 != nullptr);
    CHECK(bg1->lambda_plus == doctest::Approx(p.lambda_plus - 1.0));
    CHECK(bg1->lambda_minus == doctest::Approx(p.lambda_minus + 1.0));
}

TEST_CASE("solver settings validation")
{
    const auto p = fixtures::dax();
    const auto m = fixtures::flat_market();
    SolverSettings bad;
    bad.root_tol = -1.0;
    CHECK_THROWS_AS(solve_esscher(p, m, bad), DomainError);
}
