#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "reldelay/bounds.hpp"
#include "reldelay/errors.hpp"

using namespace reldelay;

namespace {

ModelParams params(double lambda, double g = 0.25)
{
    ModelParams m;
    m.lambda = lambda;
    m.g = g;
    return m;
}

SeriesControl control(std::size_t n_max, DivergencePolicy policy = DivergencePolicy::WarnAndTruncate,
                      double tail_tol = 1e-9)
{
    SeriesControl c;
    c.n_max = n_max;
    c.policy = policy;
    c.tail_tol = tail_tol;
    return c;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Inverse of occupation_probability for g = 0.25, r0 = 1.
double lambda_for_p(double p) { return -std::log1p(-p) / (0.5 * M_PI / 4.0); }

}  // namespace

TEST_SUITE("bounds")
{
    TEST_CASE("occupation probability")
    {
        CHECK(occupation_probability(params(0.0)) == 0.0);
        const oracle::big lambda("1.4");
        const oracle::big want = 1 - boost::multiprecision::exp(-lambda * boost::multiprecision::sqrt(oracle::big("0.25")) *
                                                                boost::multiprecision::atan(oracle::big(1)));
        CHECK(rel(occupation_probability(params(1.4)), want.convert_to<double>()) < 1e-15);
        CHECK(occupation_probability(params(1.4)) == doctest::Approx(0.4229).epsilon(1e-4));
        double prev = 0.0;
        for (double l = 0.1; l < 40.0; l *= 1.5) {
            const double p = occupation_probability(params(l));
            CHECK(p > prev);
            CHECK(p <= 1.0);
            prev = p;
        }
        CHECK(occupation_probability(params(1e4)) == doctest::Approx(1.0));
    }

    TEST_CASE("p_bar examples")
    {
        CHECK(size_prob_upper(2, 0.37) == 0.37);
        CHECK(size_prob_upper(3, 0.2) == doctest::Approx(0.1).epsilon(1e-14));
        CHECK(size_prob_upper(4, 0.2) == doctest::Approx(0.1 * 1.6 / 2.8).epsilon(1e-14));
        CHECK_THROWS_AS(size_prob_upper(1, 0.2), ParameterError);
    }

    TEST_CASE("p_bar closed form at p = 0.2 and monotone in n")
    {
        // at p = 0.2 the product telescopes to 12 / ((n+1)(n+2)(n+3))
        const auto t = size_prob_upper_table(0.2, 3000);
        for (std::size_t n = 2; n <= 3000; ++n) {
            const double nd = static_cast<double>(n);
            CHECK(rel(t[n - 2], 12.0 / ((nd + 1) * (nd + 2) * (nd + 3))) < 1e-12);
        }
        for (double p : {0.05, 0.3, 0.5, 0.9}) {
            const auto tab = size_prob_upper_table(p, 500);
            CHECK(tab[0] == p);
            for (std::size_t i = 1; i < tab.size(); ++i) {
                CHECK(tab[i] < tab[i - 1]);
                CHECK(tab[i] > 0.0);
            }
        }
    }

    TEST_CASE("expected size: p -> 0, p = 0.2 oracle, divergent flag at lambda = 1.4")
    {
        CHECK(expected_size_upper(1e-12, control(840)).value == doctest::Approx(1.0));
        const auto r = expected_size_upper(0.2, control(10000, DivergencePolicy::Error, 1e-6));
        CHECK(r.converged);
        CHECK(r.tail_met);
        CHECK(std::isfinite(r.value));
        const double want = oracle::expected_size_mp(oracle::big("0.2"), 10000).convert_to<double>();
        CHECK(rel(r.value, want) < 1e-12);
        // tail term at n = 1e4 is ~1.2e-7 of the sum, so the default 1e-9 tail criterion is not met
        CHECK_FALSE(expected_size_upper(0.2, control(10000)).tail_met);

        const double p = occupation_probability(params(1.4));
        const auto d = expected_size_upper(p, control(840));
        CHECK_FALSE(d.converged);
        CHECK(d.decay_exponent == doctest::Approx((p + 1) / (2 * p)));
        CHECK(d.decay_exponent == doctest::Approx(1.682).epsilon(1e-3));
        CHECK(std::isfinite(d.value));
        CHECK_THROWS_AS(expected_size_upper(p, control(840, DivergencePolicy::Error)), DivergentSeriesError);
    }

    TEST_CASE("series convergence threshold is p = 1/3")
    {
        CHECK(series_converges(0.3333));
        CHECK_FALSE(series_converges(1.0 / 3.0));
        CHECK_FALSE(series_converges(0.34));
        CHECK(size_decay_exponent(0.2) == doctest::Approx(3.0));
    }

    TEST_CASE("diameter probability examples")
    {
        CHECK(diameter_prob_upper(2, 1) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(diameter_prob_upper(4, 1) == doctest::Approx(7.0 / 8.0).epsilon(1e-15));
        for (std::size_t n = 2; n <= 60; ++n) {
            CHECK(diameter_prob_upper(n, n - 1) == std::ldexp(1.0, -static_cast<int>(n - 1)));
            for (std::size_t k = 1; k < n; ++k) CHECK(diameter_prob_upper(n, k) >= 0.0);
        }
        CHECK_THROWS_AS(diameter_prob_upper(4, 4), ParameterError);
        CHECK_THROWS_AS(diameter_prob_upper(4, 0), ParameterError);
    }

    TEST_CASE("expected diameter examples and bound n - 1")
    {
        CHECK(expected_diameter_upper(1) == 0.0);
        CHECK(expected_diameter_upper(2) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(expected_diameter_upper(3) == doctest::Approx(1.25).epsilon(1e-15));
        const auto tab = expected_diameter_upper_table(2000);
        for (std::size_t n = 2; n <= 2000; ++n) CHECK(tab[n] <= static_cast<double>(n - 1));
    }

    TEST_CASE("expected diameter against the 50-digit double sum")
    {
        for (std::size_t n : {2u, 3u, 5u, 10u, 37u, 100u, 250u}) {
            CHECK(rel(expected_diameter_upper(n), oracle::expected_diameter_mp(n).convert_to<double>()) < 1e-12);
        }
    }

    TEST_CASE("expected diameter against the swapped-sum long double oracle up to n = 3000")
    {
        const auto ed = oracle::expected_diameter_ld(3000);
        const auto tab = expected_diameter_upper_table(3000);
        double worst = 0.0;
        for (std::size_t n = 2; n <= 3000; ++n) worst = std::max(worst, rel(tab[n], static_cast<double>(ed[n])));
        CHECK(worst < 1e-11);
    }

    TEST_CASE("global diameter: p -> 0, p = 0.2 oracle, divergent flag at p = 0.45")
    {
        CHECK(expected_global_diameter_upper(1e-12, control(840)).value == doctest::Approx(0.0).epsilon(1e-9));
        const auto ed = oracle::expected_diameter_ld(10000);
        const auto r = expected_global_diameter_upper(0.2, control(10000, DivergencePolicy::Error, 1e-6));
        CHECK(r.converged);
        CHECK(rel(r.value, static_cast<double>(oracle::global_diameter_ld(0.2L, 10000, ed))) < 1e-9);

        const auto d = expected_global_diameter_upper(0.45, control(840));
        CHECK_FALSE(d.converged);
        CHECK(rel(d.value, static_cast<double>(oracle::global_diameter_ld(0.45L, 840, ed))) < 1e-9);
    }

    TEST_CASE("gamma lower")
    {
        CHECK(gamma_lower_from_diameter(0.0, 1.0) == 1.0);
        CHECK(gamma_lower_from_diameter(0.0, 2.0) == 0.5);
        const auto c = control(10000, DivergencePolicy::WarnAndTruncate, 1e-6);
        const auto ed = expected_global_diameter_upper(0.2, c).value;
        CHECK(gamma_lower(params(lambda_for_p(0.2)), c) == doctest::Approx(1.0 / (ed + 1.0)).epsilon(1e-12));
        double prev = std::numeric_limits<double>::infinity();
        for (double l = 0.1; l <= 2.8; l += 0.1) {
            const double v = gamma_lower(params(l), control(840));
            CHECK(v <= prev);
            prev = v;
        }
    }

    TEST_CASE("link delay pmf and mean")
    {
        CHECK(link_delay_pmf(0, 0.3) == 0.3);
        CHECK(link_delay_pmf(0, 1.0) == 1.0);
        CHECK(link_delay_pmf(3, 1.0) == 0.0);
        double total = 0.0, mean = 0.0;
        for (long z = 0; z < 400; ++z) {
            total += link_delay_pmf(z, 0.25);
            mean += z * link_delay_pmf(z, 0.25);
        }
        CHECK(total == doctest::Approx(1.0));
        CHECK(mean == doctest::Approx(3.0));
        CHECK(expected_link_delay(1.0) == 0.0);
        CHECK(expected_link_delay(0.25) == 3.0);
        CHECK(expected_link_delay(0.5) == 1.0);
    }

    TEST_CASE("geometric sampling oracle for the link delay")
    {
        std::mt19937_64 gen(2024);
        std::bernoulli_distribution link(0.25);
        double sum = 0.0;
        const int n = 1000000;
        for (int i = 0; i < n; ++i) {
            long z = 0;
            while (!link(gen)) ++z;
            sum += static_cast<double>(z);
        }
        CHECK(rel(sum / n, expected_link_delay(0.25)) < 0.01);
    }

    TEST_CASE("gamma upper and the baseline")
    {
        CHECK(gamma_upper(params(2.0)) == doctest::Approx(5.1).epsilon(1e-15));
        CHECK(gamma_upper(params(2.0, 1.0)) == 0.0);
        CHECK(wang_size_approx(0.0) == 0.0);
        CHECK(wang_size_approx(1.4) == doctest::Approx(1.2841 * 1.4 / (2.4886 - 1.4)));
        CHECK(wang_size_approx(1.4) == doctest::Approx(1.6515).epsilon(1e-4));
        CHECK(wang_size_approx(2.4885) > 1e4);
        CHECK_THROWS_AS(wang_size_approx(2.4886), DomainError);
        CHECK_THROWS_AS(wang_size_approx(3.0), DomainError);

        CHECK(wang_gamma_upper(params(1.44)) == gamma_upper(params(1.44)));
        CHECK(wang_gamma_upper(params(2.8)) == doctest::Approx(1.7 * std::sqrt(2.8 / 1.44) * 3.0));
        CHECK(wang_gamma_upper(params(2.8)) == doctest::Approx(7.11).epsilon(1e-3));
    }

    TEST_CASE("bound ordering in regime with truncated series")
    {
        for (double l = 1.44; l <= 2.8 + 1e-9; l += 0.04) {
            const auto rep = evaluate_bounds(params(l), control(840));
            REQUIRE(rep.wang_gamma_upper.has_value());
            CHECK(rep.gamma_lower <= rep.gamma_upper);
            CHECK(rep.gamma_upper <= *rep.wang_gamma_upper);
        }
    }

    TEST_CASE("parameter validation")
    {
        CHECK_THROWS_AS(occupation_probability(params(-1.0)), ParameterError);
        CHECK_THROWS_AS(occupation_probability(params(1.0, 1.5)), ParameterError);
        CHECK_THROWS_AS(expected_link_delay(0.0), ParameterError);
        SeriesControl bad;
        bad.n_max = 1;
        CHECK_THROWS_AS(bad.validate(), ParameterError);
    }
}
