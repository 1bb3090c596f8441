#include "mpca/distributions.hpp"

#include "mpca/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace mpca;

namespace {

std::vector<double> alpha_grid(int points) {
    std::vector<double> alphas;
    for (int i = 0; i < points; ++i)
        alphas.push_back(0.5 + (0.999 - 0.5) * i / (points - 1));
    return alphas;
}

void check_close(double got, double want) {
    double tol = 1e-6 * std::max(std::abs(want), 1e-3);
    CHECK(std::abs(got - want) <= tol);
}

} // namespace

TEST_CASE("normal quantile matches the quadrature oracle") {
    CHECK(normal_inv(0.5) == 0.0);
    for (double a : alpha_grid(20)) check_close(normal_inv(a), oracle::normal_inv(a));
    // symmetry
    CHECK(normal_inv(0.2) == doctest::Approx(-normal_inv(0.8)).epsilon(1e-12));
}

TEST_CASE("chi-square quantile matches the quadrature oracle, real df included") {
    for (double df : {1.0, 2.5, 3.7, 10.0, 60.0})
        for (double a : alpha_grid(10)) check_close(chi2_inv(df, a), oracle::chi2_inv(df, a));
}

TEST_CASE("F quantile matches the quadrature oracle") {
    const std::pair<double, double> dfs[] = {{1, 10}, {2, 98}, {5, 40}, {6, 200}};
    for (auto [d1, d2] : dfs)
        for (double a : alpha_grid(10)) check_close(f_inv(d1, d2, a), oracle::f_inv(d1, d2, a));
}

TEST_CASE("quantiles are monotone in alpha") {
    double prev_n = -1e300, prev_c = -1e300, prev_f = -1e300;
    for (double a : alpha_grid(12)) {
        double n = normal_inv(a), c = chi2_inv(4.2, a), f = f_inv(3, 30, a);
        CHECK(n > prev_n);
        CHECK(c > prev_c);
        CHECK(f > prev_f);
        prev_n = n;
        prev_c = c;
        prev_f = f;
    }
}

TEST_CASE("F quantile agrees with the beta relation by Monte Carlo") {
    // If F ~ F(d1,d2) then d1 F/(d1 F + d2) ~ Beta(d1/2, d2/2); equivalently
    // the empirical CDF at f_inv(alpha) must be close to alpha.
    const double d1 = 4, d2 = 20;
    std::mt19937_64 rng(2024);
    std::fisher_f_distribution<double> fdist(d1, d2);
    const int n = 1000000;
    std::vector<double> draws(n);
    for (auto& d : draws) d = fdist(rng);
    for (double alpha : {0.8, 0.95, 0.99}) {
        double q = f_inv(d1, d2, alpha);
        int below = 0;
        for (double d : draws)
            if (d <= q) ++below;
        double frac = static_cast<double>(below) / n;
        CHECK(std::abs(frac - alpha) < 0.01);
    }
}

TEST_CASE("regularized incomplete functions behave at the edges") {
    CHECK(regularized_gamma_p(2.0, 0.0) == 0.0);
    CHECK(regularized_gamma_p(2.0, 1e8) == doctest::Approx(1.0));
    CHECK(regularized_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_beta(2.0, 3.0, 1.0) == 1.0);
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
    CHECK(regularized_beta(2.5, 4.0, 0.3) ==
          doctest::Approx(1.0 - regularized_beta(4.0, 2.5, 0.7)).epsilon(1e-12));
}

TEST_CASE("out-of-range parameters are rejected") {
    CHECK_THROWS_AS(normal_inv(0.0), Error);
    CHECK_THROWS_AS(normal_inv(1.0), Error);
    CHECK_THROWS_AS(chi2_inv(-1.0, 0.5), Error);
    CHECK_THROWS_AS(chi2_inv(2.0, 1.5), Error);
    CHECK_THROWS_AS(f_inv(0.0, 5.0, 0.9), Error);
    CHECK_THROWS_AS(f_inv(2.0, 5.0, -0.1), Error);
}
