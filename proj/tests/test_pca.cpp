#include "mpca/pca.hpp"

#include "mpca/distributions.hpp"
#include "mpca/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace mpca;

namespace {

Matrix random_standardized(std::size_t n, std::size_t m, std::uint64_t seed,
                           const Matrix* loadings = nullptr, double noise = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix x(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        if (loadings) {
            Vector f(loadings->cols());
            for (auto& v : f) v = normal(rng);
            for (std::size_t j = 0; j < m; ++j) {
                double s = 0.0;
                for (std::size_t q = 0; q < loadings->cols(); ++q) s += (*loadings)(j, q) * f[q];
                x(i, j) = s + noise * normal(rng);
            }
        } else {
            for (std::size_t j = 0; j < m; ++j) x(i, j) = normal(rng);
        }
    }
    return apply_standardization(x, fit_standardization(x));
}

// a full submodel over standardized gaussian factor data, centroid filled in
PcaSubmodel fitted_model(std::size_t n = 3000, std::uint64_t seed = 17, double alpha = 0.99) {
    Matrix w(6, 2);
    double rows[6][2] = {{0.9, 0.3},  {0.8, 0.4}, {0.7, -0.5},
                         {0.5, 0.8}, {0.6, 0.7}, {0.4, -0.8}};
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 2; ++j) w(i, j) = rows[i][j];
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix raw(n, 6);
    for (std::size_t i = 0; i < n; ++i) {
        Vector f{normal(rng), normal(rng)};
        for (std::size_t j = 0; j < 6; ++j)
            raw(i, j) = 20.0 + w(j, 0) * f[0] + w(j, 1) * f[1] + 0.2 * normal(rng);
    }
    PcaSubmodel model = fit_submodel_core(raw, alpha, 0.85);
    model.condition_id = 1;
    model.centroid.assign(6, 0.0);
    model.max_match_distance = 10.0;
    return model;
}

Vector random_unit_residual(const PcaSubmodel& model, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Vector x(model.n_variables());
    for (auto& v : x) v = normal(rng);
    Projection p = project(x, model);
    double norm = std::sqrt(norm2(p.x_tilde));
    for (auto& v : p.x_tilde) v /= norm;
    return p.x_tilde;
}

} // namespace

TEST_CASE("fit_pca on perfectly correlated 2-D data") {
    Matrix raw(10, 2);
    for (std::size_t i = 0; i < 10; ++i) {
        double t = static_cast<double>(i) * 0.7 - 2.0;
        raw(i, 0) = t;
        raw(i, 1) = 2.0 * t + 3.0;
    }
    Matrix z = apply_standardization(raw, fit_standardization(raw));
    PcaFit fit = fit_pca(z, 0.85);
    CHECK(fit.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fit.eigenvalues[1] == 0.0); // clamped
    CHECK(fit.l == 1);
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(std::abs(fit.loadings(0, 0)) - inv_sqrt2) < 1e-10);
    CHECK(std::abs(std::abs(fit.loadings(1, 0)) - inv_sqrt2) < 1e-10);
}

TEST_CASE("fit_pca on isotropic noise") {
    Matrix z = random_standardized(50000, 3, 123);
    PcaFit fit = fit_pca(z, 0.2);
    for (double v : fit.eigenvalues) CHECK(std::abs(v - 1.0) < 0.05);
    CHECK(fit.l == 1); // one PC already covers 1/3 > 0.2
}

TEST_CASE("fit_pca retains two components for two strong factors") {
    Matrix w(6, 2);
    double rows[6][2] = {{0.9, 0.3},  {0.8, 0.4}, {0.7, -0.5},
                         {0.5, 0.8}, {0.6, 0.7}, {0.4, -0.8}};
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 2; ++j) w(i, j) = rows[i][j];
    Matrix z = random_standardized(4000, 6, 77, &w, 0.15);
    PcaFit fit = fit_pca(z, 0.85);
    CHECK(fit.l == 2);

    double sum = 0.0;
    for (double v : fit.eigenvalues) sum += v;
    CHECK(std::abs(sum - 6.0) < 1e-6); // trace of a correlation matrix
}

TEST_CASE("fit_pca rejects bad input") {
    Matrix z = random_standardized(50, 4, 5);
    Matrix too_small(3, 4);
    CHECK_THROWS_AS(fit_pca(too_small, 0.85), Error);
    Matrix bad = z;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(fit_pca(bad, 0.85), Error);
    CHECK_THROWS_AS(fit_pca(z, 0.0), Error);
}

TEST_CASE("projection splits x into orthogonal parts") {
    PcaSubmodel model = fitted_model();
    std::mt19937_64 rng(88);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 200; ++trial) {
        Vector x(6);
        for (auto& v : x) v = normal(rng);
        Projection p = project(x, model);
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(std::abs(p.x_hat[j] + p.x_tilde[j] - x[j]) < 1e-12);
        CHECK(std::abs(dot(p.x_hat, p.x_tilde)) < 1e-10);
        CHECK(std::abs(norm2(x) - norm2(p.x_hat) - norm2(p.x_tilde)) < 1e-10);

        // idempotence
        Projection pp = project(p.x_hat, model);
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(std::abs(pp.x_hat[j] - p.x_hat[j]) < 1e-12);
    }
}

TEST_CASE("projection edge directions") {
    PcaSubmodel model = fitted_model();
    // x in the span of the loadings has no residual
    Vector x = model.loadings.column(0);
    Projection p = project(x, model);
    CHECK(std::sqrt(norm2(p.x_tilde)) < 1e-12);
    // x orthogonal to the loadings has no retained part
    Vector r = random_unit_residual(model, 4);
    Projection pr = project(r, model);
    CHECK(std::sqrt(norm2(pr.x_hat)) < 1e-10);
    CHECK(spe_statistic(r, model) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("t2 examples") {
    PcaSubmodel model = fitted_model();
    Vector zero(6, 0.0);
    CHECK(t2_statistic(zero, model) == 0.0);

    Vector p1 = model.loadings.column(0);
    Vector scaled(6);
    for (std::size_t j = 0; j < 6; ++j) scaled[j] = std::sqrt(model.eigenvalues[0]) * p1[j];
    CHECK(t2_statistic(scaled, model) == doctest::Approx(1.0).epsilon(1e-10));

    std::mt19937_64 rng(9);
    std::normal_distribution<double> normal;
    Vector x(6);
    for (auto& v : x) v = normal(rng);
    Vector x2(6);
    for (std::size_t j = 0; j < 6; ++j) x2[j] = 2.0 * x[j];
    CHECK(t2_statistic(x2, model) == doctest::Approx(4.0 * t2_statistic(x, model)).epsilon(1e-10));
    CHECK(spe_statistic(x2, model) ==
          doctest::Approx(4.0 * spe_statistic(x, model)).epsilon(1e-10));
    CHECK(phi_statistic(x2, model) ==
          doctest::Approx(4.0 * phi_statistic(x, model)).epsilon(1e-10));

    CHECK_THROWS_AS(t2_statistic(Vector{1.0, 2.0}, model), Error);
}

TEST_CASE("t2 limit formula") {
    // asymptotically the chi-square quantile
    CHECK(t2_limit(1, 2000000, 0.95) == doctest::Approx(3.8414588).epsilon(1e-4));

    // against the quadrature oracle at l=2, n=100
    double expected = 2.0 * 99.0 * 101.0 / (100.0 * 98.0) * oracle::f_inv(2, 98, 0.99);
    CHECK(t2_limit(2, 100, 0.99) == doctest::Approx(expected).epsilon(1e-6));

    CHECK(t2_limit(2, 100, 0.95) < t2_limit(2, 100, 0.99));

    // the printed variant differs by exactly (n-l)/(n-1)
    double standard = t2_limit(3, 50, 0.99, LimitVariant::standard);
    double printed = t2_limit(3, 50, 0.99, LimitVariant::paper_printed);
    CHECK(printed == doctest::Approx(standard * (50.0 - 3.0) / (50.0 - 1.0)).epsilon(1e-12));

    CHECK_THROWS_AS(t2_limit(0, 100, 0.99), Error);
    CHECK_THROWS_AS(t2_limit(5, 5, 0.99), Error);
}

TEST_CASE("spe limit calibrates against Monte Carlo on an equal spectrum") {
    // residual eigenvalues all 0.5: SPE ~ 0.5 * chi2_4
    Vector eigenvalues{2.0, 2.0, 0.5, 0.5, 0.5, 0.5};
    double limit = spe_limit(eigenvalues, 2, 0.99);

    std::mt19937_64 rng(555);
    std::normal_distribution<double> normal;
    const int n = 100000;
    std::vector<double> spe(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) {
            double z = normal(rng) * std::sqrt(0.5);
            s += z * z;
        }
        spe[i] = s;
    }
    std::sort(spe.begin(), spe.end());
    double empirical = spe[static_cast<std::size_t>(0.99 * n)];
    CHECK(std::abs(limit - empirical) / empirical < 0.05);
}

TEST_CASE("spe limit printed-h0 variant differs only through h0") {
    Vector eig{3.0, 1.5, 0.9, 0.4, 0.15, 0.05};
    double standard = spe_limit(eig, 2, 0.99, LimitVariant::standard);
    double printed = spe_limit(eig, 2, 0.99, LimitVariant::paper_printed);
    CHECK(standard > 0.0);
    CHECK(printed > 0.0);
    CHECK(standard != printed); // theta2^2 vs theta1^2 denominators

    // with an equal residual spectrum theta2^2 = theta1^2/k, so they still differ,
    // but both stay within a sane band around the Monte Carlo quantile
    Vector equal_eig{2.0, 2.0, 0.5, 0.5, 0.5, 0.5};
    CHECK(spe_limit(equal_eig, 2, 0.99, LimitVariant::paper_printed) > 0.0);
}

TEST_CASE("spe limit scales linearly with the discarded spectrum") {
    Vector eig{3.0, 1.5, 0.4, 0.3, 0.2, 0.1};
    double base = spe_limit(eig, 2, 0.99);
    Vector scaled = eig;
    for (std::size_t j = 2; j < scaled.size(); ++j) scaled[j] *= 3.25;
    CHECK(spe_limit(scaled, 2, 0.99) == doctest::Approx(3.25 * base).epsilon(1e-10));

    CHECK(spe_limit(eig, 2, 0.95) < spe_limit(eig, 2, 0.99));

    Vector empty_residual{2.0, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(spe_limit(empty_residual, 2, 0.99), Error);
}

TEST_CASE("phi combines the scaled indices") {
    PcaSubmodel model = fitted_model();
    Vector zero(6, 0.0);
    CHECK(phi_statistic(zero, model) == 0.0);

    // x with T2 = t2_limit and SPE = spe_limit gives phi = 2
    Vector p1 = model.loadings.column(0);
    Vector r = random_unit_residual(model, 12);
    Vector x(6);
    double a = std::sqrt(model.eigenvalues[0] * model.t2_limit);
    double b = std::sqrt(model.spe_limit);
    for (std::size_t j = 0; j < 6; ++j) x[j] = a * p1[j] + b * r[j];
    CHECK(phi_statistic(x, model) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("phi quadratic form identity over 1000 random samples") {
    PcaSubmodel model = fitted_model();
    Matrix phi = phi_matrix(model);
    std::mt19937_64 rng(13);
    std::normal_distribution<double> normal;
    for (int i = 0; i < 1000; ++i) {
        Vector x(6);
        for (auto& v : x) v = normal(rng);
        double direct = phi_statistic(x, model);
        double quad = quadratic_form(phi, x);
        CHECK(std::abs(direct - quad) <= 1e-10 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("phi matrix is symmetric positive definite") {
    PcaSubmodel model = fitted_model();
    Matrix phi = phi_matrix(model);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(phi(i, j) == doctest::Approx(phi(j, i)).epsilon(1e-12));
    auto eig = jacobi_eigen(phi);
    for (double v : eig.eigenvalues) CHECK(v > 0.0);
}

TEST_CASE("phi limit moments are basis independent") {
    PcaSubmodel model = fitted_model();
    const std::size_t m = 6;

    // diagonal (S, Phi) pair in the model's own eigenbasis
    Matrix s0(m, m), phi0(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        s0(i, i) = model.eigenvalues[i];
        phi0(i, i) = i < model.l ? 1.0 / (model.eigenvalues[i] * model.t2_limit)
                                 : 1.0 / model.spe_limit;
    }

    // random orthonormal Q (Gram-Schmidt over gaussian columns)
    std::mt19937_64 rng(64);
    std::normal_distribution<double> normal;
    Matrix q(m, m);
    for (auto& v : q.data()) v = normal(rng);
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            double d = 0.0;
            for (std::size_t i = 0; i < m; ++i) d += q(i, c) * q(i, prev);
            for (std::size_t i = 0; i < m; ++i) q(i, c) -= d * q(i, prev);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) norm += q(i, c) * q(i, c);
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < m; ++i) q(i, c) /= norm;
    }

    double direct = phi_limit(s0, phi0, 0.99);
    Matrix s_rot = matmul(matmul(q, s0), transpose(q));
    Matrix phi_rot = matmul(matmul(q, phi0), transpose(q));
    CHECK(phi_limit(s_rot, phi_rot, 0.99) == doctest::Approx(direct).epsilon(1e-10));

    // the spectrum shortcut used at fit time agrees with the matrix form
    CHECK(phi_limit(model, 0.99) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("phi limit calibrates on in-distribution data") {
    PcaSubmodel model = fitted_model(10000, 1234);
    std::mt19937_64 rng(4321);
    std::normal_distribution<double> normal;
    Matrix w(6, 2);
    double rows[6][2] = {{0.9, 0.3},  {0.8, 0.4}, {0.7, -0.5},
                         {0.5, 0.8}, {0.6, 0.7}, {0.4, -0.8}};
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 2; ++j) w(i, j) = rows[i][j];

    const int n = 10000;
    int alarms = 0;
    for (int i = 0; i < n; ++i) {
        Vector f{normal(rng), normal(rng)};
        Vector x(6);
        for (std::size_t j = 0; j < 6; ++j)
            x[j] = 20.0 + w(j, 0) * f[0] + w(j, 1) * f[1] + 0.2 * normal(rng);
        Vector z = apply_standardization(x, model.standardization);
        if (phi_statistic(z, model) > model.phi_limit) ++alarms;
    }
    double rate = static_cast<double>(alarms) / n;
    CHECK(rate >= 0.003);
    CHECK(rate <= 0.03);
}

TEST_CASE("submodel validation catches broken invariants") {
    PcaSubmodel model = fitted_model();
    model.validate();

    PcaSubmodel broken = model;
    broken.loadings(0, 0) += 0.01;
    CHECK_THROWS_AS(broken.validate(), Error);

    broken = model;
    broken.eigenvalues[0] += 1.0;
    CHECK_THROWS_AS(broken.validate(), Error);

    broken = model;
    broken.phi_limit = 0.0;
    CHECK_THROWS_AS(broken.validate(), Error);
}
