#include "mpca/distributions.hpp"

#include "mpca/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mpca {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

void check_alpha(double alpha, const char* where) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(ErrorKind::InvalidParameter,
                    std::string(where) + ": alpha must be in (0,1)");
}

double normal_pdf(double z) {
    static const double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

// Series expansion of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x) = 1 - P(a,x), valid for x >= a+1 (Lentz).
double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Continued fraction for the incomplete beta (Lentz).
double beta_cf(double a, double b, double x) {
    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < 500; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h;
}

double gamma_pdf_unit_scale(double a, double x) {
    if (x <= 0.0) return 0.0;
    return std::exp(-x + (a - 1.0) * std::log(x) - std::lgamma(a));
}

// Solve P(a, x) = p by bracketed Newton iteration.
double inverse_gamma_p(double a, double p) {
    if (a <= 0.0)
        throw Error(ErrorKind::InvalidParameter, "inverse_gamma_p: shape must be positive");

    // Wilson-Hilferty starting point
    double z = normal_inv(p);
    double g = 1.0 - 1.0 / (9.0 * a) + z * std::sqrt(1.0 / (9.0 * a));
    double x = a * g * g * g;
    if (!(x > 0.0) || !std::isfinite(x)) x = a;

    double lo = 0.0;
    double hi = std::max(x * 4.0, a * 16.0 + 16.0);
    while (regularized_gamma_p(a, hi) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300)
            throw Error(ErrorKind::InvalidParameter, "inverse_gamma_p: bracket overflow");
    }
    if (x <= lo || x >= hi) x = 0.5 * (lo + hi);

    for (int it = 0; it < 200; ++it) {
        double f = regularized_gamma_p(a, x) - p;
        if (f > 0.0) hi = x; else lo = x;
        double dfdx = gamma_pdf_unit_scale(a, x);
        double step = dfdx > 0.0 ? f / dfdx : 0.0;
        double next = x - step;
        if (!(next > lo && next < hi) || dfdx <= 0.0)
            next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-14 * (std::abs(x) + 1e-30)) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

// Solve I_x(a, b) = p by bracketed Newton iteration on (0, 1).
double inverse_beta(double a, double b, double p) {
    double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    double lo = 0.0, hi = 1.0;
    double x = a / (a + b);
    for (int it = 0; it < 300; ++it) {
        double f = regularized_beta(a, b, x) - p;
        if (f > 0.0) hi = x; else lo = x;
        double pdf = std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta);
        double next = pdf > 0.0 ? x - f / pdf : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * (x + 1e-30)) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

} // namespace

double normal_cdf(double z) {
    static const double inv_sqrt2 = 0.7071067811865475244008444;
    return 0.5 * std::erfc(-z * inv_sqrt2);
}

double normal_inv(double alpha) {
    check_alpha(alpha, "normal_inv");
    if (alpha == 0.5) return 0.0;

    bool upper = alpha > 0.5;
    double p = upper ? 1.0 - alpha : alpha;

    // Hastings rational start (A&S 26.2.22), then Newton on the erfc CDF.
    double t = std::sqrt(-2.0 * std::log(p));
    double z = -(t - (2.30753 + 0.27061 * t) / (1.0 + 0.99229 * t + 0.04481 * t * t));

    for (int it = 0; it < 40; ++it) {
        double err = normal_cdf(z) - p;
        double d = normal_pdf(z);
        if (d <= 0.0) break;
        double step = err / d;
        z -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    return upper ? -z : z;
}

double regularized_gamma_p(double a, double x) {
    if (a <= 0.0)
        throw Error(ErrorKind::InvalidParameter, "regularized_gamma_p: shape must be positive");
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double regularized_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0)
        throw Error(ErrorKind::InvalidParameter, "regularized_beta: shapes must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double chi2_inv(double df, double alpha) {
    check_alpha(alpha, "chi2_inv");
    if (df <= 0.0)
        throw Error(ErrorKind::InvalidParameter, "chi2_inv: df must be positive");
    return 2.0 * inverse_gamma_p(0.5 * df, alpha);
}

double f_inv(double d1, double d2, double alpha) {
    check_alpha(alpha, "f_inv");
    if (d1 <= 0.0 || d2 <= 0.0)
        throw Error(ErrorKind::InvalidParameter, "f_inv: degrees of freedom must be positive");
    // If F ~ F(d1,d2) then d1 F / (d1 F + d2) ~ Beta(d1/2, d2/2).
    double b = inverse_beta(0.5 * d1, 0.5 * d2, alpha);
    if (b >= 1.0)
        throw Error(ErrorKind::InvalidParameter, "f_inv: quantile overflow");
    return d2 * b / (d1 * (1.0 - b));
}

} // namespace mpca
