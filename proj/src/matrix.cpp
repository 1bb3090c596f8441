#include "mpca/matrix.hpp"

#include "mpca/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpca {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw Error(ErrorKind::InvalidParameter, "matmul: dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            t(j, i) = a(i, j);
    return t;
}

Matrix gram(const Matrix& a, double divisor) {
    Matrix g(a.cols(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* row = a.row_ptr(i);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            for (std::size_t k = j; k < a.cols(); ++k)
                g(j, k) += row[j] * row[k];
        }
    }
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t k = j; k < a.cols(); ++k) {
            g(j, k) /= divisor;
            g(k, j) = g(j, k);
        }
    return g;
}

Vector matvec(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size())
        throw Error(ErrorKind::InvalidParameter, "matvec: dimension mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* row = a.row_ptr(i);
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

double quadratic_form(const Matrix& a, const Vector& x) {
    Vector ax = matvec(a, x);
    return dot(x, ax);
}

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& a) { return dot(a, a); }

double euclidean_distance(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double trace(const Matrix& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
    return t;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace

SymmetricEigen jacobi_eigen(const Matrix& input) {
    if (input.rows() != input.cols())
        throw Error(ErrorKind::InvalidParameter, "jacobi_eigen: matrix not square");
    const std::size_t m = input.rows();

    Matrix a = input;
    Matrix v(m, m);
    for (std::size_t i = 0; i < m; ++i) v(i, i) = 1.0;

    const double scale = std::max(frobenius_norm(a), 1e-300);
    const double tol = 1e-14 * scale;
    const int max_sweeps = 100;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= tol) break;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                double apq = a(p, q);
                if (std::abs(apq) <= tol / (double)(m * m)) continue;
                double app = a(p, p);
                double aqq = a(q, q);
                double theta = (aqq - app) / (2.0 * apq);
                // smaller-angle root of t^2 + 2*theta*t - 1 = 0
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (std::size_t k = 0; k < m; ++k) {
                    double akp = a(k, p);
                    double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    double apk = a(p, k);
                    double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    double vkp = v(k, p);
                    double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymmetricEigen out;
    out.eigenvalues.resize(m);
    out.eigenvectors = Matrix(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]);
        // fix sign so the largest-magnitude component is positive (determinism)
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double mag = std::abs(v(i, order[j]));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        double sign = v(arg, order[j]) >= 0.0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < m; ++i) out.eigenvectors(i, j) = sign * v(i, order[j]);
    }
    return out;
}

} // namespace mpca
