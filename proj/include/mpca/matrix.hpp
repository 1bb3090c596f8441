#pragma once

#include <cstddef>
#include <vector>

namespace mpca {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Sized for the small problems here
/// (a handful of sensor variables); plain loops beat anything clever.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

    Vector row(std::size_t i) const {
        return Vector(row_ptr(i), row_ptr(i) + cols_);
    }
    Vector column(std::size_t j) const {
        Vector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct SymmetricEigen {
    Vector eigenvalues; // descending
    Matrix eigenvectors; // columns, same order as eigenvalues
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

/// A^T * A / divisor (Gram matrix of the columns).
Matrix gram(const Matrix& a, double divisor);

Vector matvec(const Matrix& a, const Vector& x);

/// x^T * A * x for square A.
double quadratic_form(const Matrix& a, const Vector& x);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);          // squared Euclidean norm
double euclidean_distance(const Vector& a, const Vector& b);
double trace(const Matrix& a);
double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues are returned in descending order with matching eigenvector
/// columns. Converges to off-diagonal Frobenius norm below 1e-14 * ||A||.
SymmetricEigen jacobi_eigen(const Matrix& a);

} // namespace mpca
