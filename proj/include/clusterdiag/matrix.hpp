#ifndef CLUSTERDIAG_MATRIX_HPP
#define CLUSTERDIAG_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

/**
 * @file matrix.hpp
 * @brief Dense row-major matrix of doubles.
 */

namespace clusterdiag {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    /// Throws `InvalidArgument` if the rows are ragged.
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {values_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {values_.data() + r * cols_, cols_}; }

    std::vector<double> column(std::size_t c) const;

    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

    Matrix transpose() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Throws `InvalidArgument` on inner-dimension mismatch.
Matrix operator*(const Matrix& lhs, const Matrix& rhs);

/// Largest absolute entry of `lhs - rhs`. Shapes must agree.
double max_abs_diff(const Matrix& lhs, const Matrix& rhs);

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}

#endif
