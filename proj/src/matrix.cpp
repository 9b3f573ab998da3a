#include "clusterdiag/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "clusterdiag/error.hpp"

namespace clusterdiag {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> copy;
    copy.reserve(rows.size());
    for (const auto& r : rows) {
        copy.emplace_back(r);
    }
    return from_rows(copy);
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        return {};
    }
    Matrix out(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != out.cols_) {
            throw InvalidArgument("ragged rows: row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                                  " entries, expected " + std::to_string(out.cols_));
        }
        std::copy(rows[r].begin(), rows[r].end(), out.row(r).begin());
    }
    return out;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out(i, i) = 1.0;
    }
    return out;
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = (*this)(r, c);
    }
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = (*this)(r, c);
        }
    }
    return out;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols() != rhs.rows()) {
        throw InvalidArgument("matrix product: " + std::to_string(lhs.rows()) + "x" + std::to_string(lhs.cols()) +
                              " times " + std::to_string(rhs.rows()) + "x" + std::to_string(rhs.cols()));
    }
    Matrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        auto dest = out.row(i);
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const double scale = lhs(i, k);
            const auto src = rhs.row(k);
            for (std::size_t j = 0; j < rhs.cols(); ++j) {
                dest[j] += scale * src[j];
            }
        }
    }
    return out;
}

double max_abs_diff(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
        throw InvalidArgument("max_abs_diff: shape mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < lhs.values().size(); ++i) {
        worst = std::max(worst, std::abs(lhs.values()[i] - rhs.values()[i]));
    }
    return worst;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += a[i] * b[i];
    }
    return total;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double delta = a[i] - b[i];
        total += delta * delta;
    }
    return total;
}

double norm2(std::span<const double> a) {
    return std::sqrt(dot(a, a));
}

}
