#include "clusterdiag/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clusterdiag/error.hpp"

namespace clusterdiag {

namespace {

constexpr double symmetry_tolerance = 1e-9;

void require_symmetric(const Matrix& s, const char* what) {
    if (s.rows() != s.cols()) {
        throw InvalidArgument(std::string(what) + ": matrix is " + std::to_string(s.rows()) + "x" +
                              std::to_string(s.cols()) + ", expected square");
    }
    double scale = 1.0;
    for (double v : s.values()) {
        scale = std::max(scale, std::abs(v));
    }
    for (std::size_t i = 0; i < s.rows(); ++i) {
        for (std::size_t j = i + 1; j < s.cols(); ++j) {
            if (std::abs(s(i, j) - s(j, i)) > symmetry_tolerance * scale) {
                throw InvalidArgument(std::string(what) + ": matrix is not symmetric at (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")");
            }
        }
    }
}

double off_diagonal_norm(const Matrix& a) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) {
                total += a(i, j) * a(i, j);
            }
        }
    }
    return std::sqrt(total);
}

}

std::vector<double> column_means(const Matrix& x) {
    std::vector<double> means(x.cols(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto row = x.row(r);
        for (std::size_t c = 0; c < x.cols(); ++c) {
            means[c] += row[c];
        }
    }
    for (auto& m : means) {
        m /= static_cast<double>(x.rows());
    }
    return means;
}

Matrix covariance(const Matrix& centered) {
    const std::size_t n = centered.rows();
    if (n < 2) {
        throw InvalidArgument("covariance needs at least 2 rows, got " + std::to_string(n));
    }
    const std::size_t d = centered.cols();
    Matrix out(d, d);
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = centered.row(r);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i; j < d; ++j) {
                out(i, j) += row[i] * row[j];
            }
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            out(i, j) /= static_cast<double>(n);
            out(j, i) = out(i, j);
        }
    }
    return out;
}

namespace {
constexpr double singular_pivot = 1e-12;
}

Matrix cholesky(const Matrix& s) {
    require_symmetric(s, "cholesky");
    const std::size_t d = s.rows();
    Matrix lower(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        double pivot = s(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            pivot -= lower(j, k) * lower(j, k);
        }
        // Relative floor so a singular matrix is not accepted on rounding noise.
        if (!(pivot > singular_pivot * std::max(1.0, std::abs(s(j, j)))) || !std::isfinite(pivot)) {
            throw NumericFailure("cholesky: matrix is not positive definite (pivot " + std::to_string(j) + " is " +
                                     std::to_string(pivot) + ")",
                                 j);
        }
        const double diag = std::sqrt(pivot);
        lower(j, j) = diag;
        for (std::size_t i = j + 1; i < d; ++i) {
            double acc = s(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                acc -= lower(i, k) * lower(j, k);
            }
            lower(i, j) = acc / diag;
        }
    }
    return lower;
}

SymEigen sym_eigen(const Matrix& s, const JacobiSettings& settings) {
    require_symmetric(s, "sym_eigen");
    const std::size_t d = s.rows();
    Matrix a = s;
    // Work on the exactly symmetric average so rotations see a consistent matrix.
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            const double avg = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = avg;
            a(j, i) = avg;
        }
    }
    Matrix v = Matrix::identity(d);

    double frobenius = 0.0;
    for (double x : a.values()) {
        frobenius += x * x;
    }
    frobenius = std::sqrt(frobenius);
    const double threshold = settings.off_diagonal_tolerance * frobenius;

    bool done = off_diagonal_norm(a) <= threshold;
    for (int sweep = 0; sweep < settings.max_sweeps && !done; ++sweep) {
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;

                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
        done = off_diagonal_norm(a) <= threshold;
    }
    if (!done) {
        throw NumericFailure("sym_eigen: Jacobi rotations did not converge in " + std::to_string(settings.max_sweeps) +
                             " sweeps");
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    SymEigen out;
    out.values.resize(d);
    out.vectors = Matrix(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t src = order[j];
        out.values[j] = a(src, src);

        std::size_t lead = 0;
        for (std::size_t k = 1; k < d; ++k) {
            if (std::abs(v(k, src)) > std::abs(v(lead, src))) {
                lead = k;
            }
        }
        const double sign = v(lead, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < d; ++k) {
            out.vectors(k, j) = sign * v(k, src);
        }
    }
    return out;
}

}
