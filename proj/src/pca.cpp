#include "clusterdiag/pca.hpp"

#include <algorithm>
#include <string>

#include "clusterdiag/error.hpp"
#include "clusterdiag/linalg.hpp"

namespace clusterdiag {

PcaModel pca_fit(const Matrix& z, std::size_t m) {
    const std::size_t d = z.cols();
    if (z.rows() < 2) {
        throw InvalidArgument("pca_fit: needs at least 2 rows");
    }
    if (m < 1 || m > d) {
        throw InvalidArgument("pca_fit: m = " + std::to_string(m) + " must be in [1, " + std::to_string(d) + "]");
    }

    PcaModel model;
    model.center = column_means(z);
    Matrix centered = z;
    for (std::size_t i = 0; i < centered.rows(); ++i) {
        auto row = centered.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            row[j] -= model.center[j];
        }
    }
    const SymEigen eig = sym_eigen(covariance(centered));

    double total = 0.0;
    for (double v : eig.values) {
        total += std::max(v, 0.0);
    }
    if (!(total > 0.0)) {
        throw NumericFailure("pca_fit: data has zero total variance");
    }

    model.components = Matrix(d, m);
    for (std::size_t j = 0; j < m; ++j) {
        const double value = std::max(eig.values[j], 0.0);
        model.explained_variance.push_back(value);
        model.explained_ratio.push_back(value / total);
        for (std::size_t r = 0; r < d; ++r) {
            model.components(r, j) = eig.vectors(r, j);
        }
    }
    return model;
}

Projection pca_project(const PcaModel& model, const Matrix& z, const Partition& partition) {
    const std::size_t d = model.center.size();
    if (z.cols() != d || model.components.rows() != d) {
        throw InvalidArgument("pca_project: data has " + std::to_string(z.cols()) + " columns, model expects " +
                              std::to_string(d));
    }
    if (!partition.labels.empty() && partition.labels.size() != z.rows()) {
        throw InvalidArgument("pca_project: partition has " + std::to_string(partition.labels.size()) +
                              " labels for " + std::to_string(z.rows()) + " rows");
    }
    const std::size_t m = model.components.cols();
    Projection out;
    out.coords = Matrix(z.rows(), m);
    std::vector<double> centered(d);
    for (std::size_t i = 0; i < z.rows(); ++i) {
        const auto row = z.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            centered[j] = row[j] - model.center[j];
        }
        for (std::size_t c = 0; c < m; ++c) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                acc += centered[j] * model.components(j, c);
            }
            out.coords(i, c) = acc;
        }
    }
    out.labels = partition.labels.empty() ? std::vector<int>(z.rows(), 0) : partition.labels;
    out.explained_ratio = model.explained_ratio;
    return out;
}

}
