#ifndef CLUSTERDIAG_PCA_HPP
#define CLUSTERDIAG_PCA_HPP

#include <cstddef>
#include <vector>

#include "clusterdiag/clustering.hpp"
#include "clusterdiag/matrix.hpp"

/**
 * @file pca.hpp
 * @brief Principal-component projection for diagnostic plots.
 *
 * Visualization only: nothing in the fitting path depends on this header.
 */

namespace clusterdiag {

struct PcaModel {
    std::vector<double> center;
    Matrix components;                    ///< d x m, orthonormal columns
    std::vector<double> explained_variance; ///< descending, population normalization
    std::vector<double> explained_ratio;    ///< share of total variance
};

struct Projection {
    Matrix coords; ///< n x m
    std::vector<int> labels;
    std::vector<double> explained_ratio;

    std::size_t dims() const noexcept { return coords.cols(); }
};

/// Requires `1 <= m <= d` and `n >= 2`.
PcaModel pca_fit(const Matrix& z, std::size_t m);

/// `(z - center) * components`, with partition labels attached for coloring.
Projection pca_project(const PcaModel& model, const Matrix& z, const Partition& partition);

}

#endif
