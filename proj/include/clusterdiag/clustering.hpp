#ifndef CLUSTERDIAG_CLUSTERING_HPP
#define CLUSTERDIAG_CLUSTERING_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "clusterdiag/matrix.hpp"

/**
 * @file clustering.hpp
 * @brief Types shared by the classical and spherical K-means implementations.
 */

namespace clusterdiag {

/// Hard assignment of `n` rows to clusters `0 .. k-1`.
struct Partition {
    std::vector<int> labels;
    int k = 0;

    std::size_t size() const noexcept { return labels.size(); }
    std::vector<std::size_t> counts() const;

    /// Throws `InvalidArgument` if any label is outside `[0, k)`.
    void validate() const;
};

enum class Geometry { euclidean, spherical };

struct CentroidModel {
    Matrix centroids; ///< k x d
    Geometry geometry = Geometry::euclidean;

    int k() const noexcept { return static_cast<int>(centroids.rows()); }
};

struct ClusteringResult {
    Partition partition;
    CentroidModel model;

    /// SSE for euclidean fits; total cosine similarity for spherical fits.
    double objective = 0.0;

    /// Euclidean SSE of the working matrix (the row-normalized one for spherical fits).
    double sse = 0.0;

    int iterations = 0;
    bool converged = false;

    /// Objective after every assignment step, starting with the initial centroids.
    std::vector<double> objective_trace;

    /// Master seed of the stream the fit was given, and the restart that produced this result.
    std::uint64_t seed = 0;
    int restart = 0;
};

struct FitOptions {
    int n_init = 10;
    int max_iter = 300;
    double tol = 1e-4;
    /// 0 means "one per hardware thread". Results never depend on this value.
    unsigned threads = 1;
};

/// Defaults for spherical fits: angular tolerance 1e-6.
inline FitOptions spherical_defaults() {
    FitOptions options;
    options.tol = 1e-6;
    return options;
}

enum class Method { classical, spherical };

Method parse_method(std::string_view name);
std::string_view to_string(Method method);
std::string_view to_string(Geometry geometry);

}

#endif
