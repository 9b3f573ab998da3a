#ifndef CLUSTERDIAG_KMEANS_HPP
#define CLUSTERDIAG_KMEANS_HPP

#include <cstddef>
#include <vector>

#include "clusterdiag/clustering.hpp"
#include "clusterdiag/matrix.hpp"
#include "clusterdiag/rng.hpp"

/**
 * @file kmeans.hpp
 * @brief Classical K-means: K-means++ seeding, Lloyd iteration, best-of-restarts selection.
 */

namespace clusterdiag {

/**
 * Rows chosen by K-means++: the first uniformly, each later one with probability proportional to
 * its squared distance to the nearest row already chosen. Rows at distance zero are never picked
 * while any positive weight remains; if the data has fewer than `k` distinct rows the remaining
 * picks are uniform over unchosen rows. Throws `InvalidArgument` unless `1 <= k <= n`.
 */
std::vector<std::size_t> kmeanspp_indices(const Matrix& z, int k, RngStream& stream);

CentroidModel kmeanspp_init(const Matrix& z, int k, RngStream& stream);

/**
 * Label of the nearest centroid by squared Euclidean distance for every row; ties go to the lowest
 * centroid index.
 */
Partition assign_nearest(const Matrix& z, const Matrix& centroids);

/**
 * Lloyd iteration from `init`.
 *
 * Each iteration recomputes centroids as the means of their rows, then reassigns. A centroid that
 * lost all its rows is moved onto the row with the largest squared distance to its own centroid
 * (lowest row index on ties) and that row is relabeled. The run is `converged` once the largest
 * centroid displacement is below `tol` and reassignment leaves every label unchanged, so a
 * converged result is always a fixed point: centroids are the means of their rows and every label
 * is a distance argmin. `objective_trace` holds the SSE after every assignment and never increases.
 */
ClusteringResult lloyd(const Matrix& z, const CentroidModel& init, int max_iter, double tol);

/**
 * Best of `options.n_init` independent K-means++ + Lloyd runs. Restart `r` draws from
 * `stream.child(r)`; the lowest SSE wins, ties going to the lowest restart index.
 * Throws `InvalidArgument` unless `2 <= k <= n`.
 */
ClusteringResult kmeans_fit(const Matrix& z, int k, const FitOptions& options, const RngStream& stream);

}

#endif
