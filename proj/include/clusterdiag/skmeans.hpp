#ifndef CLUSTERDIAG_SKMEANS_HPP
#define CLUSTERDIAG_SKMEANS_HPP

#include <cstddef>
#include <vector>

#include "clusterdiag/clustering.hpp"
#include "clusterdiag/matrix.hpp"
#include "clusterdiag/rng.hpp"

/**
 * @file skmeans.hpp
 * @brief Spherical K-means on unit-normalized rows (cosine geometry).
 */

namespace clusterdiag {

inline constexpr double unit_norm_tolerance = 1e-9;

/// Throws `InvalidArgument` unless every row of `u` has unit norm within `unit_norm_tolerance`.
void require_unit_rows(const Matrix& u, const char* what);

/// Argmax dot product per row; ties go to the lowest centroid index.
Partition spherical_assign(const Matrix& u, const CentroidModel& model);

/**
 * Normalized mean direction of every cluster.
 *
 * A cluster whose summed direction has norm below 1e-12 (for example two antipodal rows) is reseeded
 * on its assigned row with the lowest cosine similarity to its previous centroid, lowest row index
 * on ties; without `previous` every such row ties and the lowest index wins. An empty cluster is
 * reseeded on the row least similar to its own cluster's new centroid. Never produces NaN.
 */
CentroidModel spherical_update(const Matrix& u, const Partition& partition,
                               const CentroidModel* previous = nullptr);

/// K-means++ in cosine distance `1 - u.v`: D^2 weights on that distance.
std::vector<std::size_t> spherical_kmeanspp_indices(const Matrix& u, int k, RngStream& stream);

/**
 * Alternating assign/update from `init` on row-normalized `u`. Convergence: largest
 * `1 - cos(old, new)` over centroids below `tol` with labels stable under reassignment.
 * `objective` is the total cosine similarity (non-decreasing along `objective_trace`);
 * `sse` is the Euclidean SSE of `u` to the unit centroids.
 */
ClusteringResult spherical_lloyd(const Matrix& u, const CentroidModel& init, int max_iter, double tol);

/**
 * Normalizes the rows of `z`, then keeps the best (highest total cosine similarity) of
 * `options.n_init` seeded runs; restart `r` uses `stream.child(r)`, ties to the lowest restart.
 * Throws `InvalidArgument` for near-zero rows or `k` outside `[2, n]`.
 */
ClusteringResult skmeans_fit(const Matrix& z, int k, const FitOptions& options, const RngStream& stream);

/// Same as `skmeans_fit` for input that is already row-normalized.
ClusteringResult skmeans_fit_normalized(const Matrix& u, int k, const FitOptions& options,
                                        const RngStream& stream);

}

#endif
