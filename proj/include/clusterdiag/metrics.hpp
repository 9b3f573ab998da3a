#ifndef CLUSTERDIAG_METRICS_HPP
#define CLUSTERDIAG_METRICS_HPP

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "clusterdiag/clustering.hpp"
#include "clusterdiag/matrix.hpp"
#include "clusterdiag/rng.hpp"

/**
 * @file metrics.hpp
 * @brief Model selection and stability: SSE, silhouette, adjusted Rand index, k sweeps, elbow.
 */

namespace clusterdiag {

/// Sum over rows of the squared Euclidean distance to the row's centroid.
double sse(const Matrix& z, const Partition& partition, const CentroidModel& model);

enum class Distance { euclidean, cosine };

Distance parse_distance(std::string_view name);
std::string_view to_string(Distance distance);

/// Silhouette geometry paired with each method: euclidean on Z, cosine on the row-normalized Z.
Distance default_distance(Method method);

struct SilhouetteBreakdown {
    std::vector<double> a; ///< mean distance to the other members of the row's cluster
    std::vector<double> b; ///< lowest mean distance to another cluster
    std::vector<double> s;
    double mean = 0.0;
};

/**
 * Per-row silhouette `(b - a) / max(a, b)`.
 *
 * Rows in singleton clusters get `s = 0`, as do rows with `max(a, b) = 0`. Cosine distance is
 * `1 - u.v` and needs unit rows. Requires `k >= 2` and every cluster non-empty; throws
 * `InvalidArgument` otherwise.
 */
SilhouetteBreakdown silhouette(const Matrix& x, const Partition& partition, Distance distance,
                               unsigned threads = 1);

/**
 * Hubert-Arabie adjusted Rand index. When the expected-index correction leaves a zero denominator
 * (both partitions all-singletons or all-one-cluster) the result is 1 for identical pair structure
 * and 0 otherwise. Throws `InvalidArgument` on length mismatch.
 */
double ari(std::span<const int> a, std::span<const int> b);
double ari(const Partition& a, const Partition& b);

struct StabilityReport {
    Method method = Method::classical;
    int k = 0;
    int runs = 0;
    std::vector<double> pairwise; ///< (0,1), (0,2), ..., (R-2,R-1)
    double mean = 0.0;
    double sd = 0.0;              ///< population standard deviation over pairs
    double min = 0.0;
};

/**
 * `runs` single-initialization fits (run `r` on `stream.child(r)`) compared pairwise by ARI.
 * `options.n_init` is ignored. Requires `runs >= 2` and `k >= 2`.
 */
StabilityReport stability(const Matrix& z, int k, Method method, int runs, const RngStream& stream,
                          const FitOptions& options);

struct SweepRow {
    int k = 0;
    double silhouette = 0.0;
    double sse = 0.0;
    std::optional<double> stability_mean;
    std::optional<double> stability_sd;
};

struct KSweepReport {
    Method method = Method::classical;
    Distance distance = Distance::euclidean;
    std::vector<SweepRow> rows;
    int best_k = 0;
    std::optional<int> elbow_k; ///< present when the sweep has at least three rows
};

struct SweepConfig {
    int k_min = 2;
    int k_max = 10;
    FitOptions fit;
    int stability_runs = 0; ///< 0 disables the per-k stability columns
};

/**
 * Fits every k in `[k_min, k_max]` and records silhouette, SSE of the working matrix and, when
 * requested, stability. The fit for `k` uses `stream.child(k).child(0)` and its stability runs
 * `stream.child(k).child(1)`. `best_k` is the silhouette argmax, smallest k on ties.
 * Requires `2 <= k_min <= k_max <= n - 1`.
 */
KSweepReport k_sweep(const Matrix& z, Method method, const SweepConfig& config, const RngStream& stream);

/**
 * Interior k with the largest perpendicular distance from `(k, sse)` to the chord joining the first
 * and last rows; smallest k on ties. Requires at least three rows.
 */
int elbow_k(const KSweepReport& sweep);
int elbow_k(std::span<const int> ks, std::span<const double> sse_values);

/// Single fit dispatch used by the sweep and stability protocols.
ClusteringResult fit(const Matrix& z, int k, Method method, const FitOptions& options, const RngStream& stream);

}

#endif
