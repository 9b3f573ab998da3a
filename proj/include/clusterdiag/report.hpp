#ifndef CLUSTERDIAG_REPORT_HPP
#define CLUSTERDIAG_REPORT_HPP

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "clusterdiag/clustering.hpp"
#include "clusterdiag/metrics.hpp"
#include "clusterdiag/pca.hpp"

/**
 * @file report.hpp
 * @brief Serialized artifacts: sweep tables and curves, cluster profiles, PCA scatter plots.
 *
 * Every emitter is a pure function of its inputs. Numbers use the shortest decimal string that
 * round-trips to the same double, so outputs are byte-stable across runs and platforms.
 */

namespace clusterdiag {

enum class ArtifactFormat { json, csv, svg };

ArtifactFormat parse_format(std::string_view name);

/// Shortest round-trip representation (`std::to_chars`), e.g. `0.1`, `1e-07`, `2000`.
std::string format_double(double value);

/**
 * Sweep JSON: `{"method", "distance", "best_k", "elbow_k", "rows": [{"k", "silhouette", "sse",
 * "stability_mean", "stability_sd"}]}` with nulls for absent values.
 */
nlohmann::ordered_json sweep_to_json(const KSweepReport& sweep);
KSweepReport sweep_from_json(const nlohmann::json& doc);

/**
 * `json`, `csv` (header `k,silhouette,sse,stability_mean,stability_sd`, empty cells for absent
 * stability) or `svg` (silhouette and SSE panels sharing the k axis, one circle per row per curve,
 * best_k and elbow_k marked). Throws `InvalidArgument` for an empty sweep.
 */
std::string emit_sweep(const KSweepReport& sweep, ArtifactFormat format);

nlohmann::ordered_json stability_to_json(const StabilityReport& report);

struct ProfileRow {
    int cluster = 0;
    std::size_t size = 0;
    double pct = 0.0;
    std::vector<double> centroid;
};

struct ProfileTable {
    std::vector<std::string> feature_names;
    std::vector<ProfileRow> rows; ///< sorted by cluster id
};

/// Profile from the fitted centroids (standardized units for classical fits on z-scores).
ProfileTable emit_profile(const ClusteringResult& result, const std::vector<std::string>& names);

/// Profile whose centroid columns are the per-cluster means of `z`; used for spherical fits.
ProfileTable profile_from_partition(const Matrix& z, const Partition& partition,
                                    const std::vector<std::string>& names);

/// Header `cluster,size,pct,<feature...>`.
std::string profile_csv(const ProfileTable& table);

/// Line chart of centroid values per feature, one polyline per cluster.
std::string profile_svg(const ProfileTable& table);

/**
 * `csv` (header `pc1,pc2[,pc3],label`) or `svg` (one circle per row; 3D data as the three pairwise
 * panels). Colors come from a fixed palette indexed by label. Throws `InvalidArgument` unless the
 * projection has 2 or 3 dimensions.
 */
std::string emit_scatter(const Projection& projection, ArtifactFormat format);

/// Fixed categorical palette; label `i` maps to entry `i % size`.
const std::vector<std::string>& palette();

/// Fit summary written by the `fit` subcommand and read back by `project --labels`.
nlohmann::ordered_json fit_to_json(const ClusteringResult& result, Method method,
                           const std::vector<std::string>& feature_names);
Partition partition_from_fit_json(const nlohmann::json& doc);

}

#endif
