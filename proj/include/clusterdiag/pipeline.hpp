#ifndef CLUSTERDIAG_PIPELINE_HPP
#define CLUSTERDIAG_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "clusterdiag/data_matrix.hpp"
#include "clusterdiag/datagen.hpp"
#include "clusterdiag/metrics.hpp"
#include "clusterdiag/rng.hpp"

/**
 * @file pipeline.hpp
 * @brief The end-to-end scenario analysis and the `paperbench` batch over all synthetic designs.
 */

namespace clusterdiag {

struct ScenarioConfig {
    int k_min = 2;
    int k_max = 10;
    int n_init = 10;
    int max_iter = 300;
    double tol_classical = 1e-4;
    double tol_spherical = 1e-6;
    int stability_runs = 20;
    unsigned threads = 1;
};

struct MethodSummary {
    KSweepReport sweep;
    StabilityReport stability; ///< at the sweep's best_k
    ClusteringResult best_fit; ///< refit at best_k, same stream as the sweep used
    std::optional<double> ari_vs_truth;
};

struct ScenarioResult {
    std::string name;
    std::size_t n = 0;
    std::size_t d = 0;
    MethodSummary classical;
    MethodSummary spherical;
};

/**
 * Standardize `raw`, then for both methods: k sweep, stability at best_k, refit at best_k.
 * Stream layout: classical sweep `child(1)`, spherical sweep `child(2)`, classical stability
 * `child(3)`, spherical stability `child(4)`. When `out_dir` is given the scenario's artifacts are
 * written there (into a temporary directory renamed on completion).
 */
ScenarioResult analyze_scenario(const DataMatrix& raw, const std::string& name, const ScenarioConfig& config,
                                const RngStream& stream,
                                const std::optional<std::filesystem::path>& out_dir = std::nullopt);

struct PaperbenchConfig {
    std::uint64_t seed = 7;
    std::filesystem::path out_dir;
    std::size_t n = 2000;
    std::size_t d = 6;
    double rho = default_rho;
    std::optional<std::string> empirical_csv;
    std::vector<std::string> empirical_features;
    ScenarioConfig scenario;
};

/// Scenario names in output order: random, gaussian, correlated, multimodal, cytometer[, empirical].
std::vector<std::string> paperbench_scenarios(bool with_empirical);

/**
 * Generate each synthetic design from `RngStream(seed, 0).child(i).child(0)`, analyze it with the
 * rest of `child(i)`, and write `<out_dir>/<i>_<name>/` plus `summary.csv`.
 */
std::vector<ScenarioResult> paperbench(const PaperbenchConfig& config);

/// One line per scenario: best_k, silhouette and stability for both methods.
std::string summary_table(const std::vector<ScenarioResult>& results, bool csv);

}

#endif
