#ifndef CLUSTERDIAG_DATAGEN_HPP
#define CLUSTERDIAG_DATAGEN_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "clusterdiag/data_matrix.hpp"
#include "clusterdiag/matrix.hpp"
#include "clusterdiag/rng.hpp"

/**
 * @file datagen.hpp
 * @brief Synthetic null-model and positive-control dataset generators.
 *
 * Five designs, each a pure function of its parameters and the stream it is handed:
 * - `gen_random`: i.i.d. U[0,1) entries, no latent structure.
 * - `gen_unimodal_gaussian`: i.i.d. N(0,1) entries.
 * - `gen_correlated_gaussian`: N(0, S) with S equicorrelated at `rho` and a unit diagonal.
 * - `gen_multimodal`: a Gaussian mixture, by default five compact well-separated components.
 * - `gen_cytometer`: five unequal, anisotropic, partly overlapping components plus measurement noise.
 */

namespace clusterdiag {

inline constexpr std::size_t default_rows = 2000;
inline constexpr std::size_t default_features = 6;
inline constexpr double default_rho = 0.45;

/**
 * A Gaussian mixture: `K` means in `d` dimensions, a Cholesky factor per component covariance,
 * positive weights summing to 1, and optional isotropic measurement noise added to every entry.
 */
struct MixtureSpec {
    std::string name;
    std::string version;
    Matrix means;                         ///< K x d
    std::vector<Matrix> chol_factors;     ///< K lower-triangular d x d
    std::vector<double> weights;          ///< K
    double noise_sd = 0.0;

    std::size_t components() const noexcept { return means.rows(); }
    std::size_t dims() const noexcept { return means.cols(); }

    /// Throws `InvalidArgument` describing the first violated invariant.
    void validate() const;
};

/**
 * Parse a mixture file. Components list `mean`, `weight`, and either `sd` (diagonal standard
 * deviations) or `cov` (full covariance, factorized here). See the files under `config/` for the layout.
 */
MixtureSpec mixture_from_json(const nlohmann::json& doc);
MixtureSpec load_mixture(const std::string& path);

/// The pinned five-component positive control (config/multimodal_v1.json).
const MixtureSpec& default_multimodal_spec();

/// The pinned cytometer-like layout (config/cytometer_v1.json).
const MixtureSpec& default_cytometer_spec();

DataMatrix gen_random(std::size_t n, std::size_t d, RngStream& stream);
DataMatrix gen_unimodal_gaussian(std::size_t n, std::size_t d, RngStream& stream);

/// Requires `-1/(d-1) < rho < 1` (any `rho` in (-1, 1) when `d == 1`).
DataMatrix gen_correlated_gaussian(std::size_t n, std::size_t d, double rho, RngStream& stream);

/// `d` must equal `spec.dims()`. Rows choose a component by weight, then draw from it.
DataMatrix gen_multimodal(std::size_t n, std::size_t d, const MixtureSpec& spec, RngStream& stream);

/// Requires `n >= 100`. Uses `default_cytometer_spec()` unless a spec is supplied.
DataMatrix gen_cytometer(std::size_t n, RngStream& stream);
DataMatrix gen_cytometer(std::size_t n, const MixtureSpec& spec, RngStream& stream);

/// Equicorrelation matrix with unit diagonal.
Matrix equicorrelation(std::size_t d, double rho);

enum class DatasetKind { random, gaussian, correlated, multimodal, cytometer };

DatasetKind parse_dataset_kind(std::string_view name);
std::string_view to_string(DatasetKind kind);

}

#endif
