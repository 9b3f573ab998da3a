#ifndef CLUSTERDIAG_DATA_MATRIX_HPP
#define CLUSTERDIAG_DATA_MATRIX_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clusterdiag/matrix.hpp"

namespace clusterdiag {

/// Where a table came from: generator id (or "csv"), its parameters, and the master seed.
struct Provenance {
    std::string generator;
    std::map<std::string, std::string> parameters;
    std::optional<std::uint64_t> seed;
};

/**
 * An `n x d` observation table with feature names and, for synthetic mixtures,
 * the ground-truth component of every row.
 */
struct DataMatrix {
    Matrix values;
    std::vector<std::string> feature_names;
    std::optional<std::vector<int>> truth_labels;
    Provenance provenance;

    std::size_t n() const noexcept { return values.rows(); }
    std::size_t d() const noexcept { return values.cols(); }
};

/// `f1 .. fd`
std::vector<std::string> default_feature_names(std::size_t d);

}

#endif
