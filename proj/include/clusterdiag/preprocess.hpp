#ifndef CLUSTERDIAG_PREPROCESS_HPP
#define CLUSTERDIAG_PREPROCESS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "clusterdiag/data_matrix.hpp"

/**
 * @file preprocess.hpp
 * @brief CSV ingestion, z-scoring and row normalization.
 */

namespace clusterdiag {

/// Per-feature location and population standard deviation.
struct StandardizationModel {
    std::vector<double> mean;
    std::vector<double> scale;
};

/**
 * Load the named columns, in the given order, from a headed CSV file.
 *
 * An empty `feature_names` selects every column except one named `label`; when a `label` column
 * exists it is read into `truth_labels`. Missing columns raise `InvalidArgument` naming the column;
 * empty or non-numeric cells raise `ParseError` with 1-based data-row and column coordinates.
 * Missing data is never imputed.
 */
DataMatrix load_csv(const std::string& path, const std::vector<std::string>& feature_names = {});
DataMatrix read_csv(std::istream& in, const std::vector<std::string>& feature_names = {});

/// Header `f..[,label]`, shortest round-trip numbers, LF line endings.
void write_csv(std::ostream& out, const DataMatrix& data);
void save_csv(const std::string& path, const DataMatrix& data);

struct Standardized {
    DataMatrix data;
    StandardizationModel model;
};

/// Throws `InvalidArgument` naming the first zero-variance column.
Standardized standardize(const DataMatrix& x);

/// Rows scaled to unit L2 norm. A row with norm below 1e-12 raises `InvalidArgument` naming its 0-based index.
DataMatrix normalize_rows(const DataMatrix& z);
Matrix normalize_rows(const Matrix& z);

inline constexpr double near_zero_row_norm = 1e-12;

}

#endif
