#ifndef CLUSTERDIAG_ERROR_HPP
#define CLUSTERDIAG_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

/**
 * @file error.hpp
 * @brief Exception types shared by every module.
 *
 * Two families matter to callers: `InvalidArgument` (bad input, maps to CLI exit code 2)
 * and `NumericFailure` (a well-formed input the numerics cannot handle, exit code 3).
 */

namespace clusterdiag {

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed CSV content. Coordinates are 1-based data rows (header excluded) and 1-based columns.
class ParseError : public InvalidArgument {
public:
    ParseError(const std::string& message, std::size_t row, std::size_t column)
        : InvalidArgument(message), row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class NumericFailure : public std::runtime_error {
public:
    explicit NumericFailure(const std::string& message, std::size_t index = npos)
        : std::runtime_error(message), index_(index) {}

    /// Offending pivot/row/column, or `npos` when not applicable.
    std::size_t index() const noexcept { return index_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::size_t index_;
};

}

#endif
