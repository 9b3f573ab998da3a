#include "clusterdiag/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "clusterdiag/error.hpp"
#include "clusterdiag/linalg.hpp"
#include "clusterdiag/report.hpp"

namespace clusterdiag {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') {
            quoted = !quoted;
        } else if (line[i] == ',' && !quoted) {
            fields.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    fields.push_back(trim(line.substr(start)));
    return fields;
}

bool parse_number(std::string_view text, double& value) {
    if (text.empty()) {
        return false;
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(value);
}

}

DataMatrix read_csv(std::istream& in, const std::vector<std::string>& feature_names) {
    std::string line;
    if (!std::getline(in, line)) {
        throw InvalidArgument("csv: missing header row");
    }
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF && static_cast<unsigned char>(line[1]) == 0xBB &&
        static_cast<unsigned char>(line[2]) == 0xBF) {
        line.erase(0, 3);
    }
    std::vector<std::string> header;
    for (auto f : split_fields(line)) {
        header.emplace_back(f);
    }

    std::vector<std::string> selected = feature_names;
    std::optional<std::size_t> label_column;
    if (selected.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == "label") {
                label_column = c;
            } else {
                selected.push_back(header[c]);
            }
        }
        if (selected.empty()) {
            throw InvalidArgument("csv: no feature columns in header");
        }
    }

    std::vector<std::size_t> columns;
    for (const auto& name : selected) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw InvalidArgument("csv: missing column '" + name + "'");
        }
        columns.push_back(static_cast<std::size_t>(it - header.begin()));
    }

    std::vector<double> values;
    std::vector<int> labels;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        ++row;
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw ParseError("csv: row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                                 " fields, header has " + std::to_string(header.size()),
                             row, std::min(fields.size(), header.size()) + 1);
        }
        for (std::size_t j = 0; j < columns.size(); ++j) {
            double v = 0.0;
            const auto cell = fields[columns[j]];
            if (!parse_number(cell, v)) {
                throw ParseError("csv: row " + std::to_string(row) + ", column " + std::to_string(columns[j] + 1) +
                                     " ('" + selected[j] + "'): " +
                                     (cell.empty() ? std::string("empty cell") : "non-numeric value '" + std::string(cell) + "'"),
                                 row, columns[j] + 1);
            }
            values.push_back(v);
        }
        if (label_column) {
            double v = 0.0;
            const auto cell = fields[*label_column];
            if (!parse_number(cell, v) || v < 0.0 || v != std::floor(v)) {
                throw ParseError("csv: row " + std::to_string(row) + ": label '" + std::string(cell) +
                                     "' is not a non-negative integer",
                                 row, *label_column + 1);
            }
            labels.push_back(static_cast<int>(v));
        }
    }

    DataMatrix out;
    out.values = Matrix(row, columns.size());
    out.values.values() = std::move(values);
    out.feature_names = std::move(selected);
    if (label_column) {
        out.truth_labels = std::move(labels);
    }
    out.provenance.generator = "csv";
    return out;
}

DataMatrix load_csv(const std::string& path, const std::vector<std::string>& feature_names) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open '" + path + "'");
    }
    DataMatrix out = read_csv(in, feature_names);
    out.provenance.parameters["path"] = path;
    return out;
}

void write_csv(std::ostream& out, const DataMatrix& data) {
    const bool with_labels = data.truth_labels.has_value();
    for (std::size_t j = 0; j < data.feature_names.size(); ++j) {
        out << (j ? "," : "") << data.feature_names[j];
    }
    out << (with_labels ? ",label\n" : "\n");
    for (std::size_t i = 0; i < data.n(); ++i) {
        const auto row = data.values.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            out << (j ? "," : "") << format_double(row[j]);
        }
        if (with_labels) {
            out << ',' << (*data.truth_labels)[i];
        }
        out << '\n';
    }
}

void save_csv(const std::string& path, const DataMatrix& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidArgument("cannot write '" + path + "'");
    }
    write_csv(out, data);
}

Standardized standardize(const DataMatrix& x) {
    const std::size_t n = x.n();
    const std::size_t d = x.d();
    if (n == 0) {
        throw InvalidArgument("standardize: empty matrix");
    }
    StandardizationModel model;
    model.mean = column_means(x.values);
    model.scale.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = x.values.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double delta = row[j] - model.mean[j];
            model.scale[j] += delta * delta;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        model.scale[j] = std::sqrt(model.scale[j] / static_cast<double>(n));
        const double magnitude = std::max(1.0, std::abs(model.mean[j]));
        if (!(model.scale[j] > 1e-12 * magnitude)) {
            const std::string name = j < x.feature_names.size() ? x.feature_names[j] : std::to_string(j);
            throw InvalidArgument("standardize: column '" + name + "' has zero variance");
        }
    }

    Standardized out{x, model};
    for (std::size_t i = 0; i < n; ++i) {
        auto row = out.data.values.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            row[j] = (row[j] - model.mean[j]) / model.scale[j];
        }
    }
    out.data.provenance.parameters["standardized"] = "true";
    return out;
}

Matrix normalize_rows(const Matrix& z) {
    Matrix out = z;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = out.row(i);
        const double norm = norm2(row);
        if (!(norm >= near_zero_row_norm)) {
            throw InvalidArgument("normalize_rows: row " + std::to_string(i) +
                                  " has near-zero norm and no direction; exclude it before spherical clustering");
        }
        for (auto& v : row) {
            v /= norm;
        }
    }
    return out;
}

DataMatrix normalize_rows(const DataMatrix& z) {
    DataMatrix out = z;
    out.values = normalize_rows(z.values);
    return out;
}

}
