#include "clusterdiag/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "clusterdiag/error.hpp"

namespace clusterdiag {

namespace {

/// Fixed two-decimal coordinates for SVG geometry.
std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

/// Axis tick labels: up to 4 significant digits.
std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

struct Range {
    double lo;
    double hi;

    double span() const { return hi > lo ? hi - lo : 1.0; }
};

Range range_of(const std::vector<double>& values) {
    Range r{values.front(), values.front()};
    for (double v : values) {
        r.lo = std::min(r.lo, v);
        r.hi = std::max(r.hi, v);
    }
    if (r.hi == r.lo) {
        r.lo -= 0.5;
        r.hi += 0.5;
    }
    const double pad = 0.05 * (r.hi - r.lo);
    return {r.lo - pad, r.hi + pad};
}

std::string svg_open(int width, int height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
           "\" font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Panel {
    double x;
    double y;
    double w;
    double h;
    Range xr;
    Range yr;

    double sx(double v) const { return x + (v - xr.lo) / xr.span() * w; }
    double sy(double v) const { return y + h - (v - yr.lo) / yr.span() * h; }
};

void draw_frame(std::ostringstream& out, const Panel& p, const std::string& xlabel, const std::string& ylabel) {
    out << "<rect x=\"" << px(p.x) << "\" y=\"" << px(p.y) << "\" width=\"" << px(p.w) << "\" height=\"" << px(p.h)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double yv = p.yr.lo + p.yr.span() * t / 4.0;
        out << "<text x=\"" << px(p.x - 6) << "\" y=\"" << px(p.sy(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
            << "</text>\n";
    }
    out << "<text x=\"" << px(p.x + p.w / 2) << "\" y=\"" << px(p.y + p.h + 32) << "\" text-anchor=\"middle\">"
        << escape_xml(xlabel) << "</text>\n";
    out << "<text x=\"" << px(p.x - 48) << "\" y=\"" << px(p.y + p.h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 "
        << px(p.x - 48) << " " << px(p.y + p.h / 2) << ")\">" << escape_xml(ylabel) << "</text>\n";
}

}

ArtifactFormat parse_format(std::string_view name) {
    if (name == "json") return ArtifactFormat::json;
    if (name == "csv") return ArtifactFormat::csv;
    if (name == "svg") return ArtifactFormat::svg;
    throw InvalidArgument("unknown format '" + std::string(name) + "' (expected json, csv or svg)");
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) {
        throw InvalidArgument("format_double: conversion failed");
    }
    return std::string(buf.data(), ptr);
}

const std::vector<std::string>& palette() {
    static const std::vector<std::string> colors = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                                    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};
    return colors;
}

nlohmann::ordered_json sweep_to_json(const KSweepReport& sweep) {
    nlohmann::ordered_json doc;
    doc["method"] = std::string(to_string(sweep.method));
    doc["distance"] = std::string(to_string(sweep.distance));
    doc["best_k"] = sweep.best_k;
    doc["elbow_k"] = sweep.elbow_k ? nlohmann::ordered_json(*sweep.elbow_k) : nlohmann::ordered_json(nullptr);
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : sweep.rows) {
        nlohmann::ordered_json r;
        r["k"] = row.k;
        r["silhouette"] = row.silhouette;
        r["sse"] = row.sse;
        r["stability_mean"] = optional_number(row.stability_mean);
        r["stability_sd"] = optional_number(row.stability_sd);
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

KSweepReport sweep_from_json(const nlohmann::json& doc) {
    KSweepReport sweep;
    try {
        sweep.method = parse_method(doc.at("method").get<std::string>());
        sweep.distance = parse_distance(doc.at("distance").get<std::string>());
        sweep.best_k = doc.at("best_k").get<int>();
        if (!doc.at("elbow_k").is_null()) {
            sweep.elbow_k = doc.at("elbow_k").get<int>();
        }
        for (const auto& r : doc.at("rows")) {
            SweepRow row;
            row.k = r.at("k").get<int>();
            row.silhouette = r.at("silhouette").get<double>();
            row.sse = r.at("sse").get<double>();
            if (!r.at("stability_mean").is_null()) row.stability_mean = r.at("stability_mean").get<double>();
            if (!r.at("stability_sd").is_null()) row.stability_sd = r.at("stability_sd").get<double>();
            sweep.rows.push_back(row);
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("sweep json: ") + e.what());
    }
    return sweep;
}

namespace {

std::string sweep_svg(const KSweepReport& sweep) {
    const int width = 640;
    const int height = 520;
    std::vector<double> ks;
    std::vector<double> sil;
    std::vector<double> sse_values;
    for (const auto& row : sweep.rows) {
        ks.push_back(row.k);
        sil.push_back(row.silhouette);
        sse_values.push_back(row.sse);
    }
    Range kr{ks.front() - 0.5, ks.back() + 0.5};
    const Panel top{80, 40, 520, 180, kr, range_of(sil)};
    const Panel bottom{80, 290, 520, 180, kr, range_of(sse_values)};

    std::ostringstream out;
    out << svg_open(width, height);
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << (sweep.distance == Distance::cosine ? "Silhouette (cosine) and SSE (L2) vs k" : "Silhouette and SSE vs k")
        << " (" << to_string(sweep.method) << ")</text>\n";
    draw_frame(out, top, "", sweep.distance == Distance::cosine ? "silhouette (cosine)" : "silhouette");
    draw_frame(out, bottom, "k", "SSE");
    for (double k : ks) {
        out << "<text x=\"" << px(bottom.sx(k)) << "\" y=\"" << px(bottom.y + bottom.h + 16)
            << "\" text-anchor=\"middle\">" << static_cast<int>(k) << "</text>\n";
    }

    auto marker_line = [&](int k, const char* color, const char* label) {
        const double x = top.sx(k);
        out << "<line class=\"marker " << label << "\" x1=\"" << px(x) << "\" y1=\"" << px(top.y) << "\" x2=\"" << px(x)
            << "\" y2=\"" << px(bottom.y + bottom.h) << "\" stroke=\"" << color
            << "\" stroke-dasharray=\"4 3\"/>\n<text x=\"" << px(x + 3) << "\" y=\"" << px(top.y + 12) << "\" fill=\""
            << color << "\">" << label << "=" << k << "</text>\n";
    };
    marker_line(sweep.best_k, "#d62728", "best_k");
    if (sweep.elbow_k) {
        marker_line(*sweep.elbow_k, "#2ca02c", "elbow_k");
    }

    auto curve = [&](const Panel& p, const std::vector<double>& ys, const char* cls, const char* color) {
        out << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < ks.size(); ++i) {
            out << (i ? " " : "") << px(p.sx(ks[i])) << "," << px(p.sy(ys[i]));
        }
        out << "\"/>\n";
        for (std::size_t i = 0; i < ks.size(); ++i) {
            out << "<circle class=\"point " << cls << "\" cx=\"" << px(p.sx(ks[i])) << "\" cy=\"" << px(p.sy(ys[i]))
                << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
        }
    };
    curve(top, sil, "silhouette", "#1f77b4");
    curve(bottom, sse_values, "sse", "#ff7f0e");
    out << "</svg>\n";
    return out.str();
}

}

std::string emit_sweep(const KSweepReport& sweep, ArtifactFormat format) {
    if (sweep.rows.empty()) {
        throw InvalidArgument("emit_sweep: sweep has no rows");
    }
    switch (format) {
    case ArtifactFormat::json:
        return sweep_to_json(sweep).dump(2) + "\n";
    case ArtifactFormat::csv: {
        std::string out = "k,silhouette,sse,stability_mean,stability_sd\n";
        for (const auto& row : sweep.rows) {
            out += std::to_string(row.k) + "," + format_double(row.silhouette) + "," + format_double(row.sse) + "," +
                   (row.stability_mean ? format_double(*row.stability_mean) : "") + "," +
                   (row.stability_sd ? format_double(*row.stability_sd) : "") + "\n";
        }
        return out;
    }
    case ArtifactFormat::svg:
        return sweep_svg(sweep);
    }
    return {};
}

nlohmann::ordered_json stability_to_json(const StabilityReport& report) {
    nlohmann::ordered_json doc;
    doc["method"] = std::string(to_string(report.method));
    doc["k"] = report.k;
    doc["runs"] = report.runs;
    doc["mean"] = report.mean;
    doc["sd"] = report.sd;
    doc["min"] = report.min;
    doc["pairwise"] = report.pairwise;
    return doc;
}

ProfileTable emit_profile(const ClusteringResult& result, const std::vector<std::string>& names) {
    const Matrix& centroids = result.model.centroids;
    ProfileTable table;
    table.feature_names = names.empty() ? std::vector<std::string>{} : names;
    if (table.feature_names.empty()) {
        for (std::size_t j = 0; j < centroids.cols(); ++j) table.feature_names.push_back("f" + std::to_string(j + 1));
    }
    if (table.feature_names.size() != centroids.cols()) {
        throw InvalidArgument("emit_profile: " + std::to_string(names.size()) + " names for " +
                              std::to_string(centroids.cols()) + " features");
    }
    Partition partition = result.partition;
    partition.k = result.model.k();
    const auto counts = partition.counts();
    const double n = static_cast<double>(partition.labels.size());
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        ProfileRow row;
        row.cluster = static_cast<int>(c);
        row.size = counts[c];
        row.pct = n > 0 ? 100.0 * static_cast<double>(counts[c]) / n : 0.0;
        row.centroid.assign(centroids.row(c).begin(), centroids.row(c).end());
        table.rows.push_back(std::move(row));
    }
    return table;
}

ProfileTable profile_from_partition(const Matrix& z, const Partition& partition, const std::vector<std::string>& names) {
    if (partition.labels.size() != z.rows()) {
        throw InvalidArgument("profile: partition length does not match data");
    }
    partition.validate();
    ClusteringResult shim;
    shim.partition = partition;
    shim.model.centroids = Matrix(static_cast<std::size_t>(partition.k), z.cols());
    const auto counts = partition.counts();
    for (std::size_t i = 0; i < z.rows(); ++i) {
        auto dest = shim.model.centroids.row(static_cast<std::size_t>(partition.labels[i]));
        const auto src = z.row(i);
        for (std::size_t j = 0; j < z.cols(); ++j) {
            dest[j] += src[j];
        }
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) continue;
        for (auto& v : shim.model.centroids.row(c)) {
            v /= static_cast<double>(counts[c]);
        }
    }
    return emit_profile(shim, names);
}

std::string profile_csv(const ProfileTable& table) {
    std::string out = "cluster,size,pct";
    for (const auto& name : table.feature_names) {
        out += "," + name;
    }
    out += "\n";
    for (const auto& row : table.rows) {
        out += std::to_string(row.cluster) + "," + std::to_string(row.size) + "," + format_double(row.pct);
        for (double v : row.centroid) {
            out += "," + format_double(v);
        }
        out += "\n";
    }
    return out;
}

std::string profile_svg(const ProfileTable& table) {
    const std::size_t d = table.feature_names.size();
    std::vector<double> all;
    for (const auto& row : table.rows) {
        all.insert(all.end(), row.centroid.begin(), row.centroid.end());
    }
    if (all.empty() || d == 0) {
        throw InvalidArgument("profile_svg: empty profile");
    }
    const Panel p{80, 40, 520, 300, Range{-0.5, static_cast<double>(d) - 0.5}, range_of(all)};
    std::ostringstream out;
    out << svg_open(700, 420);
    out << "<text x=\"340\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">Cluster profiles (standardized units)</text>\n";
    draw_frame(out, p, "feature", "centroid value");
    for (std::size_t j = 0; j < d; ++j) {
        out << "<text x=\"" << px(p.sx(static_cast<double>(j))) << "\" y=\"" << px(p.y + p.h + 16)
            << "\" text-anchor=\"middle\">" << escape_xml(table.feature_names[j]) << "</text>\n";
    }
    if (p.yr.lo < 0.0 && p.yr.hi > 0.0) {
        out << "<line x1=\"" << px(p.x) << "\" y1=\"" << px(p.sy(0.0)) << "\" x2=\"" << px(p.x + p.w) << "\" y2=\""
            << px(p.sy(0.0)) << "\" stroke=\"#bbb\"/>\n";
    }
    const auto& colors = palette();
    for (const auto& row : table.rows) {
        const std::string& color = colors[static_cast<std::size_t>(row.cluster) % colors.size()];
        out << "<polyline class=\"cluster-" << row.cluster << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\" points=\"";
        for (std::size_t j = 0; j < row.centroid.size(); ++j) {
            out << (j ? " " : "") << px(p.sx(static_cast<double>(j))) << "," << px(p.sy(row.centroid[j]));
        }
        out << "\"/>\n";
        out << "<text x=\"" << px(p.x + p.w + 8) << "\" y=\"" << px(p.sy(row.centroid.back()) + 4) << "\" fill=\""
            << color << "\">" << row.cluster << " (n=" << row.size << ")</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string emit_scatter(const Projection& projection, ArtifactFormat format) {
    const std::size_t m = projection.dims();
    if (m != 2 && m != 3) {
        throw InvalidArgument("emit_scatter: projection must have 2 or 3 dimensions, has " + std::to_string(m));
    }
    if (projection.labels.size() != projection.coords.rows()) {
        throw InvalidArgument("emit_scatter: label count does not match coordinates");
    }
    if (format == ArtifactFormat::csv) {
        std::string out = m == 2 ? "pc1,pc2,label\n" : "pc1,pc2,pc3,label\n";
        for (std::size_t i = 0; i < projection.coords.rows(); ++i) {
            for (std::size_t c = 0; c < m; ++c) {
                out += format_double(projection.coords(i, c)) + ",";
            }
            out += std::to_string(projection.labels[i]) + "\n";
        }
        return out;
    }
    if (format != ArtifactFormat::svg) {
        throw InvalidArgument("emit_scatter: format must be csv or svg");
    }

    std::vector<std::pair<std::size_t, std::size_t>> axes = {{0, 1}};
    if (m == 3) {
        axes = {{0, 1}, {0, 2}, {1, 2}};
    }
    const double panel = 300;
    const int width = static_cast<int>(axes.size() * (panel + 90) + 20);
    const int height = 400;
    std::ostringstream out;
    out << svg_open(width, height);
    const auto& colors = palette();
    for (std::size_t a = 0; a < axes.size(); ++a) {
        const auto [cx, cy] = axes[a];
        const Panel p{80 + a * (panel + 90), 40, panel, panel, range_of(projection.coords.column(cx)),
                      range_of(projection.coords.column(cy))};
        auto axis_name = [&](std::size_t c) {
            std::string name = "PC" + std::to_string(c + 1);
            if (c < projection.explained_ratio.size()) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), " (%.1f%%)", 100.0 * projection.explained_ratio[c]);
                name += buf;
            }
            return name;
        };
        draw_frame(out, p, axis_name(cx), axis_name(cy));
        for (std::size_t i = 0; i < projection.coords.rows(); ++i) {
            const int label = projection.labels[i];
            const std::string& color = colors[static_cast<std::size_t>(label < 0 ? 0 : label) % colors.size()];
            out << "<circle class=\"label-" << label << "\" cx=\"" << px(p.sx(projection.coords(i, cx))) << "\" cy=\""
                << px(p.sy(projection.coords(i, cy))) << "\" r=\"2\" fill=\"" << color << "\" fill-opacity=\"0.7\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

nlohmann::ordered_json fit_to_json(const ClusteringResult& result, Method method,
                                   const std::vector<std::string>& feature_names) {
    nlohmann::ordered_json doc;
    doc["method"] = std::string(to_string(method));
    doc["k"] = result.model.k();
    doc["seed"] = result.seed;
    doc["restart"] = result.restart;
    doc["objective"] = result.objective;
    doc["sse"] = result.sse;
    doc["iterations"] = result.iterations;
    doc["converged"] = result.converged;
    doc["feature_names"] = feature_names;
    auto centroids = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < result.model.centroids.rows(); ++c) {
        const auto row = result.model.centroids.row(c);
        centroids.push_back(std::vector<double>(row.begin(), row.end()));
    }
    doc["centroids"] = std::move(centroids);
    doc["labels"] = result.partition.labels;
    return doc;
}

Partition partition_from_fit_json(const nlohmann::json& doc) {
    Partition partition;
    try {
        partition.labels = doc.at("labels").get<std::vector<int>>();
        partition.k = doc.at("k").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("fit json: ") + e.what());
    }
    partition.validate();
    return partition;
}

}
