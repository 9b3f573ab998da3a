#include "doctest.h"

#include <cmath>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

#include "clusterdiag/datagen.hpp"
#include "clusterdiag/error.hpp"
#include "clusterdiag/kmeans.hpp"
#include "clusterdiag/preprocess.hpp"
#include "clusterdiag/report.hpp"
#include "oracles.hpp"

using namespace clusterdiag;

namespace {

KSweepReport sample_sweep() {
    KSweepReport sweep;
    sweep.method = Method::classical;
    sweep.distance = Distance::euclidean;
    for (int k = 2; k <= 10; ++k) {
        SweepRow row;
        row.k = k;
        row.silhouette = 0.1 + 0.01 * k;
        row.sse = 1000.0 / k;
        if (k % 2 == 0) {
            row.stability_mean = 0.9 - 0.01 * k;
            row.stability_sd = 0.001 * k;
        }
        sweep.rows.push_back(row);
    }
    sweep.best_k = 10;
    sweep.elbow_k = 4;
    return sweep;
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}

TEST_CASE("format_double is the shortest round trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2000.0) == "2000");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("sweep csv has a header and one line per row") {
    const auto csv = emit_sweep(sample_sweep(), ArtifactFormat::csv);
    const auto rows = lines(csv);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == "k,silhouette,sse,stability_mean,stability_sd");
    CHECK(rows[1].rfind("2,", 0) == 0);
    // Odd k has no stability: two empty trailing cells.
    CHECK(rows[2].substr(rows[2].size() - 2) == ",,");
}

TEST_CASE("sweep json round trips") {
    const auto sweep = sample_sweep();
    const auto text = emit_sweep(sweep, ArtifactFormat::json);
    const auto back = sweep_from_json(nlohmann::json::parse(text));
    CHECK(back.method == sweep.method);
    CHECK(back.distance == sweep.distance);
    CHECK(back.best_k == sweep.best_k);
    CHECK(back.elbow_k == sweep.elbow_k);
    REQUIRE(back.rows.size() == sweep.rows.size());
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        CHECK(back.rows[i].k == sweep.rows[i].k);
        CHECK(back.rows[i].silhouette == sweep.rows[i].silhouette);
        CHECK(back.rows[i].sse == sweep.rows[i].sse);
        CHECK(back.rows[i].stability_mean == sweep.rows[i].stability_mean);
        CHECK(back.rows[i].stability_sd == sweep.rows[i].stability_sd);
    }
    CHECK(nlohmann::json::parse(text)["rows"][1]["stability_mean"].is_null());
}

TEST_CASE("sweep svg has one marker per row per curve") {
    const auto svg = emit_sweep(sample_sweep(), ArtifactFormat::svg);
    CHECK(count(svg, "<circle") == 18);
    CHECK(count(svg, "class=\"point silhouette\"") == 9);
    CHECK(count(svg, "class=\"point sse\"") == 9);
    CHECK(count(svg, "best_k") >= 1);
    CHECK(count(svg, "elbow_k") >= 1);
    CHECK(svg.rfind("<svg", 0) == 0);
}

TEST_CASE("emitters are pure") {
    const auto sweep = sample_sweep();
    for (auto f : {ArtifactFormat::json, ArtifactFormat::csv, ArtifactFormat::svg}) {
        CHECK(emit_sweep(sweep, f) == emit_sweep(sweep, f));
    }
    CHECK_THROWS_AS(emit_sweep(KSweepReport{}, ArtifactFormat::csv), InvalidArgument);
    CHECK_THROWS_AS(parse_format("png"), InvalidArgument);
}

TEST_CASE("profile of a two-cluster fit on correlated data") {
    RngStream gen(3, 0);
    const auto z = standardize(gen_correlated_gaussian(default_rows, default_features, default_rho, gen)).data;
    const auto fit = kmeans_fit(z.values, 2, FitOptions{}, RngStream(3, 1));
    const auto table = emit_profile(fit, z.feature_names);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].cluster == 0);
    CHECK(table.rows[1].cluster == 1);
    CHECK(table.rows[0].size + table.rows[1].size == z.n());
    CHECK(table.rows[0].pct + table.rows[1].pct == doctest::Approx(100.0).epsilon(1e-3));
    for (std::size_t j = 0; j < z.d(); ++j) {
        CHECK(table.rows[0].centroid[j] * table.rows[1].centroid[j] < 0.0);
    }

    const auto csv = profile_csv(table);
    const auto rows = lines(csv);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "cluster,size,pct,f1,f2,f3,f4,f5,f6");
    CHECK(count(profile_svg(table), "<polyline class=\"cluster-") == 2);
}

TEST_CASE("a one-cluster profile sits at the origin of standardized data") {
    oracle::Source src(6);
    Matrix raw(80, 3);
    for (double& v : raw.values()) v = src.normal() * 4 + 2;
    DataMatrix x{raw, default_feature_names(3), std::nullopt, {}};
    const auto z = standardize(x).data;
    CentroidModel init{Matrix::from_rows({{0.5, 0.5, 0.5}}), Geometry::euclidean};
    const auto fit = lloyd(z.values, init, 10, 1e-9);
    const auto table = emit_profile(fit, z.feature_names);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].size == 80);
    for (double v : table.rows[0].centroid) CHECK(std::abs(v) < 1e-12);

    const auto from_partition = profile_from_partition(z.values, fit.partition, z.feature_names);
    for (double v : from_partition.rows[0].centroid) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("scatter svg draws one point per row in label color classes") {
    Projection proj;
    proj.coords = Matrix(10, 2);
    for (std::size_t i = 0; i < 10; ++i) {
        proj.coords(i, 0) = static_cast<double>(i);
        proj.coords(i, 1) = std::sin(static_cast<double>(i));
        proj.labels.push_back(static_cast<int>(i % 2));
    }
    proj.explained_ratio = {0.7, 0.2};
    const auto svg = emit_scatter(proj, ArtifactFormat::svg);
    CHECK(count(svg, "<circle") == 10);
    std::set<std::string> classes;
    const std::regex cls("<circle class=\"([^\"]+)\"");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), cls); it != std::sregex_iterator(); ++it)
        classes.insert((*it)[1]);
    CHECK(classes == std::set<std::string>{"label-0", "label-1"});
    CHECK(count(svg, palette()[0]) >= 5);
    CHECK(count(svg, palette()[1]) >= 5);
    CHECK(emit_scatter(proj, ArtifactFormat::svg) == svg);
}

TEST_CASE("scatter csv round trips the coordinates") {
    oracle::Source src(7);
    Projection proj;
    proj.coords = Matrix(25, 3);
    for (double& v : proj.coords.values()) v = src.normal() * 1e3;
    for (int i = 0; i < 25; ++i) proj.labels.push_back(i % 4);
    const auto rows = lines(emit_scatter(proj, ArtifactFormat::csv));
    REQUIRE(rows.size() == 26);
    CHECK(rows[0] == "pc1,pc2,pc3,label");
    for (std::size_t i = 0; i < 25; ++i) {
        std::istringstream cells(rows[i + 1]);
        std::string cell;
        for (std::size_t c = 0; c < 3; ++c) {
            std::getline(cells, cell, ',');
            CHECK(std::abs(std::stod(cell) - proj.coords(i, c)) < 1e-9);
        }
        std::getline(cells, cell, ',');
        CHECK(std::stoi(cell) == proj.labels[i]);
    }
    // 3D data renders the three pairwise panels.
    CHECK(count(emit_scatter(proj, ArtifactFormat::svg), "<circle") == 75);

    Projection flat;
    flat.coords = Matrix(3, 1);
    flat.labels = {0, 0, 0};
    CHECK_THROWS_AS(emit_scatter(flat, ArtifactFormat::svg), InvalidArgument);
}

TEST_CASE("fit json carries the labels back") {
    oracle::Source src(8);
    const Matrix z = Matrix::from_rows(src.blobs(60, 2, 3, 0.3));
    const auto fit = kmeans_fit(z, 3, FitOptions{}, RngStream(2, 0));
    const auto doc = fit_to_json(fit, Method::classical, default_feature_names(2));
    CHECK(doc["method"] == "classical");
    CHECK(doc["k"] == 3);
    const auto back = partition_from_fit_json(nlohmann::json::parse(doc.dump()));
    CHECK(back.labels == fit.partition.labels);
    CHECK(back.k == 3);
}
