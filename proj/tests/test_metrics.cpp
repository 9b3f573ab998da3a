#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "clusterdiag/datagen.hpp"
#include "clusterdiag/error.hpp"
#include "clusterdiag/metrics.hpp"
#include "clusterdiag/preprocess.hpp"
#include "oracles.hpp"

using namespace clusterdiag;

namespace {

oracle::Rows to_rows(const Matrix& m) {
    oracle::Rows out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i].assign(m.row(i).begin(), m.row(i).end());
    return out;
}

/// Random labels with every cluster non-empty.
std::vector<int> random_labels(oracle::Source& src, std::size_t n, int k) {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = i < static_cast<std::size_t>(k) ? static_cast<int>(i) : src.integer(0, k - 1);
    return labels;
}

Matrix standardized(const DataMatrix& raw) { return standardize(raw).data.values; }

}

TEST_CASE("sse hand cases") {
    const Matrix z = Matrix::from_rows({{0.0}, {1.0}});
    CentroidModel one{Matrix::from_rows({{0.5}}), Geometry::euclidean};
    CHECK(sse(z, Partition{{0, 0}, 1}, one) == doctest::Approx(0.5));
    CentroidModel exact{Matrix::from_rows({{0.0}, {1.0}}), Geometry::euclidean};
    CHECK(sse(z, Partition{{0, 1}, 2}, exact) == 0.0);
    CHECK_THROWS_AS(sse(z, Partition{{0, 2}, 2}, exact), InvalidArgument);
}

TEST_CASE("sse matches the double-loop reference") {
    oracle::Source src(1);
    for (int inst = 0; inst < 20; ++inst) {
        const int k = src.integer(2, 5);
        Matrix z(50, 3);
        for (double& v : z.values()) v = src.normal();
        Matrix c(static_cast<std::size_t>(k), 3);
        for (double& v : c.values()) v = src.normal();
        const auto labels = random_labels(src, 50, k);
        const double expected = oracle::sse(to_rows(z), labels, to_rows(c));
        CHECK(std::abs(sse(z, Partition{labels, k}, CentroidModel{c, Geometry::euclidean}) - expected) < 1e-9);
    }
}

TEST_CASE("silhouette hand cases") {
    const Matrix z = Matrix::from_rows({{0.0}, {0.1}, {10.0}, {10.1}});
    const auto s = silhouette(z, Partition{{0, 0, 1, 1}, 2}, Distance::euclidean);
    CHECK(s.mean >= 0.97);
    CHECK(s.a[0] == doctest::Approx(0.1));
    CHECK(s.b[0] == doctest::Approx(10.05));

    const auto single = silhouette(z, Partition{{0, 0, 0, 1}, 2}, Distance::euclidean);
    CHECK(single.s[3] == 0.0);
}

TEST_CASE("silhouette preconditions") {
    const Matrix z = Matrix::from_rows({{0.0}, {1.0}, {2.0}});
    CHECK_THROWS_AS(silhouette(z, Partition{{0, 0, 0}, 1}, Distance::euclidean), InvalidArgument);
    CHECK_THROWS_AS(silhouette(z, Partition{{0, 0, 2}, 3}, Distance::euclidean), InvalidArgument);
}

TEST_CASE("silhouette matches the naive reference for both distances") {
    oracle::Source src(2);
    for (int inst = 0; inst < 10; ++inst) {
        const int k = src.integer(2, 6);
        const Matrix z = Matrix::from_rows(src.blobs(200, 6, k, src.uniform(0.5, 3.0)));
        const auto labels = random_labels(src, 200, k);
        const Partition p{labels, k};
        const double e = oracle::silhouette(to_rows(z), labels, k, oracle::euclid);
        const auto got = silhouette(z, p, Distance::euclidean);
        CHECK(std::abs(got.mean - e) < 1e-9);
        for (double v : got.s) CHECK((v >= -1.0 && v <= 1.0));

        const Matrix u = normalize_rows(z);
        const double c = oracle::silhouette(to_rows(u), labels, k, oracle::cosine_distance);
        CHECK(std::abs(silhouette(u, p, Distance::cosine, 3).mean - c) < 1e-9);
    }
}

TEST_CASE("ari hand cases") {
    const std::vector<int> a{0, 0, 1, 1};
    CHECK(ari(a, a) == doctest::Approx(1.0));
    CHECK(ari(a, std::vector<int>{1, 1, 0, 0}) == doctest::Approx(1.0));
    CHECK(ari(a, std::vector<int>{0, 1, 0, 1}) == doctest::Approx(-0.5));
    CHECK(ari(std::vector<int>{0, 0, 0}, std::vector<int>{1, 1, 1}) == 1.0);
    CHECK(ari(std::vector<int>{0, 1, 2}, std::vector<int>{2, 0, 1}) == 1.0);
    CHECK(ari(std::vector<int>{0, 0, 0}, std::vector<int>{0, 1, 2}) == 0.0);
    CHECK_THROWS_AS(ari(a, std::vector<int>{0, 1}), InvalidArgument);
}

TEST_CASE("ari is symmetric, relabeling invariant and matches pair counting") {
    oracle::Source src(3);
    for (int inst = 0; inst < 50; ++inst) {
        const std::size_t n = static_cast<std::size_t>(src.integer(2, 120));
        const int ka = src.integer(1, 6);
        const int kb = src.integer(1, 6);
        std::vector<int> a(n), b(n);
        for (auto& v : a) v = src.integer(0, ka - 1);
        for (auto& v : b) v = src.integer(0, kb - 1);
        CHECK(std::abs(ari(a, b) - oracle::ari(a, b)) < 1e-9);
        CHECK(ari(a, b) == ari(b, a));
        CHECK(ari(a, b) <= 1.0);
        std::vector<int> relabeled(a);
        for (auto& v : relabeled) v = (ka - 1 - v) * 3 + 7;
        CHECK(ari(relabeled, b) == doctest::Approx(ari(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("elbow on hand curves") {
    const std::vector<int> ks{2, 3, 4, 5, 6};
    CHECK(elbow_k(ks, std::vector<double>{100, 40, 38, 36, 34}) == 3);
    CHECK(elbow_k(ks, std::vector<double>{50, 40, 30, 20, 10}) == 3);
    CHECK_THROWS_AS(elbow_k(std::vector<int>{2, 3}, std::vector<double>{2, 1}), InvalidArgument);
}

TEST_CASE("stability report structure") {
    oracle::Source src(4);
    const Matrix z = Matrix::from_rows(src.blobs(150, 3, 3, 0.5));
    const auto r = stability(z, 3, Method::classical, 6, RngStream(1, 0), FitOptions{});
    REQUIRE(r.pairwise.size() == 15);
    double mean = 0;
    for (double v : r.pairwise) mean += v;
    mean /= 15;
    double var = 0;
    for (double v : r.pairwise) var += (v - mean) * (v - mean);
    CHECK(r.mean == doctest::Approx(mean));
    CHECK(r.sd == doctest::Approx(std::sqrt(var / 15)));
    CHECK(r.min == *std::min_element(r.pairwise.begin(), r.pairwise.end()));
    CHECK_THROWS_AS(stability(z, 3, Method::classical, 1, RngStream(1, 0), FitOptions{}), InvalidArgument);
}

TEST_CASE("stability on the synthetic designs") {
    SUBCASE("correlated, classical k = 2 is perfectly reproducible") {
        RngStream gen(11, 0);
        const Matrix z = standardized(gen_correlated_gaussian(default_rows, default_features, default_rho, gen));
        const auto r = stability(z, 2, Method::classical, 20, RngStream(11, 1), FitOptions{});
        CHECK(r.mean >= 0.99);
        CHECK(r.sd <= 0.01);
    }
    SUBCASE("random, classical k = 10 is unstable") {
        RngStream gen(12, 0);
        const Matrix z = standardized(gen_random(default_rows, default_features, gen));
        CHECK(stability(z, 10, Method::classical, 20, RngStream(12, 1), FitOptions{}).mean < 0.6);
    }
    SUBCASE("multimodal, k = 5 is stable") {
        // A single K-means++ start occasionally puts two seeds in one component, so the classical
        // value is averaged over several datasets.
        double classical = 0;
        const int datasets = 5;
        for (int seed = 1; seed <= datasets; ++seed) {
            RngStream gen(static_cast<std::uint64_t>(seed), 0);
            const Matrix z = standardized(gen_multimodal(default_rows, default_features, default_multimodal_spec(), gen));
            classical += stability(z, 5, Method::classical, 20, RngStream(seed, 1), FitOptions{}).mean;
            CHECK(stability(z, 5, Method::spherical, 20, RngStream(seed, 2), spherical_defaults()).mean >= 0.95);
        }
        CHECK(classical / datasets >= 0.95);
    }
}

TEST_CASE("k sweep on the synthetic designs") {
    SweepConfig config;
    SUBCASE("multimodal") {
        RngStream gen(21, 0);
        const Matrix z = standardized(gen_multimodal(default_rows, default_features, default_multimodal_spec(), gen));
        const auto sweep = k_sweep(z, Method::classical, config, RngStream(21, 1));
        REQUIRE(sweep.rows.size() == 9);
        CHECK(sweep.best_k == 5);
        CHECK(sweep.rows[3].silhouette >= 0.75);
        REQUIRE(sweep.elbow_k.has_value());
        CHECK(*sweep.elbow_k == 5);
        CHECK(sweep.rows.back().sse <= sweep.rows.front().sse);
    }
    SUBCASE("random") {
        RngStream gen(22, 0);
        const Matrix z = standardized(gen_random(default_rows, default_features, gen));
        const auto sweep = k_sweep(z, Method::classical, config, RngStream(22, 1));
        for (const auto& row : sweep.rows) {
            CHECK(row.silhouette <= 0.20);
            CHECK(row.sse > 0.0);
        }
        CHECK(sweep.rows.back().sse <= sweep.rows.front().sse);
    }
    SUBCASE("unimodal gaussian") {
        RngStream gen(23, 0);
        const Matrix z = standardized(gen_unimodal_gaussian(default_rows, default_features, gen));
        const auto sweep = k_sweep(z, Method::classical, config, RngStream(23, 1));
        for (const auto& row : sweep.rows) CHECK(row.silhouette <= 0.15);
    }
}

TEST_CASE("k sweep bookkeeping") {
    oracle::Source src(5);
    const Matrix z = Matrix::from_rows(src.blobs(120, 3, 3, 0.7));
    SweepConfig config;
    config.k_min = 2;
    config.k_max = 5;
    config.stability_runs = 3;
    const auto a = k_sweep(z, Method::spherical, config, RngStream(3, 0));
    CHECK(a.distance == Distance::cosine);
    REQUIRE(a.rows.size() == 4);
    for (const auto& row : a.rows) {
        CHECK(row.stability_mean.has_value());
        CHECK(row.stability_sd.has_value());
    }
    int best = a.rows[0].k;
    double best_s = a.rows[0].silhouette;
    for (const auto& row : a.rows)
        if (row.silhouette > best_s) {
            best = row.k;
            best_s = row.silhouette;
        }
    CHECK(a.best_k == best);

    // The fit for each k is reproducible from its own child stream.
    const RngStream stream(3, 0);
    FitOptions options = config.fit;
    const auto fit3 = fit(z, 3, Method::spherical, options, stream.child(3).child(0));
    CHECK(fit3.sse == a.rows[1].sse);

    config.fit.threads = 3;
    const auto b = k_sweep(z, Method::spherical, config, RngStream(3, 0));
    CHECK(b.best_k == a.best_k);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].silhouette == b.rows[i].silhouette);
        CHECK(a.rows[i].sse == b.rows[i].sse);
        CHECK(*a.rows[i].stability_mean == *b.rows[i].stability_mean);
    }

    config.k_min = 6;
    CHECK_THROWS_AS(k_sweep(z, Method::classical, config, RngStream(3, 0)), InvalidArgument);
}
