#include "doctest.h"

#include <cmath>
#include <set>

#include "clusterdiag/datagen.hpp"
#include "clusterdiag/error.hpp"
#include "clusterdiag/kmeans.hpp"
#include "clusterdiag/linalg.hpp"
#include "clusterdiag/metrics.hpp"
#include "clusterdiag/pca.hpp"
#include "clusterdiag/preprocess.hpp"
#include "oracles.hpp"

using namespace clusterdiag;

namespace {

std::vector<int> component_counts(const DataMatrix& x, std::size_t k) {
    std::vector<int> counts(k, 0);
    for (int label : *x.truth_labels) counts.at(static_cast<std::size_t>(label))++;
    return counts;
}

}

TEST_CASE("gen_random shape, range and moments") {
    RngStream s(1, 0);
    const DataMatrix x = gen_random(2000, 6, s);
    REQUIRE(x.n() == 2000);
    REQUIRE(x.d() == 6);
    CHECK_FALSE(x.truth_labels.has_value());
    CHECK(x.feature_names == std::vector<std::string>{"f1", "f2", "f3", "f4", "f5", "f6"});
    for (double v : x.values.values()) {
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
    }
    for (std::size_t j = 0; j < 6; ++j) CHECK(std::abs(oracle::mean(x.values.column(j)) - 0.5) < 0.03);

    RngStream again(1, 0);
    CHECK(gen_random(2000, 6, again).values == x.values);
}

TEST_CASE("gen_unimodal_gaussian moments") {
    RngStream s(2, 0);
    const DataMatrix x = gen_unimodal_gaussian(2000, 6, s);
    for (std::size_t j = 0; j < 6; ++j) {
        CHECK(std::abs(oracle::variance(x.values.column(j)) - 1.0) < 0.1);
        for (std::size_t m = j + 1; m < 6; ++m)
            CHECK(std::abs(oracle::correlation(x.values.column(j), x.values.column(m))) < 0.06);
    }
    RngStream again(2, 0);
    CHECK(gen_unimodal_gaussian(2000, 6, again).values == x.values);
}

TEST_CASE("gen_correlated_gaussian correlation structure") {
    RngStream s(3, 0);
    const DataMatrix zero = gen_correlated_gaussian(2000, 6, 0.0, s);
    RngStream t(4, 0);
    const DataMatrix six = gen_correlated_gaussian(2000, 6, 0.6, t);
    for (std::size_t j = 0; j < 6; ++j) {
        for (std::size_t m = j + 1; m < 6; ++m) {
            CHECK(std::abs(oracle::correlation(zero.values.column(j), zero.values.column(m))) < 0.06);
            CHECK(std::abs(oracle::correlation(six.values.column(j), six.values.column(m)) - 0.6) < 0.05);
        }
    }
    RngStream u(5, 0);
    const DataMatrix near_rank_one = gen_correlated_gaussian(2000, 6, 0.999, u);
    const PcaModel pca = pca_fit(standardize(near_rank_one).data.values, 6);
    CHECK(pca.explained_ratio[0] > 0.95);
}

TEST_CASE("gen_correlated_gaussian rejects rho outside the positive-definite range") {
    RngStream s(1, 0);
    CHECK_THROWS_AS(gen_correlated_gaussian(10, 6, 1.0, s), InvalidArgument);
    CHECK_THROWS_AS(gen_correlated_gaussian(10, 6, -0.2, s), InvalidArgument);
    CHECK_THROWS_AS(gen_correlated_gaussian(10, 3, -0.5, s), InvalidArgument);
    CHECK_NOTHROW(gen_correlated_gaussian(10, 3, -0.49, s));
}

TEST_CASE("default multimodal spec") {
    const MixtureSpec& spec = default_multimodal_spec();
    REQUIRE(spec.components() == 5);
    REQUIRE(spec.dims() == 6);
    double min_distance = INFINITY;
    for (std::size_t a = 0; a < 5; ++a) {
        CHECK(spec.weights[a] == doctest::Approx(0.2));
        CHECK(max_abs_diff(spec.chol_factors[a], Matrix::identity(6)) == 0.0);
        for (std::size_t b = a + 1; b < 5; ++b)
            min_distance = std::min(min_distance, std::sqrt(squared_distance(spec.means.row(a), spec.means.row(b))));
    }
    CHECK(min_distance >= 10.0);

    RngStream s(7, 0);
    const DataMatrix x = gen_multimodal(2000, 6, spec, s);
    for (int c : component_counts(x, 5)) CHECK(std::abs(c - 400) <= 60);
}

TEST_CASE("single-component mixture matches its Gaussian") {
    MixtureSpec spec;
    spec.means = Matrix::from_rows({{2.0, -1.0}});
    spec.chol_factors = {cholesky(Matrix::from_rows({{1.0, 0.5}, {0.5, 2.0}}))};
    spec.weights = {1.0};
    RngStream s(9, 0);
    const DataMatrix x = gen_multimodal(20000, 2, spec, s);
    CHECK(std::abs(oracle::mean(x.values.column(0)) - 2.0) < 0.03);
    CHECK(std::abs(oracle::mean(x.values.column(1)) + 1.0) < 0.04);
    CHECK(std::abs(oracle::variance(x.values.column(1)) - 2.0) < 0.08);
    const Matrix cov = covariance([&] {
        Matrix c = x.values;
        const auto mu = column_means(c);
        for (std::size_t i = 0; i < c.rows(); ++i)
            for (std::size_t j = 0; j < 2; ++j) c(i, j) -= mu[j];
        return c;
    }());
    CHECK(std::abs(cov(0, 1) - 0.5) < 0.04);
}

TEST_CASE("multimodal positive control is recovered by K-means") {
    RngStream s(13, 0);
    const DataMatrix x = gen_multimodal(2000, 6, default_multimodal_spec(), s);
    const Matrix z = standardize(x).data.values;
    const ClusteringResult fit = kmeans_fit(z, 5, FitOptions{}, RngStream(13, 1));
    CHECK(ari(*x.truth_labels, fit.partition.labels) >= 0.95);
}

TEST_CASE("invalid mixtures are rejected") {
    MixtureSpec spec;
    spec.means = Matrix::from_rows({{0.0}, {1.0}});
    spec.chol_factors = {Matrix::identity(1), Matrix::identity(1)};
    spec.weights = {0.5, 0.6};
    CHECK_THROWS_AS(spec.validate(), InvalidArgument);
    spec.weights = {1.0, 0.0};
    CHECK_THROWS_AS(spec.validate(), InvalidArgument);
    spec.weights = {0.5, 0.5};
    CHECK_NOTHROW(spec.validate());
    RngStream s(1, 0);
    CHECK_THROWS_AS(gen_multimodal(10, 2, spec, s), InvalidArgument);

    CHECK_THROWS_AS(mixture_from_json(nlohmann::json::parse(R"({"components": []})")), InvalidArgument);
    CHECK_THROWS_AS(mixture_from_json(nlohmann::json::parse(
                        R"({"components": [{"mean": [0, 0], "weight": 1, "cov": [[1, 2], [2, 1]]}]})")),
                    NumericFailure);
}

TEST_CASE("cytometer layout") {
    const MixtureSpec& spec = default_cytometer_spec();
    REQUIRE(spec.components() == 5);
    CHECK(spec.weights == std::vector<double>{0.30, 0.25, 0.20, 0.15, 0.10});
    CHECK(spec.noise_sd == 0.05);

    // The close pair (3, 4) sits well inside every other pairwise distance.
    double others = INFINITY;
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = a + 1; b < 5; ++b)
            if (!(a == 3 && b == 4))
                others = std::min(others, std::sqrt(squared_distance(spec.means.row(a), spec.means.row(b))));
    const double close = std::sqrt(squared_distance(spec.means.row(3), spec.means.row(4)));
    CHECK(close < others / 3.0);

    RngStream s(17, 0);
    const DataMatrix x = gen_cytometer(2000, s);
    const auto counts = component_counts(x, 5);
    std::set<int> labels(x.truth_labels->begin(), x.truth_labels->end());
    CHECK(labels == std::set<int>{0, 1, 2, 3, 4});
    for (std::size_t c = 0; c < 5; ++c) {
        const double expected = 2000 * spec.weights[c];
        const double sigma = std::sqrt(2000 * spec.weights[c] * (1 - spec.weights[c]));
        CHECK(std::abs(counts[c] - expected) <= 3 * sigma);
    }
    RngStream small(1, 0);
    CHECK_THROWS_AS(gen_cytometer(99, small), InvalidArgument);
}

TEST_CASE("dataset kinds round-trip") {
    for (auto kind : {DatasetKind::random, DatasetKind::gaussian, DatasetKind::correlated, DatasetKind::multimodal,
                      DatasetKind::cytometer})
        CHECK(parse_dataset_kind(to_string(kind)) == kind);
    CHECK_THROWS_AS(parse_dataset_kind("uniform"), InvalidArgument);
}
