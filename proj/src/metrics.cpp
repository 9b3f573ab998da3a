#include "clusterdiag/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "clusterdiag/error.hpp"
#include "clusterdiag/kmeans.hpp"
#include "clusterdiag/preprocess.hpp"
#include "clusterdiag/skmeans.hpp"
#include "parallel.hpp"

namespace clusterdiag {

namespace {

std::int64_t pairs(std::int64_t count) {
    return count * (count - 1) / 2;
}

}

double sse(const Matrix& z, const Partition& partition, const CentroidModel& model) {
    if (partition.labels.size() != z.rows()) {
        throw InvalidArgument("sse: partition has " + std::to_string(partition.labels.size()) + " labels for " +
                              std::to_string(z.rows()) + " rows");
    }
    if (model.centroids.cols() != z.cols()) {
        throw InvalidArgument("sse: centroid dimension does not match data");
    }
    const int k = model.k();
    double total = 0.0;
    for (std::size_t i = 0; i < z.rows(); ++i) {
        const int label = partition.labels[i];
        if (label < 0 || label >= k) {
            throw InvalidArgument("sse: label " + std::to_string(label) + " at row " + std::to_string(i) +
                                  " has no centroid (k = " + std::to_string(k) + ")");
        }
        total += squared_distance(z.row(i), model.centroids.row(static_cast<std::size_t>(label)));
    }
    return total;
}

Distance parse_distance(std::string_view name) {
    if (name == "euclidean") return Distance::euclidean;
    if (name == "cosine") return Distance::cosine;
    throw InvalidArgument("unknown distance '" + std::string(name) + "' (expected euclidean or cosine)");
}

std::string_view to_string(Distance distance) {
    return distance == Distance::euclidean ? "euclidean" : "cosine";
}

Distance default_distance(Method method) {
    return method == Method::classical ? Distance::euclidean : Distance::cosine;
}

SilhouetteBreakdown silhouette(const Matrix& x, const Partition& partition, Distance distance, unsigned threads) {
    const std::size_t n = x.rows();
    if (partition.labels.size() != n) {
        throw InvalidArgument("silhouette: partition has " + std::to_string(partition.labels.size()) + " labels for " +
                              std::to_string(n) + " rows");
    }
    if (partition.k < 2) {
        throw InvalidArgument("silhouette: undefined for k = " + std::to_string(partition.k) + " (needs k >= 2)");
    }
    partition.validate();
    const auto counts = partition.counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) {
            throw InvalidArgument("silhouette: cluster " + std::to_string(c) + " is empty");
        }
    }
    if (distance == Distance::cosine) {
        require_unit_rows(x, "silhouette (cosine)");
    }

    const auto k = static_cast<std::size_t>(partition.k);
    SilhouetteBreakdown out;
    out.a.assign(n, 0.0);
    out.b.assign(n, 0.0);
    out.s.assign(n, 0.0);

    detail::parallel_for(n, threads, [&](std::size_t i) {
        std::vector<double> sums(k, 0.0);
        const auto xi = x.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double dist = distance == Distance::euclidean ? std::sqrt(squared_distance(xi, x.row(j)))
                                                                : std::max(0.0, 1.0 - dot(xi, x.row(j)));
            sums[static_cast<std::size_t>(partition.labels[j])] += dist;
        }
        const auto own = static_cast<std::size_t>(partition.labels[i]);
        double b = 0.0;
        bool have_b = false;
        for (std::size_t c = 0; c < k; ++c) {
            if (c == own) {
                continue;
            }
            const double mean = sums[c] / static_cast<double>(counts[c]);
            if (!have_b || mean < b) {
                b = mean;
                have_b = true;
            }
        }
        out.b[i] = b;
        if (counts[own] < 2) {
            out.a[i] = 0.0;
            out.s[i] = 0.0;
            return;
        }
        const double a = sums[own] / static_cast<double>(counts[own] - 1);
        out.a[i] = a;
        const double denom = std::max(a, b);
        out.s[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    });

    double total = 0.0;
    for (double s : out.s) {
        total += s;
    }
    out.mean = total / static_cast<double>(n);
    return out;
}

double ari(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) {
        throw InvalidArgument("ari: partitions have different lengths (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    }
    const auto n = static_cast<std::int64_t>(a.size());
    if (n < 2) {
        return 1.0;
    }
    std::map<std::pair<int, int>, std::int64_t> table;
    std::map<int, std::int64_t> rows;
    std::map<int, std::int64_t> cols;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++table[{a[i], b[i]}];
        ++rows[a[i]];
        ++cols[b[i]];
    }
    std::int64_t index = 0;
    for (const auto& [cell, count] : table) {
        index += pairs(count);
    }
    std::int64_t sum_a = 0;
    for (const auto& [label, count] : rows) {
        sum_a += pairs(count);
    }
    std::int64_t sum_b = 0;
    for (const auto& [label, count] : cols) {
        sum_b += pairs(count);
    }
    const double total = static_cast<double>(pairs(n));
    const double expected = static_cast<double>(sum_a) * static_cast<double>(sum_b) / total;
    const double maximum = 0.5 * static_cast<double>(sum_a + sum_b);
    const double denominator = maximum - expected;
    if (denominator == 0.0) {
        return (index == sum_a && index == sum_b) ? 1.0 : 0.0;
    }
    return (static_cast<double>(index) - expected) / denominator;
}

double ari(const Partition& a, const Partition& b) {
    return ari(std::span<const int>(a.labels), std::span<const int>(b.labels));
}

ClusteringResult fit(const Matrix& z, int k, Method method, const FitOptions& options, const RngStream& stream) {
    return method == Method::classical ? kmeans_fit(z, k, options, stream) : skmeans_fit(z, k, options, stream);
}

namespace {

/// Fits on the method's working matrix (`u` already normalized for spherical).
ClusteringResult fit_working(const Matrix& working, int k, Method method, const FitOptions& options,
                             const RngStream& stream) {
    return method == Method::classical ? kmeans_fit(working, k, options, stream)
                                       : skmeans_fit_normalized(working, k, options, stream);
}

StabilityReport stability_working(const Matrix& working, int k, Method method, int runs, const RngStream& stream,
                                  const FitOptions& options) {
    if (runs < 2) {
        throw InvalidArgument("stability: needs at least 2 runs, got " + std::to_string(runs));
    }
    if (k < 2) {
        throw InvalidArgument("stability: needs k >= 2, got " + std::to_string(k));
    }
    FitOptions single = options;
    single.n_init = 1;
    single.threads = 1;

    const auto count = static_cast<std::size_t>(runs);
    std::vector<std::vector<int>> labels(count);
    detail::parallel_for(count, options.threads, [&](std::size_t r) {
        labels[r] = fit_working(working, k, method, single, stream.child(r)).partition.labels;
    });

    StabilityReport report;
    report.method = method;
    report.k = k;
    report.runs = runs;
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            report.pairwise.push_back(ari(labels[i], labels[j]));
        }
    }
    double total = 0.0;
    report.min = report.pairwise.front();
    for (double v : report.pairwise) {
        total += v;
        report.min = std::min(report.min, v);
    }
    report.mean = total / static_cast<double>(report.pairwise.size());
    double spread = 0.0;
    for (double v : report.pairwise) {
        spread += (v - report.mean) * (v - report.mean);
    }
    report.sd = std::sqrt(spread / static_cast<double>(report.pairwise.size()));
    return report;
}

}

StabilityReport stability(const Matrix& z, int k, Method method, int runs, const RngStream& stream,
                          const FitOptions& options) {
    const Matrix working = method == Method::classical ? z : normalize_rows(z);
    return stability_working(working, k, method, runs, stream, options);
}

KSweepReport k_sweep(const Matrix& z, Method method, const SweepConfig& config, const RngStream& stream) {
    const auto n = static_cast<long long>(z.rows());
    if (config.k_min < 2 || config.k_min > config.k_max || config.k_max > n - 1) {
        throw InvalidArgument("k_sweep: need 2 <= k_min <= k_max <= n - 1, got k_min = " + std::to_string(config.k_min) +
                              ", k_max = " + std::to_string(config.k_max) + ", n = " + std::to_string(n));
    }
    const Matrix working = method == Method::classical ? z : normalize_rows(z);
    const Distance distance = default_distance(method);

    KSweepReport report;
    report.method = method;
    report.distance = distance;
    const auto count = static_cast<std::size_t>(config.k_max - config.k_min + 1);
    report.rows.resize(count);

    FitOptions inner = config.fit;
    inner.threads = 1;
    detail::parallel_for(count, config.fit.threads, [&](std::size_t idx) {
        const int k = config.k_min + static_cast<int>(idx);
        const RngStream per_k = stream.child(static_cast<std::uint64_t>(k));
        const ClusteringResult result = fit_working(working, k, method, inner, per_k.child(0));
        SweepRow& row = report.rows[idx];
        row.k = k;
        row.silhouette = silhouette(working, result.partition, distance).mean;
        row.sse = result.sse;
        if (config.stability_runs > 0) {
            const StabilityReport stab =
                stability_working(working, k, method, config.stability_runs, per_k.child(1), inner);
            row.stability_mean = stab.mean;
            row.stability_sd = stab.sd;
        }
    });

    report.best_k = report.rows.front().k;
    double best = report.rows.front().silhouette;
    for (const auto& row : report.rows) {
        if (row.silhouette > best) {
            best = row.silhouette;
            report.best_k = row.k;
        }
    }
    if (report.rows.size() >= 3) {
        report.elbow_k = elbow_k(report);
    }
    return report;
}

int elbow_k(std::span<const int> ks, std::span<const double> sse_values) {
    if (ks.size() != sse_values.size()) {
        throw InvalidArgument("elbow_k: k and SSE columns differ in length");
    }
    if (ks.size() < 3) {
        throw InvalidArgument("elbow_k: needs at least 3 sweep rows, got " + std::to_string(ks.size()));
    }
    const std::size_t last = ks.size() - 1;
    const double dk = static_cast<double>(ks[last] - ks[0]);
    const double ds = sse_values[last] - sse_values[0];
    const double length = std::hypot(dk, ds);

    int best_k = ks[1];
    double best = -1.0;
    for (std::size_t i = 1; i < last; ++i) {
        const double cross = dk * (sse_values[i] - sse_values[0]) - static_cast<double>(ks[i] - ks[0]) * ds;
        const double dist = length > 0.0 ? std::abs(cross) / length : 0.0;
        if (dist > best) {
            best = dist;
            best_k = ks[i];
        }
    }
    return best_k;
}

int elbow_k(const KSweepReport& sweep) {
    std::vector<int> ks;
    std::vector<double> values;
    for (const auto& row : sweep.rows) {
        ks.push_back(row.k);
        values.push_back(row.sse);
    }
    return elbow_k(ks, values);
}

}
