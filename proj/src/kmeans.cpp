#include "clusterdiag/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "clusterdiag/error.hpp"
#include "parallel.hpp"

namespace clusterdiag {

namespace {

void require_nonempty(const Matrix& z, const char* what) {
    if (z.rows() == 0 || z.cols() == 0) {
        throw InvalidArgument(std::string(what) + ": empty input");
    }
}

double total_sse(const Matrix& z, const std::vector<int>& labels, const Matrix& centroids) {
    double total = 0.0;
    for (std::size_t i = 0; i < z.rows(); ++i) {
        total += squared_distance(z.row(i), centroids.row(static_cast<std::size_t>(labels[i])));
    }
    return total;
}

/// Cluster means for `labels`; empty clusters are repaired in index order. Returns true on repair.
bool update_centroids(const Matrix& z, std::vector<int>& labels, Matrix& centroids) {
    const std::size_t k = centroids.rows();
    const std::size_t d = z.cols();
    Matrix sums(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < z.rows(); ++i) {
        const auto label = static_cast<std::size_t>(labels[i]);
        ++counts[label];
        auto dest = sums.row(label);
        const auto src = z.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            dest[j] += src[j];
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
            continue;
        }
        auto dest = centroids.row(c);
        const auto src = sums.row(c);
        for (std::size_t j = 0; j < d; ++j) {
            dest[j] = src[j] / static_cast<double>(counts[c]);
        }
    }

    bool repaired = false;
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] != 0) {
            continue;
        }
        std::size_t worst = z.rows();
        double worst_distance = -1.0;
        for (std::size_t i = 0; i < z.rows(); ++i) {
            const auto owner = static_cast<std::size_t>(labels[i]);
            if (counts[owner] < 2) {
                continue;
            }
            const double dist = squared_distance(z.row(i), centroids.row(owner));
            if (dist > worst_distance) {
                worst_distance = dist;
                worst = i;
            }
        }
        if (worst == z.rows()) {
            // k <= n guarantees a donor cluster with two or more rows.
            throw NumericFailure("lloyd: no row available to reseed empty cluster " + std::to_string(c), c);
        }
        --counts[static_cast<std::size_t>(labels[worst])];
        labels[worst] = static_cast<int>(c);
        counts[c] = 1;
        std::copy(z.row(worst).begin(), z.row(worst).end(), centroids.row(c).begin());
        repaired = true;
    }
    return repaired;
}

}

std::vector<std::size_t> kmeanspp_indices(const Matrix& z, int k, RngStream& stream) {
    require_nonempty(z, "kmeanspp_init");
    const std::size_t n = z.rows();
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw InvalidArgument("kmeanspp_init: k = " + std::to_string(k) + " must be in [1, " + std::to_string(n) + "]");
    }
    std::vector<std::size_t> chosen;
    chosen.reserve(static_cast<std::size_t>(k));
    std::vector<bool> taken(n, false);

    const std::size_t first = stream.uniform_index(n);
    chosen.push_back(first);
    taken[first] = true;

    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        weight[i] = taken[i] ? 0.0 : squared_distance(z.row(i), z.row(first));
    }

    while (chosen.size() < static_cast<std::size_t>(k)) {
        std::size_t pick = stream.weighted_index(weight);
        if (pick >= n) {
            // Every remaining row duplicates a chosen one.
            std::vector<std::size_t> free_rows;
            for (std::size_t i = 0; i < n; ++i) {
                if (!taken[i]) free_rows.push_back(i);
            }
            pick = free_rows[stream.uniform_index(free_rows.size())];
        }
        chosen.push_back(pick);
        taken[pick] = true;
        for (std::size_t i = 0; i < n; ++i) {
            weight[i] = taken[i] ? 0.0 : std::min(weight[i], squared_distance(z.row(i), z.row(pick)));
        }
    }
    return chosen;
}

CentroidModel kmeanspp_init(const Matrix& z, int k, RngStream& stream) {
    const auto rows = kmeanspp_indices(z, k, stream);
    CentroidModel model;
    model.geometry = Geometry::euclidean;
    model.centroids = Matrix(rows.size(), z.cols());
    for (std::size_t c = 0; c < rows.size(); ++c) {
        std::copy(z.row(rows[c]).begin(), z.row(rows[c]).end(), model.centroids.row(c).begin());
    }
    return model;
}

Partition assign_nearest(const Matrix& z, const Matrix& centroids) {
    if (centroids.rows() == 0 || centroids.cols() != z.cols()) {
        throw InvalidArgument("assign_nearest: centroid shape does not match data");
    }
    Partition out;
    out.k = static_cast<int>(centroids.rows());
    out.labels.resize(z.rows());
    for (std::size_t i = 0; i < z.rows(); ++i) {
        const auto row = z.row(i);
        int best = 0;
        double best_distance = squared_distance(row, centroids.row(0));
        for (std::size_t c = 1; c < centroids.rows(); ++c) {
            const double dist = squared_distance(row, centroids.row(c));
            if (dist < best_distance) {
                best_distance = dist;
                best = static_cast<int>(c);
            }
        }
        out.labels[i] = best;
    }
    return out;
}

ClusteringResult lloyd(const Matrix& z, const CentroidModel& init, int max_iter, double tol) {
    require_nonempty(z, "lloyd");
    if (init.geometry != Geometry::euclidean) {
        throw InvalidArgument("lloyd: initial model must use euclidean geometry");
    }
    if (init.centroids.rows() == 0 || init.centroids.rows() > z.rows()) {
        throw InvalidArgument("lloyd: need 1 <= k <= n, got k = " + std::to_string(init.centroids.rows()));
    }
    if (init.centroids.cols() != z.cols()) {
        throw InvalidArgument("lloyd: centroids have " + std::to_string(init.centroids.cols()) +
                              " columns, data has " + std::to_string(z.cols()));
    }
    if (max_iter < 0 || !(tol >= 0.0)) {
        throw InvalidArgument("lloyd: max_iter and tol must be non-negative");
    }

    ClusteringResult result;
    result.model = init;
    Matrix& centroids = result.model.centroids;
    Partition partition = assign_nearest(z, centroids);
    result.objective_trace.push_back(total_sse(z, partition.labels, centroids));

    for (int it = 0; it < max_iter; ++it) {
        const Matrix previous = centroids;
        const bool repaired = update_centroids(z, partition.labels, centroids);
        double shift = 0.0;
        for (std::size_t c = 0; c < centroids.rows(); ++c) {
            shift = std::max(shift, std::sqrt(squared_distance(previous.row(c), centroids.row(c))));
        }

        Partition next = assign_nearest(z, centroids);
        const bool changed = next.labels != partition.labels;
        partition = std::move(next);
        result.objective_trace.push_back(total_sse(z, partition.labels, centroids));
        result.iterations = it + 1;

        if (!repaired && !changed && shift < tol) {
            result.converged = true;
            break;
        }
    }

    result.partition = std::move(partition);
    result.objective = result.objective_trace.back();
    result.sse = result.objective;
    return result;
}

ClusteringResult kmeans_fit(const Matrix& z, int k, const FitOptions& options, const RngStream& stream) {
    require_nonempty(z, "kmeans_fit");
    if (k < 2 || static_cast<std::size_t>(k) > z.rows()) {
        throw InvalidArgument("kmeans_fit: k = " + std::to_string(k) + " must be in [2, " + std::to_string(z.rows()) + "]");
    }
    if (options.n_init < 1) {
        throw InvalidArgument("kmeans_fit: n_init must be at least 1");
    }
    const auto restarts = static_cast<std::size_t>(options.n_init);
    std::vector<ClusteringResult> runs(restarts);
    detail::parallel_for(restarts, options.threads, [&](std::size_t r) {
        RngStream local = stream.child(r);
        runs[r] = lloyd(z, kmeanspp_init(z, k, local), options.max_iter, options.tol);
        runs[r].restart = static_cast<int>(r);
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < restarts; ++r) {
        if (runs[r].objective < runs[best].objective) {
            best = r;
        }
    }
    ClusteringResult out = std::move(runs[best]);
    out.seed = stream.master_seed();
    return out;
}

}
