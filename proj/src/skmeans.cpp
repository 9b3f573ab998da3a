#include "clusterdiag/skmeans.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "clusterdiag/error.hpp"
#include "clusterdiag/preprocess.hpp"
#include "parallel.hpp"

namespace clusterdiag {

namespace {

// For unit vectors 1 - u.v == |u - v|^2 / 2, and the right-hand side is exactly 0 for duplicates.
double cosine_distance_unit(std::span<const double> a, std::span<const double> b) {
    return 0.5 * squared_distance(a, b);
}

double total_similarity(const Matrix& u, const std::vector<int>& labels, const Matrix& centroids) {
    double total = 0.0;
    for (std::size_t i = 0; i < u.rows(); ++i) {
        total += dot(u.row(i), centroids.row(static_cast<std::size_t>(labels[i])));
    }
    return total;
}

double total_sse(const Matrix& u, const std::vector<int>& labels, const Matrix& centroids) {
    double total = 0.0;
    for (std::size_t i = 0; i < u.rows(); ++i) {
        total += squared_distance(u.row(i), centroids.row(static_cast<std::size_t>(labels[i])));
    }
    return total;
}

struct UpdateOutcome {
    CentroidModel model;
    bool repaired = false;
};

UpdateOutcome update(const Matrix& u, const Partition& partition, const CentroidModel* previous) {
    const std::size_t k = static_cast<std::size_t>(partition.k);
    const std::size_t d = u.cols();
    Matrix sums(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < u.rows(); ++i) {
        const auto label = static_cast<std::size_t>(partition.labels[i]);
        ++counts[label];
        auto dest = sums.row(label);
        const auto src = u.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            dest[j] += src[j];
        }
    }

    UpdateOutcome out;
    out.model.geometry = Geometry::spherical;
    out.model.centroids = Matrix(k, d);
    Matrix& centroids = out.model.centroids;
    std::vector<bool> settled(k, false);

    auto place_on_row = [&](std::size_t c, std::size_t row) {
        std::copy(u.row(row).begin(), u.row(row).end(), centroids.row(c).begin());
        settled[c] = true;
        out.repaired = true;
    };

    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
            continue;
        }
        const double norm = norm2(sums.row(c));
        if (norm >= near_zero_row_norm) {
            auto dest = centroids.row(c);
            const auto src = sums.row(c);
            for (std::size_t j = 0; j < d; ++j) {
                dest[j] = src[j] / norm;
            }
            settled[c] = true;
            continue;
        }
        // Degenerate mean direction: reseed on the member least similar to the old centroid.
        std::size_t pick = u.rows();
        double lowest = 2.0;
        for (std::size_t i = 0; i < u.rows(); ++i) {
            if (static_cast<std::size_t>(partition.labels[i]) != c) {
                continue;
            }
            const double sim = previous != nullptr ? dot(u.row(i), previous->centroids.row(c)) : 1.0;
            if (pick == u.rows() || sim < lowest) {
                lowest = sim;
                pick = i;
            }
        }
        place_on_row(c, pick);
    }

    std::vector<bool> used(u.rows(), false);
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] != 0) {
            continue;
        }
        // Empty cluster: reseed on the row that fits its own cluster worst.
        std::size_t pick = u.rows();
        double lowest = 2.0;
        for (std::size_t i = 0; i < u.rows(); ++i) {
            const auto owner = static_cast<std::size_t>(partition.labels[i]);
            if (used[i] || counts[owner] < 2 || !settled[owner]) {
                continue;
            }
            const double sim = dot(u.row(i), centroids.row(owner));
            if (pick == u.rows() || sim < lowest) {
                lowest = sim;
                pick = i;
            }
        }
        if (pick == u.rows()) {
            throw NumericFailure("spherical_update: no row available to reseed empty cluster " + std::to_string(c), c);
        }
        used[pick] = true;
        place_on_row(c, pick);
    }
    return out;
}

void require_options(const FitOptions& options, const char* what) {
    if (options.n_init < 1 || options.max_iter < 0 || !(options.tol >= 0.0)) {
        throw InvalidArgument(std::string(what) + ": n_init must be >= 1, max_iter and tol non-negative");
    }
}

}

void require_unit_rows(const Matrix& u, const char* what) {
    for (std::size_t i = 0; i < u.rows(); ++i) {
        const double norm = norm2(u.row(i));
        if (!(std::abs(norm - 1.0) <= unit_norm_tolerance)) {
            throw InvalidArgument(std::string(what) + ": row " + std::to_string(i) + " is not unit-norm (norm " +
                                  std::to_string(norm) + ")");
        }
    }
}

Partition spherical_assign(const Matrix& u, const CentroidModel& model) {
    const Matrix& centroids = model.centroids;
    if (centroids.rows() == 0 || centroids.cols() != u.cols()) {
        throw InvalidArgument("spherical_assign: centroid shape does not match data");
    }
    require_unit_rows(u, "spherical_assign (data)");
    require_unit_rows(centroids, "spherical_assign (centroids)");

    Partition out;
    out.k = static_cast<int>(centroids.rows());
    out.labels.resize(u.rows());
    for (std::size_t i = 0; i < u.rows(); ++i) {
        const auto row = u.row(i);
        int best = 0;
        double best_sim = dot(row, centroids.row(0));
        for (std::size_t c = 1; c < centroids.rows(); ++c) {
            const double sim = dot(row, centroids.row(c));
            if (sim > best_sim) {
                best_sim = sim;
                best = static_cast<int>(c);
            }
        }
        out.labels[i] = best;
    }
    return out;
}

CentroidModel spherical_update(const Matrix& u, const Partition& partition, const CentroidModel* previous) {
    if (partition.labels.size() != u.rows()) {
        throw InvalidArgument("spherical_update: partition has " + std::to_string(partition.labels.size()) +
                              " labels for " + std::to_string(u.rows()) + " rows");
    }
    if (partition.k < 1) {
        throw InvalidArgument("spherical_update: partition has no clusters");
    }
    partition.validate();
    if (previous != nullptr && (previous->centroids.rows() != static_cast<std::size_t>(partition.k) ||
                                previous->centroids.cols() != u.cols())) {
        throw InvalidArgument("spherical_update: previous centroids do not match partition");
    }
    return update(u, partition, previous).model;
}

std::vector<std::size_t> spherical_kmeanspp_indices(const Matrix& u, int k, RngStream& stream) {
    const std::size_t n = u.rows();
    if (n == 0) {
        throw InvalidArgument("spherical K-means++: empty input");
    }
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw InvalidArgument("spherical K-means++: k = " + std::to_string(k) + " must be in [1, " + std::to_string(n) + "]");
    }
    std::vector<std::size_t> chosen;
    std::vector<bool> taken(n, false);
    const std::size_t first = stream.uniform_index(n);
    chosen.push_back(first);
    taken[first] = true;

    std::vector<double> nearest(n);
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        nearest[i] = cosine_distance_unit(u.row(i), u.row(first));
        weight[i] = taken[i] ? 0.0 : nearest[i] * nearest[i];
    }
    while (chosen.size() < static_cast<std::size_t>(k)) {
        std::size_t pick = stream.weighted_index(weight);
        if (pick >= n) {
            std::vector<std::size_t> free_rows;
            for (std::size_t i = 0; i < n; ++i) {
                if (!taken[i]) free_rows.push_back(i);
            }
            pick = free_rows[stream.uniform_index(free_rows.size())];
        }
        chosen.push_back(pick);
        taken[pick] = true;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], cosine_distance_unit(u.row(i), u.row(pick)));
            weight[i] = taken[i] ? 0.0 : nearest[i] * nearest[i];
        }
    }
    return chosen;
}

ClusteringResult spherical_lloyd(const Matrix& u, const CentroidModel& init, int max_iter, double tol) {
    if (u.rows() == 0 || u.cols() == 0) {
        throw InvalidArgument("spherical_lloyd: empty input");
    }
    if (init.centroids.rows() == 0 || init.centroids.rows() > u.rows()) {
        throw InvalidArgument("spherical_lloyd: need 1 <= k <= n");
    }
    if (max_iter < 0 || !(tol >= 0.0)) {
        throw InvalidArgument("spherical_lloyd: max_iter and tol must be non-negative");
    }
    ClusteringResult result;
    result.model = init;
    result.model.geometry = Geometry::spherical;
    Partition partition = spherical_assign(u, result.model);
    result.objective_trace.push_back(total_similarity(u, partition.labels, result.model.centroids));

    for (int it = 0; it < max_iter; ++it) {
        UpdateOutcome next_model = update(u, partition, &result.model);
        double shift = 0.0;
        for (std::size_t c = 0; c < next_model.model.centroids.rows(); ++c) {
            shift = std::max(shift, 1.0 - dot(result.model.centroids.row(c), next_model.model.centroids.row(c)));
        }
        result.model = std::move(next_model.model);

        Partition next = spherical_assign(u, result.model);
        const bool changed = next.labels != partition.labels;
        partition = std::move(next);
        result.objective_trace.push_back(total_similarity(u, partition.labels, result.model.centroids));
        result.iterations = it + 1;

        if (!next_model.repaired && !changed && shift < tol) {
            result.converged = true;
            break;
        }
    }
    result.partition = std::move(partition);
    result.objective = result.objective_trace.back();
    result.sse = total_sse(u, result.partition.labels, result.model.centroids);
    return result;
}

ClusteringResult skmeans_fit_normalized(const Matrix& u, int k, const FitOptions& options, const RngStream& stream) {
    if (u.rows() == 0 || u.cols() == 0) {
        throw InvalidArgument("skmeans_fit: empty input");
    }
    if (k < 2 || static_cast<std::size_t>(k) > u.rows()) {
        throw InvalidArgument("skmeans_fit: k = " + std::to_string(k) + " must be in [2, " + std::to_string(u.rows()) + "]");
    }
    require_options(options, "skmeans_fit");
    require_unit_rows(u, "skmeans_fit");

    const auto restarts = static_cast<std::size_t>(options.n_init);
    std::vector<ClusteringResult> runs(restarts);
    detail::parallel_for(restarts, options.threads, [&](std::size_t r) {
        RngStream local = stream.child(r);
        const auto rows = spherical_kmeanspp_indices(u, k, local);
        CentroidModel init;
        init.geometry = Geometry::spherical;
        init.centroids = Matrix(rows.size(), u.cols());
        for (std::size_t c = 0; c < rows.size(); ++c) {
            std::copy(u.row(rows[c]).begin(), u.row(rows[c]).end(), init.centroids.row(c).begin());
        }
        runs[r] = spherical_lloyd(u, init, options.max_iter, options.tol);
        runs[r].restart = static_cast<int>(r);
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < restarts; ++r) {
        if (runs[r].objective > runs[best].objective) {
            best = r;
        }
    }
    ClusteringResult out = std::move(runs[best]);
    out.seed = stream.master_seed();
    return out;
}

ClusteringResult skmeans_fit(const Matrix& z, int k, const FitOptions& options, const RngStream& stream) {
    return skmeans_fit_normalized(normalize_rows(z), k, options, stream);
}

}
