#ifndef ONTOCLUST_CLUSTERING_HPP
#define ONTOCLUST_CLUSTERING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"

namespace ontoclust {

/// A hard partition of n records into k clusters. Finalized clusterings have
/// no empty cluster and every centroid equals the mean of its members.
struct Clustering {
    std::vector<std::size_t> assignments;
    Matrix centroids;

    std::size_t k() const noexcept { return centroids.rows(); }

    friend bool operator==(const Clustering&, const Clustering&) = default;
};

/// Member means of each cluster. Empty clusters keep a zero row; callers that
/// need non-empty clusters check `counts`.
inline Matrix member_means(const Matrix& data, std::span<const std::size_t> assignments, std::size_t k,
                           std::vector<std::size_t>* counts = nullptr) {
    Matrix sums(k, data.cols());
    std::vector<std::size_t> n(k, 0);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const auto row = data.row(i);
        auto target = sums.row(assignments[i]);
        for (std::size_t j = 0; j < row.size(); ++j) {
            target[j] += row[j];
        }
        ++n[assignments[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (n[c] == 0) {
            continue;
        }
        for (double& v : sums.row(c)) {
            v /= static_cast<double>(n[c]);
        }
    }
    if (counts != nullptr) {
        *counts = std::move(n);
    }
    return sums;
}

/// Sum of squared distances of each record to the given centroid of its cluster.
inline double assignment_cost(const Matrix& data, std::span<const std::size_t> assignments, const Matrix& centroids) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        total += squared_distance(data.row(i), centroids.row(assignments[i]));
    }
    return total;
}

struct KMeansResult {
    Clustering clustering;
    std::size_t iterations = 0;    ///< mean updates performed
    bool converged = false;        ///< assignment fixpoint or shift below tolerance
    std::vector<double> sse_trace; ///< SSE after every mean update
};

namespace detail {

/// Nearest centroid by squared Euclidean distance; ties go to the lowest index.
/// A partial sum that already exceeds the best distance cannot win, so the
/// scan abandons it early; the result is identical to the full computation.
inline std::size_t nearest_centroid(std::span<const double> point, const Matrix& centroids, double* best_out = nullptr) {
    const std::size_t d = point.size();
    const double* p = point.data();
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double* q = centroids.row(c).data();
        double acc = 0.0;
        std::size_t j = 0;
        for (; j + 4 <= d; j += 4) {
            const double a = p[j] - q[j];
            const double b = p[j + 1] - q[j + 1];
            const double e = p[j + 2] - q[j + 2];
            const double f = p[j + 3] - q[j + 3];
            acc += a * a;
            acc += b * b;
            acc += e * e;
            acc += f * f;
            if (acc >= best_d) {
                break;
            }
        }
        if (acc >= best_d) {
            continue;
        }
        for (; j < d; ++j) {
            const double a = p[j] - q[j];
            acc += a * a;
        }
        if (acc < best_d) {
            best_d = acc;
            best = c;
        }
    }
    if (best_out != nullptr) {
        *best_out = best_d;
    }
    return best;
}

inline void assign_nearest(const Matrix& data, const Matrix& centroids, std::vector<std::size_t>& assignments,
                           std::vector<double>& distances) {
    assignments.resize(data.rows());
    distances.resize(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        assignments[i] = nearest_centroid(data.row(i), centroids, &distances[i]);
    }
}

/// Gives every empty cluster the record farthest from its current centroid,
/// taken only from clusters that keep at least one member. Ties go to the
/// lowest record index.
inline void repair_empty_clusters(const Matrix& data, Matrix& centroids, std::vector<std::size_t>& assignments,
                                  std::vector<double>& distances) {
    const std::size_t k = centroids.rows();
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t a : assignments) {
        ++counts[a];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] != 0) {
            continue;
        }
        std::size_t victim = data.rows();
        double farthest = -1.0;
        for (std::size_t i = 0; i < data.rows(); ++i) {
            if (counts[assignments[i]] > 1 && distances[i] > farthest) {
                farthest = distances[i];
                victim = i;
            }
        }
        if (victim == data.rows()) {
            throw InvariantError("empty cluster repair found no donor (k > n?)");
        }
        --counts[assignments[victim]];
        assignments[victim] = c;
        counts[c] = 1;
        distances[victim] = 0.0;
        auto dst = centroids.row(c);
        const auto src = data.row(victim);
        std::copy(src.begin(), src.end(), dst.begin());
    }
}

inline void check_kmeans_inputs(const Matrix& data, const Matrix& initial_centroids, std::size_t max_iterations,
                                double tolerance) {
    const std::size_t k = initial_centroids.rows();
    if (data.rows() == 0 || data.cols() == 0) {
        throw DataError("kmeans: empty data");
    }
    if (k == 0) {
        throw DataError("kmeans: need at least one initial centroid");
    }
    if (k > data.rows()) {
        throw DataError("kmeans: k = " + std::to_string(k) + " exceeds record count " + std::to_string(data.rows()));
    }
    if (initial_centroids.cols() != data.cols()) {
        throw DataError("kmeans: centroid dimension does not match data");
    }
    if (!data.all_finite() || !initial_centroids.all_finite()) {
        throw DataError("kmeans: non-finite input");
    }
    if (max_iterations == 0) {
        throw UsageError("kmeans: max_iterations must be >= 1");
    }
    if (!(tolerance >= 0.0)) {
        throw UsageError("kmeans: tolerance must be >= 0");
    }
}

} // namespace detail

/// Lloyd iteration from the given centroids. Each step assigns records to the
/// nearest centroid, repairs empty clusters, then moves centroids to member
/// means. Stops on an unchanged assignment, a maximum centroid shift below
/// `tolerance`, or after `max_iterations` mean updates.
inline KMeansResult kmeans(const Matrix& data, const Matrix& initial_centroids, std::size_t max_iterations = 100,
                           double tolerance = 0.0) {
    detail::check_kmeans_inputs(data, initial_centroids, max_iterations, tolerance);

    const std::size_t k = initial_centroids.rows();
    KMeansResult result;
    Matrix centroids = initial_centroids;
    std::vector<std::size_t> assignments;
    std::vector<std::size_t> previous;
    std::vector<double> distances;

    for (std::size_t it = 0; it < max_iterations; ++it) {
        detail::assign_nearest(data, centroids, assignments, distances);
        detail::repair_empty_clusters(data, centroids, assignments, distances);
        if (it > 0 && assignments == previous) {
            result.converged = true;
            break;
        }
        Matrix means = member_means(data, assignments, k);
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            shift = std::max(shift, std::sqrt(squared_distance(means.row(c), centroids.row(c))));
        }
        centroids = std::move(means);
        previous.swap(assignments);
        ++result.iterations;
        result.sse_trace.push_back(assignment_cost(data, previous, centroids));
        if (shift < tolerance) {
            result.converged = true;
            break;
        }
    }

    result.clustering.assignments = std::move(previous);
    result.clustering.centroids = std::move(centroids);
    return result;
}

/// Cluster quality used to select k: 1 / (1 + DB) with DB the Davies-Bouldin
/// index over Euclidean distances. Higher is better; any pair of coincident
/// centroids yields 0.
inline double fitness(const Matrix& data, const Clustering& c) {
    const std::size_t k = c.k();
    if (k < 2) {
        throw UsageError("fitness: needs k >= 2, got " + std::to_string(k));
    }
    if (c.assignments.size() != data.rows() || c.centroids.cols() != data.cols()) {
        throw DataError("fitness: clustering does not match data shape");
    }
    std::vector<double> scatter(k, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const auto a = c.assignments[i];
        if (a >= k) {
            throw DataError("fitness: cluster id out of range");
        }
        scatter[a] += std::sqrt(squared_distance(data.row(i), c.centroids.row(a)));
        ++counts[a];
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) {
            throw DataError("fitness: empty cluster " + std::to_string(j));
        }
        scatter[j] /= static_cast<double>(counts[j]);
    }
    double db = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) {
                continue;
            }
            const double separation = std::sqrt(squared_distance(c.centroids.row(i), c.centroids.row(j)));
            if (separation == 0.0) {
                return 0.0;
            }
            worst = std::max(worst, (scatter[i] + scatter[j]) / separation);
        }
        db += worst;
    }
    db /= static_cast<double>(k);
    return 1.0 / (1.0 + db);
}

} // namespace ontoclust

#endif // ONTOCLUST_CLUSTERING_HPP
