#include <gtest/gtest.h>

#include <random>

#include "ontoclust/clustering.hpp"
#include "ontoclust/evaluation.hpp"
#include "support/oracles.hpp"

using namespace ontoclust;

namespace {

std::vector<std::vector<double>> rows_of(const Matrix& m) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).begin(), m.row(i).end());
    return out;
}

Matrix pick_rows(const Matrix& m, const std::vector<std::size_t>& idx) {
    Matrix out(idx.size(), m.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        std::copy(m.row(idx[r]).begin(), m.row(idx[r]).end(), out.row(r).begin());
    }
    return out;
}

// Best SSE over Lloyd runs from every k-subset of rows plus random starts.
double best_of_restarts(const Matrix& data, std::size_t k, std::mt19937_64& rng) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = data.rows();
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i) if (mask[i]) idx.push_back(i);
        const auto r = kmeans(data, pick_rows(data, idx), 100);
        best = std::min(best, sse(data, r.clustering.assignments, k));
    } while (std::prev_permutation(mask.begin(), mask.end()));
    for (int extra = 0; extra < 10; ++extra) {
        Matrix init(k, data.cols());
        for (auto& v : init.values()) v = std::uniform_real_distribution<double>(0, 1)(rng);
        const auto r = kmeans(data, init, 100);
        best = std::min(best, sse(data, r.clustering.assignments, k));
    }
    return best;
}

} // namespace

TEST(KMeans, OneDimensionalExample) {
    const auto data = Matrix::from_rows({{0}, {0.1}, {0.9}, {1.0}});
    const auto r = kmeans(data, Matrix::from_rows({{0}, {1}}));
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.clustering.assignments, (std::vector<std::size_t>{0, 0, 1, 1}));
    EXPECT_NEAR(r.clustering.centroids(0, 0), 0.05, 1e-15);
    EXPECT_NEAR(r.clustering.centroids(1, 0), 0.95, 1e-15);
    EXPECT_NEAR(sse(data, r.clustering.assignments), 0.01, 1e-15);
}

TEST(KMeans, IdenticalPoints) {
    const Matrix data(5, 3, 0.25);
    const auto r = kmeans(data, Matrix::from_rows({{0.25, 0.25, 0.25}}));
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(sse(data, r.clustering.assignments), 0.0);
}

TEST(KMeans, TiesGoToLowestIndex) {
    const auto data = Matrix::from_rows({{0.5}, {0}, {1}});
    const auto r = kmeans(data, Matrix::from_rows({{0}, {1}}), 1);
    EXPECT_EQ(r.clustering.assignments[0], 0u);
}

TEST(KMeans, EmptyClusterRepairSeizesFarthestPoint) {
    const auto data = Matrix::from_rows({{0}, {0.1}, {0.2}, {1.0}});
    // Second centroid is far away from everything, so it starts empty.
    const auto r = kmeans(data, Matrix::from_rows({{0.1}, {50}}));
    EXPECT_EQ(r.clustering.assignments, (std::vector<std::size_t>{0, 0, 0, 1}));
    EXPECT_EQ(r.clustering.centroids(1, 0), 1.0);
    // Coincident initial centroids: the duplicate is repaired, not left empty.
    const auto dup = kmeans(data, Matrix::from_rows({{0.1}, {0.1}, {0.1}}));
    std::vector<std::size_t> counts(3, 0);
    for (auto a : dup.clustering.assignments) ++counts[a];
    for (auto c : counts) EXPECT_GT(c, 0u);
}

TEST(KMeans, MatchesExhaustivePartitionMinimum) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
        const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(3, n))(rng);
        Matrix data(n, d);
        for (auto& v : data.values()) v = std::uniform_real_distribution<double>(0, 1)(rng);
        const double expected = static_cast<double>(oracle::min_partition_sse(rows_of(data), k));
        EXPECT_NEAR(best_of_restarts(data, k, rng), expected, 1e-9) << "trial " << trial;
    }
}

TEST(KMeans, SseNeverIncreases) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(10, 200)(rng);
        const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
        Matrix data(n, d);
        for (auto& v : data.values()) v = std::uniform_real_distribution<double>(0, 1)(rng);
        Matrix init(k, d);
        for (auto& v : init.values()) v = std::uniform_real_distribution<double>(0, 1)(rng);
        const auto r = kmeans(data, init, 200);
        ASSERT_EQ(r.sse_trace.size(), r.iterations);
        for (std::size_t i = 1; i < r.sse_trace.size(); ++i) {
            EXPECT_LE(r.sse_trace[i], r.sse_trace[i - 1] * (1 + 1e-12)) << "iteration " << i;
        }
    }
}

TEST(KMeans, CentroidsAreOptimalForTheirAssignments) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix data(40, 3);
        for (auto& v : data.values()) v = std::uniform_real_distribution<double>(0, 1)(rng);
        Matrix init = Matrix::from_rows({{0.1, 0.1, 0.1}, {0.9, 0.9, 0.9}, {0.1, 0.9, 0.5}});
        const auto r = kmeans(data, init, 300);
        ASSERT_TRUE(r.converged);
        const double base = assignment_cost(data, r.clustering.assignments, r.clustering.centroids);
        EXPECT_NEAR(base, sse(data, r.clustering.assignments, 3), 1e-12);
        for (double delta : {1e-3, -1e-3, 0.05, -0.2}) {
            for (std::size_t c = 0; c < 3; ++c) {
                for (std::size_t j = 0; j < 3; ++j) {
                    Matrix moved = r.clustering.centroids;
                    moved(c, j) += delta;
                    EXPECT_GE(assignment_cost(data, r.clustering.assignments, moved), base);
                }
            }
        }
    }
}

TEST(KMeans, ColumnPermutationCommutes) {
    std::mt19937_64 rng(37);
    Matrix data(60, 3);
    for (auto& v : data.values()) v = std::uniform_real_distribution<double>(0, 1)(rng);
    const auto init = pick_rows(data, {0, 1, 2, 3});
    const std::array<std::size_t, 3> perm = {2, 0, 1};
    auto permute = [&](const Matrix& m) {
        Matrix out(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < 3; ++j) out(i, j) = m(i, perm[j]);
        return out;
    };
    const auto a = kmeans(data, init, 300);
    const auto b = kmeans(permute(data), permute(init), 300);
    EXPECT_EQ(a.clustering.assignments, b.clustering.assignments);
    const auto pc = permute(a.clustering.centroids);
    for (std::size_t i = 0; i < pc.values().size(); ++i) EXPECT_NEAR(pc.values()[i], b.clustering.centroids.values()[i], 1e-15);
}

TEST(KMeans, Errors) {
    const auto data = Matrix::from_rows({{0}, {1}});
    EXPECT_THROW(kmeans(data, Matrix::from_rows({{0}, {1}, {2}})), DataError);
    EXPECT_THROW(kmeans(data, Matrix(0, 1)), DataError);
    EXPECT_THROW(kmeans(data, Matrix::from_rows({{0, 1}})), DataError);
    EXPECT_THROW(kmeans(Matrix::from_rows({{0}, {std::numeric_limits<double>::infinity()}}), Matrix::from_rows({{0}})),
                 DataError);
    EXPECT_THROW(kmeans(data, Matrix::from_rows({{0}}), 0), UsageError);
    EXPECT_THROW(kmeans(data, Matrix::from_rows({{0}}), 10, -1.0), UsageError);
}

TEST(Fitness, Examples) {
    const auto two = Matrix::from_rows({{0}, {1}});
    EXPECT_EQ(fitness(two, {{0, 1}, Matrix::from_rows({{0}, {1}})}), 1.0);
    EXPECT_EQ(fitness(two, {{0, 1}, Matrix::from_rows({{0.5}, {0.5}})}), 0.0);
    const auto four = Matrix::from_rows({{0}, {0.2}, {1.0}, {1.2}});
    EXPECT_NEAR(fitness(four, {{0, 0, 1, 1}, Matrix::from_rows({{0.1}, {1.1}})}), 1.0 / 1.2, 1e-15);
}

TEST(Fitness, Errors) {
    const auto two = Matrix::from_rows({{0}, {1}});
    EXPECT_THROW(fitness(two, {{0, 0}, Matrix::from_rows({{0.5}})}), UsageError);
    EXPECT_THROW(fitness(two, {{0, 0}, Matrix::from_rows({{0}, {1}})}), DataError);
    EXPECT_THROW(fitness(two, {{0, 5}, Matrix::from_rows({{0}, {1}})}), DataError);
}
