#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ontoclust/evaluation.hpp"
#include "ontoclust/genetic.hpp"

using namespace ontoclust;

namespace {

struct Blobs {
    Matrix data;
    std::vector<std::size_t> labels;
};

Blobs three_blobs(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double sigma = 0.02;
    const std::array<std::array<double, 2>, 3> centers = {{{0.1, 0.1}, {0.9, 0.2}, {0.5, 0.9}}};
    std::normal_distribution<double> noise(0.0, sigma);
    Blobs b{Matrix(90, 2), {}};
    for (std::size_t i = 0; i < 90; ++i) {
        const std::size_t c = i % 3;
        b.labels.push_back(c);
        b.data(i, 0) = centers[c][0] + noise(rng);
        b.data(i, 1) = centers[c][1] + noise(rng);
    }
    return b;
}

bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::map<std::size_t, std::size_t> ab, ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (ab.emplace(a[i], b[i]).first->second != b[i] || ba.emplace(b[i], a[i]).first->second != a[i]) {
            return false;
        }
    }
    return true;
}

Matrix uniform(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Matrix m(n, d);
    for (auto& v : m.values()) v = std::uniform_real_distribution<double>(0, 1)(rng);
    return m;
}

void expect_finalized(const Matrix& data, const GAResult& r) {
    const std::size_t k = r.clustering.k();
    std::vector<std::size_t> counts(k, 0);
    for (auto a : r.clustering.assignments) {
        ASSERT_LT(a, k);
        ++counts[a];
    }
    for (auto c : counts) EXPECT_GT(c, 0u);
    const auto step = kmeans(data, r.clustering.centroids, 1);
    EXPECT_EQ(step.clustering.assignments, r.clustering.assignments);
    for (std::size_t i = 0; i < step.clustering.centroids.values().size(); ++i) {
        EXPECT_NEAR(step.clustering.centroids.values()[i], r.clustering.centroids.values()[i], 1e-12);
    }
}

} // namespace

TEST(Genetic, FindsThreeSeparatedBlobs) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto b = three_blobs(seed);
        GAConfig cfg;
        cfg.seed = seed;
        const auto r = genetic_cluster(b.data, cfg);
        EXPECT_EQ(r.clustering.k(), 3u);
        EXPECT_TRUE(same_partition(r.clustering.assignments, b.labels));
    }
}

TEST(Genetic, DeterministicAcrossRunsAndThreads) {
    const auto data = uniform(150, 4, 41);
    GAConfig cfg;
    cfg.seed = 99;
    cfg.generations = 15;
    const auto a = genetic_cluster(data, cfg);
    const auto b = genetic_cluster(data, cfg);
    cfg.threads = 4;
    const auto c = genetic_cluster(data, cfg);
    EXPECT_EQ(a.clustering, b.clustering);
    EXPECT_EQ(a.clustering, c.clustering);
    EXPECT_EQ(a.best_fitness_per_generation, c.best_fitness_per_generation);
    cfg.seed = 100;
    EXPECT_NE(genetic_cluster(data, cfg).initial_fitness, a.initial_fitness);
}

TEST(Genetic, ResultContractOnRandomData) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto data = uniform(80, 3, seed);
        GAConfig cfg;
        cfg.seed = seed;
        cfg.generations = 20;
        cfg.k_min = 2;
        cfg.k_max = 6;
        const auto r = genetic_cluster(data, cfg);
        EXPECT_GE(r.clustering.k(), 2u);
        EXPECT_LE(r.clustering.k(), 6u);
        EXPECT_TRUE(r.converged);
        EXPECT_EQ(r.fitness, fitness(data, r.clustering));
        ASSERT_EQ(r.initial_fitness.size(), cfg.population_size);
        for (double f : r.initial_fitness) EXPECT_GE(r.fitness, f);
        ASSERT_EQ(r.best_fitness_per_generation.size(), cfg.generations + 1);
        for (std::size_t g = 1; g < r.best_fitness_per_generation.size(); ++g) {
            EXPECT_GE(r.best_fitness_per_generation[g], r.best_fitness_per_generation[g - 1]);
        }
        expect_finalized(data, r);
    }
}

TEST(Genetic, DefaultKRange) {
    EXPECT_EQ(default_k_max(1), 2u);
    EXPECT_EQ(default_k_max(100), 10u);
    EXPECT_EQ(default_k_max(5456), 60u);
    GAConfig cfg;
    EXPECT_EQ(resolve_k_range(cfg, 3), (std::pair<std::size_t, std::size_t>{2, 2}));
    EXPECT_EQ(resolve_k_range(cfg, 200), (std::pair<std::size_t, std::size_t>{2, 14}));
    cfg.k_min = 20;
    EXPECT_EQ(resolve_k_range(cfg, 200), (std::pair<std::size_t, std::size_t>{20, 20}));
}

TEST(Genetic, BoundaryRecordCount) {
    const auto data = Matrix::from_rows({{0, 0}, {1, 0.5}, {0.3, 1}});
    GAConfig cfg;
    cfg.k_min = 3;
    const auto r = genetic_cluster(data, cfg);
    EXPECT_EQ(r.clustering.k(), 3u);
    EXPECT_EQ(sse(data, r.clustering.assignments), 0.0);
}

TEST(Genetic, DegenerateDataFlagged) {
    const Matrix data(12, 2, 0.4);
    const auto r = genetic_cluster(data, {});
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.clustering.k(), 2u);
    ASSERT_EQ(r.warnings.size(), 1u);
    std::set<std::size_t> used(r.clustering.assignments.begin(), r.clustering.assignments.end());
    EXPECT_EQ(used.size(), 2u);
}

TEST(Genetic, CrossoverAndMutationStayInBounds) {
    const auto data = uniform(50, 3, 5);
    GAConfig cfg;
    cfg.centroid_mutation_prob = 1.0;
    cfg.centroid_mutation_sigma = 5.0;
    cfg.k_mutation_prob = 1.0;
    const detail::GeneticClusterer ga(data, cfg, 2, 5);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = ga.init_individual(static_cast<std::size_t>(trial)).clustering.centroids;
        const auto b = ga.init_individual(static_cast<std::size_t>(trial + 1000)).clustering.centroids;
        const auto child = ga.crossover(a, b, rng);
        EXPECT_GE(child.rows(), std::min(a.rows(), b.rows()));
        EXPECT_LE(child.rows(), std::max(a.rows(), b.rows()));
        const auto mutated = ga.mutate(child, rng);
        EXPECT_GE(mutated.rows(), 2u);
        EXPECT_LE(mutated.rows(), 5u);
        for (double v : mutated.values()) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(Genetic, ConfigErrors) {
    const auto data = uniform(10, 2, 1);
    auto with = [](auto edit) {
        GAConfig cfg;
        edit(cfg);
        return cfg;
    };
    EXPECT_THROW(genetic_cluster(data, with([](GAConfig& c) { c.population_size = 1; })), UsageError);
    EXPECT_THROW(genetic_cluster(data, with([](GAConfig& c) { c.k_min = 1; })), UsageError);
    EXPECT_THROW(genetic_cluster(data, with([](GAConfig& c) { c.k_min = 11; })), DataError);
    EXPECT_THROW(genetic_cluster(data, with([](GAConfig& c) { c.k_max = 11; })), UsageError);
    EXPECT_THROW(genetic_cluster(data, with([](GAConfig& c) { c.k_min = 4; c.k_max = 3; })), UsageError);
    EXPECT_THROW(genetic_cluster(data, with([](GAConfig& c) { c.elitism_count = 30; })), UsageError);
    EXPECT_THROW(genetic_cluster(data, with([](GAConfig& c) { c.k_mutation_prob = 1.5; })), UsageError);
}

TEST(Genetic, FixedKMinimizesSse) {
    // Two tight pairs and one far outlier: at k = 2 the SSE optimum isolates
    // the outlier, which is also what a fixed-k search must return.
    const auto data = Matrix::from_rows({{0.0}, {0.05}, {0.3}, {0.35}, {1.0}});
    GAConfig cfg;
    cfg.k_min = 2;
    cfg.k_max = 2;
    const auto r = genetic_cluster(data, cfg);
    EXPECT_EQ(r.clustering.k(), 2u);
    EXPECT_NEAR(sse(data, r.clustering.assignments), 0.0925, 1e-12);
    EXPECT_EQ(r.fitness, objective(data, r.clustering, true));
    EXPECT_EQ(objective(data, r.clustering, false), fitness(data, r.clustering));
}
