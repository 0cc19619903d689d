#ifndef ONTOCLUST_GENETIC_HPP
#define ONTOCLUST_GENETIC_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "clustering.hpp"
#include "error.hpp"
#include "matrix.hpp"

namespace ontoclust {

/// Knobs of the genetic clusterer. Every field has a default, so callers never
/// have to pick k.
struct GAConfig {
    std::size_t population_size = 30;
    std::size_t generations = 50;
    std::size_t k_min = 2;
    std::optional<std::size_t> k_max;  ///< default: min(60, max(2, round(sqrt(n))))
    std::size_t tournament_size = 2;
    std::size_t elitism_count = 1;
    double centroid_mutation_prob = 0.1;
    double centroid_mutation_sigma = 0.05;  ///< fraction of each column's range
    double k_mutation_prob = 0.1;
    std::size_t refinement_iterations = 3;    ///< Lloyd steps applied to every offspring
    std::size_t finalize_iterations = 300;   ///< Lloyd step cap when running to a fixpoint
    std::uint64_t seed = 0;
    std::size_t threads = 1;  ///< worker threads; results do not depend on it
};

inline std::size_t default_k_max(std::size_t n) {
    const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    return std::min<std::size_t>(60, std::max<std::size_t>(2, root));
}

/// k bounds for n records. An unset k_max defaults to default_k_max(n) raised
/// to k_min when needed.
inline std::pair<std::size_t, std::size_t> resolve_k_range(const GAConfig& cfg, std::size_t n) {
    if (cfg.k_min < 2) {
        throw UsageError("k_min must be >= 2");
    }
    if (n < cfg.k_min) {
        throw DataError("genetic clustering needs at least k_min = " + std::to_string(cfg.k_min) + " records, got " +
                        std::to_string(n));
    }
    const std::size_t k_max = cfg.k_max ? *cfg.k_max : std::min(n, std::max(cfg.k_min, default_k_max(n)));
    if (k_max < cfg.k_min || k_max > n) {
        throw UsageError("k range [" + std::to_string(cfg.k_min) + ", " + std::to_string(k_max) +
                         "] invalid for " + std::to_string(n) + " records");
    }
    return {cfg.k_min, k_max};
}

inline void validate(const GAConfig& cfg) {
    if (cfg.population_size < 2) throw UsageError("population_size must be >= 2");
    if (cfg.tournament_size < 1) throw UsageError("tournament_size must be >= 1");
    if (cfg.elitism_count >= cfg.population_size) throw UsageError("elitism_count must be < population_size");
    if (cfg.refinement_iterations < 1) throw UsageError("refinement_iterations must be >= 1");
    if (cfg.finalize_iterations < 1) throw UsageError("finalize_iterations must be >= 1");
    auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!probability(cfg.centroid_mutation_prob) || !probability(cfg.k_mutation_prob)) {
        throw UsageError("mutation probabilities must lie in [0, 1]");
    }
    if (!(cfg.centroid_mutation_sigma >= 0.0) || !std::isfinite(cfg.centroid_mutation_sigma)) {
        throw UsageError("centroid_mutation_sigma must be finite and >= 0");
    }
}

struct GAResult {
    Clustering clustering;
    double fitness = 0.0;  ///< search objective, see objective()
    std::vector<double> initial_fitness;              ///< every individual of generation 0
    std::vector<double> best_fitness_per_generation;  ///< index 0 = initial population
    bool converged = true;                            ///< result is a Lloyd fixpoint
    bool degenerate = false;                     ///< all records identical
    std::vector<std::string> warnings;
};

/// Score the search maximizes. Davies-Bouldin fitness when k is free; with a
/// single admissible k there is nothing to select, so 1 / (1 + SSE).
inline double objective(const Matrix& data, const Clustering& c, bool fixed_k) {
    if (!fixed_k) {
        return fitness(data, c);
    }
    return 1.0 / (1.0 + assignment_cost(data, c.assignments, c.centroids));
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream per (seed, generation, slot): the schedule of worker
/// threads cannot change which numbers an individual sees.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t generation, std::uint64_t slot) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ (generation * 0xd1b54a32d192ed03ULL));
    s = splitmix64(s ^ (slot * 0x8cb92ba72f3d8dd7ULL));
    return std::mt19937_64(s);
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

struct Individual {
    Clustering clustering;
    double fitness = 0.0;
    bool converged = false;
};

class GeneticClusterer {
public:
    GeneticClusterer(const Matrix& data, const GAConfig& cfg, std::size_t k_min, std::size_t k_max)
        : data_(data), cfg_(cfg), k_min_(k_min), k_max_(k_max), lo_(data.cols()), hi_(data.cols()) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            lo_[j] = hi_[j] = data(0, j);
            for (std::size_t i = 1; i < data.rows(); ++i) {
                lo_[j] = std::min(lo_[j], data(i, j));
                hi_[j] = std::max(hi_[j], data(i, j));
            }
        }
    }

    Individual init_individual(std::size_t slot) const {
        auto rng = stream_rng(cfg_.seed, 0, slot);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(k_min_, k_max_)(rng);
        // Partial Fisher-Yates over record indices: k distinct rows.
        std::vector<std::size_t> idx(data_.rows());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        Matrix centroids(k, data_.cols());
        for (std::size_t c = 0; c < k; ++c) {
            const std::size_t pick = std::uniform_int_distribution<std::size_t>(c, idx.size() - 1)(rng);
            std::swap(idx[c], idx[pick]);
            copy_row(data_.row(idx[c]), centroids.row(c));
        }
        return finalize(centroids);
    }

    std::size_t select(const std::vector<Individual>& pop, std::mt19937_64& rng) const {
        std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
        std::size_t best = pick(rng);
        for (std::size_t t = 1; t < cfg_.tournament_size; ++t) {
            const std::size_t challenger = pick(rng);
            if (better(pop, challenger, best)) {
                best = challenger;
            }
        }
        return best;
    }

    /// Union of both parents' centroids, then repeatedly drop the later member
    /// of the closest pair until a k drawn between the parents' k remains.
    Matrix crossover(const Matrix& a, const Matrix& b, std::mt19937_64& rng) const {
        const std::size_t lo_k = std::max(k_min_, std::min(a.rows(), b.rows()));
        const std::size_t hi_k = std::min(k_max_, std::max(a.rows(), b.rows()));
        const std::size_t target = std::uniform_int_distribution<std::size_t>(lo_k, std::max(lo_k, hi_k))(rng);

        std::vector<std::vector<double>> pool;
        for (const Matrix* parent : {&a, &b}) {
            for (std::size_t r = 0; r < parent->rows(); ++r) {
                const auto row = parent->row(r);
                pool.emplace_back(row.begin(), row.end());
            }
        }
        const std::size_t m = pool.size();
        std::vector<double> dist(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                dist[i * m + j] = squared_distance(pool[i], pool[j]);
            }
        }
        std::vector<bool> alive(m, true);
        for (std::size_t remaining = m; remaining > target; --remaining) {
            std::size_t drop = m;
            double closest = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                if (!alive[i]) continue;
                for (std::size_t j = i + 1; j < m; ++j) {
                    if (alive[j] && dist[i * m + j] < closest) {
                        closest = dist[i * m + j];
                        drop = j;
                    }
                }
            }
            alive[drop] = false;
        }
        std::vector<std::vector<double>> kept;
        for (std::size_t i = 0; i < m; ++i) {
            if (alive[i]) kept.push_back(std::move(pool[i]));
        }
        pool = std::move(kept);
        return to_matrix(pool);
    }

    /// Gaussian jitter per centroid (clamped to the data's bounding box), then
    /// an optional k change: add a random record or drop a random centroid.
    Matrix mutate(const Matrix& centroids, std::mt19937_64& rng) const {
        std::vector<std::vector<double>> rows;
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (std::size_t r = 0; r < centroids.rows(); ++r) {
            const auto src = centroids.row(r);
            std::vector<double> row(src.begin(), src.end());
            if (coin(rng) < cfg_.centroid_mutation_prob) {
                for (std::size_t j = 0; j < row.size(); ++j) {
                    const double step = gauss(rng) * cfg_.centroid_mutation_sigma * (hi_[j] - lo_[j]);
                    row[j] = std::clamp(row[j] + step, lo_[j], hi_[j]);
                }
            }
            rows.push_back(std::move(row));
        }
        if (coin(rng) < cfg_.k_mutation_prob) {
            const bool can_add = rows.size() < k_max_;
            const bool can_drop = rows.size() > k_min_;
            const bool add = can_add && (!can_drop || coin(rng) < 0.5);
            if (add) {
                const auto rec = data_.row(std::uniform_int_distribution<std::size_t>(0, data_.rows() - 1)(rng));
                rows.emplace_back(rec.begin(), rec.end());
            } else if (can_drop) {
                const auto victim = std::uniform_int_distribution<std::size_t>(0, rows.size() - 1)(rng);
                rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(victim));
            }
        }
        return to_matrix(rows);
    }

    /// A few Lloyd steps; the individual carries the refined centroids forward.
    Individual refine(const Matrix& centroids) const { return lloyd(centroids, cfg_.refinement_iterations); }

    /// Lloyd iteration until the assignment stops changing (or the cap).
    Individual finalize(const Matrix& centroids) const { return lloyd(centroids, cfg_.finalize_iterations); }

    Individual offspring(const std::vector<Individual>& pop, std::size_t generation, std::size_t slot) const {
        auto rng = stream_rng(cfg_.seed, generation, slot);
        const std::size_t a = select(pop, rng);
        const std::size_t b = select(pop, rng);
        Matrix child = crossover(pop[a].clustering.centroids, pop[b].clustering.centroids, rng);
        child = mutate(child, rng);
        return refine(child);
    }

    /// Population indices ordered best first; ties keep the lower index first.
    static std::vector<std::size_t> ranking(const std::vector<Individual>& pop) {
        std::vector<std::size_t> order(pop.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t x, std::size_t y) { return pop[x].fitness > pop[y].fitness; });
        return order;
    }

private:
    Individual lloyd(const Matrix& centroids, std::size_t iterations) const {
        auto run = kmeans(data_, centroids, iterations, 0.0);
        Individual ind;
        ind.clustering = std::move(run.clustering);
        ind.fitness = objective(data_, ind.clustering, k_min_ == k_max_);
        ind.converged = run.converged;
        return ind;
    }

    static bool better(const std::vector<Individual>& pop, std::size_t x, std::size_t y) {
        return pop[x].fitness > pop[y].fitness || (pop[x].fitness == pop[y].fitness && x < y);
    }

    static void copy_row(std::span<const double> src, std::span<double> dst) {
        std::copy(src.begin(), src.end(), dst.begin());
    }

    Matrix to_matrix(const std::vector<std::vector<double>>& rows) const {
        Matrix out(rows.size(), data_.cols());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            copy_row(rows[r], out.row(r));
        }
        return out;
    }

    const Matrix& data_;
    const GAConfig& cfg_;
    std::size_t k_min_;
    std::size_t k_max_;
    std::vector<double> lo_;
    std::vector<double> hi_;
};

inline bool all_records_identical(const Matrix& data) {
    for (std::size_t i = 1; i < data.rows(); ++i) {
        if (!std::equal(data.row(i).begin(), data.row(i).end(), data.row(0).begin())) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/// Genetic search over variable-k centroid sets with Lloyd refinement, scored
/// by objective(). The initial population is run to Lloyd fixpoints; offspring
/// get `refinement_iterations` Lloyd steps; the returned clustering is the
/// fittest fixpoint among the finalized best of the last generation and the
/// initial population. k is chosen by the search within [k_min, k_max]. The
/// result is a pure function of (data, cfg); `cfg.threads` only changes wall
/// time.
inline GAResult genetic_cluster(const Matrix& data, const GAConfig& cfg) {
    validate(cfg);
    if (data.rows() == 0 || data.cols() == 0) {
        throw DataError("genetic clustering: empty data");
    }
    if (!data.all_finite()) {
        throw DataError("genetic clustering: non-finite input");
    }
    const auto [k_min, k_max] = resolve_k_range(cfg, data.rows());

    GAResult result;
    if (detail::all_records_identical(data)) {
        Matrix init(k_min, data.cols());
        for (std::size_t c = 0; c < k_min; ++c) {
            std::copy(data.row(c).begin(), data.row(c).end(), init.row(c).begin());
        }
        result.clustering = kmeans(data, init, 1, 0.0).clustering;
        result.fitness = objective(data, result.clustering, k_min == k_max);
        result.degenerate = true;
        result.warnings.push_back("all records are identical; returning k = k_min = " + std::to_string(k_min));
        return result;
    }

    const detail::GeneticClusterer ga(data, cfg, k_min, k_max);
    std::vector<detail::Individual> population(cfg.population_size);
    detail::parallel_for(population.size(), cfg.threads,
                         [&](std::size_t i) { population[i] = ga.init_individual(i); });

    const std::vector<detail::Individual> initial = population;
    for (const auto& ind : initial) {
        result.initial_fitness.push_back(ind.fitness);
    }
    auto best_of = [](const std::vector<detail::Individual>& pop) {
        return pop[detail::GeneticClusterer::ranking(pop).front()].fitness;
    };
    result.best_fitness_per_generation.push_back(best_of(population));

    for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
        const auto order = detail::GeneticClusterer::ranking(population);
        std::vector<detail::Individual> next(population.size());
        for (std::size_t e = 0; e < cfg.elitism_count; ++e) {
            next[e] = population[order[e]];
        }
        detail::parallel_for(population.size() - cfg.elitism_count, cfg.threads, [&](std::size_t i) {
            const std::size_t slot = cfg.elitism_count + i;
            next[slot] = ga.offspring(population, gen, slot);
        });
        population = std::move(next);
        result.best_fitness_per_generation.push_back(best_of(population));
    }

    // Candidates are Lloyd fixpoints: the finalized best of the last generation
    // and the (already finalized) initial population.
    std::vector<detail::Individual> candidates{
        ga.finalize(population[detail::GeneticClusterer::ranking(population).front()].clustering.centroids)};
    candidates.insert(candidates.end(), initial.begin(), initial.end());
    const auto& best = candidates[detail::GeneticClusterer::ranking(candidates).front()];
    result.clustering = best.clustering;
    result.fitness = best.fitness;
    result.converged = best.converged;
    if (!best.converged) {
        result.warnings.push_back("Lloyd finalization hit the iteration cap before converging");
    }
    return result;
}

} // namespace ontoclust

#endif // ONTOCLUST_GENETIC_HPP
