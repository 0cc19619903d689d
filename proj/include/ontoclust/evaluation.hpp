#ifndef ONTOCLUST_EVALUATION_HPP
#define ONTOCLUST_EVALUATION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clustering.hpp"
#include "error.hpp"
#include "matrix.hpp"
#include "projection.hpp"

namespace ontoclust {

/// Which attribute matrix scores a level's clustering when computing improvements.
enum class SseSpace {
    original,  ///< the level-1 (normalized leaf) matrix, shared by all levels
    level,     ///< the level's own projected matrix
};

inline const char* to_string(SseSpace space) { return space == SseSpace::original ? "original" : "level"; }

inline std::optional<SseSpace> parse_sse_space(std::string_view s) {
    if (s == "original") return SseSpace::original;
    if (s == "level") return SseSpace::level;
    return std::nullopt;
}

struct LevelResult {
    int level = 1;
    std::size_t k = 0;
    double sse_original_space = 0.0;
    double sse_level_space = 0.0;

    double sse(SseSpace space) const { return space == SseSpace::original ? sse_original_space : sse_level_space; }

    friend bool operator==(const LevelResult&, const LevelResult&) = default;
};

struct EvaluationReport {
    std::string dataset;
    SseSpace space = SseSpace::original;
    std::vector<LevelResult> levels;       ///< ascending level
    std::vector<double> step_improvements; ///< percent, unrounded; size = levels - 1
    double total_improvement = 0.0;        ///< percent, unrounded

    friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

/// Sum of squared distances from each record to its cluster's member mean.
/// `k` defaults to max(assignment) + 1; every cluster 0..k-1 must be non-empty.
inline double sse(const Matrix& points, std::span<const std::size_t> assignments,
                  std::optional<std::size_t> k = std::nullopt) {
    if (assignments.size() != points.rows()) {
        throw DataError("sse: " + std::to_string(assignments.size()) + " assignments for " +
                        std::to_string(points.rows()) + " records");
    }
    if (points.rows() == 0) {
        throw DataError("sse: no records");
    }
    std::size_t clusters = 0;
    for (std::size_t a : assignments) {
        clusters = std::max(clusters, a + 1);
    }
    if (k) {
        if (clusters > *k) {
            throw DataError("sse: cluster id " + std::to_string(clusters - 1) + " out of range for k = " +
                            std::to_string(*k));
        }
        clusters = *k;
    }
    std::vector<std::size_t> counts;
    const Matrix means = member_means(points, assignments, clusters, &counts);
    for (std::size_t c = 0; c < clusters; ++c) {
        if (counts[c] == 0) {
            throw DataError("sse: cluster " + std::to_string(c) + " is empty");
        }
    }
    CompensatedSum total;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        total.add(squared_distance(points.row(i), means.row(assignments[i])));
    }
    return total.value();
}

/// Scores one level's clustering both on the level-1 matrix and on the level's
/// own matrix.
inline LevelResult evaluate_level(const LevelDataset& original, const LevelDataset& projected, const Clustering& c) {
    if (original.rows() != projected.rows() || c.assignments.size() != original.rows()) {
        throw DataError("evaluate_level: record counts disagree (" + std::to_string(original.rows()) + ", " +
                        std::to_string(projected.rows()) + ", " + std::to_string(c.assignments.size()) + ")");
    }
    LevelResult out;
    out.level = projected.level;
    out.k = c.k();
    out.sse_original_space = sse(original.values, c.assignments, c.k());
    out.sse_level_space = sse(projected.values, c.assignments, c.k());
    return out;
}

/// Percent decrease of SSE from one level to the next; negative is a decline.
inline double step_improvement(double sse_prev, double sse_next) {
    if (!(sse_prev > 0.0)) {
        throw DataError("step improvement undefined for previous SSE " + std::to_string(sse_prev));
    }
    return 100.0 * (sse_prev - sse_next) / sse_prev;
}

/// Sum of the unrounded step percentages.
inline double total_improvement(std::span<const double> steps) {
    if (steps.empty()) {
        throw DataError("total improvement needs at least one step");
    }
    return compensated_sum(steps);
}

/// Builds a report from per-level results already in ascending level order.
inline EvaluationReport report_from_levels(std::string dataset, std::vector<LevelResult> levels, SseSpace space) {
    if (levels.empty()) {
        throw DataError("report needs at least one level");
    }
    EvaluationReport report;
    report.dataset = std::move(dataset);
    report.space = space;
    report.levels = std::move(levels);
    for (std::size_t i = 1; i < report.levels.size(); ++i) {
        if (report.levels[i].level <= report.levels[i - 1].level) {
            throw DataError("report levels must be strictly ascending");
        }
        report.step_improvements.push_back(
            step_improvement(report.levels[i - 1].sse(space), report.levels[i].sse(space)));
    }
    report.total_improvement = report.step_improvements.empty() ? 0.0 : total_improvement(report.step_improvements);
    return report;
}

/// Per-level clusterings + level datasets (index 0 = level 1) -> report.
inline EvaluationReport build_report(std::string dataset, std::span<const Clustering> clusterings,
                                     std::span<const LevelDataset> levels, SseSpace space) {
    if (clusterings.empty() || clusterings.size() != levels.size()) {
        throw DataError("build_report: need one clustering per level dataset");
    }
    std::vector<LevelResult> results;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        results.push_back(evaluate_level(levels.front(), levels[i], clusterings[i]));
    }
    return report_from_levels(std::move(dataset), std::move(results), space);
}

} // namespace ontoclust

#endif // ONTOCLUST_EVALUATION_HPP
