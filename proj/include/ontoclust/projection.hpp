#ifndef ONTOCLUST_PROJECTION_HPP
#define ONTOCLUST_PROJECTION_HPP

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "matrix.hpp"
#include "ontology.hpp"

namespace ontoclust {

/// The records of a DataMatrix expressed over the concepts of one ontology level.
struct LevelDataset {
    int level = 1;
    std::vector<std::string> concept_names;
    Matrix values;

    std::size_t rows() const noexcept { return values.rows(); }
    std::size_t cols() const noexcept { return values.cols(); }

    friend bool operator==(const LevelDataset&, const LevelDataset&) = default;
};

namespace detail {

inline LevelDataset project_leaves(const DataMatrix& m, const Ontology& o) {
    const auto& leaves = o.level_indices(1);
    std::vector<std::size_t> source;
    source.reserve(leaves.size());
    LevelDataset out;
    out.level = 1;
    for (std::size_t idx : leaves) {
        const auto& leaf = o.concepts()[idx];
        const auto col = m.column_index(*leaf.column);
        if (!col) {
            throw DataError("ontology leaf '" + leaf.name + "' binds column '" + *leaf.column +
                            "' which is not a feature column of the dataset");
        }
        source.push_back(*col);
        out.concept_names.push_back(leaf.name);
    }
    out.values = Matrix(m.rows(), leaves.size());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < source.size(); ++j) {
            out.values(i, j) = m.values()(i, source[j]);
        }
    }
    return out;
}

/// Level l + 1 from level l: each concept takes the per-record mean of its
/// children's values.
inline LevelDataset project_up(const LevelDataset& below, const Ontology& o) {
    const int level = below.level + 1;
    const auto& lower = o.level_indices(below.level);
    const auto& upper = o.level_indices(level);

    // concept index -> column in `below`
    std::vector<std::size_t> column_of(o.concepts().size(), 0);
    for (std::size_t j = 0; j < lower.size(); ++j) {
        column_of[lower[j]] = j;
    }

    LevelDataset out;
    out.level = level;
    out.values = Matrix(below.rows(), upper.size());
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t idx : upper) {
        out.concept_names.push_back(o.concepts()[idx].name);
        std::vector<std::size_t> cols;
        for (std::size_t child : o.child_indices(idx)) {
            cols.push_back(column_of[child]);
        }
        groups.push_back(std::move(cols));
    }
    for (std::size_t i = 0; i < below.rows(); ++i) {
        const auto row = below.values.row(i);
        for (std::size_t g = 0; g < groups.size(); ++g) {
            CompensatedSum sum;
            double lo = row[groups[g].front()];
            double hi = lo;
            for (std::size_t c : groups[g]) {
                sum.add(row[c]);
                lo = std::min(lo, row[c]);
                hi = std::max(hi, row[c]);
            }
            // Clamp guards mean containment against the last rounding step.
            out.values(i, g) = std::clamp(sum.value() / static_cast<double>(groups[g].size()), lo, hi);
        }
    }
    return out;
}

inline void check_projection_level(const Ontology& o, int level) {
    if (level < 1 || level > o.depth()) {
        throw OntologyError(OntologyErrc::level_out_of_range,
                            "projection level " + std::to_string(level) + " not in 1.." + std::to_string(o.depth()));
    }
}

} // namespace detail

/// Projects all levels 1..depth; level l is built from level l - 1.
inline std::vector<LevelDataset> project_all(const DataMatrix& m, const Ontology& o) {
    std::vector<LevelDataset> levels;
    levels.reserve(static_cast<std::size_t>(o.depth()));
    levels.push_back(detail::project_leaves(m, o));
    for (int level = 2; level <= o.depth(); ++level) {
        levels.push_back(detail::project_up(levels.back(), o));
    }
    return levels;
}

/// Dataset for one level. Level 1 selects and reorders the bound leaf columns;
/// higher levels average children recursively, not leaf descendants.
inline LevelDataset project(const DataMatrix& m, const Ontology& o, int level) {
    detail::check_projection_level(o, level);
    auto current = detail::project_leaves(m, o);
    while (current.level < level) {
        current = detail::project_up(current, o);
    }
    return current;
}

} // namespace ontoclust

#endif // ONTOCLUST_PROJECTION_HPP
