#ifndef ONTOCLUST_ONTOLOGY_HPP
#define ONTOCLUST_ONTOLOGY_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "text.hpp"

namespace ontoclust {

/// Parent value of top-level concepts. The name is reserved.
inline constexpr std::string_view kRootConcept = "ROOT";

struct Concept {
    std::string name;
    int level = 1;
    std::string parent;                 ///< parent concept name or kRootConcept
    std::optional<std::string> column;  ///< dataset column, present iff level == 1

    friend bool operator==(const Concept&, const Concept&) = default;
};

/// A level-stratified concept tree. Level 1 concepts are leaves bound to dataset
/// columns; every concept at level l < depth has its parent at level l + 1 and
/// the depth-level concepts hang off the implicit root.
///
/// Immutable after construction. Concepts keep file declaration order, which
/// fixes the column order of every projected dataset.
class Ontology {
public:
    /// Parses the line-based ontology format:
    ///
    ///     concept<TAB>NAME<TAB>level=<int><TAB>parent=<NAME|ROOT>[<TAB>column=<COLUMN>]
    ///
    /// Blank lines and `#` comments are skipped. Parent references may point
    /// forward. Throws OntologyError on the first violation found.
    static Ontology parse(std::string_view text) {
        std::vector<Concept> concepts;
        std::vector<std::size_t> lines;
        const auto raw_lines = text::split_lines(text);
        for (std::size_t i = 0; i < raw_lines.size(); ++i) {
            const std::size_t line_no = i + 1;
            const auto stripped = text::trim(raw_lines[i]);
            if (stripped.empty() || stripped.front() == '#') {
                continue;
            }
            concepts.push_back(parse_line(raw_lines[i], line_no));
            lines.push_back(line_no);
        }
        return Ontology(std::move(concepts), lines);
    }

    /// Builds and validates from concept records. Validation is identical to parse.
    static Ontology from_concepts(std::vector<Concept> concepts) {
        for (auto& c : concepts) {
            c.name = std::string(text::trim(c.name));
            c.parent = std::string(text::trim(c.parent));
            if (c.column) {
                c.column = std::string(text::trim(*c.column));
            }
        }
        return Ontology(std::move(concepts), {});
    }

    /// Renders the ontology in its file format. parse(serialize()) == *this.
    std::string serialize() const {
        std::string out;
        for (const auto& c : concepts_) {
            out += "concept\t";
            out += text::quote_tab_value(c.name);
            out += "\tlevel=" + std::to_string(c.level);
            out += "\tparent=";
            out += c.parent == kRootConcept ? std::string(kRootConcept) : text::quote_tab_value(c.parent);
            if (c.column) {
                out += "\tcolumn=" + text::quote_tab_value(*c.column);
            }
            out += '\n';
        }
        return out;
    }

    int depth() const noexcept { return depth_; }

    const std::vector<Concept>& concepts() const noexcept { return concepts_; }

    std::vector<Concept> concepts_at_level(int level) const {
        check_level(level);
        std::vector<Concept> out;
        for (std::size_t idx : by_level_[static_cast<std::size_t>(level - 1)]) {
            out.push_back(concepts_[idx]);
        }
        return out;
    }

    /// Number of concepts at each level, index 0 = level 1.
    std::vector<std::size_t> level_sizes() const {
        std::vector<std::size_t> out;
        for (const auto& level : by_level_) {
            out.push_back(level.size());
        }
        return out;
    }

    std::vector<Concept> children_of(std::string_view name) const {
        std::vector<Concept> out;
        for (std::size_t idx : children_[index_of(name)]) {
            out.push_back(concepts_[idx]);
        }
        return out;
    }

    const Concept& find(std::string_view name) const { return concepts_[index_of(name)]; }

    bool contains(std::string_view name) const { return index_.find(std::string(name)) != index_.end(); }

    /// Index into concepts() for a name; throws unknown_concept.
    std::size_t index_of(std::string_view name) const {
        const auto it = index_.find(std::string(name));
        if (it == index_.end()) {
            throw OntologyError(OntologyErrc::unknown_concept, "'" + std::string(name) + "'");
        }
        return it->second;
    }

    /// Declaration-ordered child indices of concepts()[idx].
    const std::vector<std::size_t>& child_indices(std::size_t idx) const { return children_.at(idx); }

    /// Declaration-ordered concept indices at a level.
    const std::vector<std::size_t>& level_indices(int level) const {
        check_level(level);
        return by_level_[static_cast<std::size_t>(level - 1)];
    }

    friend bool operator==(const Ontology& a, const Ontology& b) { return a.concepts_ == b.concepts_; }

private:
    Ontology(std::vector<Concept> concepts, const std::vector<std::size_t>& lines)
        : concepts_(std::move(concepts)) {
        validate(lines);
    }

    void check_level(int level) const {
        if (level < 1 || level > depth_) {
            throw OntologyError(OntologyErrc::level_out_of_range,
                                "level " + std::to_string(level) + " not in 1.." + std::to_string(depth_));
        }
    }

    static Concept parse_line(std::string_view line, std::size_t line_no) {
        const auto fields = text::split_tab_fields(line);
        if (!fields) {
            throw OntologyError(OntologyErrc::syntax, "unterminated quote", line_no);
        }
        if (fields->size() < 4 || fields->size() > 5) {
            throw OntologyError(OntologyErrc::syntax,
                                "expected 4 or 5 tab-separated fields, found " + std::to_string(fields->size()),
                                line_no);
        }
        if (text::trim((*fields)[0]) != "concept") {
            throw OntologyError(OntologyErrc::syntax, "line must start with 'concept'", line_no);
        }

        Concept c;
        c.name = std::string(text::trim((*fields)[1]));

        const auto level = text::key_value((*fields)[2], "level");
        const auto level_value = level ? text::parse_integer(*level) : std::nullopt;
        if (!level_value) {
            throw OntologyError(OntologyErrc::syntax, "expected level=<int>", line_no);
        }
        if (*level_value < 1 || *level_value > 1'000'000) {
            throw OntologyError(OntologyErrc::syntax, "level must be >= 1", line_no);
        }
        c.level = static_cast<int>(*level_value);

        const auto parent = text::key_value((*fields)[3], "parent");
        if (!parent) {
            throw OntologyError(OntologyErrc::syntax, "expected parent=<NAME|ROOT>", line_no);
        }
        c.parent = std::string(text::trim(*parent));

        if (fields->size() == 5) {
            const auto column = text::key_value((*fields)[4], "column");
            if (!column) {
                throw OntologyError(OntologyErrc::syntax, "expected column=<COLUMN>", line_no);
            }
            c.column = std::string(text::trim(*column));
        }
        return c;
    }

    void validate(const std::vector<std::size_t>& lines) {
        auto line_of = [&](std::size_t idx) -> std::size_t { return idx < lines.size() ? lines[idx] : 0; };

        if (concepts_.empty()) {
            throw OntologyError(OntologyErrc::empty, "no concepts declared");
        }

        for (std::size_t i = 0; i < concepts_.size(); ++i) {
            const auto& c = concepts_[i];
            if (c.name.empty()) {
                throw OntologyError(OntologyErrc::syntax, "empty concept name", line_of(i));
            }
            if (c.name == kRootConcept) {
                throw OntologyError(OntologyErrc::syntax, "'ROOT' is reserved", line_of(i));
            }
            if (c.parent.empty()) {
                throw OntologyError(OntologyErrc::syntax, "empty parent", line_of(i));
            }
            if (c.level < 1) {
                throw OntologyError(OntologyErrc::syntax, "level must be >= 1", line_of(i));
            }
            if (c.column && c.column->empty()) {
                throw OntologyError(OntologyErrc::syntax, "empty column binding", line_of(i));
            }
            if (!index_.emplace(c.name, i).second) {
                throw OntologyError(OntologyErrc::duplicate_name, "'" + c.name + "'", line_of(i));
            }
        }

        std::map<std::string, std::size_t> columns;
        for (std::size_t i = 0; i < concepts_.size(); ++i) {
            const auto& c = concepts_[i];
            if (c.column && !columns.emplace(*c.column, i).second) {
                throw OntologyError(OntologyErrc::duplicate_column, "'" + *c.column + "'", line_of(i));
            }
        }

        depth_ = 0;
        for (const auto& c : concepts_) {
            depth_ = std::max(depth_, c.level);
        }

        by_level_.assign(static_cast<std::size_t>(depth_), {});
        for (std::size_t i = 0; i < concepts_.size(); ++i) {
            by_level_[static_cast<std::size_t>(concepts_[i].level - 1)].push_back(i);
        }
        for (int level = 1; level <= depth_; ++level) {
            if (by_level_[static_cast<std::size_t>(level - 1)].empty()) {
                throw OntologyError(OntologyErrc::empty_level, "no concepts at level " + std::to_string(level));
            }
        }

        children_.assign(concepts_.size(), {});
        for (std::size_t i = 0; i < concepts_.size(); ++i) {
            const auto& c = concepts_[i];
            if (c.parent == kRootConcept) {
                if (c.level != depth_) {
                    throw OntologyError(OntologyErrc::level_skip,
                                        "'" + c.name + "' at level " + std::to_string(c.level) +
                                            " attaches to ROOT but the top level is " + std::to_string(depth_),
                                        line_of(i));
                }
                continue;
            }
            const auto it = index_.find(c.parent);
            if (it == index_.end()) {
                throw OntologyError(OntologyErrc::missing_parent,
                                    "'" + c.name + "' names unknown parent '" + c.parent + "'", line_of(i));
            }
            if (it->second == i) {
                throw OntologyError(OntologyErrc::cycle, "'" + c.name + "' is its own parent", line_of(i));
            }
            const auto& parent = concepts_[it->second];
            if (parent.level != c.level + 1) {
                throw OntologyError(OntologyErrc::level_skip,
                                    "'" + c.name + "' at level " + std::to_string(c.level) + " has parent '" +
                                        parent.name + "' at level " + std::to_string(parent.level),
                                    line_of(i));
            }
            children_[it->second].push_back(i);
        }
        // Strict stratification already rules out longer cycles: levels strictly
        // increase along parent links.


        for (std::size_t i = 0; i < concepts_.size(); ++i) {
            const auto& c = concepts_[i];
            if (c.level == 1) {
                if (!c.column) {
                    throw OntologyError(OntologyErrc::leaf_without_column, "'" + c.name + "'", line_of(i));
                }
            } else {
                if (c.column) {
                    throw OntologyError(OntologyErrc::nonleaf_with_column, "'" + c.name + "'", line_of(i));
                }
                if (children_[i].empty()) {
                    throw OntologyError(OntologyErrc::leaf_without_column,
                                        "'" + c.name + "' at level " + std::to_string(c.level) +
                                            " has no children and cannot bind a column",
                                        line_of(i));
                }
            }
        }
    }

    std::vector<Concept> concepts_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::vector<std::size_t>> by_level_;
    int depth_ = 0;
};

} // namespace ontoclust

#endif // ONTOCLUST_ONTOLOGY_HPP
