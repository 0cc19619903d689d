#ifndef ONTOCLUST_DATASET_HPP
#define ONTOCLUST_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"
#include "text.hpp"

namespace ontoclust {

enum class ColumnRole { feature, identifier, class_label, excluded };

inline const char* to_string(ColumnRole role) {
    switch (role) {
        case ColumnRole::feature: return "feature";
        case ColumnRole::identifier: return "id";
        case ColumnRole::class_label: return "class";
        case ColumnRole::excluded: return "excluded";
    }
    return "?";
}

inline std::optional<ColumnRole> parse_role(std::string_view s) {
    s = text::trim(s);
    if (s == "feature") return ColumnRole::feature;
    if (s == "id") return ColumnRole::identifier;
    if (s == "class") return ColumnRole::class_label;
    if (s == "excluded") return ColumnRole::excluded;
    return std::nullopt;
}

/// Column name -> role. Columns absent from the schema are features.
using Schema = std::map<std::string, ColumnRole, std::less<>>;

/// Parses `column<TAB>NAME<TAB>role=<feature|id|class|excluded>` lines.
inline Schema parse_schema(std::string_view content) {
    Schema schema;
    const auto lines = text::split_lines(content);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto where = "schema line " + std::to_string(i + 1) + ": ";
        const auto stripped = text::trim(lines[i]);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        const auto fields = text::split_tab_fields(lines[i]);
        if (!fields || fields->size() != 3 || text::trim((*fields)[0]) != "column") {
            throw DataError(where + "expected column<TAB>NAME<TAB>role=<feature|id|class|excluded>");
        }
        const std::string name(text::trim((*fields)[1]));
        const auto role_text = text::key_value((*fields)[2], "role");
        const auto role = role_text ? parse_role(*role_text) : std::nullopt;
        if (name.empty() || !role) {
            throw DataError(where + "bad column name or role");
        }
        if (!schema.emplace(name, *role).second) {
            throw DataError(where + "duplicate column '" + name + "'");
        }
    }
    return schema;
}

/// n records x d feature columns with unique column names.
class DataMatrix {
public:
    DataMatrix(std::vector<std::string> column_names, Matrix values, bool normalized = false)
        : names_(std::move(column_names)), values_(std::move(values)), normalized_(normalized) {
        if (values_.rows() == 0 || values_.cols() == 0) {
            throw DataError("data matrix needs at least one record and one feature column");
        }
        if (names_.size() != values_.cols()) {
            throw InvariantError("column name count does not match matrix width");
        }
        std::set<std::string_view> seen;
        for (const auto& n : names_) {
            if (!seen.insert(n).second) {
                throw DataError("duplicate column name '" + n + "'");
            }
        }
        if (!values_.all_finite()) {
            throw DataError("data matrix contains non-finite values");
        }
    }

    const std::vector<std::string>& column_names() const noexcept { return names_; }
    const Matrix& values() const noexcept { return values_; }
    std::size_t rows() const noexcept { return values_.rows(); }
    std::size_t cols() const noexcept { return values_.cols(); }
    bool normalized() const noexcept { return normalized_; }

    std::optional<std::size_t> column_index(std::string_view name) const {
        const auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - names_.begin());
    }

    friend bool operator==(const DataMatrix&, const DataMatrix&) = default;

private:
    std::vector<std::string> names_;
    Matrix values_;
    bool normalized_;
};

struct ExcludedColumn {
    std::string name;
    std::string reason;  ///< "role:<role>" or "constant"

    friend bool operator==(const ExcludedColumn&, const ExcludedColumn&) = default;
};

struct IngestReport {
    std::size_t rows_read = 0;
    std::size_t rows_dropped = 0;
    std::vector<ExcludedColumn> columns_excluded;
    std::vector<std::string> warnings;

    friend bool operator==(const IngestReport&, const IngestReport&) = default;
};

/// What to do with a non-empty feature token that is not a number and not one
/// of the missing-value markers.
enum class NonNumericPolicy { drop_row, reject };

struct LoadOptions {
    NonNumericPolicy non_numeric = NonNumericPolicy::drop_row;
};

struct LoadResult {
    DataMatrix matrix;
    IngestReport report;
};

inline bool is_missing_marker(std::string_view token) {
    token = text::trim(token);
    return token.empty() || token == "?" || token == "NA" || token == "N/A" || token == "NaN" || token == "nan" ||
           token == "null";
}

/// Reads a CSV with a header row, keeps feature columns in header order, drops
/// records with a missing or unparseable feature and excludes features that are
/// constant over the surviving records.
inline LoadResult load_csv(std::string_view content, const Schema& schema = {}, LoadOptions options = {}) {
    const auto rows = text::parse_csv(content);
    if (rows.empty()) {
        throw DataError("empty CSV file");
    }
    std::vector<std::string> header;
    for (const auto& h : rows.front()) {
        header.emplace_back(text::trim(h));
    }
    {
        std::set<std::string_view> seen;
        for (const auto& h : header) {
            if (h.empty()) {
                throw DataError("empty column name in CSV header");
            }
            if (!seen.insert(h).second) {
                throw DataError("duplicate column '" + h + "' in CSV header");
            }
        }
    }
    for (const auto& [name, role] : schema) {
        if (std::find(header.begin(), header.end(), name) == header.end()) {
            throw DataError("schema names column '" + name + "' which is not in the CSV header");
        }
    }

    IngestReport report;
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto it = schema.find(header[c]);
        const auto role = it == schema.end() ? ColumnRole::feature : it->second;
        if (role == ColumnRole::feature) {
            feature_cols.push_back(c);
        } else {
            report.columns_excluded.push_back({header[c], std::string("role:") + to_string(role)});
        }
    }
    if (feature_cols.empty()) {
        throw DataError("no feature columns declared");
    }

    std::vector<std::vector<double>> kept;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        ++report.rows_read;
        if (row.size() != header.size()) {
            throw DataError("csv record " + std::to_string(r) + " has " + std::to_string(row.size()) +
                            " fields, header has " + std::to_string(header.size()));
        }
        std::vector<double> values;
        values.reserve(feature_cols.size());
        bool drop = false;
        for (std::size_t c : feature_cols) {
            const auto& token = row[c];
            if (is_missing_marker(token)) {
                drop = true;
                break;
            }
            const auto v = text::parse_real(token);
            if (!v) {
                if (options.non_numeric == NonNumericPolicy::reject) {
                    throw DataError("csv record " + std::to_string(r) + ": non-numeric value '" + token +
                                    "' in feature column '" + header[c] + "'");
                }
                drop = true;
                break;
            }
            values.push_back(*v);
        }
        if (drop) {
            ++report.rows_dropped;
            continue;
        }
        kept.push_back(std::move(values));
    }
    if (kept.empty()) {
        throw DataError("no records survive missing-value filtering");
    }

    std::vector<std::size_t> surviving;
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
        const double first = kept.front()[j];
        const bool constant =
            std::all_of(kept.begin(), kept.end(), [&](const auto& rec) { return rec[j] == first; });
        const auto& name = header[feature_cols[j]];
        if (constant) {
            report.columns_excluded.push_back({name, "constant"});
            report.warnings.push_back("column '" + name + "' is constant across all records and was excluded");
            continue;
        }
        surviving.push_back(j);
    }
    if (surviving.empty()) {
        throw DataError("no feature columns survive (all constant)");
    }

    std::vector<std::string> names;
    Matrix values(kept.size(), surviving.size());
    for (std::size_t j = 0; j < surviving.size(); ++j) {
        names.push_back(header[feature_cols[surviving[j]]]);
        for (std::size_t i = 0; i < kept.size(); ++i) {
            values(i, j) = kept[i][surviving[j]];
        }
    }

    // Sequential identifiers are only detectable, not removable: roles decide.
    for (std::size_t j = 0; j < names.size(); ++j) {
        bool sequential = values.rows() > 2;
        for (std::size_t i = 0; sequential && i < values.rows(); ++i) {
            const double v = values(i, j);
            sequential = v == std::floor(v) && (i == 0 || v == values(i - 1, j) + 1.0);
        }
        if (sequential) {
            report.warnings.push_back("column '" + names[j] +
                                      "' is a strictly sequential integer; declare role=id if it is an identifier");
        }
    }

    return {DataMatrix(std::move(names), std::move(values), false), std::move(report)};
}

/// Per-column min-max rescaling onto [0, 1]. Column extremes map to exactly
/// 0 and 1. Already-normalized input is returned unchanged.
inline DataMatrix normalize(const DataMatrix& m) {
    if (m.normalized()) {
        return m;
    }
    const auto& in = m.values();
    Matrix out(in.rows(), in.cols());
    for (std::size_t j = 0; j < in.cols(); ++j) {
        double lo = in(0, j);
        double hi = in(0, j);
        for (std::size_t i = 1; i < in.rows(); ++i) {
            lo = std::min(lo, in(i, j));
            hi = std::max(hi, in(i, j));
        }
        if (!(hi > lo)) {
            throw InvariantError("normalize: column '" + m.column_names()[j] +
                                 "' is constant; it should have been excluded at load");
        }
        // Halving keeps the span finite for inputs near the double range limits.
        const bool halve = !std::isfinite(hi - lo);
        const double span = halve ? hi / 2 - lo / 2 : hi - lo;
        for (std::size_t i = 0; i < in.rows(); ++i) {
            const double v = in(i, j);
            double scaled;
            if (v == lo) {
                scaled = 0.0;
            } else if (v == hi) {
                scaled = 1.0;
            } else {
                scaled = halve ? (v / 2 - lo / 2) / span : (v - lo) / span;
                scaled = std::clamp(scaled, 0.0, 1.0);
            }
            out(i, j) = scaled;
        }
    }
    return DataMatrix(m.column_names(), std::move(out), true);
}

} // namespace ontoclust

#endif // ONTOCLUST_DATASET_HPP
