#ifndef ONTOCLUST_REPORT_IO_HPP
#define ONTOCLUST_REPORT_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "clustering.hpp"
#include "error.hpp"
#include "evaluation.hpp"
#include "projection.hpp"
#include "text.hpp"

namespace ontoclust {

inline nlohmann::ordered_json report_to_json(const EvaluationReport& r) {
    nlohmann::ordered_json j;
    j["dataset"] = r.dataset;
    j["sse_space"] = to_string(r.space);
    auto& levels = j["levels"] = nlohmann::ordered_json::array();
    for (const auto& l : r.levels) {
        levels.push_back({{"level", l.level},
                          {"k", l.k},
                          {"sse_original_space", l.sse_original_space},
                          {"sse_level_space", l.sse_level_space}});
    }
    auto& steps = j["step_improvements"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.step_improvements.size(); ++i) {
        steps.push_back({{"from_level", r.levels[i].level},
                         {"to_level", r.levels[i + 1].level},
                         {"percent", r.step_improvements[i]}});
    }
    j["total_improvement"] = r.total_improvement;
    return j;
}

inline std::string report_to_json_text(const EvaluationReport& r) { return report_to_json(r).dump(2) + "\n"; }

/// Inverse of report_to_json_text. Numbers are carried at full precision, so
/// the round trip is exact.
inline EvaluationReport report_from_json_text(std::string_view content) {
    try {
        const auto j = nlohmann::json::parse(content);
        EvaluationReport r;
        r.dataset = j.at("dataset").get<std::string>();
        const auto space = parse_sse_space(j.at("sse_space").get<std::string>());
        if (!space) {
            throw DataError("report: unknown sse_space");
        }
        r.space = *space;
        for (const auto& l : j.at("levels")) {
            r.levels.push_back({l.at("level").get<int>(), l.at("k").get<std::size_t>(),
                                l.at("sse_original_space").get<double>(), l.at("sse_level_space").get<double>()});
        }
        for (const auto& s : j.at("step_improvements")) {
            r.step_improvements.push_back(s.at("percent").get<double>());
        }
        r.total_improvement = j.at("total_improvement").get<double>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("report: malformed JSON: ") + e.what());
    }
}

/// Per-level SSE table (one row per level).
inline std::string sse_table_csv(const EvaluationReport& r) {
    std::string out = "level,k,sse_original_space,sse_level_space\n";
    for (const auto& l : r.levels) {
        out += std::to_string(l.level) + "," + std::to_string(l.k) + "," + text::format_real(l.sse_original_space) +
               "," + text::format_real(l.sse_level_space) + "\n";
    }
    return out;
}

/// Step and total improvements in percent, rounded to two decimals.
inline std::string improvement_table_csv(const EvaluationReport& r) {
    std::string out = "step,percent\n";
    for (std::size_t i = 0; i < r.step_improvements.size(); ++i) {
        out += "L" + std::to_string(r.levels[i].level) + " to L" + std::to_string(r.levels[i + 1].level) + "," +
               text::format_fixed2(r.step_improvements[i]) + "\n";
    }
    out += "Total," + text::format_fixed2(r.total_improvement) + "\n";
    return out;
}

inline std::string cluster_count_csv(const EvaluationReport& r) {
    std::string out = "level,k\n";
    for (const auto& l : r.levels) {
        out += "L" + std::to_string(l.level) + "," + std::to_string(l.k) + "\n";
    }
    return out;
}

/// Human-readable summary in the shape of the SSE / improvement / k tables.
inline std::string report_summary(const EvaluationReport& r) {
    std::string out = "dataset: " + r.dataset + "  (SSE space: " + to_string(r.space) + ")\n";
    out += "level  k    SSE\n";
    for (const auto& l : r.levels) {
        std::string k = std::to_string(l.k);
        k.resize(std::max<std::size_t>(k.size(), 4), ' ');
        out += "L" + std::to_string(l.level) + "     " + k + " " + text::format_fixed2(l.sse(r.space)) + "\n";
    }
    for (std::size_t i = 0; i < r.step_improvements.size(); ++i) {
        out += "L" + std::to_string(r.levels[i].level) + " to L" + std::to_string(r.levels[i + 1].level) + ": " +
               text::format_fixed2(r.step_improvements[i]) + "%\n";
    }
    out += "Total: " + text::format_fixed2(r.total_improvement) + "%\n";
    return out;
}

inline std::string level_dataset_csv(const LevelDataset& ds) {
    std::string out;
    for (std::size_t j = 0; j < ds.concept_names.size(); ++j) {
        out += (j ? "," : "") + text::csv_escape(ds.concept_names[j]);
    }
    out += '\n';
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        for (std::size_t j = 0; j < ds.cols(); ++j) {
            out += (j ? "," : "") + text::format_real(ds.values(i, j));
        }
        out += '\n';
    }
    return out;
}

inline std::string assignments_csv(std::span<const std::size_t> assignments) {
    std::string out = "record,cluster\n";
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        out += std::to_string(i) + "," + std::to_string(assignments[i]) + "\n";
    }
    return out;
}

/// Reads `record,cluster` rows; records must be 0..n-1 in order.
inline std::vector<std::size_t> assignments_from_csv(std::string_view content) {
    const auto rows = text::parse_csv(content);
    if (rows.empty() || rows.front().size() != 2) {
        throw DataError("assignments: expected header record,cluster");
    }
    std::vector<std::size_t> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto rec = rows[r].size() == 2 ? text::parse_integer(rows[r][0]) : std::nullopt;
        const auto cluster = rows[r].size() == 2 ? text::parse_integer(rows[r][1]) : std::nullopt;
        if (!rec || !cluster || *cluster < 0 || *rec != static_cast<long long>(out.size())) {
            throw DataError("assignments: bad row " + std::to_string(r));
        }
        out.push_back(static_cast<std::size_t>(*cluster));
    }
    if (out.empty()) {
        throw DataError("assignments: no rows");
    }
    return out;
}

} // namespace ontoclust

#endif // ONTOCLUST_REPORT_IO_HPP
