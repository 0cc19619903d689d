#ifndef ONTOCLUST_PIPELINE_HPP
#define ONTOCLUST_PIPELINE_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clustering.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "evaluation.hpp"
#include "genetic.hpp"
#include "ontology.hpp"
#include "projection.hpp"
#include "report_io.hpp"

namespace ontoclust {

/// Re-throws an ontoclust::Error with a "[stage] " prefix and the same category.
template <typename Fn>
auto staged(std::string_view stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.category(), "[" + std::string(stage) + "] " + e.what());
    }
}

inline std::string read_file(const std::filesystem::path& path, ErrorCategory category) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(category, "cannot read '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct PipelineInput {
    std::string dataset_name = "dataset";
    std::string csv;
    std::string ontology;
    Schema schema;
    GAConfig ga;
    SseSpace space = SseSpace::original;
};

struct PipelineOutput {
    IngestReport ingest;
    Ontology ontology;
    std::vector<LevelDataset> levels;
    std::vector<GAResult> clusterings;  ///< index 0 = level 1
    EvaluationReport report;
};

/// load -> normalize -> project every level -> cluster each level -> evaluate.
inline PipelineOutput run_pipeline(const PipelineInput& in) {
    auto ontology = staged("ontology", [&] { return Ontology::parse(in.ontology); });
    auto loaded = staged("load", [&] { return load_csv(in.csv, in.schema); });
    auto normalized = staged("normalize", [&] { return normalize(loaded.matrix); });
    auto levels = staged("project", [&] { return project_all(normalized, ontology); });

    std::vector<GAResult> results;
    std::vector<Clustering> clusterings;
    for (const auto& level : levels) {
        results.push_back(staged("cluster L" + std::to_string(level.level),
                                 [&] { return genetic_cluster(level.values, in.ga); }));
        clusterings.push_back(results.back().clustering);
    }
    auto report = staged("evaluate", [&] { return build_report(in.dataset_name, clusterings, levels, in.space); });
    return {std::move(loaded.report), std::move(ontology), std::move(levels), std::move(results), std::move(report)};
}

struct EmitOptions {
    bool levels = false;
    bool assignments = false;
};

/// Files produced for a run, as (relative name, content). Building the whole
/// set before touching the disk keeps failed runs from leaving partial output.
inline std::vector<std::pair<std::string, std::string>> run_artifacts(const PipelineOutput& out, EmitOptions emit) {
    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back("report.json", report_to_json_text(out.report));
    files.emplace_back("table_sse.csv", sse_table_csv(out.report));
    files.emplace_back("table_improvement.csv", improvement_table_csv(out.report));
    files.emplace_back("table_clusters.csv", cluster_count_csv(out.report));
    for (std::size_t i = 0; i < out.levels.size(); ++i) {
        const auto suffix = std::to_string(out.levels[i].level) + ".csv";
        if (emit.levels) {
            files.emplace_back("level_" + suffix, level_dataset_csv(out.levels[i]));
        }
        if (emit.assignments) {
            files.emplace_back("assignments_level_" + suffix, assignments_csv(out.clusterings[i].clustering.assignments));
        }
    }
    return files;
}

inline void write_files(const std::filesystem::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw UsageError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    for (const auto& [name, content] : files) {
        std::ofstream os(dir / name, std::ios::binary);
        os << content;
        if (!os) {
            throw UsageError("cannot write '" + (dir / name).string() + "'");
        }
    }
}

} // namespace ontoclust

#endif // ONTOCLUST_PIPELINE_HPP
