// ontoclust: cluster a numerical dataset at every level of a domain ontology.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ontoclust/ontoclust.hpp"

namespace fs = std::filesystem;
using namespace ontoclust;

namespace {

struct GaFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> population;
    std::optional<std::size_t> generations;
    std::optional<std::size_t> k_min;
    std::optional<std::size_t> k_max;
    std::optional<std::size_t> threads;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "JSON file with genetic clustering parameters");
        app->add_option("--seed", seed, "random seed (default 0)");
        app->add_option("--population", population, "population size");
        app->add_option("--generations", generations, "number of generations");
        app->add_option("--k-min", k_min, "smallest number of clusters");
        app->add_option("--k-max", k_max, "largest number of clusters");
        app->add_option("--threads", threads, "worker threads (results do not depend on it)");
    }

    GAConfig resolve() const {
        GAConfig cfg;
        if (!config_path.empty()) {
            const auto text = read_file(config_path, ErrorCategory::usage);
            try {
                const auto j = nlohmann::json::parse(text);
                for (const auto& [key, value] : j.items()) {
                    if (key == "population_size") cfg.population_size = value.get<std::size_t>();
                    else if (key == "generations") cfg.generations = value.get<std::size_t>();
                    else if (key == "k_min") cfg.k_min = value.get<std::size_t>();
                    else if (key == "k_max") cfg.k_max = value.get<std::size_t>();
                    else if (key == "tournament_size") cfg.tournament_size = value.get<std::size_t>();
                    else if (key == "elitism_count") cfg.elitism_count = value.get<std::size_t>();
                    else if (key == "centroid_mutation_prob") cfg.centroid_mutation_prob = value.get<double>();
                    else if (key == "centroid_mutation_sigma") cfg.centroid_mutation_sigma = value.get<double>();
                    else if (key == "k_mutation_prob") cfg.k_mutation_prob = value.get<double>();
                    else if (key == "refinement_iterations") cfg.refinement_iterations = value.get<std::size_t>();
                    else if (key == "finalize_iterations") cfg.finalize_iterations = value.get<std::size_t>();
                    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
                    else if (key == "threads") cfg.threads = value.get<std::size_t>();
                    else throw UsageError("config: unknown key '" + key + "'");
                }
            } catch (const nlohmann::json::exception& e) {
                throw UsageError(std::string("config: ") + e.what());
            }
        }
        if (seed) cfg.seed = *seed;
        if (population) cfg.population_size = *population;
        if (generations) cfg.generations = *generations;
        if (k_min) cfg.k_min = *k_min;
        if (k_max) cfg.k_max = *k_max;
        if (threads) cfg.threads = *threads;
        validate(cfg);
        return cfg;
    }
};

struct DataFlags {
    std::string data;
    std::string ontology;
    std::string schema;

    Schema load_schema() const {
        if (schema.empty()) {
            return {};
        }
        return staged("schema", [&] { return parse_schema(read_file(schema, ErrorCategory::data)); });
    }
};

SseSpace parse_space(const std::string& s) {
    const auto space = parse_sse_space(s);
    if (!space) {
        throw UsageError("--sse-space must be 'original' or 'level'");
    }
    return *space;
}

int cmd_validate_ontology(const std::string& path) {
    const auto text = read_file(path, ErrorCategory::ontology);
    const auto o = Ontology::parse(text);
    std::string census;
    for (auto n : o.level_sizes()) {
        census += (census.empty() ? "" : "/") + std::to_string(n);
    }
    std::cout << "levels: " << census << ", depth " << o.depth() << "\n";
    return 0;
}

int cmd_project(const DataFlags& in, const std::string& out_dir, std::optional<int> only_level) {
    const auto ontology_text = read_file(in.ontology, ErrorCategory::ontology);
    const auto csv = read_file(in.data, ErrorCategory::data);
    const auto schema = in.load_schema();
    const auto o = staged("ontology", [&] { return Ontology::parse(ontology_text); });
    const auto loaded = staged("load", [&] { return load_csv(csv, schema); });
    for (const auto& w : loaded.report.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    const auto m = staged("normalize", [&] { return normalize(loaded.matrix); });
    std::vector<std::pair<std::string, std::string>> files;
    if (only_level) {
        const auto ds = staged("project", [&] { return project(m, o, *only_level); });
        files.emplace_back("level_" + std::to_string(ds.level) + ".csv", level_dataset_csv(ds));
    } else {
        for (const auto& ds : staged("project", [&] { return project_all(m, o); })) {
            files.emplace_back("level_" + std::to_string(ds.level) + ".csv", level_dataset_csv(ds));
        }
    }
    write_files(out_dir, files);
    for (const auto& [name, content] : files) {
        std::cout << (fs::path(out_dir) / name).string() << "\n";
    }
    return 0;
}

int cmd_cluster(const DataFlags& in, const GaFlags& ga, bool do_normalize, const std::string& out_dir) {
    const auto csv = read_file(in.data, ErrorCategory::data);
    const auto schema = in.load_schema();
    const auto cfg = ga.resolve();
    auto loaded = staged("load", [&] { return load_csv(csv, schema); });
    for (const auto& w : loaded.report.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    const auto m = do_normalize ? staged("normalize", [&] { return normalize(loaded.matrix); }) : loaded.matrix;
    const auto result = staged("cluster", [&] { return genetic_cluster(m.values(), cfg); });
    for (const auto& w : result.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    const double total = staged("evaluate", [&] { return sse(m.values(), result.clustering.assignments); });
    std::cout << "records: " << m.rows() << "\nk: " << result.clustering.k() << "\nsse: " << text::format_real(total)
              << "\nfitness: " << text::format_real(result.fitness) << "\n";
    if (!out_dir.empty()) {
        write_files(out_dir, {{"assignments.csv", assignments_csv(result.clustering.assignments)}});
    }
    return 0;
}

int cmd_evaluate(const DataFlags& in, const std::vector<std::string>& assignment_paths, SseSpace space,
                 std::string name, const std::string& out_dir) {
    const auto ontology_text = read_file(in.ontology, ErrorCategory::ontology);
    const auto csv = read_file(in.data, ErrorCategory::data);
    const auto schema = in.load_schema();
    const auto o = staged("ontology", [&] { return Ontology::parse(ontology_text); });
    const auto loaded = staged("load", [&] { return load_csv(csv, schema); });
    const auto m = staged("normalize", [&] { return normalize(loaded.matrix); });
    const auto levels = staged("project", [&] { return project_all(m, o); });
    if (assignment_paths.size() != levels.size()) {
        throw UsageError("evaluate: need " + std::to_string(levels.size()) + " assignment files, one per level");
    }
    std::vector<Clustering> clusterings;
    for (const auto& path : assignment_paths) {
        auto assignments = staged("evaluate", [&] { return assignments_from_csv(read_file(path, ErrorCategory::data)); });
        std::size_t k = 0;
        for (auto a : assignments) k = std::max(k, a + 1);
        Clustering c;
        c.centroids = member_means(levels.front().values, assignments, k);
        c.assignments = std::move(assignments);
        clusterings.push_back(std::move(c));
    }
    if (name.empty()) name = fs::path(in.data).stem().string();
    const auto report = staged("evaluate", [&] { return build_report(name, clusterings, levels, space); });
    std::cout << report_summary(report);
    if (!out_dir.empty()) {
        write_files(out_dir, run_artifacts({{}, o, levels, {}, report}, {}));
    }
    return 0;
}

int cmd_run(const DataFlags& in, const GaFlags& ga, SseSpace space, std::string name, const std::string& out_dir,
            EmitOptions emit) {
    PipelineInput input;
    input.ontology = read_file(in.ontology, ErrorCategory::ontology);
    input.csv = read_file(in.data, ErrorCategory::data);
    input.schema = in.load_schema();
    input.ga = ga.resolve();
    input.space = space;
    input.dataset_name = name.empty() ? fs::path(in.data).stem().string() : name;

    const auto out = run_pipeline(input);
    for (const auto& w : out.ingest.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    for (const auto& r : out.clusterings) {
        for (const auto& w : r.warnings) {
            std::cerr << "warning: " << w << "\n";
        }
    }
    write_files(out_dir, run_artifacts(out, emit));
    std::cout << report_summary(out.report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ontology-guided clustering of numerical datasets"};
    app.require_subcommand(1);

    std::string ontology_path;
    auto* validate_cmd = app.add_subcommand("validate-ontology", "Parse and validate an ontology file");
    validate_cmd->add_option("ontology,--ontology", ontology_path, "ontology file")->required();

    DataFlags data;
    GaFlags ga;
    std::string out_dir;
    std::string space_text = "original";
    std::string name;
    bool emit_levels = false;
    bool emit_assignments = false;
    bool do_normalize = false;
    std::optional<int> level;
    std::vector<std::string> assignment_paths;

    auto* project_cmd = app.add_subcommand("project", "Write the per-level datasets as CSV");
    project_cmd->add_option("--data", data.data, "CSV dataset")->required();
    project_cmd->add_option("--ontology", data.ontology, "ontology file")->required();
    project_cmd->add_option("--schema", data.schema, "column role file");
    project_cmd->add_option("--level", level, "project a single level");
    project_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* cluster_cmd = app.add_subcommand("cluster", "Cluster one CSV dataset with automatic k");
    cluster_cmd->add_option("--data", data.data, "CSV dataset")->required();
    cluster_cmd->add_option("--schema", data.schema, "column role file");
    cluster_cmd->add_flag("--normalize", do_normalize, "min-max normalize features first");
    cluster_cmd->add_option("--out", out_dir, "directory for assignments.csv");
    ga.attach(cluster_cmd);

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score given per-level assignments");
    evaluate_cmd->add_option("--data", data.data, "CSV dataset")->required();
    evaluate_cmd->add_option("--ontology", data.ontology, "ontology file")->required();
    evaluate_cmd->add_option("--schema", data.schema, "column role file");
    evaluate_cmd->add_option("--assignments", assignment_paths, "assignment CSVs, level 1 first")
        ->required()
        ->delimiter(',');
    evaluate_cmd->add_option("--sse-space", space_text, "original|level")->capture_default_str();
    evaluate_cmd->add_option("--name", name, "dataset name in the report");
    evaluate_cmd->add_option("--out", out_dir, "output directory for report files");

    auto* run_cmd = app.add_subcommand("run", "Full pipeline: load, normalize, project, cluster, evaluate");
    run_cmd->add_option("--data", data.data, "CSV dataset")->required();
    run_cmd->add_option("--ontology", data.ontology, "ontology file")->required();
    run_cmd->add_option("--schema", data.schema, "column role file");
    run_cmd->add_option("--sse-space", space_text, "original|level")->capture_default_str();
    run_cmd->add_option("--name", name, "dataset name in the report");
    run_cmd->add_option("--out", out_dir, "output directory")->required();
    run_cmd->add_flag("--emit-levels", emit_levels, "also write level_<l>.csv");
    run_cmd->add_flag("--emit-assignments", emit_assignments, "also write assignments_level_<l>.csv");
    ga.attach(run_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorCategory::usage);
    }

    try {
        if (*validate_cmd) return cmd_validate_ontology(ontology_path);
        if (*project_cmd) return cmd_project(data, out_dir, level);
        if (*cluster_cmd) return cmd_cluster(data, ga, do_normalize, out_dir);
        if (*evaluate_cmd) return cmd_evaluate(data, assignment_paths, parse_space(space_text), name, out_dir);
        if (*run_cmd) {
            return cmd_run(data, ga, parse_space(space_text), name, out_dir, {emit_levels, emit_assignments});
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return static_cast<int>(ErrorCategory::invariant);
    }
    return static_cast<int>(ErrorCategory::usage);
}
