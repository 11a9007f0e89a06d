#include <filesystem>
#include <fstream>
#include <iostream>

#include "mss/harness.hpp"

#include <CLI11.hpp>

using namespace mss;

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write file: " + path);
    out << text;
}

struct CommonOptions {
    std::string benchmark_path;
    uint64_t seed = 0;
    int workers = 1;
    int max_iterations = 4;
    std::string backend = "oracle";  // oracle | oracle-lazy | http
    std::string templates_dir;
};

void add_run_options(CLI::App* cmd, CommonOptions& options) {
    cmd->add_option("benchmark", options.benchmark_path, "benchmark JSON file")->required();
    cmd->add_option("--seed", options.seed, "run seed");
    cmd->add_option("--workers", options.workers, "parallel episode workers")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iterations", options.max_iterations, "episode iteration cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--backend", options.backend, "backend profile")
        ->check(CLI::IsMember({"oracle", "oracle-lazy", "http"}));
    cmd->add_option("--templates", options.templates_dir,
                    "directory with pa.txt/curate.txt/decide.txt prompt templates");
}

harness::RunConfig make_config(const CommonOptions& options) {
    harness::RunConfig config;
    config.seed = options.seed;
    config.workers = options.workers;
    config.max_iterations = options.max_iterations;
    config.eager_pa = options.backend != "oracle-lazy";
    if (!options.templates_dir.empty())
        config.templates = prompts::Templates::from_directory(options.templates_dir);
    return config;
}

harness::BackendFactory make_factory(const CommonOptions& options) {
    if (options.backend == "http") {
        // Chat agents run against the configured endpoint (MSS_API_URL,
        // MSS_API_KEY, MSS_MODEL); perception tools stay on the synthetic
        // scene referenced by each item.
        backends::HttpChatConfig http = backends::HttpChatConfig::from_env();
        if (http.url.empty())
            throw Error(ErrorCode::InvalidSpec, "--backend http requires MSS_API_URL");
        return [http](const harness::BenchmarkItem&, const scene_sim::SyntheticScene& scene,
                      uint64_t seed) {
            harness::EpisodeBackends eb;
            eb.pa = std::make_shared<backends::HttpChatBackend>(http);
            eb.ra = std::make_shared<backends::HttpChatBackend>(http);
            agents::EpisodeTools tools;
            tools.provider = std::make_shared<backends::SyntheticSceneProvider>(scene);
            tools.vision = std::make_shared<backends::OracleVisionBackend>(scene, seed);
            tools.rng_seed = seed;
            for (size_t i = 0; i < scene.cameras.size(); ++i)
                tools.view_ids.push_back(static_cast<int>(i));
            eb.registry = agents::make_episode_registry(std::move(tools));
            return eb;
        };
    }
    return harness::oracle_backend_factory(options.backend != "oracle-lazy");
}

harness::RunResult execute_run(const CommonOptions& options) {
    auto items = harness::load_benchmark(options.benchmark_path);
    return harness::run_benchmark(items, make_config(options), make_factory(options));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual-agent spatial-reasoning benchmark harness"};
    app.require_subcommand(1);

    CommonOptions run_opts, trace_opts, ann_opts;
    std::string report_out, report_in, traces_dir, annotations_out;
    double sample_fraction = 1.0;
    bool no_filter = false;
    int gen_count = 50;
    uint64_t gen_seed = 0;
    std::string gen_out;

    auto* run = app.add_subcommand("run", "run a benchmark and write a run report");
    add_run_options(run, run_opts);
    run->add_option("--report", report_out, "output path for the run report JSON");

    auto* score = app.add_subcommand("score", "recompute accuracy from a run report");
    score->add_option("report", report_in, "run report JSON")->required();

    auto* stats = app.add_subcommand("stats", "print accuracy/iteration/timing tables");
    stats->add_option("report", report_in, "run report JSON")->required();

    auto* traces = app.add_subcommand(
        "export-traces", "run a benchmark and export per-episode HTML trace pages");
    add_run_options(traces, trace_opts);
    traces->add_option("--out", traces_dir, "output directory")->required();

    auto* annotations = app.add_subcommand(
        "export-annotations", "run a benchmark and export a JSONL annotation dataset");
    add_run_options(annotations, ann_opts);
    annotations->add_option("--out", annotations_out, "output JSONL path")->required();
    annotations->add_option("--sample-fraction", sample_fraction,
                            "fraction of kept episodes to sample");
    annotations->add_flag("--no-filter", no_filter, "disable the quality rule filter");

    auto* gen = app.add_subcommand("gen-synthetic", "generate a synthetic benchmark file");
    gen->add_option("--count", gen_count, "number of questions")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "generation seed");
    gen->add_option("--out", gen_out, "output benchmark JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto result = execute_run(run_opts);
            std::string report_json = harness::report_to_json(result.report);
            if (!report_out.empty())
                write_text(report_out, report_json);
            else
                std::cout << report_json << "\n";
            std::cout << harness::stats_report(result.report);
        } else if (score->parsed()) {
            auto report = harness::report_from_json(read_text(report_in));
            double recomputed = 0.0;
            for (const auto& row : report.items) recomputed += row.correct ? 1.0 : 0.0;
            recomputed /= report.items.empty() ? 1.0 : static_cast<double>(report.items.size());
            std::cout << "items: " << report.items.size() << "\n"
                      << "accuracy: " << 100.0 * recomputed << "\n";
            if (std::abs(recomputed - report.accuracy) > 1e-12) {
                std::cerr << "stored aggregate accuracy disagrees with the per-item table\n";
                return 1;
            }
        } else if (stats->parsed()) {
            std::cout << harness::stats_report(harness::report_from_json(read_text(report_in)));
        } else if (traces->parsed()) {
            auto result = execute_run(trace_opts);
            std::filesystem::create_directories(traces_dir);
            auto written = harness::export_trace_html(result.traces, traces_dir);
            std::cout << "wrote " << written.size() << " pages to " << traces_dir << "\n";
        } else if (annotations->parsed()) {
            auto result = execute_run(ann_opts);
            harness::AnnotationOptions options;
            options.sample_fraction = sample_fraction;
            options.seed = ann_opts.seed;
            options.rule_filter = !no_filter;
            auto records = harness::export_annotations(result.traces, options);
            harness::write_annotations(records, annotations_out);
            std::cout << "wrote " << records.size() << " records to " << annotations_out << "\n";
        } else if (gen->parsed()) {
            auto items = harness::generate_synthetic_benchmark(gen_count, gen_seed);
            write_text(gen_out, harness::serialize_benchmark(items));
            std::cout << "wrote " << items.size() << " items to " << gen_out << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
