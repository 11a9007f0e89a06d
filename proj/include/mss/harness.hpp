#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mss/agents.hpp"
#include "mss/backends.hpp"
#include "mss/scene_sim.hpp"

namespace mss::harness {

// ---------------------------------------------------------------------------
// Benchmark format
// ---------------------------------------------------------------------------

struct BenchmarkItem {
    std::string id;
    std::string scene_spec;        // inline scene-spec text (exclusive with scene_path)
    std::string scene_path;        // path to a scene-spec file
    std::vector<int> view_ids;     // empty = all cameras
    std::string question;
    std::vector<std::pair<std::string, std::string>> choices;
    std::string answer_label;
    std::string category;          // direction / camera-motion / nearest / facing
};

// JSON document {"items": [...]}; throws SchemaError naming the offending
// field, including on duplicate ids.
std::vector<BenchmarkItem> load_benchmark(const std::string& path);
std::vector<BenchmarkItem> parse_benchmark(const std::string& text, const std::string& origin);
std::string serialize_benchmark(const std::vector<BenchmarkItem>& items);

// Generates a synthetic scene + question set and packages it as a benchmark.
std::vector<BenchmarkItem> generate_synthetic_benchmark(int count, uint64_t seed);

// ---------------------------------------------------------------------------
// Run configuration and report
// ---------------------------------------------------------------------------

struct RunConfig {
    uint64_t seed = 0;
    int workers = 1;
    int max_iterations = 4;
    bool eager_pa = true;
    prompts::Templates templates = prompts::Templates::defaults();
};

struct ItemResult {
    std::string id;
    std::string category;
    std::string predicted;
    std::string expected;
    bool correct = false;
    bool failed = false;       // episode raised; never aborts the run
    bool forced = false;
    bool fallback = false;
    std::string error;
    int iterations = 0;
    double pa_ms = 0.0;
    double ra_ms = 0.0;
    double total_ms = 0.0;
};

struct RunReport {
    std::vector<ItemResult> items;
    double accuracy = 0.0;
    double mean_iterations = 0.0;
    double mean_pa_ms = 0.0;
    double mean_ra_ms = 0.0;
    double mean_total_ms = 0.0;
    std::map<std::string, double> category_accuracy;
    std::map<std::string, double> category_mean_iterations;
};

struct RunResult {
    RunReport report;
    std::vector<agents::EpisodeTrace> traces;  // item order
};

// Per-episode chat backends and tool registry.
struct EpisodeBackends {
    std::shared_ptr<backends::ChatBackend> pa;
    std::shared_ptr<backends::ChatBackend> ra;
    dsl::ToolRegistry registry;
};

using BackendFactory = std::function<EpisodeBackends(
    const BenchmarkItem& item, const scene_sim::SyntheticScene& scene, uint64_t episode_seed)>;

// Scripted agents + oracle vision over the item's synthetic scene.
BackendFactory oracle_backend_factory(bool eager_pa = true);

// Stable per-episode seed derived from the run seed and the item id.
uint64_t episode_seed(uint64_t run_seed, const std::string& item_id);

RunResult run_benchmark(const std::vector<BenchmarkItem>& items, const RunConfig& config,
                        const BackendFactory& factory);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

// Serialization of the outcome fields only (no wall-clock timings); equal
// digests mean equal runs.
std::string report_digest(const RunReport& report);

// Accuracy / iteration / phase-timing tables as plain text.
std::string stats_report(const RunReport& report);

// ---------------------------------------------------------------------------
// Exporters
// ---------------------------------------------------------------------------

// Writes one self-contained HTML page per trace plus an index page into
// `directory`; returns the paths written.
std::vector<std::string> export_trace_html(const std::vector<agents::EpisodeTrace>& traces,
                                           const std::string& directory);

struct AnnotationOptions {
    double sample_fraction = 1.0;
    uint64_t seed = 0;
    // Rule filter: drop forced/fallback decides, wrong answers, and traces
    // whose final set does not contain every key the question needs.
    bool rule_filter = true;
};

// One JSON record per kept episode: {id, question, choices, answer, cot,
// evidence_keys}. Every evidence citation in the CoT text uses the form
// [cite:key] and refers to an active item of the episode's final set.
std::vector<std::string> export_annotations(const std::vector<agents::EpisodeTrace>& traces,
                                            const AnnotationOptions& options);
void write_annotations(const std::vector<std::string>& records, const std::string& path);

} // namespace mss::harness
