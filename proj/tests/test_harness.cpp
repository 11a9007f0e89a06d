#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>

#include "mss/harness.hpp"
#include "mss/question.hpp"

#include <json.hpp>

using namespace mss;
using json = nlohmann::json;

namespace {

std::string temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("mss_harness_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("benchmark files validate their schema") {
    auto items = harness::generate_synthetic_benchmark(3, 7);
    REQUIRE(items.size() == 3);
    std::string text = harness::serialize_benchmark(items);

    SUBCASE("round trip") {
        auto parsed = harness::parse_benchmark(text, "mem");
        REQUIRE(parsed.size() == 3);
        CHECK(parsed[0].id == items[0].id);
        CHECK(parsed[0].question == items[0].question);
        CHECK(parsed[0].answer_label == items[0].answer_label);
        CHECK(parsed[0].choices == items[0].choices);
    }
    SUBCASE("missing answer names the field") {
        json doc = json::parse(text);
        doc["items"][1].erase("answer");
        CHECK_THROWS_WITH_AS(harness::parse_benchmark(doc.dump(), "mem"),
                             doctest::Contains("field 'answer'"), Error);
    }
    SUBCASE("duplicate ids are rejected") {
        json doc = json::parse(text);
        doc["items"][1]["id"] = doc["items"][0]["id"];
        CHECK_THROWS_WITH_AS(harness::parse_benchmark(doc.dump(), "mem"),
                             doctest::Contains("duplicated"), Error);
    }
    SUBCASE("answers must name a choice") {
        json doc = json::parse(text);
        doc["items"][0]["answer"] = "Z";
        CHECK_THROWS_WITH_AS(harness::parse_benchmark(doc.dump(), "mem"),
                             doctest::Contains("field 'answer'"), Error);
    }
    SUBCASE("unknown categories are rejected") {
        json doc = json::parse(text);
        doc["items"][0]["category"] = "riddles";
        CHECK_THROWS_WITH_AS(harness::parse_benchmark(doc.dump(), "mem"),
                             doctest::Contains("field 'category'"), Error);
    }
    SUBCASE("a scene is required") {
        json doc = json::parse(text);
        doc["items"][0].erase("scene_spec");
        CHECK_THROWS_WITH_AS(harness::parse_benchmark(doc.dump(), "mem"),
                             doctest::Contains("scene_spec"), Error);
    }
    SUBCASE("load from disk") {
        std::string dir = temp_dir("load");
        std::ofstream(dir + "/bench.json") << text;
        CHECK(harness::load_benchmark(dir + "/bench.json").size() == 3);
        CHECK_THROWS_WITH_AS(harness::load_benchmark(dir + "/missing.json"),
                             doctest::Contains("IoError"), Error);
    }
}

TEST_CASE("episode seeds are stable and id-sensitive") {
    CHECK(harness::episode_seed(1, "q001") == harness::episode_seed(1, "q001"));
    CHECK(harness::episode_seed(1, "q001") != harness::episode_seed(1, "q002"));
    CHECK(harness::episode_seed(1, "q001") != harness::episode_seed(2, "q001"));
}

TEST_CASE("oracle run: full accuracy, determinism under parallelism, stats") {
    auto items = harness::generate_synthetic_benchmark(50, 21);
    REQUIRE(items.size() == 50);
    harness::RunConfig config;
    config.seed = 9;
    auto factory = harness::oracle_backend_factory(true);

    auto serial = harness::run_benchmark(items, config, factory);
    CHECK(serial.report.accuracy == 1.0);
    CHECK(serial.report.mean_iterations <= 3.0);
    CHECK(serial.report.category_accuracy.size() == 4);

    // Accuracy is recomputable from the per-item table.
    double recomputed = 0.0;
    for (const auto& row : serial.report.items) recomputed += row.correct ? 1.0 : 0.0;
    recomputed /= static_cast<double>(serial.report.items.size());
    CHECK(serial.report.accuracy == recomputed);

    SUBCASE("1 vs 8 workers and repeated runs give identical reports") {
        config.workers = 8;
        auto parallel = harness::run_benchmark(items, config, factory);
        CHECK(harness::report_digest(parallel.report) == harness::report_digest(serial.report));
        config.workers = 1;
        auto again = harness::run_benchmark(items, config, factory);
        CHECK(harness::report_digest(again.report) == harness::report_digest(serial.report));
    }
    SUBCASE("report JSON round-trips") {
        auto restored = harness::report_from_json(harness::report_to_json(serial.report));
        CHECK(harness::report_digest(restored) == harness::report_digest(serial.report));
        CHECK(restored.mean_total_ms == serial.report.mean_total_ms);
    }
    SUBCASE("stats text") {
        std::string stats = harness::stats_report(serial.report);
        CHECK(stats.find("accuracy: 100.00") != std::string::npos);
        CHECK(stats.find("direction") != std::string::npos);
        CHECK(stats.find("phase timings") != std::string::npos);
        CHECK_THROWS_AS(harness::stats_report({}), Error);
    }
}

TEST_CASE("per-item failures never abort the run") {
    auto items = harness::generate_synthetic_benchmark(6, 21);
    std::string broken_id = items[2].id;
    auto inner = harness::oracle_backend_factory(true);
    harness::BackendFactory factory =
        [&](const harness::BenchmarkItem& item, const scene_sim::SyntheticScene& scene,
            uint64_t seed) {
            if (item.id == broken_id) throw Error(ErrorCode::ProviderFailure, "boom");
            return inner(item, scene, seed);
        };
    auto result = harness::run_benchmark(items, {}, factory);
    int failed = 0;
    for (const auto& row : result.report.items) {
        if (row.id == broken_id) {
            CHECK(row.failed);
            CHECK(row.error.find("boom") != std::string::npos);
            ++failed;
        } else {
            CHECK(row.correct);
        }
    }
    CHECK(failed == 1);
    CHECK(result.report.accuracy == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("trace HTML export is self-contained and complete") {
    auto items = harness::generate_synthetic_benchmark(8, 21);
    auto result = harness::run_benchmark(items, {}, harness::oracle_backend_factory(true));
    std::string dir = temp_dir("html");
    auto written = harness::export_trace_html(result.traces, dir);
    CHECK(written.size() == result.traces.size() + 1);  // one page per trace + index

    std::string index = read_file(dir + "/index.html");
    for (const auto& trace : result.traces)
        CHECK(index.find(">" + trace.question.id + "<") != std::string::npos);

    bool saw_struck = false;
    for (const auto& path : written) {
        std::string page = read_file(path);
        // Self-containment: no external fetches of any kind.
        CHECK(page.find("http://") == std::string::npos);
        CHECK(page.find("https://") == std::string::npos);
        CHECK(page.find("<script src") == std::string::npos);
        CHECK(page.find("<link") == std::string::npos);
        if (page.find("<s>") != std::string::npos) saw_struck = true;
    }
    CHECK(saw_struck);  // eager extraction always has pruned distractors

    // A trace page shows one panel per iteration.
    const auto& trace = result.traces[0];
    std::string page =
        read_file(dir + "/trace_" + trace.question.id + ".html");
    size_t panels = 0, pos = 0;
    while ((pos = page.find("class=\"iter\"", pos)) != std::string::npos) {
        ++panels;
        ++pos;
    }
    CHECK(panels == trace.iterations.size());

    SUBCASE("forced decisions render a warning banner") {
        harness::RunConfig capped;
        capped.max_iterations = 1;
        auto one = harness::run_benchmark(items, capped, harness::oracle_backend_factory(true));
        bool saw_banner = false;
        std::string dir2 = temp_dir("html_forced");
        harness::export_trace_html(one.traces, dir2);
        for (const auto& trace2 : one.traces) {
            if (!trace2.forced_decide) continue;
            std::string page2 =
                read_file(dir2 + "/trace_" + trace2.question.id + ".html");
            CHECK(page2.find("Forced decision") != std::string::npos);
            saw_banner = true;
        }
        CHECK(saw_banner);
    }
    SUBCASE("unwritable directories raise IoError") {
        CHECK_THROWS_WITH_AS(harness::export_trace_html(result.traces, dir + "/no/such/dir"),
                             doctest::Contains("IoError"), Error);
    }
}

TEST_CASE("annotation export: citation closure and forced-decide filtering") {
    auto items = harness::generate_synthetic_benchmark(16, 21);
    auto result = harness::run_benchmark(items, {}, harness::oracle_backend_factory(true));

    harness::AnnotationOptions options;
    auto records = harness::export_annotations(result.traces, options);
    CHECK(records.size() == result.traces.size());  // all oracle episodes survive

    std::regex cite(R"(\[cite:([A-Za-z0-9_]+)\])");
    for (size_t i = 0; i < records.size(); ++i) {
        json record = json::parse(records[i]);
        CHECK(record["answer"] == result.traces[i].question.expected_label);
        std::set<std::string> evidence(record["evidence_keys"].begin(),
                                       record["evidence_keys"].end());
        CHECK(!evidence.empty());
        std::string cot = record["cot"];
        // Every citation names an evidence key, and every evidence key is an
        // active item of the final set.
        for (auto it = std::sregex_iterator(cot.begin(), cot.end(), cite);
             it != std::sregex_iterator(); ++it)
            CHECK(evidence.count((*it)[1].str()));
        for (const auto& key : evidence) {
            const auto* item = result.traces[i].final_set.find(key);
            REQUIRE(item != nullptr);
            CHECK(item->active);
        }
    }

    SUBCASE("forced-decide traces are excluded by the rule filter") {
        harness::RunConfig capped;
        capped.max_iterations = 1;
        auto one = harness::run_benchmark(items, capped, harness::oracle_backend_factory(true));
        std::set<std::string> forced_ids, correct_unforced;
        for (const auto& trace : one.traces) {
            if (trace.forced_decide) forced_ids.insert(trace.question.id);
            else if (trace.correct) correct_unforced.insert(trace.question.id);
        }
        REQUIRE(!forced_ids.empty());
        REQUIRE(!correct_unforced.empty());
        auto filtered = harness::export_annotations(one.traces, options);
        for (const auto& line : filtered)
            CHECK(!forced_ids.count(json::parse(line)["id"].get<std::string>()));
    }
    SUBCASE("sampling is deterministic and shrinks the output") {
        options.sample_fraction = 0.5;
        options.seed = 4;
        auto half = harness::export_annotations(result.traces, options);
        CHECK(half.size() == (records.size() + 1) / 2);
        CHECK(half == harness::export_annotations(result.traces, options));
    }
    SUBCASE("an all-rejected run raises EmptyAfterFilter") {
        std::vector<agents::EpisodeTrace> wrong = result.traces;
        for (auto& trace : wrong) trace.correct = false;
        CHECK_THROWS_WITH_AS(harness::export_annotations(wrong, options),
                             doctest::Contains("EmptyAfterFilter"), Error);
    }
    SUBCASE("JSONL writing") {
        std::string dir = temp_dir("jsonl");
        harness::write_annotations(records, dir + "/ann.jsonl");
        std::string text = read_file(dir + "/ann.jsonl");
        size_t lines = std::count(text.begin(), text.end(), '\n');
        CHECK(lines == records.size());
    }
}
