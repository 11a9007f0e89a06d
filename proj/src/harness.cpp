#include "mss/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mss/error.hpp"
#include "mss/question.hpp"
#include "mss/values.hpp"

namespace mss::harness {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Benchmark loading
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void schema_error(const std::string& origin, const std::string& field,
                               const std::string& detail) {
    throw Error(ErrorCode::SchemaError, origin + ": field '" + field + "' " + detail);
}

const std::set<std::string>& category_tags() {
    static const std::set<std::string> tags = {"direction", "camera-motion", "nearest", "facing"};
    return tags;
}

} // namespace

std::vector<BenchmarkItem> parse_benchmark(const std::string& text, const std::string& origin) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        schema_error(origin, "(document)", "is not a JSON object");
    if (!doc.contains("items") || !doc["items"].is_array())
        schema_error(origin, "items", "is missing or not an array");

    std::vector<BenchmarkItem> items;
    std::set<std::string> ids;
    for (const auto& entry : doc["items"]) {
        BenchmarkItem item;
        if (!entry.contains("id") || !entry["id"].is_string() ||
            entry["id"].get<std::string>().empty())
            schema_error(origin, "id", "is missing or empty");
        item.id = entry["id"].get<std::string>();
        if (!ids.insert(item.id).second) schema_error(origin, "id", "is duplicated: " + item.id);

        if (entry.contains("scene_spec") && entry["scene_spec"].is_string())
            item.scene_spec = entry["scene_spec"].get<std::string>();
        if (entry.contains("scene_path") && entry["scene_path"].is_string())
            item.scene_path = entry["scene_path"].get<std::string>();
        if (item.scene_spec.empty() == item.scene_path.empty())
            schema_error(origin, "scene_spec",
                         "exactly one of scene_spec/scene_path is required (item " + item.id + ")");

        if (entry.contains("views")) {
            if (!entry["views"].is_array()) schema_error(origin, "views", "is not an array");
            for (const auto& v : entry["views"]) {
                if (!v.is_number_integer()) schema_error(origin, "views", "holds a non-integer");
                item.view_ids.push_back(v.get<int>());
            }
        }

        if (!entry.contains("question") || !entry["question"].is_string())
            schema_error(origin, "question", "is missing (item " + item.id + ")");
        item.question = entry["question"].get<std::string>();

        if (!entry.contains("choices") || !entry["choices"].is_array() ||
            entry["choices"].empty())
            schema_error(origin, "choices", "is missing or empty (item " + item.id + ")");
        for (const auto& choice : entry["choices"]) {
            if (!choice.contains("label") || !choice["label"].is_string() ||
                !choice.contains("text") || !choice["text"].is_string())
                schema_error(origin, "choices", "entries need string label and text");
            item.choices.push_back(
                {choice["label"].get<std::string>(), choice["text"].get<std::string>()});
        }

        if (!entry.contains("answer") || !entry["answer"].is_string())
            schema_error(origin, "answer", "is missing (item " + item.id + ")");
        item.answer_label = entry["answer"].get<std::string>();
        bool label_known = false;
        for (const auto& [label, _] : item.choices)
            if (label == item.answer_label) label_known = true;
        if (!label_known)
            schema_error(origin, "answer", "does not name a choice (item " + item.id + ")");

        if (!entry.contains("category") || !entry["category"].is_string())
            schema_error(origin, "category", "is missing (item " + item.id + ")");
        item.category = entry["category"].get<std::string>();
        if (!category_tags().count(item.category))
            schema_error(origin, "category", "is not a known tag: " + item.category);

        items.push_back(std::move(item));
    }
    return items;
}

std::vector<BenchmarkItem> load_benchmark(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open benchmark file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_benchmark(buf.str(), path);
}

std::string serialize_benchmark(const std::vector<BenchmarkItem>& items) {
    json doc;
    doc["items"] = json::array();
    for (const auto& item : items) {
        json entry;
        entry["id"] = item.id;
        if (!item.scene_spec.empty()) entry["scene_spec"] = item.scene_spec;
        if (!item.scene_path.empty()) entry["scene_path"] = item.scene_path;
        if (!item.view_ids.empty()) entry["views"] = item.view_ids;
        entry["question"] = item.question;
        entry["choices"] = json::array();
        for (const auto& [label, text] : item.choices)
            entry["choices"].push_back({{"label", label}, {"text", text}});
        entry["answer"] = item.answer_label;
        entry["category"] = item.category;
        doc["items"].push_back(std::move(entry));
    }
    return doc.dump(2);
}

std::vector<BenchmarkItem> generate_synthetic_benchmark(int count, uint64_t seed) {
    scene_sim::SceneSpec spec = scene_sim::default_scene_spec(seed);
    scene_sim::SyntheticScene scene = scene_sim::build_scene(spec);
    std::string spec_text = scene_sim::serialize_scene_spec(spec);
    std::vector<BenchmarkItem> items;
    for (const auto& q : scene_sim::generate_question_set(scene, count, seed)) {
        BenchmarkItem item;
        item.id = q.id;
        item.scene_spec = spec_text;
        item.view_ids = q.view_indices;
        item.question = q.text;
        for (const auto& choice : q.choices) item.choices.push_back({choice.label, choice.text});
        item.answer_label = q.answer_label;
        item.category = q.category;
        items.push_back(std::move(item));
    }
    return items;
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

uint64_t episode_seed(uint64_t run_seed, const std::string& item_id) {
    // FNV-1a over the id, mixed with the run seed; stable across platforms.
    uint64_t h = 14695981039346656037ull ^ run_seed;
    for (unsigned char c : item_id) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

BackendFactory oracle_backend_factory(bool eager_pa) {
    return [eager_pa](const BenchmarkItem&, const scene_sim::SyntheticScene& scene,
                      uint64_t seed) {
        EpisodeBackends eb;
        eb.pa = std::make_shared<backends::ScriptedPaBackend>(scene, eager_pa);
        eb.ra = std::make_shared<backends::ScriptedRaBackend>();
        agents::EpisodeTools tools;
        tools.provider = std::make_shared<backends::SyntheticSceneProvider>(scene);
        tools.vision = std::make_shared<backends::OracleVisionBackend>(scene, seed);
        tools.rng_seed = seed;
        int views = static_cast<int>(scene.cameras.size());
        for (int i = 0; i < views; ++i) tools.view_ids.push_back(i);
        eb.registry = agents::make_episode_registry(std::move(tools));
        return eb;
    };
}

RunResult run_benchmark(const std::vector<BenchmarkItem>& items, const RunConfig& config,
                        const BackendFactory& factory) {
    if (items.empty()) throw Error(ErrorCode::InvalidSpec, "benchmark has no items");

    RunResult result;
    result.report.items.resize(items.size());
    result.traces.resize(items.size());

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t idx = next.fetch_add(1); idx < items.size(); idx = next.fetch_add(1)) {
            const BenchmarkItem& item = items[idx];
            ItemResult row;
            row.id = item.id;
            row.category = item.category;
            row.expected = item.answer_label;
            try {
                scene_sim::SceneSpec spec =
                    item.scene_spec.empty() ? scene_sim::load_scene_spec(item.scene_path)
                                            : scene_sim::parse_scene_spec(item.scene_spec);
                scene_sim::SyntheticScene scene = scene_sim::build_scene(spec);
                uint64_t seed = episode_seed(config.seed, item.id);
                EpisodeBackends eb = factory(item, scene, seed);

                agents::EpisodeQuestion question;
                question.id = item.id;
                question.text = item.question;
                question.choices = item.choices;
                question.expected_label = item.answer_label;

                agents::EpisodeConfig episode_config;
                episode_config.max_iterations = config.max_iterations;
                episode_config.rng_seed = seed;
                episode_config.templates = config.templates;

                agents::EpisodeTrace trace =
                    agents::run_episode(question, episode_config, *eb.pa, *eb.ra, eb.registry);
                row.predicted = trace.answer_label;
                row.correct = trace.correct;
                row.forced = trace.forced_decide;
                row.fallback = trace.fallback_decide;
                row.iterations = static_cast<int>(trace.iterations.size());
                for (const auto& record : trace.iterations) {
                    row.pa_ms += record.pa_ms;
                    row.ra_ms += record.curate_ms + record.decide_ms;
                }
                row.total_ms = trace.wall_ms;
                result.traces[idx] = std::move(trace);
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
                result.traces[idx].question = {item.id, item.question, item.choices,
                                               item.answer_label};
            }
            result.report.items[idx] = std::move(row);
        }
    };

    int workers = std::max(1, config.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    RunReport& report = result.report;
    std::map<std::string, std::pair<int, int>> cat_correct;  // category -> (correct, total)
    std::map<std::string, std::pair<double, int>> cat_iters;
    double iter_sum = 0.0;
    int completed = 0;
    for (const auto& row : report.items) {
        report.accuracy += row.correct ? 1.0 : 0.0;
        auto& cc = cat_correct[row.category];
        cc.first += row.correct ? 1 : 0;
        cc.second += 1;
        if (!row.failed) {
            ++completed;
            iter_sum += row.iterations;
            auto& ci = cat_iters[row.category];
            ci.first += row.iterations;
            ci.second += 1;
            report.mean_pa_ms += row.pa_ms;
            report.mean_ra_ms += row.ra_ms;
            report.mean_total_ms += row.total_ms;
        }
    }
    report.accuracy /= static_cast<double>(report.items.size());
    if (completed > 0) {
        report.mean_iterations = iter_sum / completed;
        report.mean_pa_ms /= completed;
        report.mean_ra_ms /= completed;
        report.mean_total_ms /= completed;
    }
    for (const auto& [category, counts] : cat_correct)
        report.category_accuracy[category] =
            static_cast<double>(counts.first) / static_cast<double>(counts.second);
    for (const auto& [category, sums] : cat_iters)
        report.category_mean_iterations[category] = sums.first / sums.second;
    return result;
}

// ---------------------------------------------------------------------------
// Report serialization and stats
// ---------------------------------------------------------------------------

namespace {

json item_result_json(const ItemResult& row, bool with_timings) {
    json out = {{"id", row.id},           {"category", row.category},
                {"predicted", row.predicted}, {"expected", row.expected},
                {"correct", row.correct}, {"failed", row.failed},
                {"forced", row.forced},   {"fallback", row.fallback},
                {"error", row.error},     {"iterations", row.iterations}};
    if (with_timings) {
        out["pa_ms"] = row.pa_ms;
        out["ra_ms"] = row.ra_ms;
        out["total_ms"] = row.total_ms;
    }
    return out;
}

} // namespace

std::string report_to_json(const RunReport& report) {
    json doc;
    doc["items"] = json::array();
    for (const auto& row : report.items) doc["items"].push_back(item_result_json(row, true));
    doc["accuracy"] = report.accuracy;
    doc["mean_iterations"] = report.mean_iterations;
    doc["mean_pa_ms"] = report.mean_pa_ms;
    doc["mean_ra_ms"] = report.mean_ra_ms;
    doc["mean_total_ms"] = report.mean_total_ms;
    doc["category_accuracy"] = report.category_accuracy;
    doc["category_mean_iterations"] = report.category_mean_iterations;
    return doc.dump(2);
}

RunReport report_from_json(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("items"))
        throw Error(ErrorCode::SchemaError, "run report: field 'items' is missing");
    RunReport report;
    for (const auto& entry : doc["items"]) {
        ItemResult row;
        row.id = entry.value("id", "");
        row.category = entry.value("category", "");
        row.predicted = entry.value("predicted", "");
        row.expected = entry.value("expected", "");
        row.correct = entry.value("correct", false);
        row.failed = entry.value("failed", false);
        row.forced = entry.value("forced", false);
        row.fallback = entry.value("fallback", false);
        row.error = entry.value("error", "");
        row.iterations = entry.value("iterations", 0);
        row.pa_ms = entry.value("pa_ms", 0.0);
        row.ra_ms = entry.value("ra_ms", 0.0);
        row.total_ms = entry.value("total_ms", 0.0);
        report.items.push_back(std::move(row));
    }
    report.accuracy = doc.value("accuracy", 0.0);
    report.mean_iterations = doc.value("mean_iterations", 0.0);
    report.mean_pa_ms = doc.value("mean_pa_ms", 0.0);
    report.mean_ra_ms = doc.value("mean_ra_ms", 0.0);
    report.mean_total_ms = doc.value("mean_total_ms", 0.0);
    if (doc.contains("category_accuracy"))
        for (auto& [key, value] : doc["category_accuracy"].items())
            report.category_accuracy[key] = value.get<double>();
    if (doc.contains("category_mean_iterations"))
        for (auto& [key, value] : doc["category_mean_iterations"].items())
            report.category_mean_iterations[key] = value.get<double>();
    return report;
}

std::string report_digest(const RunReport& report) {
    json doc;
    doc["items"] = json::array();
    for (const auto& row : report.items) doc["items"].push_back(item_result_json(row, false));
    doc["accuracy"] = report.accuracy;
    doc["mean_iterations"] = report.mean_iterations;
    doc["category_accuracy"] = report.category_accuracy;
    doc["category_mean_iterations"] = report.category_mean_iterations;
    return doc.dump();
}

std::string stats_report(const RunReport& report) {
    if (report.items.empty()) throw Error(ErrorCode::InvalidSpec, "run report has no items");
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "items: " << report.items.size() << "\n";
    os << "accuracy: " << 100.0 * report.accuracy << "\n";
    os << "mean iterations: " << report.mean_iterations << "\n";
    os << "per-category:\n";
    for (const auto& [category, accuracy] : report.category_accuracy) {
        os << "  " << category << ": accuracy " << 100.0 * accuracy;
        auto it = report.category_mean_iterations.find(category);
        if (it != report.category_mean_iterations.end())
            os << ", mean iterations " << it->second;
        os << "\n";
    }
    os << "phase timings (mean ms per episode): pa=" << report.mean_pa_ms
       << " ra=" << report.mean_ra_ms << " total=" << report.mean_total_ms << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// HTML export
// ---------------------------------------------------------------------------

namespace {

std::string html_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    return out;
}

std::string safe_file_stem(const std::string& id) {
    std::string out;
    for (char c : id)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out.empty() ? "trace" : out;
}

const char* kPageCss =
    "body{font-family:sans-serif;margin:2em;max-width:60em}"
    ".iter{border:1px solid #bbb;border-radius:6px;padding:1em;margin:1em 0}"
    ".banner{background:#ffe08a;border:1px solid #c90;padding:0.6em;margin:1em 0}"
    "pre{background:#f4f4f4;padding:0.6em;overflow-x:auto}"
    "s{color:#999}li.pruned{list-style-type:circle}"
    "table{border-collapse:collapse}td,th{border:1px solid #ccc;padding:0.2em 0.6em}";

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write file: " + path);
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

std::string trace_page(const agents::EpisodeTrace& trace) {
    std::ostringstream os;
    os << "<!doctype html><html><head><meta charset=\"utf-8\"><title>"
       << html_escape(trace.question.id) << "</title><style>" << kPageCss
       << "</style></head><body>";
    os << "<h1>Episode " << html_escape(trace.question.id) << "</h1>";
    os << "<p><b>Question:</b> " << html_escape(trace.question.text) << "</p><ul>";
    for (const auto& [label, text] : trace.question.choices)
        os << "<li>" << html_escape(label) << ") " << html_escape(text) << "</li>";
    os << "</ul>";
    if (trace.forced_decide)
        os << "<div class=\"banner\">Forced decision: the iteration cap was reached before the "
              "reasoner volunteered an answer.</div>";
    if (trace.fallback_decide)
        os << "<div class=\"banner\">Fallback decision: malformed replies exhausted the retry "
              "budget; the lowest label was used.</div>";

    for (const auto& record : trace.iterations) {
        os << "<div class=\"iter\"><h2>Iteration " << record.iteration << "</h2>";
        os << "<p><b>Request:</b> " << html_escape(record.request) << "</p>";
        os << "<h3>Program</h3><pre>" << html_escape(record.pa.program_text) << "</pre>";
        if (!record.pa.error.empty())
            os << "<p><b>Extraction error:</b> " << html_escape(record.pa.error) << "</p>";
        if (!record.pa.log.records.empty()) {
            os << "<h3>Execution log</h3><table><tr><th>statement</th><th>ok</th>"
                  "<th>outcome</th></tr>";
            for (const auto& log : record.pa.log.records)
                os << "<tr><td><code>" << html_escape(log.statement) << "</code></td><td>"
                   << (log.ok ? "yes" : "no") << "</td><td>" << html_escape(log.outcome)
                   << "</td></tr>";
            os << "</table>";
        }
        os << "<h3>Information set</h3><ul>";
        std::set<std::string> pruned(record.pruned_keys.begin(), record.pruned_keys.end());
        for (const auto& item : record.items_before_curation) {
            std::string line = html_escape(item.key) + " = " +
                               html_escape(dsl::value_to_string(item.value));
            if (pruned.count(item.key))
                os << "<li class=\"pruned\"><s>" << line << "</s></li>";
            else
                os << "<li>" << line << "</li>";
        }
        os << "</ul>";
        if (record.curation_fallback)
            os << "<p><b>Curation fallback:</b> the keep-list was malformed; everything was "
                  "kept.</p>";
        os << "<p><b>Reasoner:</b> ";
        if (record.decision.kind == agents::RaDecision::Kind::Request)
            os << "Request &mdash; " << html_escape(record.decision.request_text);
        else
            os << "Decide &mdash; " << html_escape(record.decision.label)
               << (record.decision.forced ? " (forced)" : "")
               << (record.decision.fallback ? " (fallback)" : "");
        os << "</p></div>";
    }
    os << "<p><b>Final answer:</b> " << html_escape(trace.answer_label);
    if (!trace.question.expected_label.empty())
        os << " &mdash; expected " << html_escape(trace.question.expected_label) << " ("
           << (trace.correct ? "correct" : "wrong") << ")";
    os << "</p></body></html>";
    return os.str();
}

} // namespace

std::vector<std::string> export_trace_html(const std::vector<agents::EpisodeTrace>& traces,
                                           const std::string& directory) {
    std::vector<std::string> written;
    std::ostringstream index;
    index << "<!doctype html><html><head><meta charset=\"utf-8\"><title>Episode traces"
          << "</title><style>" << kPageCss << "</style></head><body><h1>Episode traces</h1><ul>";
    for (const auto& trace : traces) {
        std::string name = "trace_" + safe_file_stem(trace.question.id) + ".html";
        std::string path = directory + "/" + name;
        write_file(path, trace_page(trace));
        written.push_back(path);
        index << "<li><a href=\"" << name << "\">" << html_escape(trace.question.id) << "</a> "
              << (trace.correct ? "correct" : "wrong")
              << (trace.forced_decide ? ", forced" : "") << "</li>";
    }
    index << "</ul></body></html>";
    std::string index_path = directory + "/index.html";
    write_file(index_path, index.str());
    written.push_back(index_path);
    return written;
}

// ---------------------------------------------------------------------------
// Annotation export
// ---------------------------------------------------------------------------

namespace {

std::string category_goal(question::Category category) {
    switch (category) {
        case question::Category::Direction:
            return "the compass direction of one object relative to another";
        case question::Category::Facing:
            return "the compass direction an object is facing";
        case question::Category::CameraMotion:
            return "how the camera moved between two views";
        case question::Category::Nearest:
            return "which candidate object is nearest to the subject";
    }
    return "the requested spatial relation";
}

std::string evidence_sentence(const std::string& key, const std::string& value) {
    std::string cite = " [cite:" + key + "]";
    if (key.rfind("pos_", 0) == 0)
        return "The " + key.substr(4) + " is located at " + value + cite + ".";
    if (key.rfind("facing_dir_", 0) == 0)
        return "The " + key.substr(11) + " faces along " + value + cite + ".";
    if (key.rfind("cam_move_", 0) == 0)
        return "The relative camera movement is " + value + cite + ".";
    if (key == question::kFrameKey)
        return "The compass frame calibrated from the stated clue is " + value + cite + ".";
    return "A supporting fact is " + key + " = " + value + cite + ".";
}

} // namespace

std::vector<std::string> export_annotations(const std::vector<agents::EpisodeTrace>& traces,
                                            const AnnotationOptions& options) {
    std::vector<const agents::EpisodeTrace*> kept;
    for (const auto& trace : traces) {
        if (!trace.correct) continue;
        if (options.rule_filter) {
            if (trace.forced_decide || trace.fallback_decide) continue;
            // Incidental correctness: a right answer whose final set does not
            // actually contain the facts the question needs.
            auto model = question::Model::parse(trace.question.text);
            if (!model) continue;
            bool sufficient = true;
            for (const auto& key : model->required_keys()) {
                const agents::InformationItem* item = trace.final_set.find(key);
                if (!item || !item->active) sufficient = false;
            }
            if (!sufficient) continue;
        }
        kept.push_back(&trace);
    }
    if (options.sample_fraction < 1.0 && !kept.empty()) {
        std::mt19937_64 rng(options.seed);
        std::shuffle(kept.begin(), kept.end(), rng);
        size_t take = static_cast<size_t>(
            std::ceil(options.sample_fraction * static_cast<double>(kept.size())));
        kept.resize(std::max<size_t>(take, 1));
        std::sort(kept.begin(), kept.end(),
                  [](const auto* a, const auto* b) { return a->question.id < b->question.id; });
    }
    if (kept.empty())
        throw Error(ErrorCode::EmptyAfterFilter, "no episode survives the annotation filter");

    std::vector<std::string> records;
    for (const agents::EpisodeTrace* trace : kept) {
        auto model = question::Model::parse(trace->question.text);
        std::ostringstream cot;
        json evidence = json::array();
        cot << "The question asks for "
            << (model ? category_goal(model->category) : std::string("a spatial relation"))
            << ".";
        std::vector<std::string> keys;
        if (model) keys = model->required_keys();
        for (const auto& key : keys) {
            const agents::InformationItem* item = trace->final_set.find(key);
            if (!item || !item->active) continue;
            cot << " " << evidence_sentence(key, dsl::value_to_string(item->value));
            evidence.push_back(key);
        }
        std::string answer_text;
        for (const auto& [label, text] : trace->question.choices)
            if (label == trace->answer_label) answer_text = text;
        cot << " Therefore the answer is " << trace->answer_label << ") " << answer_text << ".";

        json record = {{"id", trace->question.id},
                       {"question", trace->question.text},
                       {"choices", json::array()},
                       {"answer", trace->answer_label},
                       {"cot", cot.str()},
                       {"evidence_keys", evidence}};
        for (const auto& [label, text] : trace->question.choices)
            record["choices"].push_back({{"label", label}, {"text", text}});
        records.push_back(record.dump());
    }
    return records;
}

void write_annotations(const std::vector<std::string>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write file: " + path);
    for (const auto& record : records) out << record << "\n";
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

} // namespace mss::harness
