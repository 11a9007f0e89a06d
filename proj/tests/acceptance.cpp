// Acceptance suite: one pass/fail line per criterion. Exit code is the number
// of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "dsl_fixtures.hpp"
#include "golden_corpus.hpp"
#include "mss/agents.hpp"
#include "mss/backends.hpp"
#include "mss/harness.hpp"
#include "mss/question.hpp"

#include <json.hpp>

using namespace mss;
using geometry::Vec3;
using json = nlohmann::json;

namespace {

void require(bool condition, const std::string& message) {
    if (!condition) throw std::runtime_error(message);
}

template <typename T>
std::string str(const T& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// 1. Geometry primitives
// ---------------------------------------------------------------------------

void criterion_geometry() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> pos01(0.1, 1.0);

    // Back-projection round trip.
    for (int i = 0; i < 1000; ++i) {
        geometry::CameraIntrinsics intr{200 + 100 * pos01(rng), 200 + 100 * pos01(rng),
                                        128 + 10 * unit(rng), 128 + 10 * unit(rng), 256, 256};
        Vec3 eye(3 * unit(rng), -1 - pos01(rng), 3 * unit(rng));
        Vec3 target = eye + Vec3(unit(rng), 0.2 * unit(rng), 1.0 + pos01(rng));
        geometry::CameraPose pose = geometry::look_at_pose(eye, target);
        double u = 20 + 200 * pos01(rng), v = 20 + 200 * pos01(rng), d = 0.5 + 5 * pos01(rng);
        Vec3 p = geometry::back_project_pixel(u, v, d, intr, pose);
        auto proj = geometry::project_point(p, intr, pose);
        require(std::abs(proj.u - u) < 1e-9 && std::abs(proj.v - v) < 1e-9 &&
                    std::abs(proj.depth - d) < 1e-9,
                "back-projection round trip exceeded 1e-9");
    }

    // Exact and noisy plane fits.
    std::normal_distribution<double> gauss(0.0, 0.01);
    for (int trial = 0; trial < 20; ++trial) {
        Vec3 normal = (geometry::kWorldUp + 0.3 * Vec3(unit(rng), unit(rng), unit(rng)))
                          .normalized();
        Vec3 origin(unit(rng), unit(rng), 2 + unit(rng));
        Vec3 a = normal.cross(Vec3(1, 0, 0));
        if (a.norm() < 1e-6) a = normal.cross(Vec3(0, 0, 1));
        a.normalize();
        Vec3 b = normal.cross(a).normalized();

        geometry::PointCloud exact, noisy;
        for (int i = 0; i < 500; ++i) {
            Vec3 p = origin + 2 * unit(rng) * a + 2 * unit(rng) * b;
            exact.points.push_back(p);
            noisy.points.push_back(p + gauss(rng) * normal);
        }
        geometry::GroundPlane fit = geometry::fit_plane_pca(exact);
        require(geometry::angle_between_deg(fit.normal, normal) < 1e-6 ||
                    geometry::angle_between_deg(fit.normal, -normal) < 1e-6,
                "exact plane fit normal error exceeded 1e-6");
        geometry::GroundPlane noisy_fit = geometry::fit_plane_pca(noisy);
        require(std::min(geometry::angle_between_deg(noisy_fit.normal, normal),
                         geometry::angle_between_deg(noisy_fit.normal, -normal)) < 1.0,
                "noisy plane fit normal error exceeded 1 degree");
    }

    // Euler re-composition.
    std::uniform_real_distribution<double> yaw(-179.0, 179.0);
    std::uniform_real_distribution<double> pitch(-85.0, 85.0);
    for (int i = 0; i < 1000; ++i) {
        geometry::EulerDecomposition d;
        d.yaw_deg = yaw(rng);
        d.pitch_deg = pitch(rng);
        d.roll_deg = yaw(rng);
        d.translation = Vec3(unit(rng), unit(rng), unit(rng));
        geometry::Extrinsic t = geometry::compose_yaw_pitch_roll(d);
        geometry::Extrinsic again = geometry::compose_yaw_pitch_roll(
            geometry::decompose_yaw_pitch_roll(t));
        require((t.matrix - again.matrix).cwiseAbs().maxCoeff() < 1e-6,
                "Euler re-composition exceeded 1e-6");
    }
}

// ---------------------------------------------------------------------------
// 2. Calibration and labeling vs a brute-force oracle
// ---------------------------------------------------------------------------

void criterion_calibration() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    geometry::GroundPlane ground;

    // Azimuths and tie-break precedence for the independent oracle.
    const std::vector<std::pair<std::string, double>> precedence = {
        {"North", 0},     {"East", 90},      {"South", 180},     {"West", 270},
        {"Northeast", 45}, {"Southeast", 135}, {"Southwest", 225}, {"Northwest", 315}};
    std::uniform_int_distribution<size_t> pick_label(0, precedence.size() - 1);

    for (int i = 0; i < 1000; ++i) {
        Vec3 anchor(4 * unit(rng), 0.2 * unit(rng), 4 * unit(rng) + 5);
        Vec3 target = anchor;
        while ((target - anchor).head<2>().norm() < 0.5 &&
               std::abs(target.z() - anchor.z()) < 0.5)
            target = anchor + Vec3(3 * unit(rng), 0.2 * unit(rng), 3 * unit(rng));
        std::string stated = precedence[pick_label(rng)].first;
        perception::GroundFrame frame =
            perception::calibrate_frame(anchor, target, stated, ground);

        // Orthonormality and negation identities.
        require(std::abs(frame.north.norm() - 1) < 1e-9 &&
                    std::abs(frame.east.norm() - 1) < 1e-9 &&
                    std::abs(frame.up.norm() - 1) < 1e-9,
                "frame axes are not unit length");
        require(std::abs(frame.north.dot(frame.east)) < 1e-9 &&
                    std::abs(frame.north.dot(frame.up)) < 1e-9 &&
                    std::abs(frame.east.dot(frame.up)) < 1e-9,
                "frame axes are not orthogonal");
        require((frame.south + frame.north).norm() < 1e-9 &&
                    (frame.west + frame.east).norm() < 1e-9,
                "negation identities violated");

        // Brute-force min-angle oracle for direction_label.
        Vec3 a2(4 * unit(rng), unit(rng), 4 * unit(rng) + 5);
        Vec3 t2 = a2 + Vec3(3 * unit(rng), unit(rng), 3 * unit(rng));
        Vec3 v = (t2 - a2) - (t2 - a2).dot(frame.up) * frame.up;
        if (v.norm() < 1e-3) continue;
        double az = std::atan2(v.dot(frame.east), v.dot(frame.north)) * 180.0 / M_PI;
        if (az < 0) az += 360.0;
        std::string expected;
        double best = 1e9;
        for (const auto& [label, label_az] : precedence) {
            double diff = std::abs(az - label_az);
            diff = std::min(diff, 360.0 - diff);
            if (diff < best) {
                best = diff;
                expected = label;
            }
        }
        require(perception::direction_label(frame, a2, t2, 8) == expected,
                "direction_label disagrees with the brute-force oracle");
    }
}

// ---------------------------------------------------------------------------
// 3. Coarse-to-fine direction grounding bound
// ---------------------------------------------------------------------------

struct TruthSelector : perception::VisionBackend {
    Vec3 truth;
    explicit TruthSelector(Vec3 t) : truth(std::move(t)) {}
    std::optional<int> select_view(const perception::SceneReconstruction&,
                                   const std::string&) override {
        return std::nullopt;
    }
    std::optional<perception::DetectionBox> detect_object(int, const std::string&) override {
        return std::nullopt;
    }
    geometry::PixelMask segment(int, const perception::DetectionBox&) override {
        return geometry::PixelMask::empty_mask(1, 1);
    }
    int select_arrow(const perception::ArrowOverlay& situated, const perception::ArrowOverlay&,
                     const std::string&) override {
        const auto& vectors = situated.candidates.vectors;
        int best = 0;
        double best_angle = 1e9;
        for (size_t i = 0; i < vectors.size(); ++i) {
            double a = geometry::angle_between_deg(vectors[i], truth);
            if (a < best_angle) {
                best_angle = a;
                best = static_cast<int>(i);
            }
        }
        return best;
    }
};

void criterion_sog_bound() {
    geometry::GroundPlane ground;
    Vec3 anchor(0, 0, 3);
    geometry::CameraIntrinsics intr{200, 200, 128, 128, 256, 256};
    geometry::CameraPose pose = geometry::look_at_pose(Vec3(0, -1.0, 0), anchor);

    for (uint64_t seed = 1; seed <= 5; ++seed) {
        for (int az = 0; az < 360; ++az) {
            Vec3 truth = geometry::rotate_about_axis(Vec3(0, 0, 1), ground.normal,
                                                     static_cast<double>(az));
            TruthSelector selector(truth);
            uint64_t case_seed = seed * 1000 + static_cast<uint64_t>(az);
            Vec3 got = perception::sog_select_direction(anchor, ground, intr, pose, selector,
                                                        "q", case_seed);
            require(geometry::angle_between_deg(got, truth) <= 11.25 + 1e-6,
                    "direction error above the quantization bound at azimuth " + str(az));
            if (az % 30 == 0) {
                TruthSelector again(truth);
                Vec3 repeat = perception::sog_select_direction(anchor, ground, intr, pose,
                                                               again, "q", case_seed);
                require((got - repeat).norm() == 0.0, "selection is not deterministic per seed");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// 4. Canonical view on a grazing scene
// ---------------------------------------------------------------------------

void criterion_canonical_view() {
    geometry::GroundPlane ground;
    Vec3 anchor(0, -0.001, 4);
    geometry::CameraIntrinsics intr{200, 200, 128, 128, 256, 256};
    geometry::CameraPose grazing = geometry::look_at_pose(Vec3(0, -0.05, 0), anchor);
    geometry::CameraPose canon = perception::sog_canonical_view(intr, grazing, anchor, ground);

    require(std::abs((canon.center() - anchor).norm() - (grazing.center() - anchor).norm()) <
                1e-9,
            "anchor distance not preserved within 1e-9");

    auto coarse = perception::sog_coarse_candidates(anchor, ground, 42);
    auto min_pairwise = [&](const geometry::CameraPose& p) {
        perception::ArrowOverlay overlay = perception::sog_overlay(coarse, intr, p, 0.6);
        std::vector<Eigen::Vector2d> dirs;
        for (const auto& arrow : overlay.arrows) {
            require(!arrow.segments.empty(), "arrow with no segments");
            Eigen::Vector2d d = arrow.segments[0].b - arrow.segments[0].a;
            require(d.norm() > 1e-9, "degenerate projected arrow");
            dirs.push_back(d.normalized());
        }
        double best = 1e9;
        for (size_t i = 0; i < dirs.size(); ++i)
            for (size_t j = i + 1; j < dirs.size(); ++j) {
                double c = std::clamp(dirs[i].dot(dirs[j]), -1.0, 1.0);
                best = std::min(best, std::acos(c) * 180.0 / M_PI);
            }
        return best;
    };
    require(min_pairwise(canon) > min_pairwise(grazing),
            "canonical view did not increase the minimum projected-arrow separation");
}

// ---------------------------------------------------------------------------
// 5. Command language: golden corpus, snapshots, sandbox
// ---------------------------------------------------------------------------

void criterion_dsl() {
    const auto& corpus = golden_programs();
    require(corpus.size() >= 20, "golden corpus smaller than 20 programs");

    dsl_fixtures::RecordingRegistry recording;
    for (const auto& text : corpus) {
        dsl::Program program = dsl::parse(text);
        std::string printed = dsl::pretty_print(program);
        require(dsl::pretty_print(dsl::parse(printed)) == printed,
                "pretty-print is not a fixed point");
        dsl::ExecResult result = dsl::execute(program, {}, recording.registry);
        require(!result.error,
                "golden program failed: " + result.error.value_or("(no message)"));
        // Sandbox: every effect is an environment binding or emit whose
        // provenance names a registered module or a literal.
        for (const auto& emit : result.emits)
            require(emit.provenance.module == "perception" ||
                        emit.provenance.module == "compute" ||
                        emit.provenance.module == "sandbox" || emit.provenance.module == "dsl",
                    "emit provenance outside the registry: " + emit.provenance.module);
    }
    require(!recording.calls.empty(), "recorder saw no tool calls");
    for (const auto& call : recording.calls)
        require(call.rfind("perception.", 0) == 0 || call.rfind("compute.", 0) == 0 ||
                    call.rfind("sandbox.", 0) == 0,
                "non-registry effect recorded: " + call);

    // Snapshot identity over the full kind matrix.
    dsl::Environment env = dsl_fixtures::full_kind_env();
    require(dsl_fixtures::env_equal(dsl::restore(dsl::snapshot(env)), env),
            "restore(snapshot(env)) differs from env");
}

// ---------------------------------------------------------------------------
// 6. End-to-end oracle benchmark
// ---------------------------------------------------------------------------

void criterion_oracle_benchmark() {
    auto items = harness::generate_synthetic_benchmark(50, 21);
    require(items.size() == 50, "expected 50 generated items");
    std::set<std::string> categories;
    for (const auto& item : items) categories.insert(item.category);
    require(categories.size() == 4, "question set does not span all four categories");

    harness::RunConfig config;
    config.seed = 9;
    auto factory = harness::oracle_backend_factory(true);
    auto serial = harness::run_benchmark(items, config, factory);
    require(serial.report.accuracy == 1.0,
            "oracle accuracy " + str(serial.report.accuracy) + " != 1");
    require(serial.report.mean_iterations <= 3.0, "mean iterations above 3");

    config.workers = 8;
    auto parallel = harness::run_benchmark(items, config, factory);
    require(harness::report_digest(parallel.report) == harness::report_digest(serial.report),
            "1-worker and 8-worker runs disagree");
    config.workers = 1;
    auto again = harness::run_benchmark(items, config, factory);
    require(harness::report_digest(again.report) == harness::report_digest(serial.report),
            "repeated seeded runs disagree");
}

// ---------------------------------------------------------------------------
// 7. Curation contract
// ---------------------------------------------------------------------------

void criterion_curation_contract() {
    auto scene = scene_sim::build_scene(scene_sim::default_scene_spec(7));
    auto questions = scene_sim::generate_question_set(scene, 16, 11);

    for (const auto& q : questions) {
        backends::ScriptedPaBackend pa_inner(scene, true);
        backends::ScriptedRaBackend ra_inner;
        backends::RecordingChat pa(pa_inner);
        backends::RecordingChat ra(ra_inner);

        agents::EpisodeTools tools;
        tools.provider = std::make_shared<backends::SyntheticSceneProvider>(scene);
        tools.vision = std::make_shared<backends::OracleVisionBackend>(scene);
        tools.view_ids = {0, 1, 2};
        auto registry = agents::make_episode_registry(std::move(tools));

        agents::EpisodeQuestion question;
        question.id = q.id;
        question.text = q.text;
        for (const auto& choice : q.choices) question.choices.push_back({choice.label, choice.text});
        question.expected_label = q.answer_label;
        auto trace = agents::run_episode(question, {}, pa, ra, registry);
        require(!trace.forced_decide, "unexpected forced decision in curation check");

        size_t iters = trace.iterations.size();
        require(ra.prompts().size() == 2 * iters, "unexpected reasoner prompt count");
        require(pa.prompts().size() == iters, "unexpected extractor prompt count");

        for (size_t k = 0; k < iters; ++k) {
            const auto& record = trace.iterations[k];
            std::set<std::string> before, after;
            for (const auto& item : record.items_before_curation) before.insert(item.key);
            for (const auto& item : record.items_after_curation) after.insert(item.key);
            for (const auto& key : after)
                require(before.count(key), "curation added a key: " + key);

            // Pruned keys must be absent from the decide prompt of this
            // iteration and from every later prompt of either agent.
            for (const auto& pruned : record.pruned_keys) {
                for (size_t i = 2 * k + 1; i < ra.prompts().size(); ++i)
                    for (const auto& line : prompts::parse_set_items(ra.prompts()[i]))
                        require(line.key != pruned,
                                "pruned key resurfaced in a reasoner prompt: " + pruned);
                for (size_t i = k + 1; i < pa.prompts().size(); ++i)
                    for (const auto& line : prompts::parse_set_items(pa.prompts()[i]))
                        require(line.key != pruned,
                                "pruned key resurfaced in an extractor prompt: " + pruned);
            }
        }

        // The final decide prompt carries exactly the final active set.
        const std::string& final_decide = ra.prompts().back();
        require(prompts::has_marker(final_decide, prompts::kDecideMarker),
                "last reasoner prompt is not a decide prompt");
        std::set<std::string> prompt_keys, final_keys;
        for (const auto& line : prompts::parse_set_items(final_decide))
            prompt_keys.insert(line.key);
        for (const auto& item : trace.final_set.active_items()) final_keys.insert(item.key);
        require(prompt_keys == final_keys,
                "final decide prompt does not match the final active set");
    }
}

// ---------------------------------------------------------------------------
// 8. Minimality ablation trend
// ---------------------------------------------------------------------------

void criterion_minimality_ablation() {
    auto items = harness::generate_synthetic_benchmark(24, 11);
    harness::RunConfig config;
    auto result = harness::run_benchmark(items, config, harness::oracle_backend_factory(false));
    require(result.report.accuracy == 1.0, "lazy oracle run is not fully correct");

    backends::ScriptedRaBackend::Options options;
    options.distractor_sensitive = true;
    options.max_items = 6;
    backends::ScriptedRaBackend sensitive(options);
    auto report = agents::minimality_ablation(result.traces, sensitive, 3);
    require(report.episodes >= 2, "fewer than two qualifying three-step episodes");
    require(report.steps.size() == 3, "expected three normalized steps");
    for (size_t i = 1; i < report.steps.size(); ++i) {
        require(report.steps[i].accuracy >= report.steps[i - 1].accuracy,
                "ablation accuracy is not monotone non-decreasing");
        require(report.steps[i].mean_set_size <= report.steps[i - 1].mean_set_size,
                "ablation set sizes do not shrink");
    }
    require(report.steps.back().accuracy > report.steps.front().accuracy,
            "ablation trend is flat");
}

// ---------------------------------------------------------------------------
// 9. Iteration-cap ablation
// ---------------------------------------------------------------------------

void criterion_iteration_cap() {
    // Build a set where at least 30% of items need a second extraction
    // request (facing questions resolve the frame first, the direction next).
    auto pool = harness::generate_synthetic_benchmark(50, 21);
    std::vector<harness::BenchmarkItem> items;
    size_t facing = 0;
    for (const auto& item : pool)
        if (item.category == "facing") {
            items.push_back(item);
            ++facing;
        }
    for (const auto& item : pool) {
        if (item.category == "facing") continue;
        if (items.size() >= facing * 3) break;
        items.push_back(item);
    }
    require(facing * 10 >= items.size() * 3, "fewer than 30% two-request items");

    auto factory = harness::oracle_backend_factory(true);
    harness::RunConfig full;
    full.max_iterations = 4;
    auto full_run = harness::run_benchmark(items, full, factory);
    require(full_run.report.accuracy == 1.0, "uncapped run is not fully correct");

    harness::RunConfig capped;
    capped.max_iterations = 1;
    auto capped_run = harness::run_benchmark(items, capped, factory);
    for (const auto& row : capped_run.report.items)
        require(row.iterations == 1, "capped run took more than one extraction turn");
    require(capped_run.report.accuracy < full_run.report.accuracy,
            "capping iterations did not lower accuracy");
}

// ---------------------------------------------------------------------------
// 10. Annotation export
// ---------------------------------------------------------------------------

void criterion_annotations() {
    auto items = harness::generate_synthetic_benchmark(16, 21);
    auto factory = harness::oracle_backend_factory(true);
    auto result = harness::run_benchmark(items, {}, factory);

    harness::AnnotationOptions options;
    auto records = harness::export_annotations(result.traces, options);
    require(!records.empty(), "no annotation records emitted");

    std::map<std::string, const agents::EpisodeTrace*> by_id;
    for (const auto& trace : result.traces) by_id[trace.question.id] = &trace;
    std::regex cite(R"(\[cite:([A-Za-z0-9_]+)\])");
    for (const auto& line : records) {
        json record = json::parse(line);
        const agents::EpisodeTrace* trace = by_id.at(record["id"].get<std::string>());
        std::string cot = record["cot"];
        size_t citations = 0;
        for (auto it = std::sregex_iterator(cot.begin(), cot.end(), cite);
             it != std::sregex_iterator(); ++it) {
            ++citations;
            const agents::InformationItem* item = trace->final_set.find((*it)[1].str());
            require(item && item->active,
                    "citation outside the final active set: " + (*it)[1].str());
        }
        require(citations > 0, "record cites no evidence");
    }

    // The rule filter drops every forced-decide trace.
    harness::RunConfig capped;
    capped.max_iterations = 1;
    auto forced_run = harness::run_benchmark(items, capped, factory);
    std::set<std::string> forced_ids;
    for (const auto& trace : forced_run.traces)
        if (trace.forced_decide) forced_ids.insert(trace.question.id);
    require(!forced_ids.empty(), "capped run produced no forced decisions");
    auto filtered = harness::export_annotations(forced_run.traces, options);
    for (const auto& line : filtered)
        require(!forced_ids.count(json::parse(line)["id"].get<std::string>()),
                "a forced-decide trace slipped through the filter");
}

struct Criterion {
    int number;
    const char* name;
    std::function<void()> fn;
    double time_limit_s;  // 0 = no limit
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "geometry primitives (round trip, plane fits, Euler)", criterion_geometry, 10},
        {2, "frame calibration and labeling vs brute-force oracle", criterion_calibration, 5},
        {3, "coarse-to-fine direction bound over full azimuth sweep", criterion_sog_bound, 30},
        {4, "canonical view distance and arrow-separation gains", criterion_canonical_view, 0},
        {5, "command language corpus, snapshots, sandbox", criterion_dsl, 0},
        {6, "end-to-end oracle benchmark determinism", criterion_oracle_benchmark, 60},
        {7, "curation contract on every episode", criterion_curation_contract, 0},
        {8, "minimality ablation monotone trend", criterion_minimality_ablation, 0},
        {9, "iteration-cap ablation", criterion_iteration_cap, 0},
        {10, "annotation export citation closure and filtering", criterion_annotations, 0},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string failure;
        try {
            criterion.fn();
        } catch (const std::exception& e) {
            failure = e.what();
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (failure.empty() && criterion.time_limit_s > 0 && seconds > criterion.time_limit_s)
            failure = "exceeded the " + str(criterion.time_limit_s) + "s budget";
        if (failure.empty()) {
            std::printf("PASS  %2d. %s (%.2fs)\n", criterion.number, criterion.name, seconds);
        } else {
            std::printf("FAIL  %2d. %s (%.2fs): %s\n", criterion.number, criterion.name, seconds,
                        failure.c_str());
            ++failures;
        }
    }
    return failures;
}
