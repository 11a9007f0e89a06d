#include "mss/agents.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include <json.hpp>

#include "mss/error.hpp"
#include "mss/values.hpp"

namespace mss::agents {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// InformationSet
// ---------------------------------------------------------------------------

InformationItem* InformationSet::find(const std::string& key) {
    for (auto& item : items)
        if (item.key == key) return &item;
    return nullptr;
}

const InformationItem* InformationSet::find(const std::string& key) const {
    for (const auto& item : items)
        if (item.key == key) return &item;
    return nullptr;
}

void InformationSet::upsert(const std::string& key, dsl::Value value,
                            dsl::Provenance provenance) {
    if (InformationItem* existing = find(key)) {
        existing->value = std::move(value);
        existing->provenance = std::move(provenance);
        existing->active = true;
        return;
    }
    items.push_back({key, std::move(value), std::move(provenance), true});
}

std::vector<InformationItem> InformationSet::active_items() const {
    std::vector<InformationItem> out;
    for (const auto& item : items)
        if (item.active) out.push_back(item);
    return out;
}

std::vector<prompts::SetItemLine> InformationSet::active_lines() const {
    std::vector<prompts::SetItemLine> out;
    for (const auto& item : items)
        if (item.active) out.push_back({item.key, dsl::value_to_string(item.value)});
    return out;
}

// ---------------------------------------------------------------------------
// Frame <-> matrix
// ---------------------------------------------------------------------------

Eigen::MatrixXd frame_to_matrix(const perception::GroundFrame& frame) {
    Eigen::MatrixXd m(4, 3);
    m.row(0) = frame.north.transpose();
    m.row(1) = frame.east.transpose();
    m.row(2) = frame.up.transpose();
    m.row(3) = frame.anchor.transpose();
    return m;
}

perception::GroundFrame frame_from_matrix(const Eigen::MatrixXd& m) {
    if (m.rows() != 4 || m.cols() != 3)
        throw Error(ErrorCode::TypeMismatch, "frame matrix must be 4x3 (north/east/up/anchor)");
    perception::GroundFrame frame;
    frame.north = m.row(0).transpose();
    frame.east = m.row(1).transpose();
    frame.up = m.row(2).transpose();
    frame.anchor = m.row(3).transpose();
    frame.south = -frame.north;
    frame.west = -frame.east;
    return frame;
}

// ---------------------------------------------------------------------------
// Episode tool registry
// ---------------------------------------------------------------------------

namespace {

dsl::DescriptorMap descriptors_to_map(const perception::MovementDescriptors& m) {
    return {{"forward", m.forward},         {"right", m.right},
            {"up", m.up},                   {"rotate_right", m.rotate_right},
            {"rotate_up", m.rotate_up},     {"rotate_roll", m.rotate_roll}};
}

struct RegistryState {
    EpisodeTools tools;
    std::optional<perception::SceneReconstruction> recon;
    uint64_t sog_calls = 0;

    perception::SceneReconstruction& ensure_recon() {
        if (!recon) recon = perception::reconstruct(tools.view_ids, *tools.provider);
        return *recon;
    }
};

} // namespace

dsl::ToolRegistry make_episode_registry(EpisodeTools tools) {
    auto state = std::make_shared<RegistryState>();
    state->tools = std::move(tools);

    dsl::ToolRegistry registry;
    registry.register_tool("perception.reconstruct", 0, [state](const std::vector<dsl::Value>&) {
        state->ensure_recon();
        return dsl::Value{dsl::ReconHandle{1}};
    });
    registry.register_tool("perception.locate", 1, [state](const std::vector<dsl::Value>& args) {
        auto& recon = state->ensure_recon();
        auto pos = perception::locate_object(dsl::arg_string(args, 0), recon,
                                             *state->tools.vision);
        if (!pos) return dsl::Value{dsl::Absent{}};
        return dsl::Value{*pos};
    });
    registry.register_tool("perception.calibrate", 3, [state](const std::vector<dsl::Value>& args) {
        auto& recon = state->ensure_recon();
        perception::GroundFrame frame = perception::calibrate_frame(
            dsl::arg_vec3(args, 0), dsl::arg_vec3(args, 1), dsl::arg_string(args, 2),
            recon.ground);
        return dsl::Value{frame_to_matrix(frame)};
    });
    registry.register_tool("perception.direction", 4, [](const std::vector<dsl::Value>& args) {
        perception::GroundFrame frame = frame_from_matrix(dsl::arg_matrix(args, 0));
        std::string label =
            perception::direction_label(frame, dsl::arg_vec3(args, 1), dsl::arg_vec3(args, 2),
                                        static_cast<int>(dsl::arg_number(args, 3)));
        return dsl::Value{dsl::Label{label}};
    });
    registry.register_tool("perception.ground_direction", 2,
                           [state](const std::vector<dsl::Value>& args) {
        auto& recon = state->ensure_recon();
        uint64_t seed = state->tools.rng_seed + state->sog_calls++;
        geometry::Vec3 dir = perception::sog_ground_direction(
            dsl::arg_string(args, 0), dsl::arg_string(args, 1), recon, *state->tools.vision,
            seed);
        return dsl::Value{dir};
    });
    registry.register_tool("perception.camera_motion", 2,
                           [state](const std::vector<dsl::Value>& args) {
        auto& recon = state->ensure_recon();
        int a = static_cast<int>(dsl::arg_number(args, 0));
        int b = static_cast<int>(dsl::arg_number(args, 1));
        int views = static_cast<int>(recon.views.size());
        if (a < 0 || b < 0 || a >= views || b >= views)
            throw Error(ErrorCode::OutOfBounds, "camera_motion view index out of range");
        perception::MovementDescriptors m = perception::relative_camera_movement(
            recon.extrinsic(static_cast<size_t>(a)), recon.extrinsic(static_cast<size_t>(b)));
        return dsl::Value{descriptors_to_map(m)};
    });
    registry.register_tool("compute.distance", 2, [](const std::vector<dsl::Value>& args) {
        return dsl::Value{(dsl::arg_vec3(args, 0) - dsl::arg_vec3(args, 1)).norm()};
    });
    registry.register_tool("compute.angle", 2, [](const std::vector<dsl::Value>& args) {
        return dsl::Value{
            geometry::angle_between_deg(dsl::arg_vec3(args, 0), dsl::arg_vec3(args, 1))};
    });
    return registry;
}

// ---------------------------------------------------------------------------
// Loop phases
// ---------------------------------------------------------------------------

PaTurnOutcome pa_turn(const std::string& request, const std::string& question,
                      InformationSet& set, dsl::Environment& env,
                      backends::ChatBackend& pa_chat, const dsl::ToolRegistry& registry,
                      const EpisodeConfig& config) {
    PaTurnOutcome outcome;
    std::vector<backends::ChatTurn> history{
        {backends::ChatTurn::Role::User,
         prompts::build_pa_prompt(request, question, set.active_lines(), config.templates),
         {}}};
    std::string diagnostic;
    for (int attempt = 0; attempt <= config.pa_repair_retries; ++attempt) {
        ++outcome.attempts;
        std::string reply;
        try {
            reply = pa_chat.chat(history);
        } catch (const Error& e) {
            diagnostic = e.what();
            outcome.error = diagnostic;
            continue;  // nothing to feed back; same prompt again
        }
        outcome.program_text = reply;
        try {
            std::set<std::string> known;
            for (const auto& [name, _] : env.bindings) known.insert(name);
            dsl::Program program = dsl::parse(reply, &known);
            dsl::ExecResult result = dsl::execute(program, env, registry);
            outcome.log = result.log;
            if (result.error) {
                diagnostic = *result.error;
            } else {
                env = std::move(result.env);
                for (auto& emit : result.emits)
                    set.upsert(emit.key, std::move(emit.value), std::move(emit.provenance));
                outcome.ok = true;
                outcome.error.clear();
                return outcome;
            }
        } catch (const Error& e) {
            diagnostic = e.what();
        }
        outcome.error = diagnostic;
        history.push_back({backends::ChatTurn::Role::Assistant, reply, {}});
        history.push_back({backends::ChatTurn::Role::User,
                           "[ERROR] " + diagnostic + "\nRewrite the full program.", {}});
    }
    outcome.error = Error(ErrorCode::PaExhaustedRetries, diagnostic).what();
    return outcome;
}

bool ra_curate(const std::string& question, InformationSet& set,
               backends::ChatBackend& ra_chat, const EpisodeConfig& config) {
    std::string prompt =
        prompts::build_curate_prompt(question, set.active_lines(), config.templates);
    for (int attempt = 0; attempt <= config.ra_retries; ++attempt) {
        std::string reply;
        try {
            reply = ra_chat.chat({{backends::ChatTurn::Role::User, prompt, {}}});
        } catch (const Error&) {
            continue;
        }
        json parsed = json::parse(reply, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_array()) continue;
        std::set<std::string> keep;
        bool valid = true;
        for (const auto& entry : parsed) {
            if (!entry.is_string()) {
                valid = false;
                break;
            }
            std::string key = entry.get<std::string>();
            const InformationItem* item = set.find(key);
            if (!item || !item->active) {
                valid = false;  // may only keep currently active keys
                break;
            }
            keep.insert(key);
        }
        if (!valid) continue;
        for (auto& item : set.items)
            if (item.active && !keep.count(item.key)) item.active = false;
        return false;
    }
    return true;  // keep everything; curation failed
}

namespace {

// First-tag-wins parsing of a decision reply.
std::optional<RaDecision> parse_decision(const std::string& reply,
                                         const std::vector<std::pair<std::string, std::string>>&
                                             choices) {
    const std::string kRequest = "<Request>";
    const std::string kDecide = "<Decide>";
    size_t req = reply.find(kRequest);
    size_t dec = reply.find(kDecide);
    if (req == std::string::npos && dec == std::string::npos) return std::nullopt;
    RaDecision decision;
    if (dec == std::string::npos || (req != std::string::npos && req < dec)) {
        std::string text = reply.substr(req + kRequest.size());
        size_t end = text.find('\n');
        if (end != std::string::npos) text = text.substr(0, end);
        size_t first = text.find_first_not_of(" \t");
        if (first == std::string::npos) return std::nullopt;
        size_t last = text.find_last_not_of(" \t\r");
        decision.kind = RaDecision::Kind::Request;
        decision.request_text = text.substr(first, last - first + 1);
        return decision;
    }
    std::string rest = reply.substr(dec + kDecide.size());
    size_t first = rest.find_first_not_of(" \t");
    if (first == std::string::npos) return std::nullopt;
    size_t last = rest.find_first_of(" \t\r\n", first);
    std::string label = rest.substr(first, last == std::string::npos ? std::string::npos
                                                                     : last - first);
    for (const auto& [choice_label, _] : choices)
        if (choice_label == label) {
            decision.kind = RaDecision::Kind::Decide;
            decision.label = label;
            return decision;
        }
    return std::nullopt;
}

std::string lowest_choice_label(const std::vector<std::pair<std::string, std::string>>& choices) {
    std::string lowest;
    for (const auto& [label, _] : choices)
        if (lowest.empty() || label < lowest) lowest = label;
    return lowest;
}

} // namespace

RaDecision ra_decide(const std::string& question,
                     const std::vector<std::pair<std::string, std::string>>& choices,
                     const InformationSet& set, bool forced,
                     backends::ChatBackend& ra_chat, const EpisodeConfig& config) {
    std::string prompt = prompts::build_decide_prompt(question, choices, set.active_lines(),
                                                      forced, config.templates);
    for (int attempt = 0; attempt <= config.ra_retries; ++attempt) {
        std::string reply;
        try {
            reply = ra_chat.chat({{backends::ChatTurn::Role::User, prompt, {}}});
        } catch (const Error&) {
            continue;
        }
        auto decision = parse_decision(reply, choices);
        if (!decision) continue;
        if (forced && decision->kind == RaDecision::Kind::Request) continue;  // must decide
        decision->forced = forced;
        return *decision;
    }
    RaDecision fallback;
    fallback.kind = RaDecision::Kind::Decide;
    fallback.label = lowest_choice_label(choices);
    fallback.forced = forced;
    fallback.fallback = true;
    return fallback;
}

// ---------------------------------------------------------------------------
// Episode loop
// ---------------------------------------------------------------------------

EpisodeTrace run_episode(const EpisodeQuestion& question, const EpisodeConfig& config,
                         backends::ChatBackend& pa_chat, backends::ChatBackend& ra_chat,
                         const dsl::ToolRegistry& registry) {
    auto start = std::chrono::steady_clock::now();
    EpisodeTrace trace;
    trace.question = question;

    InformationSet set;
    dsl::Environment env;
    std::string request = prompts::kBroadDirective;

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        auto elapsed_ms = [](std::chrono::steady_clock::time_point from) {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                             from)
                .count();
        };
        IterationRecord record;
        record.iteration = iter;
        record.request = request;
        auto t0 = std::chrono::steady_clock::now();
        record.pa = pa_turn(request, question.text, set, env, pa_chat, registry, config);
        record.pa_ms = elapsed_ms(t0);
        record.items_before_curation = set.active_items();
        t0 = std::chrono::steady_clock::now();
        record.curation_fallback = ra_curate(question.text, set, ra_chat, config);
        record.curate_ms = elapsed_ms(t0);
        record.items_after_curation = set.active_items();
        for (const auto& item : record.items_before_curation)
            if (!set.find(item.key)->active) record.pruned_keys.push_back(item.key);

        t0 = std::chrono::steady_clock::now();
        RaDecision decision = ra_decide(question.text, question.choices, set,
                                        /*forced=*/false, ra_chat, config);
        if (decision.kind == RaDecision::Kind::Request && iter == config.max_iterations)
            decision = ra_decide(question.text, question.choices, set, /*forced=*/true,
                                 ra_chat, config);
        record.decide_ms = elapsed_ms(t0);
        record.decision = decision;
        trace.iterations.push_back(std::move(record));

        if (decision.kind == RaDecision::Kind::Decide) {
            trace.answer_label = decision.label;
            trace.forced_decide = decision.forced;
            trace.fallback_decide = decision.fallback;
            break;
        }
        request = decision.request_text;
    }

    trace.final_set = std::move(set);
    trace.correct =
        !question.expected_label.empty() && trace.answer_label == question.expected_label;
    trace.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    return trace;
}

// ---------------------------------------------------------------------------
// Minimality ablation
// ---------------------------------------------------------------------------

AblationReport minimality_ablation(const std::vector<EpisodeTrace>& traces,
                                   backends::ChatBackend& reasoner, int steps,
                                   const prompts::Templates& templates) {
    std::vector<const EpisodeTrace*> qualifying;
    for (const auto& trace : traces) {
        if (static_cast<int>(trace.iterations.size()) != steps) continue;
        const RaDecision& decision = trace.iterations.back().decision;
        if (decision.kind != RaDecision::Kind::Decide || decision.forced || decision.fallback)
            continue;
        if (trace.question.expected_label.empty()) continue;
        qualifying.push_back(&trace);
    }
    if (qualifying.empty())
        throw Error(ErrorCode::InsufficientEpisodes,
                    "no trace has exactly " + std::to_string(steps) +
                        " iterations with a voluntary decision");

    AblationReport report;
    report.episodes = static_cast<int>(qualifying.size());
    for (int step = 1; step <= steps; ++step) {
        double size_sum = 0.0;
        int correct = 0;
        for (const EpisodeTrace* trace : qualifying) {
            // Iteration-n pre-curation set, completed with the final curated
            // items so the question is always answerable and only the
            // distractor load varies.
            std::vector<prompts::SetItemLine> lines;
            std::set<std::string> seen;
            for (const auto& item :
                 trace->iterations[static_cast<size_t>(step - 1)].items_before_curation) {
                lines.push_back({item.key, dsl::value_to_string(item.value)});
                seen.insert(item.key);
            }
            for (const auto& item : trace->final_set.active_items())
                if (!seen.count(item.key))
                    lines.push_back({item.key, dsl::value_to_string(item.value)});
            size_sum += static_cast<double>(lines.size());

            std::string prompt = prompts::build_decide_prompt(
                trace->question.text, trace->question.choices, lines, /*forced=*/true, templates);
            std::string reply =
                reasoner.chat({{backends::ChatTurn::Role::User, prompt, {}}});
            auto decision = parse_decision(reply, trace->question.choices);
            if (decision && decision->kind == RaDecision::Kind::Decide &&
                decision->label == trace->question.expected_label)
                ++correct;
        }
        AblationStep row;
        row.step = step;
        row.mean_set_size = size_sum / static_cast<double>(qualifying.size());
        row.accuracy = static_cast<double>(correct) / static_cast<double>(qualifying.size());
        report.steps.push_back(row);
    }
    return report;
}

} // namespace mss::agents
