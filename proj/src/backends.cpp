#include "mss/backends.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <regex>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "mss/error.hpp"
#include "mss/prompt_format.hpp"
#include "mss/question.hpp"
#include "mss/values.hpp"

namespace mss::backends {

using json = nlohmann::json;

namespace {

void validate_history(const std::vector<ChatTurn>& history) {
    if (history.empty()) throw Error(ErrorCode::ProtocolError, "empty chat history");
    for (const auto& turn : history)
        if (turn.text.empty() && turn.images.empty())
            throw Error(ErrorCode::ProtocolError, "chat turn with no text and no images");
}

const ChatTurn& last_user_turn(const std::vector<ChatTurn>& history) {
    for (auto it = history.rbegin(); it != history.rend(); ++it)
        if (it->role == ChatTurn::Role::User) return *it;
    throw Error(ErrorCode::ProtocolError, "history has no user turn");
}

} // namespace

// ---------------------------------------------------------------------------
// RecordingChat
// ---------------------------------------------------------------------------

std::string RecordingChat::chat(const std::vector<ChatTurn>& history) {
    validate_history(history);
    {
        std::lock_guard lock(mutex_);
        prompts_.push_back(last_user_turn(history).text);
    }
    return inner_.chat(history);
}

// ---------------------------------------------------------------------------
// HttpChatBackend
// ---------------------------------------------------------------------------

HttpChatConfig HttpChatConfig::from_env() {
    HttpChatConfig config;
    if (const char* v = std::getenv("MSS_API_URL")) config.url = v;
    if (const char* v = std::getenv("MSS_API_KEY")) config.api_key = v;
    if (const char* v = std::getenv("MSS_MODEL")) config.model = v;
    return config;
}

std::string HttpChatBackend::chat(const std::vector<ChatTurn>& history) {
    validate_history(history);

    size_t scheme_end = config_.url.find("://");
    if (scheme_end == std::string::npos)
        throw Error(ErrorCode::ProtocolError, "malformed endpoint url: " + config_.url);
    size_t path_start = config_.url.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? config_.url
                                                       : config_.url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : config_.url.substr(path_start);

    json messages = json::array();
    for (const auto& turn : history) {
        const char* role = turn.role == ChatTurn::Role::System ? "system"
                           : turn.role == ChatTurn::Role::User ? "user"
                                                               : "assistant";
        if (turn.images.empty()) {
            messages.push_back({{"role", role}, {"content", turn.text}});
        } else {
            json parts = json::array();
            if (!turn.text.empty()) parts.push_back({{"type", "text"}, {"text", turn.text}});
            for (const auto& image : turn.images)
                parts.push_back({{"type", "image_url"}, {"image_url", {{"url", image}}}});
            messages.push_back({{"role", role}, {"content", parts}});
        }
    }
    json body = {{"model", config_.model}, {"messages", messages}};
    std::string payload = body.dump();

    httplib::Client client(base);
    client.set_connection_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);
    client.set_read_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);
    httplib::Headers headers;
    if (!config_.api_key.empty())
        headers.insert({"Authorization", "Bearer " + config_.api_key});

    last_retries_ = 0;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) last_retries_ = attempt;
        auto res = client.Post(path, headers, payload, "application/json");
        if (!res) {
            if (res.error() == httplib::Error::ConnectionTimeout ||
                res.error() == httplib::Error::Read || res.error() == httplib::Error::Write)
                throw Error(ErrorCode::Timeout, "endpoint timed out: " + config_.url);
            throw Error(ErrorCode::ProtocolError,
                        "transport failure: " + httplib::to_string(res.error()));
        }
        if (res->status >= 500) continue;  // retry budget applies to server errors only
        if (res->status != 200)
            throw Error(ErrorCode::ProtocolError,
                        "endpoint returned status " + std::to_string(res->status));
        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty() ||
            !reply["choices"][0].contains("message") ||
            !reply["choices"][0]["message"].contains("content") ||
            !reply["choices"][0]["message"]["content"].is_string())
            throw Error(ErrorCode::ProtocolError, "malformed completion payload");
        return reply["choices"][0]["message"]["content"].get<std::string>();
    }
    throw Error(ErrorCode::ProtocolError,
                "endpoint kept failing after " + std::to_string(config_.max_retries) + " retries");
}

// ---------------------------------------------------------------------------
// SyntheticSceneProvider
// ---------------------------------------------------------------------------

SyntheticSceneProvider::SyntheticSceneProvider(scene_sim::SyntheticScene scene,
                                               double floor_confidence, bool with_masks)
    : scene_(std::move(scene)), confidence_(floor_confidence), with_masks_(with_masks) {}

perception::ProviderOutput SyntheticSceneProvider::run(const std::vector<int>& view_ids) {
    perception::ProviderOutput out;
    out.floor_confidence = confidence_;
    for (int id : view_ids) {
        if (id < 0 || id >= static_cast<int>(scene_.cameras.size()))
            throw Error(ErrorCode::ProviderFailure, "unknown view id " + std::to_string(id));
        scene_sim::RenderResult render = scene_sim::render_view(scene_, id);
        perception::ViewData view;
        view.intrinsics = scene_.cameras[id].intrinsics;
        view.pose = scene_.cameras[id].pose;
        view.depth = render.depth;
        if (with_masks_) {
            geometry::PixelMask mask =
                geometry::PixelMask::empty_mask(render.depth.width, render.depth.height);
            for (int v = 0; v < render.depth.height; ++v)
                for (int u = 0; u < render.depth.width; ++u)
                    if (render.hit_at(u, v) == scene_sim::kHitGround) mask.set(u, v);
            view.floor_mask = mask;
        }
        out.views.push_back(std::move(view));
    }
    return out;
}

// ---------------------------------------------------------------------------
// OracleVisionBackend
// ---------------------------------------------------------------------------

OracleVisionBackend::OracleVisionBackend(scene_sim::SyntheticScene scene, uint64_t rng_seed,
                                         double noise_p)
    : scene_(std::move(scene)), rng_(rng_seed), noise_p_(noise_p) {
    for (size_t i = 0; i < scene_.cameras.size(); ++i)
        renders_.push_back(scene_sim::render_view(scene_, static_cast<int>(i)));
}

namespace {

// Resolves a free-form description to the scene object whose name occurs in
// it (word-delimited); an exact name match always wins.
int resolve_object(const scene_sim::SyntheticScene& scene, const std::string& description) {
    int idx = scene.object_index(description);
    if (idx >= 0) return idx;
    for (size_t i = 0; i < scene.objects.size(); ++i) {
        const std::string& name = scene.objects[i].name;
        size_t pos = description.find(name);
        while (pos != std::string::npos) {
            bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(description[pos - 1]));
            size_t end = pos + name.size();
            bool right_ok = end >= description.size() ||
                            !std::isalnum(static_cast<unsigned char>(description[end]));
            if (left_ok && right_ok) return static_cast<int>(i);
            pos = description.find(name, pos + 1);
        }
    }
    return -1;
}

} // namespace

std::optional<int> OracleVisionBackend::select_view(const perception::SceneReconstruction&,
                                                    const std::string& description) {
    int object = resolve_object(scene_, description);
    if (object < 0) throw Error(ErrorCode::NotFound, "no scene object matches: " + description);
    int best_view = -1;
    size_t best_count = 0;
    for (size_t view = 0; view < renders_.size(); ++view) {
        size_t count = static_cast<size_t>(
            std::count(renders_[view].hit_ids.begin(), renders_[view].hit_ids.end(), object));
        if (count > best_count) {
            best_count = count;
            best_view = static_cast<int>(view);
        }
    }
    if (best_view < 0) return std::nullopt;
    return best_view;
}

std::optional<perception::DetectionBox> OracleVisionBackend::detect_object(
    int view, const std::string& description) {
    int object = resolve_object(scene_, description);
    if (object < 0) throw Error(ErrorCode::NotFound, "no scene object matches: " + description);
    const scene_sim::RenderResult& render = renders_.at(static_cast<size_t>(view));
    int x0 = render.depth.width, y0 = render.depth.height, x1 = -1, y1 = -1;
    for (int v = 0; v < render.depth.height; ++v)
        for (int u = 0; u < render.depth.width; ++u)
            if (render.hit_at(u, v) == object) {
                x0 = std::min(x0, u);
                y0 = std::min(y0, v);
                x1 = std::max(x1, u);
                y1 = std::max(y1, v);
            }
    if (x1 < 0) return std::nullopt;
    return perception::DetectionBox{static_cast<double>(x0), static_cast<double>(y0),
                                    static_cast<double>(x1), static_cast<double>(y1), 1.0};
}

geometry::PixelMask OracleVisionBackend::segment(int view, const perception::DetectionBox& box) {
    const scene_sim::RenderResult& render = renders_.at(static_cast<size_t>(view));
    int u0 = std::max(0, static_cast<int>(std::floor(box.x0)));
    int v0 = std::max(0, static_cast<int>(std::floor(box.y0)));
    int u1 = std::min(render.depth.width - 1, static_cast<int>(std::ceil(box.x1)));
    int v1 = std::min(render.depth.height - 1, static_cast<int>(std::ceil(box.y1)));
    // Dominant object inside the box defines the instance.
    std::map<int, size_t> counts;
    for (int v = v0; v <= v1; ++v)
        for (int u = u0; u <= u1; ++u) {
            int id = render.hit_at(u, v);
            if (id >= 0) ++counts[id];
        }
    geometry::PixelMask mask =
        geometry::PixelMask::empty_mask(render.depth.width, render.depth.height);
    if (counts.empty()) return mask;
    int dominant = counts.begin()->first;
    size_t best = 0;
    for (const auto& [id, count] : counts)
        if (count > best) {
            best = count;
            dominant = id;
        }
    for (int v = v0; v <= v1; ++v)
        for (int u = u0; u <= u1; ++u)
            if (render.hit_at(u, v) == dominant) mask.set(u, v);
    return mask;
}

geometry::Vec3 OracleVisionBackend::resolve_true_direction(const std::string& query) const {
    int object = resolve_object(scene_, query);
    if (object >= 0 && scene_.objects[static_cast<size_t>(object)].facing)
        return *scene_.objects[static_cast<size_t>(object)].facing;
    throw Error(ErrorCode::NotFound, "no facing ground truth for query: " + query);
}

int OracleVisionBackend::select_arrow(const perception::ArrowOverlay& situated,
                                      const perception::ArrowOverlay&, const std::string& query) {
    const auto& candidates = situated.candidates;
    if (candidates.vectors.empty())
        throw Error(ErrorCode::EmptySelection, "overlay carries no direction candidates");
    geometry::Vec3 truth = resolve_true_direction(query);
    int best = 0, second = 0;
    double best_angle = std::numeric_limits<double>::infinity();
    double second_angle = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < candidates.vectors.size(); ++i) {
        double angle = geometry::angle_between_deg(candidates.vectors[i], truth);
        if (angle < best_angle) {
            second = best;
            second_angle = best_angle;
            best = static_cast<int>(i);
            best_angle = angle;
        } else if (angle < second_angle) {
            second = static_cast<int>(i);
            second_angle = angle;
        }
    }
    if (noise_p_ > 0.0) {
        std::lock_guard lock(mutex_);
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < noise_p_) return second;
    }
    return best;
}

// ---------------------------------------------------------------------------
// ScriptedPaBackend
// ---------------------------------------------------------------------------

ScriptedPaBackend::ScriptedPaBackend(scene_sim::SyntheticScene scene, bool eager)
    : scene_(std::move(scene)), eager_(eager) {}

namespace {

std::string locate_lines(const std::string& name) {
    return "p_" + name + " = perception.locate(\"" + name + "\")\n" + "emit \"" +
           question::pos_key(name) + "\" p_" + name + "\n";
}

std::string calibrate_lines(const question::Model& model) {
    std::string out;
    out += "ca_" + model.calib_anchor + " = perception.locate(\"" + model.calib_anchor + "\")\n";
    out += "ct_" + model.calib_target + " = perception.locate(\"" + model.calib_target + "\")\n";
    out += "f = perception.calibrate(ca_" + model.calib_anchor + ", ct_" + model.calib_target +
           ", \"" + model.calib_label + "\")\n";
    out += "emit \"" + question::kFrameKey + "\" f\n";
    return out;
}

} // namespace

std::string ScriptedPaBackend::broad_program(const std::string& question_text) const {
    std::string out = "r = perception.reconstruct()\n";
    for (const auto& object : scene_.objects) out += locate_lines(object.name);
    // Pairwise-distance extras: true but irrelevant facts the curation step
    // has to prune.
    for (size_t i = 0; i + 1 < scene_.objects.size() && i < 4; ++i) {
        const std::string& a = scene_.objects[i].name;
        const std::string& b = scene_.objects[i + 1].name;
        out += "d_" + a + "_" + b + " = compute.distance(p_" + a + ", p_" + b + ")\n";
        out += "emit \"dist_" + a + "_" + b + "\" d_" + a + "_" + b + "\n";
    }
    if (!eager_) return out;
    auto model = question::Model::parse(question_text);
    if (model && !model->calib_label.empty()) {
        out += "f = perception.calibrate(p_" + model->calib_anchor + ", p_" +
               model->calib_target + ", \"" + model->calib_label + "\")\n";
        out += "emit \"" + question::kFrameKey + "\" f\n";
    }
    for (size_t i = 0; i + 1 < scene_.cameras.size(); ++i) {
        std::string key = question::cam_move_key(static_cast<int>(i), static_cast<int>(i + 1));
        out += "m_" + std::to_string(i) + " = perception.camera_motion(" + std::to_string(i) +
               ", " + std::to_string(i + 1) + ")\n";
        out += "emit \"" + key + "\" m_" + std::to_string(i) + "\n";
    }
    return out;
}

std::string ScriptedPaBackend::chat(const std::vector<ChatTurn>& history) {
    validate_history(history);
    const std::string& text = last_user_turn(history).text;
    auto request = prompts::extract_line_after(text, prompts::kRequestMarker);
    auto question_text = prompts::extract_line_after(text, prompts::kQuestionMarker);
    if (!request || !question_text)
        throw Error(ErrorCode::RuleMiss, "prompt lacks request/question markers");

    if (*request == prompts::kBroadDirective) return broad_program(*question_text);

    std::smatch m;
    if (std::regex_match(*request, m, std::regex(R"(The position of the (\w+)\.)"))) {
        return "r = perception.reconstruct()\n" + locate_lines(m[1].str());
    }
    if (std::regex_match(*request, m, std::regex(R"(The facing direction of the (\w+)\.)"))) {
        std::string name = m[1].str();
        return "r = perception.reconstruct()\n"
               "g_" + name + " = perception.ground_direction(\"facing of the " + name +
               "\", \"" + name + "\")\n" +
               "emit \"" + question::facing_key(name) + "\" g_" + name + "\n";
    }
    if (request->rfind("The compass frame calibration", 0) == 0) {
        auto model = question::Model::parse(*question_text);
        if (!model || model->calib_label.empty())
            throw Error(ErrorCode::RuleMiss, "question carries no calibration clause");
        return "r = perception.reconstruct()\n" + calibrate_lines(*model);
    }
    if (std::regex_match(
            *request, m,
            std::regex(R"(The camera movement between view (\d+) and view (\d+)\.)"))) {
        int a = std::stoi(m[1].str());
        int b = std::stoi(m[2].str());
        return "r = perception.reconstruct()\n"
               "m = perception.camera_motion(" + std::to_string(a) + ", " + std::to_string(b) +
               ")\n" + "emit \"" + question::cam_move_key(a, b) + "\" m\n";
    }
    throw Error(ErrorCode::RuleMiss, "no rule matches request: " + *request);
}

// ---------------------------------------------------------------------------
// ScriptedRaBackend
// ---------------------------------------------------------------------------

namespace {

std::optional<geometry::Vec3> parse_vec3_text(const std::string& text) {
    double x = 0, y = 0, z = 0;
    if (std::sscanf(text.c_str(), "(%lf, %lf, %lf)", &x, &y, &z) != 3) return std::nullopt;
    return geometry::Vec3(x, y, z);
}

std::optional<Eigen::MatrixXd> parse_matrix_text(const std::string& text) {
    std::vector<std::vector<double>> rows;
    size_t pos = text.find('[');
    if (pos == std::string::npos) return std::nullopt;
    ++pos;
    while (pos < text.size()) {
        size_t open = text.find('[', pos);
        if (open == std::string::npos) break;
        size_t close = text.find(']', open);
        if (close == std::string::npos) return std::nullopt;
        std::vector<double> row;
        std::istringstream in(text.substr(open + 1, close - open - 1));
        std::string cell;
        while (std::getline(in, cell, ','))
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                return std::nullopt;
            }
        rows.push_back(std::move(row));
        pos = close + 1;
    }
    if (rows.empty()) return std::nullopt;
    Eigen::MatrixXd out(rows.size(), rows[0].size());
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) return std::nullopt;
        for (size_t c = 0; c < rows[r].size(); ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    return out;
}

std::optional<dsl::DescriptorMap> parse_map_text(const std::string& text) {
    if (text.size() < 2 || text.front() != '{' || text.back() != '}') return std::nullopt;
    dsl::DescriptorMap out;
    std::istringstream in(text.substr(1, text.size() - 2));
    std::string entry;
    while (std::getline(in, entry, ',')) {
        size_t colon = entry.find(':');
        if (colon == std::string::npos) return std::nullopt;
        std::string key = entry.substr(0, colon);
        key.erase(0, key.find_first_not_of(' '));
        key.erase(key.find_last_not_of(' ') + 1);
        try {
            out[key] = std::stod(entry.substr(colon + 1));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    if (out.empty()) return std::nullopt;
    return out;
}

// The 4x3 frame matrix rows are north, east, up, anchor.
std::optional<perception::GroundFrame> frame_from_matrix(const Eigen::MatrixXd& m) {
    if (m.rows() != 4 || m.cols() != 3) return std::nullopt;
    perception::GroundFrame frame;
    frame.north = m.row(0).transpose();
    frame.east = m.row(1).transpose();
    frame.up = m.row(2).transpose();
    frame.anchor = m.row(3).transpose();
    frame.south = -frame.north;
    frame.west = -frame.east;
    return frame;
}

std::string topic_for_key(const std::string& key) {
    if (key.rfind("pos_", 0) == 0) return "The position of the " + key.substr(4) + ".";
    if (key.rfind("facing_dir_", 0) == 0)
        return "The facing direction of the " + key.substr(11) + ".";
    std::smatch m;
    if (std::regex_match(key, m, std::regex(R"(cam_move_(\d+)_(\d+))")))
        return "The camera movement between view " + m[1].str() + " and view " + m[2].str() + ".";
    if (key == question::kFrameKey) return "The compass frame calibration for this question.";
    return "More information about " + key + ".";
}

using ItemMap = std::map<std::string, std::string>;

// Computes the answer text from the prompt-rendered item values alone.
std::optional<std::string> compute_answer(const question::Model& model, const ItemMap& items) {
    auto value = [&](const std::string& key) -> std::optional<std::string> {
        auto it = items.find(key);
        if (it == items.end()) return std::nullopt;
        return it->second;
    };
    switch (model.category) {
        case question::Category::Direction: {
            auto frame_text = value(question::kFrameKey);
            auto ps = value(question::pos_key(model.subject));
            auto pr = value(question::pos_key(model.reference));
            if (!frame_text || !ps || !pr) return std::nullopt;
            auto matrix = parse_matrix_text(*frame_text);
            auto vs = parse_vec3_text(*ps);
            auto vr = parse_vec3_text(*pr);
            if (!matrix || !vs || !vr) return std::nullopt;
            auto frame = frame_from_matrix(*matrix);
            if (!frame) return std::nullopt;
            return perception::label_vector(*frame, *vs - *vr, 8);
        }
        case question::Category::Facing: {
            auto frame_text = value(question::kFrameKey);
            auto fs = value(question::facing_key(model.subject));
            if (!frame_text || !fs) return std::nullopt;
            auto matrix = parse_matrix_text(*frame_text);
            auto vf = parse_vec3_text(*fs);
            if (!matrix || !vf) return std::nullopt;
            auto frame = frame_from_matrix(*matrix);
            if (!frame) return std::nullopt;
            return perception::label_vector(*frame, *vf, 8);
        }
        case question::Category::CameraMotion: {
            auto move_text = value(question::cam_move_key(model.view_a, model.view_b));
            if (!move_text) return std::nullopt;
            auto map = parse_map_text(*move_text);
            if (!map) return std::nullopt;
            perception::MovementDescriptors m;
            auto get = [&](const char* key) {
                auto it = map->find(key);
                return it == map->end() ? 0.0 : it->second;
            };
            m.forward = get("forward");
            m.right = get("right");
            m.up = get("up");
            m.rotate_right = get("rotate_right");
            m.rotate_up = get("rotate_up");
            m.rotate_roll = get("rotate_roll");
            return question::motion_phrase(m);
        }
        case question::Category::Nearest: {
            auto ps = value(question::pos_key(model.subject));
            if (!ps) return std::nullopt;
            auto vs = parse_vec3_text(*ps);
            if (!vs) return std::nullopt;
            std::string best;
            double best_dist = std::numeric_limits<double>::infinity();
            for (const auto& candidate : model.candidates) {
                auto pc = value(question::pos_key(candidate));
                if (!pc) return std::nullopt;
                auto vc = parse_vec3_text(*pc);
                if (!vc) return std::nullopt;
                double dist = (*vc - *vs).norm();
                if (dist < best_dist) {
                    best_dist = dist;
                    best = candidate;
                }
            }
            return best;
        }
    }
    return std::nullopt;
}

} // namespace

std::string ScriptedRaBackend::chat(const std::vector<ChatTurn>& history) {
    validate_history(history);
    const std::string& text = last_user_turn(history).text;
    auto question_text = prompts::extract_line_after(text, prompts::kQuestionMarker);
    auto item_lines = prompts::parse_set_items(text);
    ItemMap items;
    for (const auto& line : item_lines) items[line.key] = line.value;

    if (prompts::has_marker(text, prompts::kCurateMarker)) {
        std::optional<question::Model> model;
        if (question_text) model = question::Model::parse(*question_text);
        json keep = json::array();
        if (!model) {
            for (const auto& line : item_lines) keep.push_back(line.key);
            return keep.dump();
        }
        for (const auto& key : model->required_keys())
            if (items.count(key)) keep.push_back(key);
        return keep.dump();
    }

    if (prompts::has_marker(text, prompts::kDecideMarker)) {
        bool forced = prompts::has_marker(text, prompts::kForcedMarker);
        auto choices = prompts::parse_choices(text);
        std::optional<question::Model> model;
        if (question_text) model = question::Model::parse(*question_text);
        if (!model) return "<Request> Clarify the question.";

        std::optional<std::string> missing;
        for (const auto& key : model->required_keys())
            if (!items.count(key)) {
                missing = key;
                break;
            }
        if (missing && !forced) return "<Request> " + topic_for_key(*missing);

        std::optional<std::string> answer;
        if (!missing) answer = compute_answer(*model, items);
        std::string correct_label;
        if (answer)
            for (const auto& [label, choice_text] : choices)
                if (choice_text == *answer) correct_label = label;

        if (options_.distractor_sensitive && !correct_label.empty() &&
            items.size() > options_.max_items) {
            // Too many distractors: deterministically pick a wrong choice.
            for (const auto& [label, choice_text] : choices)
                if (label != correct_label) return "<Decide> " + label;
        }
        if (correct_label.empty()) {
            if (forced && !choices.empty()) return "<Decide> " + choices.front().first;
            return "<Request> " +
                   topic_for_key(missing ? *missing : model->required_keys().front());
        }
        return "<Decide> " + correct_label;
    }

    throw Error(ErrorCode::RuleMiss, "prompt carries no curate/decide marker");
}

} // namespace mss::backends
