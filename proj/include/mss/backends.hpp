#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mss/perception.hpp"
#include "mss/scene_sim.hpp"

namespace mss::backends {

// ---------------------------------------------------------------------------
// Chat interface
// ---------------------------------------------------------------------------

struct ChatTurn {
    enum class Role { System, User, Assistant } role = Role::User;
    std::string text;
    std::vector<std::string> images;  // raster references / base64 payloads
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    // history must be nonempty; every turn needs text or at least one image.
    virtual std::string chat(const std::vector<ChatTurn>& history) = 0;
};

// Wrapper that records every prompt passed through it; used by tests to
// assert what pruned items never reappear in later prompts.
class RecordingChat : public ChatBackend {
public:
    explicit RecordingChat(ChatBackend& inner) : inner_(inner) {}
    std::string chat(const std::vector<ChatTurn>& history) override;
    const std::vector<std::string>& prompts() const { return prompts_; }

private:
    ChatBackend& inner_;
    std::vector<std::string> prompts_;
    std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// HTTP chat backend (chat-completion style endpoint)
// ---------------------------------------------------------------------------

struct HttpChatConfig {
    std::string url;      // e.g. http://localhost:8080/v1/chat/completions
    std::string api_key;  // sent as a bearer token when nonempty
    std::string model;
    int timeout_ms = 30000;
    int max_retries = 2;  // additional attempts after a 5xx

    // Reads MSS_API_URL, MSS_API_KEY, MSS_MODEL.
    static HttpChatConfig from_env();
};

class HttpChatBackend : public ChatBackend {
public:
    explicit HttpChatBackend(HttpChatConfig config) : config_(std::move(config)) {}
    std::string chat(const std::vector<ChatTurn>& history) override;
    int last_retry_count() const { return last_retries_; }

private:
    HttpChatConfig config_;
    int last_retries_ = 0;
};

// ---------------------------------------------------------------------------
// Synthetic-scene providers (oracles)
// ---------------------------------------------------------------------------

// Reconstruction provider backed by the analytic renderer, with exact
// per-view floor masks.
class SyntheticSceneProvider : public perception::ReconstructionProvider {
public:
    explicit SyntheticSceneProvider(scene_sim::SyntheticScene scene,
                                    double floor_confidence = 1.0, bool with_masks = true);
    perception::ProviderOutput run(const std::vector<int>& view_ids) override;
    const scene_sim::SyntheticScene& scene() const { return scene_; }

private:
    scene_sim::SyntheticScene scene_;
    double confidence_;
    bool with_masks_;
};

// Vision backend answering from synthetic ground truth. select_view maximizes
// the object's unoccluded projected area; detection and segmentation are
// exact; select_arrow picks the candidate closest to the true direction for
// the query (ties broken toward the lower index). With noise_p > 0, the
// second-best candidate is picked with that probability (seeded).
class OracleVisionBackend : public perception::VisionBackend {
public:
    explicit OracleVisionBackend(scene_sim::SyntheticScene scene, uint64_t rng_seed = 0,
                                 double noise_p = 0.0);

    std::optional<int> select_view(const perception::SceneReconstruction& recon,
                                   const std::string& description) override;
    std::optional<perception::DetectionBox> detect_object(int view,
                                                          const std::string& description) override;
    geometry::PixelMask segment(int view, const perception::DetectionBox& box) override;
    int select_arrow(const perception::ArrowOverlay& situated,
                     const perception::ArrowOverlay& canonical,
                     const std::string& query) override;

    // The hidden true direction for a query: the facing vector of the first
    // scene object whose name occurs in the query text.
    geometry::Vec3 resolve_true_direction(const std::string& query) const;

private:
    scene_sim::SyntheticScene scene_;
    std::vector<scene_sim::RenderResult> renders_;
    std::mt19937_64 rng_;
    double noise_p_;
    int last_object_ = -1;
    std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// Scripted agents (deterministic rule tables over prompt markers)
// ---------------------------------------------------------------------------

// Perception Agent rules. Eager mode answers the broad initial directive with
// a full extraction (positions, frame, camera motions, distance extras);
// lazy mode extracts positions only, so every remaining fact costs one more
// request — used by iteration-count ablations.
class ScriptedPaBackend : public ChatBackend {
public:
    explicit ScriptedPaBackend(scene_sim::SyntheticScene scene, bool eager = true);
    std::string chat(const std::vector<ChatTurn>& history) override;

private:
    std::string broad_program(const std::string& question) const;
    scene_sim::SyntheticScene scene_;
    bool eager_;
};

// Reasoning Agent rules. Curation keeps exactly the keys the question needs;
// decision answers from the item values rendered in the prompt (never from
// scene ground truth), or requests the first missing key's topic.
class ScriptedRaBackend : public ChatBackend {
public:
    struct Options {
        // When set, the reasoner is distractor-sensitive: it answers
        // correctly only if the active set is small enough.
        bool distractor_sensitive = false;
        size_t max_items = 6;
    };
    ScriptedRaBackend() = default;
    explicit ScriptedRaBackend(Options options) : options_(options) {}
    std::string chat(const std::vector<ChatTurn>& history) override;

private:
    Options options_;
};

} // namespace mss::backends
