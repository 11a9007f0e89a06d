#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mss/backends.hpp"
#include "mss/dsl.hpp"
#include "mss/prompt_format.hpp"

namespace mss::agents {

// ---------------------------------------------------------------------------
// Information set
// ---------------------------------------------------------------------------

struct InformationItem {
    std::string key;
    dsl::Value value;
    dsl::Provenance provenance;
    bool active = true;  // pruned items stay recorded but leave all prompts
};

struct InformationSet {
    std::vector<InformationItem> items;

    InformationItem* find(const std::string& key);
    const InformationItem* find(const std::string& key) const;
    // Insert or overwrite; re-emitting a key reactivates it.
    void upsert(const std::string& key, dsl::Value value, dsl::Provenance provenance);
    std::vector<InformationItem> active_items() const;
    std::vector<prompts::SetItemLine> active_lines() const;
};

// ---------------------------------------------------------------------------
// Episode state
// ---------------------------------------------------------------------------

struct RaDecision {
    enum class Kind { Request, Decide } kind = Kind::Request;
    std::string request_text;  // Request
    std::string label;         // Decide
    bool forced = false;       // produced under the exhausted-budget prompt
    bool fallback = false;     // malformed replies exhausted retries
};

struct EpisodeConfig {
    int max_iterations = 4;
    int pa_repair_retries = 2;
    int ra_retries = 2;
    uint64_t rng_seed = 0;
    prompts::Templates templates = prompts::Templates::defaults();
};

struct PaTurnOutcome {
    bool ok = false;
    std::string program_text;  // last reply
    dsl::ExecutionLog log;
    std::string error;  // diagnostic of the last failed attempt
    int attempts = 0;
};

struct IterationRecord {
    int iteration = 0;  // 1-based
    std::string request;
    PaTurnOutcome pa;
    std::vector<InformationItem> items_before_curation;  // active snapshot
    std::vector<InformationItem> items_after_curation;   // active snapshot
    std::vector<std::string> pruned_keys;
    bool curation_fallback = false;
    RaDecision decision;
    double pa_ms = 0.0;
    double curate_ms = 0.0;
    double decide_ms = 0.0;
};

struct EpisodeQuestion {
    std::string id;
    std::string text;
    std::vector<std::pair<std::string, std::string>> choices;  // (label, text)
    std::string expected_label;  // optional ground truth for scoring
};

struct EpisodeTrace {
    EpisodeQuestion question;
    std::vector<IterationRecord> iterations;
    InformationSet final_set;
    std::string answer_label;
    bool forced_decide = false;
    bool fallback_decide = false;
    bool correct = false;  // meaningful only when expected_label is set
    double wall_ms = 0.0;
};

// ---------------------------------------------------------------------------
// Tool registry over a reconstruction provider + vision backend
// ---------------------------------------------------------------------------

struct EpisodeTools {
    std::shared_ptr<perception::ReconstructionProvider> provider;
    std::shared_ptr<perception::VisionBackend> vision;
    std::vector<int> view_ids;
    uint64_t rng_seed = 0;
};

// perception.reconstruct/locate/calibrate/direction/ground_direction/
// camera_motion plus compute.distance/angle. The reconstruction is built on
// first use and cached for the episode.
dsl::ToolRegistry make_episode_registry(EpisodeTools tools);

// Frame values travel through the set as a 4x3 matrix whose rows are
// north, east, up, anchor.
Eigen::MatrixXd frame_to_matrix(const perception::GroundFrame& frame);
perception::GroundFrame frame_from_matrix(const Eigen::MatrixXd& m);

// ---------------------------------------------------------------------------
// Loop phases
// ---------------------------------------------------------------------------

PaTurnOutcome pa_turn(const std::string& request, const std::string& question,
                      InformationSet& set, dsl::Environment& env,
                      backends::ChatBackend& pa_chat, const dsl::ToolRegistry& registry,
                      const EpisodeConfig& config);

// Subtractive curation: the reply is a JSON array of keys to keep; everything
// else active is pruned. Malformed replies retry, then keep everything.
// Returns true when the fallback fired.
bool ra_curate(const std::string& question, InformationSet& set,
               backends::ChatBackend& ra_chat, const EpisodeConfig& config);

RaDecision ra_decide(const std::string& question,
                     const std::vector<std::pair<std::string, std::string>>& choices,
                     const InformationSet& set, bool forced,
                     backends::ChatBackend& ra_chat, const EpisodeConfig& config);

EpisodeTrace run_episode(const EpisodeQuestion& question, const EpisodeConfig& config,
                         backends::ChatBackend& pa_chat, backends::ChatBackend& ra_chat,
                         const dsl::ToolRegistry& registry);

// ---------------------------------------------------------------------------
// Curation-minimality ablation
// ---------------------------------------------------------------------------

struct AblationStep {
    int step = 0;  // 1-based iteration index
    double mean_set_size = 0.0;
    double accuracy = 0.0;
};

struct AblationReport {
    std::vector<AblationStep> steps;
    int episodes = 0;
};

// For each qualifying trace (exactly `steps` iterations, voluntary decide),
// replays the decide prompt against `reasoner` on the iteration-n
// pre-curation set merged with the final curated set, and scores against the
// expected label. Throws InsufficientEpisodes when no trace qualifies.
AblationReport minimality_ablation(const std::vector<EpisodeTrace>& traces,
                                   backends::ChatBackend& reasoner, int steps = 3,
                                   const prompts::Templates& templates =
                                       prompts::Templates::defaults());

} // namespace mss::agents
