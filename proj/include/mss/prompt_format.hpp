#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mss::prompts {

// Structured markers shared by the prompt builders (agents) and the scripted
// backends (which key their rule tables on them). Real model backends just see
// readable text.
inline constexpr const char* kRequestMarker = "[REQUEST]";
inline constexpr const char* kQuestionMarker = "[QUESTION]";
inline constexpr const char* kChoicesMarker = "[CHOICES]";
inline constexpr const char* kSetMarker = "[SET]";
inline constexpr const char* kEndMarker = "[END]";
inline constexpr const char* kCurateMarker = "[CURATE]";
inline constexpr const char* kDecideMarker = "[DECIDE]";
inline constexpr const char* kForcedMarker = "[FORCED]";

// The Perception Agent's iteration-1 directive.
inline const std::string kBroadDirective =
    "Extract all potentially relevant information from the scene for answering the question.";

struct SetItemLine {
    std::string key;
    std::string value;  // rendered value text, single line
};

// Editable template set with named placeholders {request} {question} {choices}
// {set} {forced}. Loading from a directory replaces any template whose file
// (pa.txt, curate.txt, decide.txt) exists.
struct Templates {
    std::string pa;
    std::string curate;
    std::string decide;

    static const Templates& defaults();
    static Templates from_directory(const std::string& dir);
};

std::string build_pa_prompt(const std::string& request, const std::string& question,
                            const std::vector<SetItemLine>& items,
                            const Templates& templates = Templates::defaults());

std::string build_curate_prompt(const std::string& question,
                                const std::vector<SetItemLine>& items,
                                const Templates& templates = Templates::defaults());

std::string build_decide_prompt(const std::string& question,
                                const std::vector<std::pair<std::string, std::string>>& choices,
                                const std::vector<SetItemLine>& items, bool forced,
                                const Templates& templates = Templates::defaults());

// Parsing helpers used by scripted backends (and tests).
std::optional<std::string> extract_line_after(const std::string& text, const std::string& marker);
std::vector<SetItemLine> parse_set_items(const std::string& text);
std::vector<std::pair<std::string, std::string>> parse_choices(const std::string& text);
bool has_marker(const std::string& text, const std::string& marker);

} // namespace mss::prompts
