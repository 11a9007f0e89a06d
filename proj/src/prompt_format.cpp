#include "mss/prompt_format.hpp"

#include <fstream>
#include <sstream>

#include "mss/error.hpp"

namespace mss::prompts {

namespace {

const char* kDefaultPa =
    "You are the Perception Agent. Reply with a program in the tool command language only.\n"
    "[REQUEST] {request}\n"
    "[QUESTION] {question}\n"
    "[SET]\n{set}[END]\n";

const char* kDefaultCurate =
    "You are the Reasoning Agent. Plan how to answer the question, then reply with a JSON array\n"
    "of the information keys to keep. Keys not listed will be pruned.\n"
    "[CURATE]\n"
    "[QUESTION] {question}\n"
    "[SET]\n{set}[END]\n";

const char* kDefaultDecide =
    "You are the Reasoning Agent. Using only the information below, either answer with\n"
    "'<Decide> <label>' or ask for one missing fact with '<Request> <directive>'.{forced}\n"
    "[DECIDE]{forced_marker}\n"
    "[QUESTION] {question}\n"
    "[CHOICES]\n{choices}"
    "[SET]\n{set}[END]\n";

std::string replace_all_of(std::string text, const std::string& needle, const std::string& with) {
    size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), with);
        pos += with.size();
    }
    return text;
}

std::string render_set(const std::vector<SetItemLine>& items) {
    std::string out;
    for (const auto& item : items) out += "- " + item.key + " = " + item.value + "\n";
    return out;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

const Templates& Templates::defaults() {
    static const Templates t{kDefaultPa, kDefaultCurate, kDefaultDecide};
    return t;
}

Templates Templates::from_directory(const std::string& dir) {
    Templates t = defaults();
    if (auto s = read_file(dir + "/pa.txt")) t.pa = *s;
    if (auto s = read_file(dir + "/curate.txt")) t.curate = *s;
    if (auto s = read_file(dir + "/decide.txt")) t.decide = *s;
    return t;
}

std::string build_pa_prompt(const std::string& request, const std::string& question,
                            const std::vector<SetItemLine>& items, const Templates& templates) {
    std::string out = templates.pa;
    out = replace_all_of(out, "{request}", request);
    out = replace_all_of(out, "{question}", question);
    out = replace_all_of(out, "{set}", render_set(items));
    return out;
}

std::string build_curate_prompt(const std::string& question,
                                const std::vector<SetItemLine>& items,
                                const Templates& templates) {
    std::string out = templates.curate;
    out = replace_all_of(out, "{question}", question);
    out = replace_all_of(out, "{set}", render_set(items));
    return out;
}

std::string build_decide_prompt(const std::string& question,
                                const std::vector<std::pair<std::string, std::string>>& choices,
                                const std::vector<SetItemLine>& items, bool forced,
                                const Templates& templates) {
    std::string rendered_choices;
    for (const auto& [label, text] : choices) rendered_choices += label + ") " + text + "\n";
    std::string out = templates.decide;
    out = replace_all_of(out, "{forced_marker}", forced ? std::string(kForcedMarker) : "");
    out = replace_all_of(out, "{forced}",
                         forced ? " The iteration budget is exhausted: you must decide now." : "");
    out = replace_all_of(out, "{question}", question);
    out = replace_all_of(out, "{choices}", rendered_choices);
    out = replace_all_of(out, "{set}", render_set(items));
    return out;
}

std::optional<std::string> extract_line_after(const std::string& text, const std::string& marker) {
    size_t pos = text.find(marker);
    if (pos == std::string::npos) return std::nullopt;
    pos += marker.size();
    size_t end = text.find('\n', pos);
    std::string line = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) return std::string();
    size_t last = line.find_last_not_of(" \t\r");
    return line.substr(first, last - first + 1);
}

std::vector<SetItemLine> parse_set_items(const std::string& text) {
    std::vector<SetItemLine> items;
    size_t start = text.find(kSetMarker);
    if (start == std::string::npos) return items;
    std::istringstream in(text.substr(start));
    std::string line;
    std::getline(in, line);  // the marker line itself
    while (std::getline(in, line)) {
        if (line.rfind(kEndMarker, 0) == 0) break;
        if (line.rfind("- ", 0) != 0) continue;
        size_t eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        items.push_back({line.substr(2, eq - 2), line.substr(eq + 3)});
    }
    return items;
}

std::vector<std::pair<std::string, std::string>> parse_choices(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> choices;
    size_t start = text.find(kChoicesMarker);
    if (start == std::string::npos) return choices;
    std::istringstream in(text.substr(start));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.size() < 3 || line[1] != ')') break;
        choices.push_back({line.substr(0, 1), line.substr(3)});
    }
    return choices;
}

bool has_marker(const std::string& text, const std::string& marker) {
    return text.find(marker) != std::string::npos;
}

} // namespace mss::prompts
