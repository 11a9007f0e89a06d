#include "mss/question.hpp"

#include <cmath>
#include <cstdio>
#include <regex>

namespace mss::question {

std::string category_name(Category c) {
    switch (c) {
        case Category::Direction: return "direction";
        case Category::CameraMotion: return "camera-motion";
        case Category::Nearest: return "nearest";
        case Category::Facing: return "facing";
    }
    return "unknown";
}

std::string pos_key(const std::string& object_name) { return "pos_" + object_name; }
std::string facing_key(const std::string& object_name) { return "facing_dir_" + object_name; }
std::string cam_move_key(int view_a, int view_b) {
    return "cam_move_" + std::to_string(view_a) + "_" + std::to_string(view_b);
}

std::string Model::render() const {
    switch (category) {
        case Category::Direction:
            return "Assume the " + calib_target + " is " + calib_label + " of the " + calib_anchor +
                   ". In this compass frame, which direction is the " + subject +
                   " relative to the " + reference + "?";
        case Category::Facing:
            return "Assume the " + calib_target + " is " + calib_label + " of the " + calib_anchor +
                   ". In this compass frame, which compass direction is the " + subject + " facing?";
        case Category::CameraMotion:
            return "Between view " + std::to_string(view_a) + " and view " + std::to_string(view_b) +
                   ", how did the camera move?";
        case Category::Nearest: {
            std::string opts;
            for (size_t i = 0; i < candidates.size(); ++i) {
                if (i > 0) opts += (i + 1 == candidates.size()) ? " or " : ", ";
                opts += "the " + candidates[i];
            }
            return "Which of these objects is nearest to the " + subject + ": " + opts + "?";
        }
    }
    return {};
}

std::vector<std::string> Model::required_keys() const {
    switch (category) {
        case Category::Direction:
            return {kFrameKey, pos_key(subject), pos_key(reference)};
        case Category::Facing:
            return {kFrameKey, facing_key(subject)};
        case Category::CameraMotion:
            return {cam_move_key(view_a, view_b)};
        case Category::Nearest: {
            std::vector<std::string> keys = {pos_key(subject)};
            for (const auto& c : candidates) keys.push_back(pos_key(c));
            return keys;
        }
    }
    return {};
}

std::optional<Model> Model::parse(const std::string& text) {
    static const std::regex direction_re(
        R"(Assume the (\w+) is (\w+) of the (\w+)\. In this compass frame, which direction is the (\w+) relative to the (\w+)\?)");
    static const std::regex facing_re(
        R"(Assume the (\w+) is (\w+) of the (\w+)\. In this compass frame, which compass direction is the (\w+) facing\?)");
    static const std::regex motion_re(
        R"(Between view (\d+) and view (\d+), how did the camera move\?)");
    static const std::regex nearest_re(
        R"(Which of these objects is nearest to the (\w+): (.+)\?)");

    std::smatch m;
    Model model;
    if (std::regex_match(text, m, direction_re)) {
        model.category = Category::Direction;
        model.calib_target = m[1];
        model.calib_label = m[2];
        model.calib_anchor = m[3];
        model.subject = m[4];
        model.reference = m[5];
        return model;
    }
    if (std::regex_match(text, m, facing_re)) {
        model.category = Category::Facing;
        model.calib_target = m[1];
        model.calib_label = m[2];
        model.calib_anchor = m[3];
        model.subject = m[4];
        return model;
    }
    if (std::regex_match(text, m, motion_re)) {
        model.category = Category::CameraMotion;
        model.view_a = std::stoi(m[1]);
        model.view_b = std::stoi(m[2]);
        return model;
    }
    if (std::regex_match(text, m, nearest_re)) {
        model.category = Category::Nearest;
        model.subject = m[1];
        std::string opts = m[2];
        static const std::regex name_re(R"(the (\w+))");
        for (auto it = std::sregex_iterator(opts.begin(), opts.end(), name_re);
             it != std::sregex_iterator(); ++it)
            model.candidates.push_back((*it)[1]);
        if (model.candidates.empty()) return std::nullopt;
        return model;
    }
    return std::nullopt;
}

namespace {

std::string format_meters(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

} // namespace

std::string motion_phrase(const perception::MovementDescriptors& m) {
    if (std::abs(m.rotate_right) >= 5.0) {
        int deg = static_cast<int>(std::lround(std::abs(m.rotate_right) / 5.0)) * 5;
        return std::string("turned ") + (m.rotate_right > 0 ? "right" : "left") + " by about " +
               std::to_string(deg) + " degrees";
    }
    if (std::abs(m.forward) >= 0.15) {
        double amount = std::max(0.5, std::round(std::abs(m.forward) * 2.0) / 2.0);
        return std::string("moved ") + (m.forward > 0 ? "forward" : "backward") + " about " +
               format_meters(amount) + " meters";
    }
    if (std::abs(m.right) >= 0.15) {
        double amount = std::max(0.5, std::round(std::abs(m.right) * 2.0) / 2.0);
        return std::string("moved ") + (m.right > 0 ? "right" : "left") + " about " +
               format_meters(amount) + " meters";
    }
    return "stayed roughly in place";
}

std::vector<std::string> motion_phrase_pool() {
    std::vector<std::string> pool;
    for (int deg : {15, 30, 45, 60, 90}) {
        pool.push_back("turned right by about " + std::to_string(deg) + " degrees");
        pool.push_back("turned left by about " + std::to_string(deg) + " degrees");
    }
    for (double d : {0.5, 1.0, 2.0}) {
        pool.push_back("moved forward about " + format_meters(d) + " meters");
        pool.push_back("moved backward about " + format_meters(d) + " meters");
    }
    pool.push_back("stayed roughly in place");
    return pool;
}

} // namespace mss::question
