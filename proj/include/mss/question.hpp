#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mss/perception.hpp"

namespace mss::question {

// The generated benchmark questions follow fixed sentence templates so that
// scripted (oracle) agents can recover the task structure from the question
// text alone, the same way a real model would read it.
enum class Category { Direction, CameraMotion, Nearest, Facing };

std::string category_name(Category c);

struct Model {
    Category category = Category::Direction;
    // Calibration clause "Assume the <calib_target> is <calib_label> of the <calib_anchor>."
    std::string calib_target;
    std::string calib_anchor;
    std::string calib_label;
    std::string subject;    // direction / facing / nearest
    std::string reference;  // direction only
    std::vector<std::string> candidates;  // nearest only
    int view_a = -1;  // camera motion
    int view_b = -1;

    std::string render() const;
    std::vector<std::string> required_keys() const;

    static std::optional<Model> parse(const std::string& text);
};

// Canonical information-set keys shared by question generation and the
// scripted agents.
std::string pos_key(const std::string& object_name);
std::string facing_key(const std::string& object_name);
std::string cam_move_key(int view_a, int view_b);
inline const std::string kFrameKey = "frame";

// One-line natural description of a camera movement, used both as the
// ground-truth choice text and by the scripted reasoner.
std::string motion_phrase(const perception::MovementDescriptors& m);

// Pool of plausible movement phrases for distractor sampling.
std::vector<std::string> motion_phrase_pool();

} // namespace mss::question
