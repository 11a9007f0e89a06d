#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mss/geometry.hpp"

namespace mss::scene_sim {

using geometry::CameraIntrinsics;
using geometry::CameraPose;
using geometry::DepthMap;
using geometry::GroundPlane;
using geometry::PointCloud;
using geometry::Vec3;

inline constexpr int kDefaultImageSize = 256;
inline constexpr double kDefaultFocal = 200.0;
inline constexpr double kMaxRenderDepth = 100.0;

struct SceneObject {
    std::string name;
    enum class Shape { Box, Sphere } shape = Shape::Box;
    Vec3 center = Vec3::Zero();
    Vec3 half_extent = Vec3::Zero();  // boxes (axis-aligned)
    double radius = 0.0;              // spheres
    std::optional<Vec3> facing;       // unit, parallel to ground

    // Conservative localization error bound: centroid of any visible-surface
    // mask stays within this distance of the true center.
    double extent_bound() const;
};

struct SceneCamera {
    CameraIntrinsics intrinsics;
    CameraPose pose;
};

struct SyntheticScene {
    std::vector<SceneObject> objects;
    std::vector<SceneCamera> cameras;
    GroundPlane ground;  // y = 0, up (0,-1,0)
    uint64_t rng_seed = 0;

    const SceneObject& object(const std::string& name) const;
    int object_index(const std::string& name) const;  // -1 if absent
};

struct SceneSpec {
    std::vector<SceneObject> objects;
    std::vector<SceneCamera> cameras;
    uint64_t rng_seed = 0;
};

SyntheticScene build_scene(const SceneSpec& spec);

// Human-readable scene spec text (one directive per line, key=value fields).
SceneSpec parse_scene_spec(const std::string& text);
std::string serialize_scene_spec(const SceneSpec& spec);
SceneSpec load_scene_spec(const std::string& path);

// Per-pixel hit identity for analytic renders.
inline constexpr int kHitNone = -2;
inline constexpr int kHitGround = -1;

struct RenderResult {
    DepthMap depth;
    std::vector<int> hit_ids;  // kHitNone / kHitGround / object index
    int hit_at(int u, int v) const { return hit_ids[static_cast<size_t>(v) * depth.width + u]; }
};

RenderResult render_view(const SyntheticScene& scene, int view_index);
DepthMap render_depth(const SyntheticScene& scene, int view_index);

struct SplatImage {
    int width = 0;
    int height = 0;
    std::vector<int> point_id;  // -1 empty
    std::vector<double> depth;
    int at(int u, int v) const { return point_id[static_cast<size_t>(v) * width + u]; }
};

SplatImage render_point_splat(const PointCloud& cloud, const CameraIntrinsics& intr,
                              const CameraPose& pose, int splat_radius_px = 2);

Vec3 ground_truth_position(const SyntheticScene& scene, const std::string& name);

struct Choice {
    std::string label;  // "A", "B", ...
    std::string text;
};

struct GeneratedQuestion {
    std::string id;
    std::vector<int> view_indices;
    std::string text;
    std::vector<Choice> choices;
    std::string answer_label;
    std::string category;  // direction / camera-motion / nearest / facing
    std::vector<std::string> required_keys;
};

std::vector<GeneratedQuestion> generate_question_set(const SyntheticScene& scene, int count,
                                                     uint64_t rng_seed);

// A compact default scene with boxes, spheres and three cameras, suitable for
// all four question categories.
SceneSpec default_scene_spec(uint64_t seed);

} // namespace mss::scene_sim
