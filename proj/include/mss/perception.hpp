#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mss/geometry.hpp"

namespace mss::perception {

using geometry::CameraIntrinsics;
using geometry::CameraPose;
using geometry::DepthMap;
using geometry::Extrinsic;
using geometry::GroundPlane;
using geometry::PixelMask;
using geometry::PointCloud;
using geometry::Vec3;

inline constexpr double kFloorConfidenceThreshold = 0.5;

struct ViewData {
    CameraIntrinsics intrinsics;
    CameraPose pose;
    DepthMap depth;
    std::optional<PixelMask> floor_mask;
};

struct SceneReconstruction {
    std::vector<ViewData> views;
    PointCloud cloud;
    GroundPlane ground;
    double floor_confidence = 0.0;
    std::string ground_source;  // "floor_mask" or "full_cloud_fallback"

    Extrinsic extrinsic(size_t view) const { return Extrinsic::from_pose(views[view].pose); }
};

struct ProviderOutput {
    std::vector<ViewData> views;
    double floor_confidence = 0.0;
};

class ReconstructionProvider {
public:
    virtual ~ReconstructionProvider() = default;
    virtual ProviderOutput run(const std::vector<int>& view_ids) = 0;
};

// Calibrated compass basis anchored on the ground plane.
struct GroundFrame {
    Vec3 north;
    Vec3 south;
    Vec3 east;
    Vec3 west;
    Vec3 up;
    Vec3 anchor;
};

struct DirectionCandidateSet {
    Vec3 anchor_point = Vec3::Zero();
    std::vector<Vec3> vectors;
    enum class Stage { Coarse, Fine } stage = Stage::Coarse;
    std::vector<std::string> labels;
};

struct Segment2D {
    Eigen::Vector2d a;
    Eigen::Vector2d b;
};

struct Arrow2D {
    std::vector<Segment2D> segments;
    std::string label;
    Eigen::Vector2d label_pos;
};

struct ArrowOverlay {
    enum class Kind { Situated, Canonical } kind = Kind::Situated;
    CameraIntrinsics intrinsics;
    CameraPose pose;
    std::vector<Arrow2D> arrows;
    // Source candidates, carried so oracle selectors can consume the geometry
    // directly; raster-consuming backends ignore it.
    DirectionCandidateSet candidates;
};

std::string overlay_to_json(const ArrowOverlay& overlay);

struct MovementDescriptors {
    double forward = 0.0;
    double right = 0.0;
    double up = 0.0;
    double rotate_right = 0.0;  // degrees
    double rotate_up = 0.0;     // degrees
    double rotate_roll = 0.0;   // degrees, kept internally for recomposition
};

struct DetectionBox {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    double confidence = 0.0;
};

class VisionBackend {
public:
    virtual ~VisionBackend() = default;
    virtual std::optional<int> select_view(const SceneReconstruction& recon,
                                           const std::string& description) = 0;
    virtual std::optional<DetectionBox> detect_object(int view, const std::string& description) = 0;
    virtual PixelMask segment(int view, const DetectionBox& box) = 0;
    virtual int select_arrow(const ArrowOverlay& situated, const ArrowOverlay& canonical,
                             const std::string& query) = 0;
};

SceneReconstruction reconstruct(const std::vector<int>& view_ids,
                                ReconstructionProvider& provider,
                                double floor_confidence_threshold = kFloorConfidenceThreshold);

GroundPlane estimate_ground_plane(const std::vector<ViewData>& views,
                                  const PointCloud& fused,
                                  double floor_confidence,
                                  std::string* source = nullptr,
                                  double floor_confidence_threshold = kFloorConfidenceThreshold);

std::optional<Vec3> locate_object(const std::string& description,
                                  const SceneReconstruction& recon,
                                  VisionBackend& vision);

// Back-projected mask points of the located object (used by SOG anchoring).
std::optional<PointCloud> locate_object_points(const std::string& description,
                                               const SceneReconstruction& recon,
                                               VisionBackend& vision,
                                               int* selected_view = nullptr);

GroundFrame calibrate_frame(const Vec3& anchor, const Vec3& target,
                            const std::string& stated_label, const GroundPlane& ground);

std::string direction_label(const GroundFrame& frame, const Vec3& anchor, const Vec3& target,
                            int granularity);

// Labels a ground-parallel direction vector in the frame's compass.
std::string label_vector(const GroundFrame& frame, const Vec3& v, int granularity);

// Unit vector for a compass label in the given frame.
Vec3 compass_vector(const GroundFrame& frame, const std::string& label);

// The 4 or 8 labels in tie-break precedence order.
const std::vector<std::string>& compass_labels(int granularity);

DirectionCandidateSet sog_coarse_candidates(const Vec3& anchor_point, const GroundPlane& ground,
                                            uint64_t rng_seed);

DirectionCandidateSet sog_fine_candidates(const Vec3& anchor_point, const Vec3& winner,
                                          const GroundPlane& ground);

Vec3 sog_anchor_point(const PointCloud& object_points, const GroundPlane& ground);

ArrowOverlay sog_overlay(const DirectionCandidateSet& candidates,
                         const CameraIntrinsics& intr, const CameraPose& pose,
                         double arrow_length_m,
                         ArrowOverlay::Kind kind = ArrowOverlay::Kind::Situated);

CameraPose sog_canonical_view(const CameraIntrinsics& orig_intr, const CameraPose& orig_pose,
                              const Vec3& anchor_point, const GroundPlane& ground);

// Coarse-to-fine arrow selection for a known anchor point.
Vec3 sog_select_direction(const Vec3& anchor_point, const GroundPlane& ground,
                          const CameraIntrinsics& intr, const CameraPose& pose,
                          VisionBackend& vision, const std::string& query,
                          uint64_t rng_seed, double arrow_length_m = 0.6);

Vec3 sog_ground_direction(const std::string& query, const std::string& anchor_object,
                          const SceneReconstruction& recon, VisionBackend& vision,
                          uint64_t rng_seed);

MovementDescriptors relative_camera_movement(const Extrinsic& e0, const Extrinsic& e1);

MovementDescriptors relative_object_position(const Extrinsic& e, const Vec3& p);

// Rebuilds e1 from e0 and the movement descriptors.
Extrinsic apply_camera_movement(const Extrinsic& e0, const MovementDescriptors& move);

} // namespace mss::perception
