#include "mss/perception.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

namespace mss::perception {

using geometry::angle_between_deg;
using geometry::back_project_depth_map;
using geometry::fit_plane_pca;
using geometry::project_point;
using geometry::project_point_to_plane;
using geometry::rotate_about_axis;

SceneReconstruction reconstruct(const std::vector<int>& view_ids,
                                ReconstructionProvider& provider,
                                double floor_confidence_threshold) {
    if (view_ids.empty())
        throw Error(ErrorCode::ProviderFailure, "no views requested");
    ProviderOutput out = provider.run(view_ids);
    if (out.views.size() != view_ids.size())
        throw Error(ErrorCode::ProviderFailure, "provider returned mismatched view count");

    SceneReconstruction recon;
    recon.views = std::move(out.views);
    recon.floor_confidence = out.floor_confidence;
    for (size_t i = 0; i < recon.views.size(); ++i) {
        const ViewData& view = recon.views[i];
        try {
            PointCloud part = back_project_depth_map(view.depth, nullptr, view.intrinsics,
                                                     view.pose, static_cast<int>(i));
            recon.cloud.points.insert(recon.cloud.points.end(), part.points.begin(), part.points.end());
            recon.cloud.view_index.insert(recon.cloud.view_index.end(), part.view_index.begin(),
                                          part.view_index.end());
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptySelection) throw;
            // A view with no valid depth contributes nothing.
        }
    }
    try {
        recon.ground = estimate_ground_plane(recon.views, recon.cloud, recon.floor_confidence,
                                             &recon.ground_source, floor_confidence_threshold);
    } catch (const Error& e) {
        throw Error(ErrorCode::GroundEstimationFailure, e.what());
    }
    return recon;
}

GroundPlane estimate_ground_plane(const std::vector<ViewData>& views,
                                  const PointCloud& fused,
                                  double floor_confidence,
                                  std::string* source,
                                  double floor_confidence_threshold) {
    if (fused.empty())
        throw Error(ErrorCode::DegenerateCloud, "fused cloud is empty");

    bool any_mask = std::any_of(views.begin(), views.end(),
                                [](const ViewData& v) { return v.floor_mask.has_value(); });
    if (floor_confidence >= floor_confidence_threshold && any_mask) {
        PointCloud floor;
        for (const auto& view : views) {
            if (!view.floor_mask) continue;
            const PixelMask& mask = *view.floor_mask;
            for (int v = 0; v < view.depth.height; ++v)
                for (int u = 0; u < view.depth.width; ++u)
                    if (mask.at(u, v) && view.depth.is_valid(u, v))
                        floor.points.push_back(geometry::back_project_pixel(
                            u, v, view.depth.at(u, v), view.intrinsics, view.pose));
        }
        if (floor.size() >= 3) {
            if (source) *source = "floor_mask";
            return fit_plane_pca(floor);
        }
    }
    if (source) *source = "full_cloud_fallback";
    return fit_plane_pca(fused);
}

std::optional<PointCloud> locate_object_points(const std::string& description,
                                               const SceneReconstruction& recon,
                                               VisionBackend& vision,
                                               int* selected_view) {
    std::optional<int> view = vision.select_view(recon, description);
    if (!view) return std::nullopt;
    std::optional<DetectionBox> box = vision.detect_object(*view, description);
    if (!box) return std::nullopt;
    PixelMask mask = vision.segment(*view, *box);
    if (mask.count() == 0)
        throw Error(ErrorCode::DetectionFailure, "segmentation produced an empty mask");
    const ViewData& data = recon.views[static_cast<size_t>(*view)];
    PointCloud cloud;
    try {
        cloud = back_project_depth_map(data.depth, &mask, data.intrinsics, data.pose, *view);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::EmptySelection)
            throw Error(ErrorCode::DetectionFailure, "mask covers no valid depth pixels");
        throw;
    }
    if (selected_view) *selected_view = *view;
    return cloud;
}

std::optional<Vec3> locate_object(const std::string& description,
                                  const SceneReconstruction& recon,
                                  VisionBackend& vision) {
    std::optional<PointCloud> cloud = locate_object_points(description, recon, vision);
    if (!cloud) return std::nullopt;
    return cloud->centroid();
}

namespace {

const std::vector<std::string> kLabels4 = {"North", "East", "South", "West"};
const std::vector<std::string> kLabels8 = {"North", "East", "South", "West",
                                           "Northeast", "Southeast", "Southwest", "Northwest"};

double label_azimuth_deg(const std::string& label) {
    std::string low;
    for (char c : label) low.push_back(static_cast<char>(std::tolower(c)));
    if (low == "north") return 0.0;
    if (low == "northeast") return 45.0;
    if (low == "east") return 90.0;
    if (low == "southeast") return 135.0;
    if (low == "south") return 180.0;
    if (low == "southwest") return 225.0;
    if (low == "west") return 270.0;
    if (low == "northwest") return 315.0;
    throw Error(ErrorCode::InvalidSpec, "unknown compass label: " + label);
}

} // namespace

const std::vector<std::string>& compass_labels(int granularity) {
    if (granularity == 4) return kLabels4;
    if (granularity == 8) return kLabels8;
    throw Error(ErrorCode::InvalidSpec, "granularity must be 4 or 8");
}

GroundFrame calibrate_frame(const Vec3& anchor, const Vec3& target,
                            const std::string& stated_label, const GroundPlane& ground) {
    Vec3 pa = project_point_to_plane(anchor, ground);
    Vec3 pt = project_point_to_plane(target, ground);
    Vec3 v = pt - pa;
    if (v.norm() < 1e-6)
        throw Error(ErrorCode::CoincidentProjection, "anchor and target coincide on the ground plane");
    v.normalize();
    // The anchor->target ray carries the stated label; rotating by the label's
    // azimuth (positive toward west about up) recovers north.
    double offset = label_azimuth_deg(stated_label);
    GroundFrame frame;
    frame.up = ground.normal;
    frame.north = rotate_about_axis(v, frame.up, offset).normalized();
    frame.west = frame.up.cross(frame.north).normalized();
    frame.east = -frame.west;
    frame.south = -frame.north;
    frame.anchor = pa;
    return frame;
}

Vec3 compass_vector(const GroundFrame& frame, const std::string& label) {
    double az = label_azimuth_deg(label);
    return rotate_about_axis(frame.north, frame.up, -az).normalized();
}

namespace {

std::string min_angle_label(const GroundFrame& frame, const Vec3& v, int granularity) {
    const auto& labels = compass_labels(granularity);
    std::string best;
    double best_angle = 1e9;
    for (const auto& label : labels) {
        double a = angle_between_deg(v, compass_vector(frame, label));
        if (a < best_angle) {
            best_angle = a;
            best = label;
        }
    }
    return best;
}

} // namespace

std::string direction_label(const GroundFrame& frame, const Vec3& anchor, const Vec3& target,
                            int granularity) {
    GroundPlane plane;
    plane.normal = frame.up;
    plane.offset = -frame.up.dot(frame.anchor);
    Vec3 v = project_point_to_plane(target, plane) - project_point_to_plane(anchor, plane);
    if (v.norm() < 1e-6)
        throw Error(ErrorCode::CoincidentProjection, "anchor and target coincide on the ground plane");
    return min_angle_label(frame, v, granularity);
}

std::string label_vector(const GroundFrame& frame, const Vec3& v, int granularity) {
    if (v.norm() < 1e-9)
        throw Error(ErrorCode::ZeroVector, "cannot label a zero direction");
    return min_angle_label(frame, v, granularity);
}

namespace {

Vec3 in_plane_reference(const GroundPlane& ground) {
    Vec3 r(1, 0, 0);
    if (std::abs(r.dot(ground.normal)) > 0.9) r = Vec3(0, 0, 1);
    Vec3 b = r - r.dot(ground.normal) * ground.normal;
    return b.normalized();
}

} // namespace

DirectionCandidateSet sog_coarse_candidates(const Vec3& anchor_point, const GroundPlane& ground,
                                            uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> azimuth(0.0, 360.0);
    double phi = azimuth(rng);
    Vec3 base = in_plane_reference(ground);
    DirectionCandidateSet set;
    set.anchor_point = anchor_point;
    set.stage = DirectionCandidateSet::Stage::Coarse;
    for (int k = 0; k < 4; ++k) {
        set.vectors.push_back(rotate_about_axis(base, ground.normal, phi + 90.0 * k).normalized());
        set.labels.push_back(std::to_string(k + 1));
    }
    return set;
}

DirectionCandidateSet sog_fine_candidates(const Vec3& anchor_point, const Vec3& winner,
                                          const GroundPlane& ground) {
    DirectionCandidateSet set;
    set.anchor_point = anchor_point;
    set.stage = DirectionCandidateSet::Stage::Fine;
    const double offsets[] = {-45.0, -22.5, 0.0, 22.5, 45.0};
    int i = 1;
    for (double theta : offsets) {
        set.vectors.push_back(rotate_about_axis(winner, ground.normal, theta).normalized());
        set.labels.push_back(std::to_string(i++));
    }
    return set;
}

Vec3 sog_anchor_point(const PointCloud& object_points, const GroundPlane& ground) {
    if (object_points.empty())
        throw Error(ErrorCode::EmptyCloud, "object cloud is empty");
    std::vector<double> heights;
    heights.reserve(object_points.size());
    for (const auto& p : object_points.points) heights.push_back(ground.signed_distance(p));
    std::vector<double> sorted = heights;
    std::sort(sorted.begin(), sorted.end());
    double cutoff = sorted[static_cast<size_t>(0.1 * (sorted.size() - 1))] + 1e-12;
    Vec3 sum = Vec3::Zero();
    size_t n = 0;
    for (size_t i = 0; i < heights.size(); ++i) {
        if (heights[i] <= cutoff) {
            sum += object_points.points[i];
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

namespace {

// Liang-Barsky clipping to [0, w-1] x [0, h-1].
std::optional<Segment2D> clip_segment(Eigen::Vector2d a, Eigen::Vector2d b, int w, int h) {
    double t0 = 0.0, t1 = 1.0;
    Eigen::Vector2d d = b - a;
    const double bounds[4][2] = {{-d.x(), a.x()}, {d.x(), (w - 1) - a.x()},
                                 {-d.y(), a.y()}, {d.y(), (h - 1) - a.y()}};
    for (const auto& side : bounds) {
        double p = side[0], q = side[1];
        if (p == 0.0) {
            if (q < 0.0) return std::nullopt;
            continue;
        }
        double r = q / p;
        if (p < 0.0) {
            if (r > t1) return std::nullopt;
            t0 = std::max(t0, r);
        } else {
            if (r < t0) return std::nullopt;
            t1 = std::min(t1, r);
        }
    }
    if (t0 > t1) return std::nullopt;
    return Segment2D{a + t0 * d, a + t1 * d};
}

Eigen::Vector2d clamp_to_image(Eigen::Vector2d p, int w, int h) {
    return {std::clamp(p.x(), 0.0, static_cast<double>(w - 1)),
            std::clamp(p.y(), 0.0, static_cast<double>(h - 1))};
}

} // namespace

ArrowOverlay sog_overlay(const DirectionCandidateSet& candidates,
                         const CameraIntrinsics& intr, const CameraPose& pose,
                         double arrow_length_m, ArrowOverlay::Kind kind) {
    geometry::PixelProjection anchor = project_point(candidates.anchor_point, intr, pose);
    if (anchor.depth <= 1e-9)
        throw Error(ErrorCode::AnchorBehindCamera, "anchor projects behind the camera");
    if (anchor.u < 0 || anchor.u >= intr.width || anchor.v < 0 || anchor.v >= intr.height)
        throw Error(ErrorCode::AnchorOutOfView, "anchor projects outside the image");

    ArrowOverlay overlay;
    overlay.kind = kind;
    overlay.intrinsics = intr;
    overlay.pose = pose;
    overlay.candidates = candidates;
    Eigen::Vector2d base(anchor.u, anchor.v);
    for (size_t i = 0; i < candidates.vectors.size(); ++i) {
        Vec3 tip3 = candidates.anchor_point + arrow_length_m * candidates.vectors[i];
        geometry::PixelProjection tipp = project_point(tip3, intr, pose);
        if (tipp.depth <= 1e-6) {
            // Camera depth is linear along the 3D segment; shorten until in front.
            double t = (anchor.depth - 1e-3) / (anchor.depth - tipp.depth);
            t = std::clamp(t, 0.0, 1.0);
            tip3 = candidates.anchor_point + t * arrow_length_m * candidates.vectors[i];
            tipp = project_point(tip3, intr, pose);
        }
        Eigen::Vector2d tip(tipp.u, tipp.v);
        Arrow2D arrow;
        arrow.label = candidates.labels[i];
        if (auto shaft = clip_segment(base, tip, intr.width, intr.height))
            arrow.segments.push_back(*shaft);
        Eigen::Vector2d dir = tip - base;
        if (dir.norm() > 1e-9) {
            dir.normalize();
            double tick_len = std::max(4.0, 0.15 * (tip - base).norm());
            for (double ang : {150.0, -150.0}) {
                double rad = geometry::deg_to_rad(ang);
                Eigen::Vector2d rot(dir.x() * std::cos(rad) - dir.y() * std::sin(rad),
                                    dir.x() * std::sin(rad) + dir.y() * std::cos(rad));
                if (auto tick = clip_segment(tip, tip + tick_len * rot, intr.width, intr.height))
                    arrow.segments.push_back(*tick);
            }
        }
        arrow.label_pos = clamp_to_image(tip, intr.width, intr.height);
        overlay.arrows.push_back(std::move(arrow));
    }
    return overlay;
}

std::string overlay_to_json(const ArrowOverlay& overlay) {
    nlohmann::json j;
    j["kind"] = overlay.kind == ArrowOverlay::Kind::Situated ? "situated" : "canonical";
    j["width"] = overlay.intrinsics.width;
    j["height"] = overlay.intrinsics.height;
    j["arrows"] = nlohmann::json::array();
    for (const auto& arrow : overlay.arrows) {
        nlohmann::json ja;
        ja["label"] = arrow.label;
        ja["label_pos"] = {arrow.label_pos.x(), arrow.label_pos.y()};
        ja["segments"] = nlohmann::json::array();
        for (const auto& seg : arrow.segments)
            ja["segments"].push_back({seg.a.x(), seg.a.y(), seg.b.x(), seg.b.y()});
        j["arrows"].push_back(std::move(ja));
    }
    return j.dump(2);
}

CameraPose sog_canonical_view(const CameraIntrinsics&, const CameraPose& orig_pose,
                              const Vec3& anchor_point, const GroundPlane& ground) {
    Vec3 center = orig_pose.center();
    Vec3 to_anchor = anchor_point - center;
    Vec3 axis = to_anchor.cross(ground.normal);
    if (axis.norm() < 1e-6)
        throw Error(ErrorCode::DegenerateAxis, "camera-to-anchor vector parallel to ground normal");
    axis.normalize();
    Vec3 offset = center - anchor_point;
    Vec3 up_center = anchor_point + rotate_about_axis(offset, axis, 45.0);
    Vec3 down_center = anchor_point + rotate_about_axis(offset, axis, -45.0);
    Vec3 chosen = (up_center - anchor_point).dot(ground.normal) >=
                          (down_center - anchor_point).dot(ground.normal)
                      ? up_center
                      : down_center;
    return geometry::look_at_pose(chosen, anchor_point, ground.normal);
}

namespace {

int select_arrow_checked(VisionBackend& vision, const ArrowOverlay& situated,
                         const ArrowOverlay& canonical, const std::string& query, size_t n) {
    for (int attempt = 0; attempt < 2; ++attempt) {
        int idx = vision.select_arrow(situated, canonical, query);
        if (idx >= 0 && static_cast<size_t>(idx) < n) return idx;
    }
    throw Error(ErrorCode::SelectionOutOfRange, "arrow selection out of candidate range");
}

} // namespace

Vec3 sog_select_direction(const Vec3& anchor_point, const GroundPlane& ground,
                          const CameraIntrinsics& intr, const CameraPose& pose,
                          VisionBackend& vision, const std::string& query,
                          uint64_t rng_seed, double arrow_length_m) {
    DirectionCandidateSet coarse = sog_coarse_candidates(anchor_point, ground, rng_seed);
    CameraPose canonical_pose = sog_canonical_view(intr, pose, anchor_point, ground);
    ArrowOverlay situated = sog_overlay(coarse, intr, pose, arrow_length_m,
                                        ArrowOverlay::Kind::Situated);
    ArrowOverlay canonical = sog_overlay(coarse, intr, canonical_pose, arrow_length_m,
                                         ArrowOverlay::Kind::Canonical);
    int coarse_pick = select_arrow_checked(vision, situated, canonical, query, coarse.vectors.size());

    DirectionCandidateSet fine = sog_fine_candidates(anchor_point, coarse.vectors[coarse_pick], ground);
    ArrowOverlay fine_situated = sog_overlay(fine, intr, pose, arrow_length_m,
                                             ArrowOverlay::Kind::Situated);
    ArrowOverlay fine_canonical = sog_overlay(fine, intr, canonical_pose, arrow_length_m,
                                              ArrowOverlay::Kind::Canonical);
    int fine_pick = select_arrow_checked(vision, fine_situated, fine_canonical, query,
                                         fine.vectors.size());
    return fine.vectors[fine_pick];
}

Vec3 sog_ground_direction(const std::string& query, const std::string& anchor_object,
                          const SceneReconstruction& recon, VisionBackend& vision,
                          uint64_t rng_seed) {
    int view = -1;
    std::optional<PointCloud> cloud = locate_object_points(anchor_object, recon, vision, &view);
    if (!cloud)
        throw Error(ErrorCode::DetectionFailure, "anchor object not locatable: " + anchor_object);
    Vec3 anchor = sog_anchor_point(*cloud, recon.ground);
    const ViewData& data = recon.views[static_cast<size_t>(view)];
    return sog_select_direction(anchor, recon.ground, data.intrinsics, data.pose, vision, query,
                                rng_seed);
}

MovementDescriptors relative_camera_movement(const Extrinsic& e0, const Extrinsic& e1) {
    Extrinsic t = compose_relative_transform(e0, e1);
    // The motion of the camera expressed in the first camera's frame is the
    // inverse of the coordinate map e1 * e0^-1.
    geometry::EulerDecomposition d = geometry::decompose_yaw_pitch_roll(t.inverse());
    MovementDescriptors m;
    m.forward = d.translation.z();
    m.right = d.translation.x();
    m.up = -d.translation.y();
    m.rotate_right = d.yaw_deg;
    m.rotate_up = -d.pitch_deg;
    m.rotate_roll = d.roll_deg;
    return m;
}

MovementDescriptors relative_object_position(const Extrinsic& e, const Vec3& p) {
    Eigen::Vector4d hom(p.x(), p.y(), p.z(), 1.0);
    Eigen::Vector4d cam = e.matrix * hom;
    MovementDescriptors m;
    m.forward = cam.z();
    m.right = cam.x();
    m.up = -cam.y();
    return m;
}

Extrinsic apply_camera_movement(const Extrinsic& e0, const MovementDescriptors& move) {
    geometry::EulerDecomposition d;
    d.translation = Vec3(move.right, -move.up, move.forward);
    d.yaw_deg = move.rotate_right;
    d.pitch_deg = -move.rotate_up;
    d.roll_deg = move.rotate_roll;
    Extrinsic motion = geometry::compose_yaw_pitch_roll(d);
    Extrinsic e1;
    e1.matrix = motion.inverse().matrix * e0.matrix;
    return e1;
}

} // namespace mss::perception
