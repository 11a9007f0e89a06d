#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "mss/error.hpp"

namespace mss::geometry {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Camera convention: +X right, +Y down, +Z forward.
// World "up" therefore defaults to -Y.
inline const Vec3 kWorldUp{0.0, -1.0, 0.0};

inline constexpr double kGimbalBandDeg = 0.5;
inline constexpr double kUpAmbiguityTol = 1e-3;

struct CameraIntrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;

    void validate() const;
};

// Camera-to-world rigid motion.
struct CameraPose {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    void validate(double tol = 1e-9) const;
    Vec3 center() const { return translation; }
};

// World-to-camera rigid transform as a homogeneous 4x4.
struct Extrinsic {
    Mat4 matrix = Mat4::Identity();

    void validate(double tol = 1e-9) const;
    static Extrinsic from_pose(const CameraPose& pose);
    CameraPose to_pose() const;
    Extrinsic inverse() const;
    Mat3 rotation() const { return matrix.topLeftCorner<3, 3>(); }
    Vec3 translation() const { return matrix.topRightCorner<3, 1>(); }
};

struct DepthMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;   // row-major, width*height
    std::vector<uint8_t> valid;   // same layout, nonzero = valid

    double at(int u, int v) const { return values[static_cast<size_t>(v) * width + u]; }
    bool is_valid(int u, int v) const { return valid[static_cast<size_t>(v) * width + u] != 0; }
    void set(int u, int v, double d) {
        values[static_cast<size_t>(v) * width + u] = d;
        valid[static_cast<size_t>(v) * width + u] = 1;
    }
    static DepthMap invalid_map(int width, int height);
};

struct PixelMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    bool at(int u, int v) const { return bits[static_cast<size_t>(v) * width + u] != 0; }
    void set(int u, int v, bool on = true) { bits[static_cast<size_t>(v) * width + u] = on ? 1 : 0; }
    static PixelMask empty_mask(int width, int height);
    size_t count() const;
};

struct PointCloud {
    std::vector<Vec3> points;
    std::vector<int> view_index;  // optional; empty or same size as points

    size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    Vec3 centroid() const;
};

// Plane normal . p + offset = 0, with normal oriented toward world up.
struct GroundPlane {
    Vec3 normal = kWorldUp;
    double offset = 0.0;

    // Signed height above the plane along the (up-oriented) normal.
    double signed_distance(const Vec3& p) const { return normal.dot(p) + offset; }
};

Vec3 back_project_pixel(double u, double v, double depth,
                        const CameraIntrinsics& intr, const CameraPose& pose);

PointCloud back_project_depth_map(const DepthMap& depth,
                                  const PixelMask* mask,
                                  const CameraIntrinsics& intr,
                                  const CameraPose& pose,
                                  int view_index = -1);

// Projects a world point into the image; returns (u, v, camera depth).
// Depth may be negative for points behind the camera.
struct PixelProjection {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;
};
PixelProjection project_point(const Vec3& p, const CameraIntrinsics& intr, const CameraPose& pose);

Vec3 orient_normal_up(const Vec3& normal, const Vec3& up_ref, double tol = kUpAmbiguityTol);

GroundPlane fit_plane_pca(const PointCloud& points, const Vec3& up_ref = kWorldUp);

Vec3 project_point_to_plane(const Vec3& p, const GroundPlane& plane);

Extrinsic compose_relative_transform(const Extrinsic& e0, const Extrinsic& e1);

struct EulerDecomposition {
    Vec3 translation = Vec3::Zero();
    double yaw_deg = 0.0;    // about +Y, applied first (intrinsic Y-X-Z)
    double pitch_deg = 0.0;  // about +X
    double roll_deg = 0.0;   // about +Z
};

EulerDecomposition decompose_yaw_pitch_roll(const Extrinsic& t, double gimbal_band_deg = kGimbalBandDeg);

// Rebuilds the homogeneous transform from a Y-X-Z intrinsic decomposition.
Extrinsic compose_yaw_pitch_roll(const EulerDecomposition& d);

Vec3 rotate_about_axis(const Vec3& v, const Vec3& axis, double angle_deg);

double angle_between_deg(const Vec3& a, const Vec3& b);

double deg_to_rad(double deg);
double rad_to_deg(double rad);

// Roll-minimized camera pose at `position` looking toward `target`.
CameraPose look_at_pose(const Vec3& position, const Vec3& target, const Vec3& up = kWorldUp);

} // namespace mss::geometry
