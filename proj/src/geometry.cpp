#include "mss/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mss::geometry {

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

void CameraIntrinsics::validate() const {
    if (fx <= 0.0 || fy <= 0.0)
        throw Error(ErrorCode::InvalidSpec, "focal lengths must be positive");
    if (cx < 0.0 || cx >= width || cy < 0.0 || cy >= height)
        throw Error(ErrorCode::InvalidSpec, "principal point outside image");
}

void CameraPose::validate(double tol) const {
    Mat3 rrt = rotation * rotation.transpose();
    if ((rrt - Mat3::Identity()).cwiseAbs().maxCoeff() > tol)
        throw Error(ErrorCode::InvalidSpec, "pose rotation not orthonormal");
    if (std::abs(rotation.determinant() - 1.0) > tol)
        throw Error(ErrorCode::InvalidSpec, "pose rotation determinant != 1");
}

void Extrinsic::validate(double tol) const {
    if ((matrix.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > tol)
        throw Error(ErrorCode::InvalidSpec, "extrinsic bottom row not (0,0,0,1)");
    Mat3 r = rotation();
    if (((r * r.transpose()) - Mat3::Identity()).cwiseAbs().maxCoeff() > tol ||
        std::abs(r.determinant() - 1.0) > tol)
        throw Error(ErrorCode::InvalidSpec, "extrinsic rotation not a proper rotation");
}

Extrinsic Extrinsic::from_pose(const CameraPose& pose) {
    Extrinsic e;
    Mat3 rt = pose.rotation.transpose();
    e.matrix.setIdentity();
    e.matrix.topLeftCorner<3, 3>() = rt;
    e.matrix.topRightCorner<3, 1>() = -rt * pose.translation;
    return e;
}

CameraPose Extrinsic::to_pose() const {
    CameraPose pose;
    Mat3 r = rotation();
    pose.rotation = r.transpose();
    pose.translation = -r.transpose() * translation();
    return pose;
}

Extrinsic Extrinsic::inverse() const {
    Extrinsic inv;
    Mat3 rt = rotation().transpose();
    inv.matrix.setIdentity();
    inv.matrix.topLeftCorner<3, 3>() = rt;
    inv.matrix.topRightCorner<3, 1>() = -rt * translation();
    return inv;
}

DepthMap DepthMap::invalid_map(int width, int height) {
    DepthMap d;
    d.width = width;
    d.height = height;
    d.values.assign(static_cast<size_t>(width) * height, 0.0);
    d.valid.assign(static_cast<size_t>(width) * height, 0);
    return d;
}

PixelMask PixelMask::empty_mask(int width, int height) {
    PixelMask m;
    m.width = width;
    m.height = height;
    m.bits.assign(static_cast<size_t>(width) * height, 0);
    return m;
}

size_t PixelMask::count() const {
    return static_cast<size_t>(std::count_if(bits.begin(), bits.end(), [](uint8_t b) { return b != 0; }));
}

Vec3 PointCloud::centroid() const {
    Vec3 sum = Vec3::Zero();
    for (const auto& p : points) sum += p;
    return points.empty() ? sum : Vec3(sum / static_cast<double>(points.size()));
}

Vec3 back_project_pixel(double u, double v, double depth,
                        const CameraIntrinsics& intr, const CameraPose& pose) {
    if (depth <= 0.0)
        throw Error(ErrorCode::NonPositiveDepth, "depth must be positive");
    if (u < 0.0 || u >= intr.width || v < 0.0 || v >= intr.height)
        throw Error(ErrorCode::OutOfBounds, "pixel outside image bounds");
    Vec3 cam(depth * (u - intr.cx) / intr.fx,
             depth * (v - intr.cy) / intr.fy,
             depth);
    return pose.rotation * cam + pose.translation;
}

PointCloud back_project_depth_map(const DepthMap& depth,
                                  const PixelMask* mask,
                                  const CameraIntrinsics& intr,
                                  const CameraPose& pose,
                                  int view_index) {
    if (mask && (mask->width != depth.width || mask->height != depth.height))
        throw Error(ErrorCode::InvalidSpec, "mask dimensions do not match depth map");
    PointCloud cloud;
    for (int v = 0; v < depth.height; ++v) {
        for (int u = 0; u < depth.width; ++u) {
            if (!depth.is_valid(u, v)) continue;
            if (mask && !mask->at(u, v)) continue;
            cloud.points.push_back(back_project_pixel(u, v, depth.at(u, v), intr, pose));
            if (view_index >= 0) cloud.view_index.push_back(view_index);
        }
    }
    if (cloud.empty())
        throw Error(ErrorCode::EmptySelection, "no valid pixel survives the mask");
    return cloud;
}

PixelProjection project_point(const Vec3& p, const CameraIntrinsics& intr, const CameraPose& pose) {
    Vec3 cam = pose.rotation.transpose() * (p - pose.translation);
    PixelProjection proj;
    proj.depth = cam.z();
    proj.u = intr.fx * cam.x() / cam.z() + intr.cx;
    proj.v = intr.fy * cam.y() / cam.z() + intr.cy;
    return proj;
}

Vec3 orient_normal_up(const Vec3& normal, const Vec3& up_ref, double tol) {
    double d = normal.dot(up_ref);
    if (std::abs(d) < tol)
        throw Error(ErrorCode::NearHorizontal, "normal nearly orthogonal to up reference");
    return d > 0.0 ? normal : Vec3(-normal);
}

GroundPlane fit_plane_pca(const PointCloud& points, const Vec3& up_ref) {
    if (points.size() < 3)
        throw Error(ErrorCode::DegenerateCloud, "need at least 3 points");
    Vec3 c = points.centroid();
    Mat3 cov = Mat3::Zero();
    for (const auto& p : points.points) {
        Vec3 d = p - c;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(points.size());
    Eigen::SelfAdjointEigenSolver<Mat3> solver(cov);
    const auto& evals = solver.eigenvalues();  // ascending
    // Collinear clouds have two near-zero eigenvalues; no unique plane.
    double scale = std::max(evals(2), 1e-300);
    if (evals(1) / scale < 1e-12)
        throw Error(ErrorCode::DegenerateCloud, "point covariance has rank < 2");
    Vec3 normal = solver.eigenvectors().col(0).normalized();
    normal = orient_normal_up(normal, up_ref);
    GroundPlane plane;
    plane.normal = normal;
    plane.offset = -normal.dot(c);
    return plane;
}

Vec3 project_point_to_plane(const Vec3& p, const GroundPlane& plane) {
    return p - plane.signed_distance(p) * plane.normal;
}

Extrinsic compose_relative_transform(const Extrinsic& e0, const Extrinsic& e1) {
    Extrinsic t;
    t.matrix = e1.matrix * e0.inverse().matrix;
    return t;
}

namespace {

Mat3 rot_y(double rad) {
    Mat3 r;
    r << std::cos(rad), 0, std::sin(rad),
         0, 1, 0,
         -std::sin(rad), 0, std::cos(rad);
    return r;
}

Mat3 rot_x(double rad) {
    Mat3 r;
    r << 1, 0, 0,
         0, std::cos(rad), -std::sin(rad),
         0, std::sin(rad), std::cos(rad);
    return r;
}

Mat3 rot_z(double rad) {
    Mat3 r;
    r << std::cos(rad), -std::sin(rad), 0,
         std::sin(rad), std::cos(rad), 0,
         0, 0, 1;
    return r;
}

} // namespace

EulerDecomposition decompose_yaw_pitch_roll(const Extrinsic& t, double gimbal_band_deg) {
    Mat3 r = t.rotation();
    // R = Ry(yaw) * Rx(pitch) * Rz(roll):
    //   R(1,2) = -sin(pitch), R(0,2)/R(2,2) = tan(yaw), R(1,0)/R(1,1) = tan(roll)
    double sp = std::clamp(-r(1, 2), -1.0, 1.0);
    double pitch = std::asin(sp);
    if (std::abs(rad_to_deg(pitch)) > 90.0 - gimbal_band_deg)
        throw Error(ErrorCode::GimbalProximity, "pitch within gimbal band of +/-90 degrees");
    EulerDecomposition d;
    d.translation = t.translation();
    d.pitch_deg = rad_to_deg(pitch);
    d.yaw_deg = rad_to_deg(std::atan2(r(0, 2), r(2, 2)));
    d.roll_deg = rad_to_deg(std::atan2(r(1, 0), r(1, 1)));
    return d;
}

Extrinsic compose_yaw_pitch_roll(const EulerDecomposition& d) {
    Extrinsic e;
    e.matrix.setIdentity();
    e.matrix.topLeftCorner<3, 3>() =
        rot_y(deg_to_rad(d.yaw_deg)) * rot_x(deg_to_rad(d.pitch_deg)) * rot_z(deg_to_rad(d.roll_deg));
    e.matrix.topRightCorner<3, 1>() = d.translation;
    return e;
}

Vec3 rotate_about_axis(const Vec3& v, const Vec3& axis, double angle_deg) {
    if (std::abs(axis.norm() - 1.0) > 1e-9)
        throw Error(ErrorCode::InvalidSpec, "rotation axis must be unit length");
    double rad = deg_to_rad(angle_deg);
    double c = std::cos(rad);
    double s = std::sin(rad);
    return v * c + axis.cross(v) * s + axis * (axis.dot(v)) * (1.0 - c);
}

double angle_between_deg(const Vec3& a, const Vec3& b) {
    double na = a.norm();
    double nb = b.norm();
    if (na == 0.0 || nb == 0.0)
        throw Error(ErrorCode::ZeroVector, "angle between zero-length vector");
    double cosv = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
    return rad_to_deg(std::acos(cosv));
}

CameraPose look_at_pose(const Vec3& position, const Vec3& target, const Vec3& up) {
    Vec3 forward = target - position;
    if (forward.norm() < 1e-12)
        throw Error(ErrorCode::InvalidSpec, "look-at target coincides with position");
    forward.normalize();
    Vec3 down = -up;
    Vec3 right = down.cross(forward);
    if (right.norm() < 1e-9) {
        // Looking straight up or down; pick a stable in-plane right axis.
        Vec3 alt = std::abs(forward.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 0, 1);
        right = (alt - alt.dot(forward) * forward);
    }
    right.normalize();
    Vec3 cam_down = forward.cross(right).normalized();
    CameraPose pose;
    pose.rotation.col(0) = right;
    pose.rotation.col(1) = cam_down;
    pose.rotation.col(2) = forward;
    pose.translation = position;
    return pose;
}

} // namespace mss::geometry
