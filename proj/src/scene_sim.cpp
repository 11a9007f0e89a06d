#include "mss/scene_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "mss/perception.hpp"
#include "mss/question.hpp"

namespace mss::scene_sim {

using geometry::Extrinsic;
using geometry::project_point;

double SceneObject::extent_bound() const {
    return shape == Shape::Sphere ? radius : half_extent.norm();
}

const SceneObject& SyntheticScene::object(const std::string& name) const {
    int idx = object_index(name);
    if (idx < 0) throw Error(ErrorCode::UnknownObject, "no object named " + name);
    return objects[static_cast<size_t>(idx)];
}

int SyntheticScene::object_index(const std::string& name) const {
    for (size_t i = 0; i < objects.size(); ++i)
        if (objects[i].name == name) return static_cast<int>(i);
    return -1;
}

namespace {

struct Aabb {
    Vec3 lo;
    Vec3 hi;
};

Aabb object_aabb(const SceneObject& o) {
    Vec3 ext = o.shape == SceneObject::Shape::Sphere ? Vec3::Constant(o.radius) : o.half_extent;
    return {o.center - ext, o.center + ext};
}

bool aabb_overlap(const Aabb& a, const Aabb& b) {
    for (int i = 0; i < 3; ++i)
        if (a.hi[i] <= b.lo[i] || b.hi[i] <= a.lo[i]) return false;
    return true;
}

bool name_ok(const std::string& name) {
    if (name.empty()) return false;
    return std::all_of(name.begin(), name.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

} // namespace

SyntheticScene build_scene(const SceneSpec& spec) {
    SyntheticScene scene;
    scene.ground.normal = geometry::kWorldUp;
    scene.ground.offset = 0.0;
    scene.rng_seed = spec.rng_seed;
    scene.cameras = spec.cameras;
    scene.objects = spec.objects;

    if (scene.cameras.empty())
        throw Error(ErrorCode::InvalidSpec, "scene needs at least one camera");
    for (const auto& cam : scene.cameras) {
        cam.intrinsics.validate();
        cam.pose.validate(1e-6);
    }
    for (auto& o : scene.objects) {
        if (!name_ok(o.name))
            throw Error(ErrorCode::InvalidSpec, "object name must be a word: '" + o.name + "'");
        if (o.shape == SceneObject::Shape::Box) {
            if ((o.half_extent.array() <= 0.0).any())
                throw Error(ErrorCode::InvalidSpec, "box extents must be positive: " + o.name);
        } else if (o.radius <= 0.0) {
            throw Error(ErrorCode::InvalidSpec, "sphere radius must be positive: " + o.name);
        }
        Aabb bb = object_aabb(o);
        if (bb.hi.y() > 1e-9)
            throw Error(ErrorCode::InvalidSpec, "object extends below ground: " + o.name);
        if (o.facing) {
            if (std::abs(o.facing->dot(scene.ground.normal)) > 1e-6)
                throw Error(ErrorCode::InvalidSpec, "facing vector not parallel to ground: " + o.name);
            o.facing->normalize();
        }
    }
    for (size_t i = 0; i < scene.objects.size(); ++i) {
        for (size_t j = i + 1; j < scene.objects.size(); ++j) {
            if (scene.objects[i].name == scene.objects[j].name)
                throw Error(ErrorCode::InvalidSpec, "duplicate object name: " + scene.objects[i].name);
            if (aabb_overlap(object_aabb(scene.objects[i]), object_aabb(scene.objects[j])))
                throw Error(ErrorCode::InvalidSpec,
                            "objects overlap: " + scene.objects[i].name + " / " + scene.objects[j].name);
        }
    }
    for (const auto& o : scene.objects) {
        bool visible = false;
        for (const auto& cam : scene.cameras) {
            auto proj = project_point(o.center, cam.intrinsics, cam.pose);
            if (proj.depth > 0 && proj.u >= 0 && proj.u < cam.intrinsics.width && proj.v >= 0 &&
                proj.v < cam.intrinsics.height) {
                visible = true;
                break;
            }
        }
        if (!visible)
            throw Error(ErrorCode::InvalidSpec, "object visible from no camera: " + o.name);
    }
    return scene;
}

namespace {

// Ray o + t*d with d in world coordinates and unit camera-Z component, so t is
// the camera depth of the hit.
struct Hit {
    double t = kMaxRenderDepth;
    int id = kHitNone;
};

void intersect_ground(const Vec3& o, const Vec3& d, Hit& hit) {
    if (std::abs(d.y()) < 1e-12) return;
    double t = -o.y() / d.y();
    if (t > 1e-9 && t < hit.t) {
        hit.t = t;
        hit.id = kHitGround;
    }
}

void intersect_box(const Vec3& o, const Vec3& d, const SceneObject& box, int id, Hit& hit) {
    double t0 = 1e-9, t1 = hit.t;
    for (int i = 0; i < 3; ++i) {
        double lo = box.center[i] - box.half_extent[i];
        double hi = box.center[i] + box.half_extent[i];
        if (std::abs(d[i]) < 1e-12) {
            if (o[i] < lo || o[i] > hi) return;
            continue;
        }
        double ta = (lo - o[i]) / d[i];
        double tb = (hi - o[i]) / d[i];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return;
    }
    hit.t = t0;
    hit.id = id;
}

void intersect_sphere(const Vec3& o, const Vec3& d, const SceneObject& sph, int id, Hit& hit) {
    Vec3 oc = o - sph.center;
    double a = d.dot(d);
    double b = 2.0 * oc.dot(d);
    double c = oc.dot(oc) - sph.radius * sph.radius;
    double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return;
    double sq = std::sqrt(disc);
    double t = (-b - sq) / (2.0 * a);
    if (t <= 1e-9) t = (-b + sq) / (2.0 * a);
    if (t > 1e-9 && t < hit.t) {
        hit.t = t;
        hit.id = id;
    }
}

} // namespace

RenderResult render_view(const SyntheticScene& scene, int view_index) {
    if (view_index < 0 || static_cast<size_t>(view_index) >= scene.cameras.size())
        throw Error(ErrorCode::OutOfBounds, "view index out of range");
    const SceneCamera& cam = scene.cameras[static_cast<size_t>(view_index)];
    const CameraIntrinsics& intr = cam.intrinsics;
    RenderResult result;
    result.depth = DepthMap::invalid_map(intr.width, intr.height);
    result.hit_ids.assign(static_cast<size_t>(intr.width) * intr.height, kHitNone);
    Vec3 origin = cam.pose.center();
    for (int v = 0; v < intr.height; ++v) {
        for (int u = 0; u < intr.width; ++u) {
            Vec3 dir_cam((u - intr.cx) / intr.fx, (v - intr.cy) / intr.fy, 1.0);
            Vec3 dir = cam.pose.rotation * dir_cam;
            Hit hit;
            intersect_ground(origin, dir, hit);
            for (size_t i = 0; i < scene.objects.size(); ++i) {
                const SceneObject& o = scene.objects[i];
                if (o.shape == SceneObject::Shape::Box)
                    intersect_box(origin, dir, o, static_cast<int>(i), hit);
                else
                    intersect_sphere(origin, dir, o, static_cast<int>(i), hit);
            }
            if (hit.id != kHitNone) {
                result.depth.set(u, v, hit.t);
                result.hit_ids[static_cast<size_t>(v) * intr.width + u] = hit.id;
            }
        }
    }
    return result;
}

DepthMap render_depth(const SyntheticScene& scene, int view_index) {
    return render_view(scene, view_index).depth;
}

SplatImage render_point_splat(const PointCloud& cloud, const CameraIntrinsics& intr,
                              const CameraPose& pose, int splat_radius_px) {
    if (cloud.empty()) throw Error(ErrorCode::EmptyCloud, "cannot splat an empty cloud");
    SplatImage img;
    img.width = intr.width;
    img.height = intr.height;
    img.point_id.assign(static_cast<size_t>(intr.width) * intr.height, -1);
    img.depth.assign(static_cast<size_t>(intr.width) * intr.height, 0.0);
    for (size_t i = 0; i < cloud.size(); ++i) {
        auto proj = project_point(cloud.points[i], intr, pose);
        if (proj.depth <= 1e-9) continue;
        int cu = static_cast<int>(std::lround(proj.u));
        int cv = static_cast<int>(std::lround(proj.v));
        for (int dv = -splat_radius_px; dv <= splat_radius_px; ++dv) {
            for (int du = -splat_radius_px; du <= splat_radius_px; ++du) {
                int u = cu + du, v = cv + dv;
                if (u < 0 || u >= img.width || v < 0 || v >= img.height) continue;
                size_t idx = static_cast<size_t>(v) * img.width + u;
                if (img.point_id[idx] < 0 || proj.depth < img.depth[idx]) {
                    img.point_id[idx] = static_cast<int>(i);
                    img.depth[idx] = proj.depth;
                }
            }
        }
    }
    return img;
}

Vec3 ground_truth_position(const SyntheticScene& scene, const std::string& name) {
    return scene.object(name).center;
}

// ---------------------------------------------------------------------------
// Scene spec text format
// ---------------------------------------------------------------------------

namespace {

Vec3 parse_vec3(const std::string& s, const std::string& context) {
    Vec3 v;
    std::stringstream ss(s);
    std::string part;
    for (int i = 0; i < 3; ++i) {
        if (!std::getline(ss, part, ','))
            throw Error(ErrorCode::InvalidSpec, "expected 3 comma-separated numbers in " + context);
        try {
            v[i] = std::stod(part);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidSpec, "bad number '" + part + "' in " + context);
        }
    }
    return v;
}

double parse_num(const std::string& s, const std::string& context) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidSpec, "bad number '" + s + "' in " + context);
    }
}

std::map<std::string, std::string> parse_fields(std::istringstream& line, const std::string& context) {
    std::map<std::string, std::string> fields;
    std::string token;
    while (line >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::InvalidSpec, "expected key=value, got '" + token + "' in " + context);
        fields[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return fields;
}

std::string fmt_vec3(const Vec3& v) {
    std::ostringstream os;
    os.precision(17);
    os << v.x() << "," << v.y() << "," << v.z();
    return os.str();
}

} // namespace

SceneSpec parse_scene_spec(const std::string& text) {
    SceneSpec spec;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::istringstream line(raw);
        std::string kind;
        if (!(line >> kind)) continue;
        std::string ctx = "line " + std::to_string(lineno);
        if (kind == "seed") {
            uint64_t seed;
            if (!(line >> seed)) throw Error(ErrorCode::InvalidSpec, "seed needs a value, " + ctx);
            spec.rng_seed = seed;
        } else if (kind == "camera") {
            auto f = parse_fields(line, ctx);
            SceneCamera cam;
            cam.intrinsics.fx = f.count("fx") ? parse_num(f["fx"], ctx) : kDefaultFocal;
            cam.intrinsics.fy = f.count("fy") ? parse_num(f["fy"], ctx) : kDefaultFocal;
            cam.intrinsics.width = f.count("width") ? static_cast<int>(parse_num(f["width"], ctx))
                                                    : kDefaultImageSize;
            cam.intrinsics.height = f.count("height") ? static_cast<int>(parse_num(f["height"], ctx))
                                                      : kDefaultImageSize;
            cam.intrinsics.cx = f.count("cx") ? parse_num(f["cx"], ctx) : cam.intrinsics.width / 2.0;
            cam.intrinsics.cy = f.count("cy") ? parse_num(f["cy"], ctx) : cam.intrinsics.height / 2.0;
            if (!f.count("pos") || !f.count("lookat"))
                throw Error(ErrorCode::InvalidSpec, "camera needs pos= and lookat=, " + ctx);
            cam.pose = geometry::look_at_pose(parse_vec3(f["pos"], ctx), parse_vec3(f["lookat"], ctx));
            spec.cameras.push_back(cam);
        } else if (kind == "object") {
            auto f = parse_fields(line, ctx);
            SceneObject o;
            if (!f.count("name") || !f.count("shape") || !f.count("center"))
                throw Error(ErrorCode::InvalidSpec, "object needs name=, shape=, center=, " + ctx);
            o.name = f["name"];
            o.center = parse_vec3(f["center"], ctx);
            if (f["shape"] == "box") {
                o.shape = SceneObject::Shape::Box;
                if (!f.count("extent"))
                    throw Error(ErrorCode::InvalidSpec, "box needs extent=, " + ctx);
                o.half_extent = parse_vec3(f["extent"], ctx);
            } else if (f["shape"] == "sphere") {
                o.shape = SceneObject::Shape::Sphere;
                if (!f.count("radius"))
                    throw Error(ErrorCode::InvalidSpec, "sphere needs radius=, " + ctx);
                o.radius = parse_num(f["radius"], ctx);
            } else {
                throw Error(ErrorCode::InvalidSpec, "unknown shape '" + f["shape"] + "', " + ctx);
            }
            if (f.count("facing")) o.facing = parse_vec3(f["facing"], ctx);
            spec.objects.push_back(o);
        } else {
            throw Error(ErrorCode::InvalidSpec, "unknown directive '" + kind + "', " + ctx);
        }
    }
    return spec;
}

std::string serialize_scene_spec(const SceneSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    os << "seed " << spec.rng_seed << "\n";
    for (const auto& cam : spec.cameras) {
        Vec3 pos = cam.pose.center();
        Vec3 lookat = pos + cam.pose.rotation.col(2);
        os << "camera fx=" << cam.intrinsics.fx << " fy=" << cam.intrinsics.fy
           << " cx=" << cam.intrinsics.cx << " cy=" << cam.intrinsics.cy
           << " width=" << cam.intrinsics.width << " height=" << cam.intrinsics.height
           << " pos=" << fmt_vec3(pos) << " lookat=" << fmt_vec3(lookat) << "\n";
    }
    for (const auto& o : spec.objects) {
        os << "object name=" << o.name
           << " shape=" << (o.shape == SceneObject::Shape::Box ? "box" : "sphere")
           << " center=" << fmt_vec3(o.center);
        if (o.shape == SceneObject::Shape::Box)
            os << " extent=" << fmt_vec3(o.half_extent);
        else
            os << " radius=" << o.radius;
        if (o.facing) os << " facing=" << fmt_vec3(*o.facing);
        os << "\n";
    }
    return os.str();
}

SceneSpec load_scene_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open scene spec: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scene_spec(buf.str());
}

// ---------------------------------------------------------------------------
// Question generation
// ---------------------------------------------------------------------------

namespace {

using perception::GroundFrame;

double asin_deg_clamped(double ratio) {
    return geometry::rad_to_deg(std::asin(std::clamp(ratio, 0.0, 1.0)));
}

// Distance (degrees) from the azimuth of v in the frame to the nearest 8-way
// label-bin boundary.
double boundary_margin_deg(const GroundFrame& frame, const Vec3& v) {
    double az = geometry::rad_to_deg(std::atan2(v.dot(frame.east), v.dot(frame.north)));
    // Bin boundaries sit at 22.5 + k*45 degrees; reduce to one period.
    double rel = std::fmod(std::fmod(az, 45.0) + 45.0, 45.0);
    return std::abs(rel - 22.5);
}

struct ChoiceBuilder {
    std::mt19937_64& rng;

    std::vector<Choice> build(const std::string& truth, std::vector<std::string> pool,
                              std::string* answer_label, size_t want = 4) {
        std::erase(pool, truth);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<std::string> texts = {truth};
        for (const auto& p : pool) {
            if (texts.size() >= want) break;
            texts.push_back(p);
        }
        std::shuffle(texts.begin(), texts.end(), rng);
        std::vector<Choice> choices;
        for (size_t i = 0; i < texts.size(); ++i) {
            std::string label(1, static_cast<char>('A' + i));
            choices.push_back({label, texts[i]});
            if (texts[i] == truth && answer_label) *answer_label = label;
        }
        return choices;
    }
};

std::vector<int> all_views(const SyntheticScene& scene) {
    std::vector<int> v(scene.cameras.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
    return v;
}

} // namespace

std::vector<GeneratedQuestion> generate_question_set(const SyntheticScene& scene, int count,
                                                     uint64_t rng_seed) {
    if (count == 0) return {};
    if (scene.objects.size() < 2)
        throw Error(ErrorCode::InsufficientScene, "relational templates need at least 2 objects");

    std::mt19937_64 rng(rng_seed);
    ChoiceBuilder builder{rng};
    std::vector<GeneratedQuestion> out;

    auto pick_index = [&](size_t n) {
        return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
    };

    std::vector<int> facing_objects;
    for (size_t i = 0; i < scene.objects.size(); ++i)
        if (scene.objects[i].facing) facing_objects.push_back(static_cast<int>(i));

    // Calibration pairs must keep the derived frame stable against the
    // localization error of the two reference objects.
    auto sample_frame = [&](double* shift_out, question::Model* model) -> std::optional<GroundFrame> {
        for (int attempt = 0; attempt < 50; ++attempt) {
            size_t a = pick_index(scene.objects.size());
            size_t b = pick_index(scene.objects.size());
            if (a == b) continue;
            const SceneObject& anchor = scene.objects[a];
            const SceneObject& target = scene.objects[b];
            Vec3 pa = geometry::project_point_to_plane(anchor.center, scene.ground);
            Vec3 pt = geometry::project_point_to_plane(target.center, scene.ground);
            double dist = (pt - pa).norm();
            if (dist < 1.5) continue;
            double shift = asin_deg_clamped((anchor.extent_bound() + target.extent_bound()) / dist);
            if (shift > 14.0) continue;
            const auto& labels = perception::compass_labels(8);
            std::string label = labels[pick_index(labels.size())];
            model->calib_anchor = anchor.name;
            model->calib_target = target.name;
            model->calib_label = label;
            *shift_out = shift;
            return perception::calibrate_frame(anchor.center, target.center, label, scene.ground);
        }
        return std::nullopt;
    };

    auto try_direction = [&](GeneratedQuestion* q) -> bool {
        question::Model model;
        model.category = question::Category::Direction;
        double frame_shift = 0.0;
        auto frame = sample_frame(&frame_shift, &model);
        if (!frame) return false;
        for (int attempt = 0; attempt < 50; ++attempt) {
            size_t c = pick_index(scene.objects.size());
            size_t d = pick_index(scene.objects.size());
            if (c == d) continue;
            const SceneObject& subject = scene.objects[c];
            const SceneObject& reference = scene.objects[d];
            Vec3 pc = geometry::project_point_to_plane(subject.center, scene.ground);
            Vec3 pd = geometry::project_point_to_plane(reference.center, scene.ground);
            double dist = (pc - pd).norm();
            if (dist < 1.5) continue;
            double pair_shift =
                asin_deg_clamped((subject.extent_bound() + reference.extent_bound()) / dist);
            Vec3 v = pc - pd;
            if (boundary_margin_deg(*frame, v) < frame_shift + pair_shift + 2.0) continue;
            model.subject = subject.name;
            model.reference = reference.name;
            std::string truth =
                perception::direction_label(*frame, reference.center, subject.center, 8);
            q->category = "direction";
            q->text = model.render();
            q->required_keys = model.required_keys();
            q->view_indices = all_views(scene);
            q->choices = builder.build(truth, perception::compass_labels(8), &q->answer_label);
            return true;
        }
        return false;
    };

    auto try_nearest = [&](GeneratedQuestion* q) -> bool {
        if (scene.objects.size() < 3) return false;
        for (int attempt = 0; attempt < 80; ++attempt) {
            size_t s = pick_index(scene.objects.size());
            const SceneObject& subject = scene.objects[s];
            std::vector<size_t> others;
            for (size_t i = 0; i < scene.objects.size(); ++i)
                if (i != s) others.push_back(i);
            std::shuffle(others.begin(), others.end(), rng);
            size_t n_cand = std::min<size_t>(3, others.size());
            others.resize(n_cand);
            if (others.size() < 2) return false;
            std::vector<std::pair<double, size_t>> dists;
            for (size_t i : others)
                dists.push_back({(scene.objects[i].center - subject.center).norm(), i});
            std::sort(dists.begin(), dists.end());
            double err = 2.0 * subject.extent_bound() + scene.objects[dists[0].second].extent_bound() +
                         scene.objects[dists[1].second].extent_bound();
            if (dists[1].first - dists[0].first < err + 0.05) continue;
            question::Model model;
            model.category = question::Category::Nearest;
            model.subject = subject.name;
            for (size_t i : others) model.candidates.push_back(scene.objects[i].name);
            q->category = "nearest";
            q->text = model.render();
            q->required_keys = model.required_keys();
            q->view_indices = all_views(scene);
            std::string truth = scene.objects[dists[0].second].name;
            std::vector<Choice> choices;
            for (size_t i = 0; i < model.candidates.size(); ++i) {
                std::string label(1, static_cast<char>('A' + i));
                choices.push_back({label, model.candidates[i]});
                if (model.candidates[i] == truth) q->answer_label = label;
            }
            q->choices = choices;
            return true;
        }
        return false;
    };

    auto try_camera_motion = [&](GeneratedQuestion* q) -> bool {
        if (scene.cameras.size() < 2) return false;
        size_t a = pick_index(scene.cameras.size() - 1);
        size_t b = a + 1;
        Extrinsic e0 = Extrinsic::from_pose(scene.cameras[a].pose);
        Extrinsic e1 = Extrinsic::from_pose(scene.cameras[b].pose);
        perception::MovementDescriptors m;
        try {
            m = perception::relative_camera_movement(e0, e1);
        } catch (const Error&) {
            return false;
        }
        question::Model model;
        model.category = question::Category::CameraMotion;
        model.view_a = static_cast<int>(a);
        model.view_b = static_cast<int>(b);
        q->category = "camera-motion";
        q->text = model.render();
        q->required_keys = model.required_keys();
        q->view_indices = {static_cast<int>(a), static_cast<int>(b)};
        q->choices = builder.build(question::motion_phrase(m), question::motion_phrase_pool(),
                                   &q->answer_label);
        return true;
    };

    auto try_facing = [&](GeneratedQuestion* q) -> bool {
        if (facing_objects.empty()) return false;
        question::Model model;
        model.category = question::Category::Facing;
        for (int attempt = 0; attempt < 80; ++attempt) {
            double frame_shift = 0.0;
            auto frame = sample_frame(&frame_shift, &model);
            if (!frame) return false;
            int s = facing_objects[pick_index(facing_objects.size())];
            const SceneObject& subject = scene.objects[static_cast<size_t>(s)];
            // Budget: the grounding stage resolves the direction to 11.25
            // degrees; the frame may be rotated by the calibration shift.
            if (boundary_margin_deg(*frame, *subject.facing) < 11.25 + frame_shift + 0.5) continue;
            model.subject = subject.name;
            std::string truth = perception::label_vector(*frame, *subject.facing, 8);
            q->category = "facing";
            q->text = model.render();
            q->required_keys = model.required_keys();
            q->view_indices = all_views(scene);
            q->choices = builder.build(truth, perception::compass_labels(8), &q->answer_label);
            return true;
        }
        return false;
    };

    const std::vector<std::function<bool(GeneratedQuestion*)>> makers = {
        try_direction, try_camera_motion, try_nearest, try_facing};

    for (int i = 0; i < count; ++i) {
        GeneratedQuestion q;
        bool made = false;
        for (size_t offset = 0; offset < makers.size() && !made; ++offset)
            made = makers[(static_cast<size_t>(i) + offset) % makers.size()](&q);
        if (!made)
            throw Error(ErrorCode::InsufficientScene, "could not realize any question template");
        char idbuf[16];
        std::snprintf(idbuf, sizeof(idbuf), "q%03d", i);
        q.id = idbuf;
        out.push_back(std::move(q));
    }
    return out;
}

SceneSpec default_scene_spec(uint64_t seed) {
    SceneSpec spec;
    spec.rng_seed = seed;

    auto box = [](std::string name, Vec3 center, Vec3 half, std::optional<Vec3> facing = {}) {
        SceneObject o;
        o.name = std::move(name);
        o.shape = SceneObject::Shape::Box;
        o.center = center;
        o.half_extent = half;
        o.facing = facing;
        return o;
    };
    auto sphere = [](std::string name, Vec3 center, double r) {
        SceneObject o;
        o.name = std::move(name);
        o.shape = SceneObject::Shape::Sphere;
        o.center = center;
        o.radius = r;
        return o;
    };

    spec.objects.push_back(box("crate", {2.0, -0.25, 4.0}, {0.25, 0.25, 0.25}, Vec3(0, 0, -1)));
    spec.objects.push_back(sphere("ball", {-2.5, -0.25, 3.5}, 0.25));
    spec.objects.push_back(box("pillar", {0.5, -0.45, 6.5}, {0.15, 0.45, 0.15}));
    spec.objects.push_back(box("cart", {-3.0, -0.3, 7.0}, {0.3, 0.3, 0.3}, Vec3(1, 0, 0)));
    spec.objects.push_back(sphere("stone", {1.5, -0.2, 1.5}, 0.2));

    CameraIntrinsics intr{kDefaultFocal, kDefaultFocal, kDefaultImageSize / 2.0,
                          kDefaultImageSize / 2.0, kDefaultImageSize, kDefaultImageSize};
    // Level cameras: cam0 -> cam1 advances 1 m and turns right 30 degrees,
    // cam1 -> cam2 advances another meter.
    Vec3 pos0(0, -0.9, -1.5);
    Vec3 fwd0(0, 0, 1);
    Vec3 pos1 = pos0 + fwd0;
    Vec3 fwd1 = geometry::rotate_about_axis(fwd0, Vec3(0, 1, 0), 30.0);
    Vec3 pos2 = pos1 + fwd1;
    spec.cameras.push_back({intr, geometry::look_at_pose(pos0, pos0 + fwd0)});
    spec.cameras.push_back({intr, geometry::look_at_pose(pos1, pos1 + fwd1)});
    spec.cameras.push_back({intr, geometry::look_at_pose(pos2, pos2 + fwd1)});
    return spec;
}

} // namespace mss::scene_sim
