#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mss/perception.hpp"
#include "mss/question.hpp"
#include "mss/scene_sim.hpp"

using namespace mss;
using namespace mss::scene_sim;
using geometry::CameraIntrinsics;
using geometry::CameraPose;
using geometry::Vec3;

namespace {

CameraIntrinsics intr256() { return {200.0, 200.0, 128.0, 128.0, 256, 256}; }

SceneSpec one_camera_spec(const Vec3& pos, const Vec3& lookat) {
    SceneSpec spec;
    SceneCamera cam;
    cam.intrinsics = intr256();
    cam.pose = geometry::look_at_pose(pos, lookat);
    spec.cameras.push_back(cam);
    return spec;
}

SceneObject make_box(std::string name, Vec3 center, Vec3 half) {
    SceneObject o;
    o.name = std::move(name);
    o.shape = SceneObject::Shape::Box;
    o.center = center;
    o.half_extent = half;
    return o;
}

} // namespace

TEST_CASE("build_scene validation") {
    SUBCASE("empty object list with one camera is a valid ground-only scene") {
        SceneSpec spec = one_camera_spec(Vec3(0, -1, 0), Vec3(0, -1, 1));
        SyntheticScene scene = build_scene(spec);
        CHECK(scene.objects.empty());
        CHECK(scene.cameras.size() == 1);
    }

    SUBCASE("overlapping boxes are rejected") {
        SceneSpec spec = one_camera_spec(Vec3(0, -1, -2), Vec3(0, -0.5, 2));
        spec.objects.push_back(make_box("a", Vec3(0, -0.5, 2), Vec3(0.5, 0.5, 0.5)));
        spec.objects.push_back(make_box("b", Vec3(0.3, -0.5, 2), Vec3(0.5, 0.5, 0.5)));
        CHECK_THROWS_WITH_AS(build_scene(spec), doctest::Contains("InvalidSpec"), Error);
    }

    SUBCASE("object extending below ground is rejected") {
        SceneSpec spec = one_camera_spec(Vec3(0, -1, -2), Vec3(0, -0.5, 2));
        spec.objects.push_back(make_box("sunk", Vec3(0, 0.2, 2), Vec3(0.5, 0.5, 0.5)));
        CHECK_THROWS_WITH_AS(build_scene(spec), doctest::Contains("InvalidSpec"), Error);
    }

    SUBCASE("facing vector must be ground-parallel") {
        SceneSpec spec = one_camera_spec(Vec3(0, -1, -2), Vec3(0, -0.5, 2));
        SceneObject o = make_box("tilted", Vec3(0, -0.5, 2), Vec3(0.3, 0.3, 0.3));
        o.facing = Vec3(0, 1, 1).normalized();
        spec.objects.push_back(o);
        CHECK_THROWS_WITH_AS(build_scene(spec), doctest::Contains("InvalidSpec"), Error);
    }

    SUBCASE("every object must be visible from some camera") {
        SceneSpec spec = one_camera_spec(Vec3(0, -1, -2), Vec3(0, -0.5, 2));
        spec.objects.push_back(make_box("behind", Vec3(0, -0.5, -10), Vec3(0.3, 0.3, 0.3)));
        CHECK_THROWS_WITH_AS(build_scene(spec), doctest::Contains("InvalidSpec"), Error);
    }

    SUBCASE("duplicate names are rejected") {
        SceneSpec spec = one_camera_spec(Vec3(0, -1, -2), Vec3(0, -0.5, 2));
        spec.objects.push_back(make_box("x", Vec3(0, -0.5, 2), Vec3(0.2, 0.2, 0.2)));
        spec.objects.push_back(make_box("x", Vec3(1.5, -0.5, 2), Vec3(0.2, 0.2, 0.2)));
        CHECK_THROWS_WITH_AS(build_scene(spec), doctest::Contains("InvalidSpec"), Error);
    }
}

TEST_CASE("render_depth analytic cases") {
    SUBCASE("camera 2 m above ground looking straight down sees constant depth 2") {
        SceneSpec spec = one_camera_spec(Vec3(0, -2, 0), Vec3(0, 0, 0));
        SyntheticScene scene = build_scene(spec);
        geometry::DepthMap depth = render_depth(scene, 0);
        for (int v = 0; v < depth.height; v += 17)
            for (int u = 0; u < depth.width; u += 17) {
                REQUIRE(depth.is_valid(u, v));
                CHECK(depth.at(u, v) == doctest::Approx(2.0).epsilon(1e-12));
            }
    }

    SUBCASE("axis ray through a unit sphere 3 m ahead returns depth 2") {
        SceneSpec spec;
        SceneCamera cam;
        cam.intrinsics = intr256();
        cam.pose = CameraPose{};  // identity at origin, +Z forward
        cam.pose.translation = Vec3(0, -1.5, 0);
        spec.cameras.push_back(cam);
        SceneObject sph;
        sph.name = "ball";
        sph.shape = SceneObject::Shape::Sphere;
        sph.center = Vec3(0, -1.5, 3);
        sph.radius = 1.0;
        spec.objects.push_back(sph);
        SyntheticScene scene = build_scene(spec);
        auto render = render_view(scene, 0);
        REQUIRE(render.depth.is_valid(128, 128));
        CHECK(render.depth.at(128, 128) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(render.hit_at(128, 128) == 0);
    }

    SUBCASE("horizon ray with no objects is invalid") {
        SceneSpec spec = one_camera_spec(Vec3(0, -1, 0), Vec3(0, -1, 5));
        SyntheticScene scene = build_scene(spec);
        geometry::DepthMap depth = render_depth(scene, 0);
        CHECK(!depth.is_valid(128, 128));  // principal ray parallel to ground
        CHECK(depth.is_valid(128, 200));   // below the horizon hits ground
        CHECK(!depth.is_valid(128, 50));   // above the horizon misses
    }

    SUBCASE("bad view index") {
        SceneSpec spec = one_camera_spec(Vec3(0, -1, 0), Vec3(0, -1, 5));
        SyntheticScene scene = build_scene(spec);
        CHECK_THROWS_WITH_AS(render_depth(scene, 3), doctest::Contains("OutOfBounds"), Error);
    }
}

TEST_CASE("rendered surface points satisfy the primitive equations") {
    SyntheticScene scene = build_scene(default_scene_spec(3));
    auto render = render_view(scene, 0);
    const SceneCamera& cam = scene.cameras[0];
    for (int v = 0; v < render.depth.height; v += 5) {
        for (int u = 0; u < render.depth.width; u += 5) {
            if (!render.depth.is_valid(u, v)) continue;
            Vec3 p = geometry::back_project_pixel(u, v, render.depth.at(u, v), cam.intrinsics,
                                                  cam.pose);
            int id = render.hit_at(u, v);
            if (id == kHitGround) {
                CHECK(std::abs(p.y()) < 1e-6);
            } else {
                REQUIRE(id >= 0);
                const SceneObject& o = scene.objects[static_cast<size_t>(id)];
                if (o.shape == SceneObject::Shape::Sphere) {
                    CHECK(std::abs((p - o.center).norm() - o.radius) < 1e-6);
                } else {
                    Vec3 d = (p - o.center).cwiseAbs() - o.half_extent;
                    CHECK(d.maxCoeff() < 1e-6);       // inside or on the box
                    CHECK(d.maxCoeff() > -1e-6);      // on the surface, not interior
                }
            }
        }
    }
}

TEST_CASE("render_point_splat") {
    CameraIntrinsics intr = intr256();
    CameraPose pose;  // identity

    SUBCASE("single point on the optical axis lands at the principal point") {
        geometry::PointCloud cloud;
        cloud.points.push_back(Vec3(0, 0, 1));
        SplatImage img = render_point_splat(cloud, intr, pose);
        CHECK(img.at(128, 128) == 0);
    }

    SUBCASE("point behind the camera is not rendered") {
        geometry::PointCloud cloud;
        cloud.points.push_back(Vec3(0, 0, -1));
        SplatImage img = render_point_splat(cloud, intr, pose);
        for (int id : img.point_id) CHECK(id == -1);
    }

    SUBCASE("nearer of two points on one ray wins the z-buffer") {
        geometry::PointCloud cloud;
        cloud.points.push_back(Vec3(0, 0, 4));
        cloud.points.push_back(Vec3(0, 0, 2));
        SplatImage img = render_point_splat(cloud, intr, pose);
        CHECK(img.at(128, 128) == 1);
    }

    SUBCASE("empty cloud is rejected") {
        CHECK_THROWS_WITH_AS(render_point_splat(geometry::PointCloud{}, intr, pose),
                             doctest::Contains("EmptyCloud"), Error);
    }
}

TEST_CASE("ground_truth_position") {
    SceneSpec spec = one_camera_spec(Vec3(0, -1, -2), Vec3(1, -0.5, 2));
    spec.objects.push_back(make_box("box", Vec3(1, -0.5, 2), Vec3(0.3, 0.3, 0.3)));
    SyntheticScene scene = build_scene(spec);
    CHECK((ground_truth_position(scene, "box") - Vec3(1, -0.5, 2)).norm() == 0.0);
    CHECK_THROWS_WITH_AS(ground_truth_position(scene, "ghost"),
                         doctest::Contains("UnknownObject"), Error);
}

TEST_CASE("scene spec text round-trips") {
    SceneSpec spec = default_scene_spec(11);
    std::string text = serialize_scene_spec(spec);
    SceneSpec parsed = parse_scene_spec(text);
    REQUIRE(parsed.objects.size() == spec.objects.size());
    REQUIRE(parsed.cameras.size() == spec.cameras.size());
    CHECK(parsed.rng_seed == spec.rng_seed);
    for (size_t i = 0; i < spec.objects.size(); ++i) {
        CHECK(parsed.objects[i].name == spec.objects[i].name);
        CHECK((parsed.objects[i].center - spec.objects[i].center).norm() < 1e-9);
        CHECK(parsed.objects[i].facing.has_value() == spec.objects[i].facing.has_value());
    }
    for (size_t i = 0; i < spec.cameras.size(); ++i) {
        CHECK((parsed.cameras[i].pose.center() - spec.cameras[i].pose.center()).norm() < 1e-9);
        CHECK((parsed.cameras[i].pose.rotation - spec.cameras[i].pose.rotation).cwiseAbs()
                  .maxCoeff() < 1e-9);
    }
    // Parsed spec still builds.
    build_scene(parsed);
}

TEST_CASE("scene spec parse errors") {
    CHECK_THROWS_WITH_AS(parse_scene_spec("camera pos=0,0,0\n"), doctest::Contains("InvalidSpec"),
                         Error);
    CHECK_THROWS_WITH_AS(parse_scene_spec("teapot name=x\n"), doctest::Contains("InvalidSpec"),
                         Error);
    CHECK_THROWS_WITH_AS(parse_scene_spec("object name=a shape=box center=1,2\n"),
                         doctest::Contains("InvalidSpec"), Error);
    // Comments and blank lines are fine.
    SceneSpec ok = parse_scene_spec("# comment\n\nseed 5\n");
    CHECK(ok.rng_seed == 5);
}

TEST_CASE("default scene camera motions match the intended phrases") {
    SyntheticScene scene = build_scene(default_scene_spec(1));
    REQUIRE(scene.cameras.size() == 3);
    auto e = [&](int i) { return geometry::Extrinsic::from_pose(scene.cameras[i].pose); };

    auto m01 = perception::relative_camera_movement(e(0), e(1));
    CHECK(question::motion_phrase(m01) == "turned right by about 30 degrees");
    auto m12 = perception::relative_camera_movement(e(1), e(2));
    CHECK(question::motion_phrase(m12) == "moved forward about 1.0 meters");
}

TEST_CASE("question text templates round-trip through the parser") {
    question::Model direction;
    direction.category = question::Category::Direction;
    direction.calib_target = "ball";
    direction.calib_label = "Northeast";
    direction.calib_anchor = "crate";
    direction.subject = "cart";
    direction.reference = "stone";
    auto parsed = question::Model::parse(direction.render());
    REQUIRE(parsed.has_value());
    CHECK(parsed->category == question::Category::Direction);
    CHECK(parsed->subject == "cart");
    CHECK(parsed->reference == "stone");
    CHECK(parsed->calib_label == "Northeast");

    question::Model motion;
    motion.category = question::Category::CameraMotion;
    motion.view_a = 0;
    motion.view_b = 2;
    auto pm = question::Model::parse(motion.render());
    REQUIRE(pm.has_value());
    CHECK(pm->category == question::Category::CameraMotion);
    CHECK(pm->view_a == 0);
    CHECK(pm->view_b == 2);
    CHECK(pm->required_keys() == std::vector<std::string>{"cam_move_0_2"});

    question::Model nearest;
    nearest.category = question::Category::Nearest;
    nearest.subject = "ball";
    nearest.candidates = {"crate", "cart", "stone"};
    auto pn = question::Model::parse(nearest.render());
    REQUIRE(pn.has_value());
    CHECK(pn->category == question::Category::Nearest);
    CHECK(pn->candidates == std::vector<std::string>{"crate", "cart", "stone"});

    question::Model facing;
    facing.category = question::Category::Facing;
    facing.calib_target = "ball";
    facing.calib_label = "East";
    facing.calib_anchor = "crate";
    facing.subject = "cart";
    auto pf = question::Model::parse(facing.render());
    REQUIRE(pf.has_value());
    CHECK(pf->category == question::Category::Facing);
    CHECK(pf->subject == "cart");

    CHECK(!question::Model::parse("What is the meaning of life?").has_value());
}

namespace {

// Independent answer oracle: recompute the ground-truth answer for a generated
// question from the scene alone.
std::string oracle_answer_text(const SyntheticScene& scene, const GeneratedQuestion& q) {
    auto model = question::Model::parse(q.text);
    REQUIRE(model.has_value());
    switch (model->category) {
        case question::Category::Direction: {
            auto frame = perception::calibrate_frame(scene.object(model->calib_anchor).center,
                                                     scene.object(model->calib_target).center,
                                                     model->calib_label, scene.ground);
            return perception::direction_label(frame, scene.object(model->reference).center,
                                               scene.object(model->subject).center, 8);
        }
        case question::Category::Facing: {
            auto frame = perception::calibrate_frame(scene.object(model->calib_anchor).center,
                                                     scene.object(model->calib_target).center,
                                                     model->calib_label, scene.ground);
            return perception::label_vector(frame, *scene.object(model->subject).facing, 8);
        }
        case question::Category::CameraMotion: {
            auto e0 = geometry::Extrinsic::from_pose(
                scene.cameras[static_cast<size_t>(model->view_a)].pose);
            auto e1 = geometry::Extrinsic::from_pose(
                scene.cameras[static_cast<size_t>(model->view_b)].pose);
            return question::motion_phrase(perception::relative_camera_movement(e0, e1));
        }
        case question::Category::Nearest: {
            const Vec3 s = scene.object(model->subject).center;
            std::string best;
            double best_dist = 1e18;
            for (const auto& name : model->candidates) {
                double d = (scene.object(name).center - s).norm();
                if (d < best_dist) {
                    best_dist = d;
                    best = name;
                }
            }
            return best;
        }
    }
    return {};
}

} // namespace

TEST_CASE("generate_question_set produces answerable, deterministic questions") {
    SyntheticScene scene = build_scene(default_scene_spec(21));

    CHECK(generate_question_set(scene, 0, 5).empty());

    auto qs = generate_question_set(scene, 24, 5);
    REQUIRE(qs.size() == 24);

    auto qs2 = generate_question_set(scene, 24, 5);
    std::set<std::string> categories;
    for (size_t i = 0; i < qs.size(); ++i) {
        const auto& q = qs[i];
        categories.insert(q.category);
        CHECK(!q.required_keys.empty());
        CHECK(q.choices.size() >= 2);
        CHECK(q.choices.size() <= 4);

        // Exactly one choice carries the ground-truth answer.
        std::string truth = oracle_answer_text(scene, q);
        int matches = 0;
        std::string answer_text;
        for (const auto& c : q.choices) {
            if (c.text == truth) ++matches;
            if (c.label == q.answer_label) answer_text = c.text;
        }
        CHECK(matches == 1);
        CHECK(answer_text == truth);

        // Determinism per (scene, count, seed).
        CHECK(qs2[i].text == q.text);
        CHECK(qs2[i].answer_label == q.answer_label);
        REQUIRE(qs2[i].choices.size() == q.choices.size());
        for (size_t k = 0; k < q.choices.size(); ++k)
            CHECK(qs2[i].choices[k].text == q.choices[k].text);
    }
    // All four templates appear in a 24-question draw over the default scene.
    CHECK(categories.size() == 4);

    auto qs3 = generate_question_set(scene, 24, 6);
    bool any_diff = false;
    for (size_t i = 0; i < qs.size(); ++i)
        if (qs3[i].text != qs[i].text) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("generate_question_set needs at least two objects") {
    SceneSpec spec = one_camera_spec(Vec3(0, -1, -2), Vec3(0, -0.5, 2));
    spec.objects.push_back(make_box("solo", Vec3(0, -0.5, 2), Vec3(0.3, 0.3, 0.3)));
    SyntheticScene scene = build_scene(spec);
    CHECK_THROWS_WITH_AS(generate_question_set(scene, 4, 1),
                         doctest::Contains("InsufficientScene"), Error);
}
