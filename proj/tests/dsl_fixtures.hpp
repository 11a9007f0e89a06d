#pragma once

#include <string>
#include <vector>

#include "mss/dsl.hpp"

namespace dsl_fixtures {

using namespace mss;
using namespace mss::dsl;
using geometry::Vec3;

// Registry whose tools only record their calls — used both for golden-corpus
// execution and for the sandbox property (no effects beyond registry calls).
struct RecordingRegistry {
    ToolRegistry registry;
    std::vector<std::string> calls;

    RecordingRegistry() {
        auto record = [this](std::string name, Value result) {
            return [this, name, result](const std::vector<Value>& args) -> Value {
                std::string line = name + "(";
                for (size_t i = 0; i < args.size(); ++i) {
                    if (i) line += ", ";
                    line += value_to_string(args[i]);
                }
                calls.push_back(line + ")");
                return result;
            };
        };
        registry.register_tool("perception.locate", 1, record("perception.locate", Vec3(1, 2, 3)));
        registry.register_tool("perception.locate_object", 1,
                               record("perception.locate_object", Vec3(0, -0.5, 2)));
        registry.register_tool("perception.reconstruct", 0,
                               record("perception.reconstruct", ReconHandle{1}));
        registry.register_tool("perception.calibrate", 3,
                               record("perception.calibrate",
                                      Eigen::MatrixXd(Eigen::MatrixXd::Identity(4, 3))));
        registry.register_tool("perception.direction", 4,
                               record("perception.direction", Label{"Northeast"}));
        registry.register_tool("perception.camera_motion", 2,
                               record("perception.camera_motion",
                                      DescriptorMap{{"forward", 1.0}, {"rotate_right", 30.0}}));
        registry.register_tool("perception.ground_direction", 1,
                               record("perception.ground_direction", Vec3(0, 0, 1)));
        registry.register_tool("compute.distance", 2, record("compute.distance", 2.5));
        registry.register_tool("compute.angle", 2, record("compute.angle", 90.0));
        registry.register_tool("compute.add", -1, record("compute.add", 3.0));
        registry.register_tool("compute.sub", 2, record("compute.sub", Vec3(1, 0, -1)));
        registry.register_tool("compute.project_to_ground", 1,
                               record("compute.project_to_ground", Vec3(1, 0, 3)));
        registry.register_tool("sandbox.checkpoint", 0, record("sandbox.checkpoint", Absent{}));
    }
};

// One binding of every value kind, with provenance.
inline Environment full_kind_env() {
    Environment env;
    env.turn = 7;
    env.bindings["n"] = 1.5;
    env.bindings["weird"] = -0.0;
    env.bindings["s"] = std::string("hello world");
    env.bindings["flag"] = true;
    env.bindings["v"] = Vec3(0.1, -2.25, 3e17);
    Eigen::MatrixXd m(2, 3);
    m << 1, 2, 3, 4, 5, 6.0000000001;
    env.bindings["m"] = m;
    env.bindings["lab"] = Label{"Southwest"};
    env.bindings["desc"] = DescriptorMap{{"forward", 1.0}, {"right", -0.25}};
    perception::DirectionCandidateSet set;
    set.anchor_point = Vec3(1, 0, 2);
    set.stage = perception::DirectionCandidateSet::Stage::Fine;
    set.vectors = {Vec3(1, 0, 0), Vec3(0, 0, 1)};
    set.labels = {"1", "2"};
    env.bindings["cands"] = set;
    env.bindings["recon"] = ReconHandle{42};
    env.bindings["nothing"] = Absent{};
    env.provenance["v"] = Provenance{"perception", "locate", "\"ball\"", 3};
    return env;
}

inline bool env_equal(const Environment& a, const Environment& b) {
    if (a.turn != b.turn || a.bindings.size() != b.bindings.size()) return false;
    for (const auto& [k, v] : a.bindings) {
        auto it = b.bindings.find(k);
        if (it == b.bindings.end() || !value_equal(v, it->second)) return false;
    }
    if (a.provenance.size() != b.provenance.size()) return false;
    for (const auto& [k, p] : a.provenance) {
        auto it = b.provenance.find(k);
        if (it == b.provenance.end() || it->second.module != p.module ||
            it->second.op != p.op || it->second.args != p.args || it->second.turn != p.turn)
            return false;
    }
    return true;
}

} // namespace dsl_fixtures
