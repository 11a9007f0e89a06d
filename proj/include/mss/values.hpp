#pragma once

#include <map>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "mss/perception.hpp"

namespace mss::dsl {

// A compass or categorical label, kept distinct from free-form strings so
// downstream consumers can tell answers from descriptions.
struct Label {
    std::string text;
    bool operator==(const Label& o) const { return text == o.text; }
};

// Opaque reference to an episode-scoped reconstruction resource.
struct ReconHandle {
    int id = -1;
    bool operator==(const ReconHandle& o) const { return id == o.id; }
};

struct Absent {
    bool operator==(const Absent&) const { return true; }
};

using DescriptorMap = std::map<std::string, double>;

using Value = std::variant<Absent, double, std::string, bool, geometry::Vec3, Eigen::MatrixXd,
                           Label, DescriptorMap, perception::DirectionCandidateSet, ReconHandle>;

// Stable kind name, used in logs, snapshots and type diagnostics.
std::string value_kind(const Value& v);

// Human-readable rendering used in prompts and logs. Deterministic.
std::string value_to_string(const Value& v);

// Exact equality; floating-point payloads compare bit-identically.
bool value_equal(const Value& a, const Value& b);

} // namespace mss::dsl
