#include "mss/values.hpp"

#include <bit>
#include <cstdio>
#include <sstream>

namespace mss::dsl {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool bits_equal(double a, double b) {
    return std::bit_cast<uint64_t>(a) == std::bit_cast<uint64_t>(b);
}

bool matrix_bits_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (!bits_equal(a.data()[i], b.data()[i])) return false;
    return true;
}

} // namespace

std::string value_kind(const Value& v) {
    struct Visitor {
        std::string operator()(const Absent&) const { return "absent"; }
        std::string operator()(double) const { return "number"; }
        std::string operator()(const std::string&) const { return "string"; }
        std::string operator()(bool) const { return "boolean"; }
        std::string operator()(const geometry::Vec3&) const { return "vec3"; }
        std::string operator()(const Eigen::MatrixXd&) const { return "matrix"; }
        std::string operator()(const Label&) const { return "label"; }
        std::string operator()(const DescriptorMap&) const { return "descriptor-map"; }
        std::string operator()(const perception::DirectionCandidateSet&) const {
            return "candidate-set";
        }
        std::string operator()(const ReconHandle&) const { return "recon-handle"; }
    };
    return std::visit(Visitor{}, v);
}

std::string value_to_string(const Value& v) {
    struct Visitor {
        std::string operator()(const Absent&) const { return "absent"; }
        std::string operator()(double d) const { return fmt_double(d); }
        std::string operator()(const std::string& s) const { return "\"" + s + "\""; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(const geometry::Vec3& p) const {
            return "(" + fmt_double(p.x()) + ", " + fmt_double(p.y()) + ", " +
                   fmt_double(p.z()) + ")";
        }
        std::string operator()(const Eigen::MatrixXd& m) const {
            std::ostringstream os;
            os << "[";
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                if (r) os << ", ";
                os << "[";
                for (Eigen::Index c = 0; c < m.cols(); ++c) {
                    if (c) os << ", ";
                    os << fmt_double(m(r, c));
                }
                os << "]";
            }
            os << "]";
            return os.str();
        }
        std::string operator()(const Label& l) const { return l.text; }
        std::string operator()(const DescriptorMap& m) const {
            std::ostringstream os;
            os << "{";
            bool first = true;
            for (const auto& [k, val] : m) {
                if (!first) os << ", ";
                first = false;
                os << k << ": " << fmt_double(val);
            }
            os << "}";
            return os.str();
        }
        std::string operator()(const perception::DirectionCandidateSet& s) const {
            std::ostringstream os;
            os << "candidates("
               << (s.stage == perception::DirectionCandidateSet::Stage::Coarse ? "coarse" : "fine")
               << ", n=" << s.vectors.size() << ", anchor=(" << fmt_double(s.anchor_point.x())
               << ", " << fmt_double(s.anchor_point.y()) << ", " << fmt_double(s.anchor_point.z())
               << "))";
            return os.str();
        }
        std::string operator()(const ReconHandle& h) const {
            return "recon#" + std::to_string(h.id);
        }
    };
    return std::visit(Visitor{}, v);
}

bool value_equal(const Value& a, const Value& b) {
    if (a.index() != b.index()) return false;
    struct Visitor {
        const Value& other;
        bool operator()(const Absent&) const { return true; }
        bool operator()(double d) const { return bits_equal(d, std::get<double>(other)); }
        bool operator()(const std::string& s) const { return s == std::get<std::string>(other); }
        bool operator()(bool v) const { return v == std::get<bool>(other); }
        bool operator()(const geometry::Vec3& p) const {
            const auto& q = std::get<geometry::Vec3>(other);
            return bits_equal(p.x(), q.x()) && bits_equal(p.y(), q.y()) &&
                   bits_equal(p.z(), q.z());
        }
        bool operator()(const Eigen::MatrixXd& m) const {
            return matrix_bits_equal(m, std::get<Eigen::MatrixXd>(other));
        }
        bool operator()(const Label& l) const { return l == std::get<Label>(other); }
        bool operator()(const DescriptorMap& m) const {
            const auto& n = std::get<DescriptorMap>(other);
            if (m.size() != n.size()) return false;
            auto it = n.begin();
            for (const auto& [k, v] : m) {
                if (k != it->first || !bits_equal(v, it->second)) return false;
                ++it;
            }
            return true;
        }
        bool operator()(const perception::DirectionCandidateSet& s) const {
            const auto& t = std::get<perception::DirectionCandidateSet>(other);
            if (s.stage != t.stage || s.vectors.size() != t.vectors.size() ||
                s.labels != t.labels)
                return false;
            for (int i = 0; i < 3; ++i)
                if (!bits_equal(s.anchor_point[i], t.anchor_point[i])) return false;
            for (size_t i = 0; i < s.vectors.size(); ++i)
                for (int k = 0; k < 3; ++k)
                    if (!bits_equal(s.vectors[i][k], t.vectors[i][k])) return false;
            return true;
        }
        bool operator()(const ReconHandle& h) const { return h == std::get<ReconHandle>(other); }
    };
    return std::visit(Visitor{b}, a);
}

} // namespace mss::dsl
