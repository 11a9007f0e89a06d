#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mss/error.hpp"
#include "mss/values.hpp"

namespace mss::dsl {

// ---------------------------------------------------------------------------
// Syntax tree
//
// Grammar:
//   program   := { statement NEWLINE }
//   statement := IDENT "=" call | call | "emit" STRING expr
//   call      := IDENT "." IDENT "(" [ expr { "," expr } ] ")"
//   expr      := STRING | NUMBER | IDENT | "[" [ expr { "," expr } ] "]" | call
// Comments run from '#' to end of line. No loops, conditionals or functions.
// ---------------------------------------------------------------------------

struct SourcePos {
    int line = 0;
    int col = 0;
};

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct CallExpr {
    std::string module;
    std::string op;
    std::vector<ExprPtr> args;
};

struct VarRef {
    std::string name;
};

struct Expr {
    std::variant<double, std::string, VarRef, std::vector<ExprPtr>, CallExpr> node;
    SourcePos pos;
};

struct Statement {
    enum class Kind { Assign, BareCall, Emit } kind = Kind::BareCall;
    std::string name;  // assigned variable or emit key
    CallExpr call;     // Assign / BareCall
    ExprPtr value;     // Emit
    SourcePos pos;
};

struct Program {
    std::vector<Statement> statements;
};

// `known_names` lists variables already bound in the environment (restored
// from a snapshot of an earlier turn); references to anything else raise
// UseBeforeAssign with a source position.
Program parse(const std::string& text, const std::set<std::string>* known_names = nullptr);
std::string pretty_print(const Program& program);

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct Provenance {
    std::string module;
    std::string op;
    std::string args;  // rendered argument list
    uint32_t turn = 0;
};

struct Environment {
    std::map<std::string, Value> bindings;
    std::map<std::string, Provenance> provenance;
    uint32_t turn = 0;
};

// Versioned, length-prefixed binary snapshot; restore(snapshot(env)) == env.
std::vector<uint8_t> snapshot(const Environment& env);
Environment restore(const std::vector<uint8_t>& bytes);

using ToolFn = std::function<Value(const std::vector<Value>&)>;

class ToolRegistry {
public:
    // arity < 0 means variadic.
    void register_tool(const std::string& qualified_name, int arity, ToolFn fn);
    Value call(const std::string& qualified_name, const std::vector<Value>& args) const;
    bool has(const std::string& qualified_name) const;

private:
    struct Spec {
        int arity;
        ToolFn fn;
    };
    std::map<std::string, Spec> tools_;
};

struct EmittedItem {
    std::string key;
    Value value;
    Provenance provenance;
};

struct LogRecord {
    SourcePos pos;
    std::string statement;  // pretty-printed source statement
    bool ok = false;
    std::string outcome;    // value summary or error text
    double wall_ms = 0.0;
};

struct ExecutionLog {
    std::vector<LogRecord> records;
    std::string to_json() const;
};

struct ExecResult {
    Environment env;
    std::vector<EmittedItem> emits;
    ExecutionLog log;
    std::optional<std::string> error;  // set when execution halted early
};

// Runs statements in order against env; on the first failing statement,
// execution halts but bindings and emits collected so far are kept. The
// environment's turn counter advances by one per execute call.
ExecResult execute(const Program& program, Environment env, const ToolRegistry& registry);

// Type-checked argument accessors for registry tools; throw TypeMismatch.
double arg_number(const std::vector<Value>& args, size_t i);
const std::string& arg_string(const std::vector<Value>& args, size_t i);
geometry::Vec3 arg_vec3(const std::vector<Value>& args, size_t i);
const Eigen::MatrixXd& arg_matrix(const std::vector<Value>& args, size_t i);

} // namespace mss::dsl
