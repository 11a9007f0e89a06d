#include "mss/dsl.hpp"

#include <cctype>
#include <chrono>
#include <cstring>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mss::dsl {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class TokKind { Ident, Number, String, Equals, Dot, LParen, RParen, LBracket, RBracket,
                     Comma, Newline, End };

struct Token {
    TokKind kind;
    std::string text;
    double number = 0.0;
    SourcePos pos;
};

const char* tok_name(TokKind k) {
    switch (k) {
        case TokKind::Ident: return "identifier";
        case TokKind::Number: return "number";
        case TokKind::String: return "string";
        case TokKind::Equals: return "'='";
        case TokKind::Dot: return "'.'";
        case TokKind::LParen: return "'('";
        case TokKind::RParen: return "')'";
        case TokKind::LBracket: return "'['";
        case TokKind::RBracket: return "']'";
        case TokKind::Comma: return "','";
        case TokKind::Newline: return "newline";
        case TokKind::End: return "end of input";
    }
    return "?";
}

[[noreturn]] void syntax_error(const SourcePos& pos, const std::string& message) {
    throw Error(ErrorCode::SyntaxError, "line " + std::to_string(pos.line) + ", col " +
                                            std::to_string(pos.col) + ": " + message);
}

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto push = [&](TokKind kind, std::string t, double num = 0.0) {
        out.push_back({kind, std::move(t), num, {line, col}});
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            push(TokKind::Newline, "\n");
            ++i;
            ++line;
            col = 1;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            ++col;
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        SourcePos start{line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '_'))
                ++j;
            out.push_back({TokKind::Ident, text.substr(i, j - i), 0.0, start});
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            ((c == '-' || c == '+') && i + 1 < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '.')) ||
            (c == '.' && i + 1 < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            size_t j = i;
            if (text[j] == '-' || text[j] == '+') ++j;
            while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '.' || text[j] == 'e' || text[j] == 'E' ||
                                       ((text[j] == '-' || text[j] == '+') &&
                                        (text[j - 1] == 'e' || text[j - 1] == 'E'))))
                ++j;
            std::string lit = text.substr(i, j - i);
            try {
                size_t used = 0;
                double num = std::stod(lit, &used);
                if (used != lit.size()) throw std::invalid_argument(lit);
                out.push_back({TokKind::Number, lit, num, start});
            } catch (const std::exception&) {
                syntax_error(start, "malformed number '" + lit + "'");
            }
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (c == '"') {
            size_t j = i + 1;
            std::string s;
            while (j < text.size() && text[j] != '"' && text[j] != '\n') {
                s.push_back(text[j]);
                ++j;
            }
            if (j >= text.size() || text[j] != '"')
                syntax_error(start, "unterminated string literal");
            out.push_back({TokKind::String, s, 0.0, start});
            col += static_cast<int>(j - i + 1);
            i = j + 1;
            continue;
        }
        TokKind kind;
        switch (c) {
            case '=': kind = TokKind::Equals; break;
            case '.': kind = TokKind::Dot; break;
            case '(': kind = TokKind::LParen; break;
            case ')': kind = TokKind::RParen; break;
            case '[': kind = TokKind::LBracket; break;
            case ']': kind = TokKind::RBracket; break;
            case ',': kind = TokKind::Comma; break;
            default: syntax_error(start, std::string("unexpected character '") + c + "'");
        }
        push(kind, std::string(1, c));
        ++i;
        ++col;
    }
    out.push_back({TokKind::End, "", 0.0, {line, col}});
    return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    Parser(std::vector<Token> toks, const std::set<std::string>* known)
        : toks_(std::move(toks)) {
        if (known) assigned_ = *known;
    }

    Program run() {
        Program program;
        std::set<std::string> emit_keys;
        skip_newlines();
        while (peek().kind != TokKind::End) {
            Statement stmt = statement();
            if (stmt.kind == Statement::Kind::Emit) {
                if (stmt.name.empty()) syntax_error(stmt.pos, "emit key must be nonempty");
                if (!emit_keys.insert(stmt.name).second)
                    syntax_error(stmt.pos, "duplicate emit key \"" + stmt.name + "\"");
            }
            if (stmt.kind == Statement::Kind::Assign) assigned_.insert(stmt.name);
            program.statements.push_back(std::move(stmt));
            if (peek().kind == TokKind::End) break;
            expect(TokKind::Newline, "expected newline after statement");
            skip_newlines();
        }
        return program;
    }

private:
    const Token& peek(size_t ahead = 0) const {
        size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    const Token& advance() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    const Token& expect(TokKind kind, const std::string& what) {
        if (peek().kind != kind)
            syntax_error(peek().pos, what + "; got " + tok_name(peek().kind));
        return advance();
    }
    void skip_newlines() {
        while (peek().kind == TokKind::Newline) advance();
    }

    Statement statement() {
        Statement stmt;
        stmt.pos = peek().pos;
        if (peek().kind == TokKind::Ident && peek().text == "emit") {
            advance();
            stmt.kind = Statement::Kind::Emit;
            const Token& key = expect(TokKind::String, "expected string key after 'emit'");
            stmt.name = key.text;
            stmt.value = expr();
            return stmt;
        }
        if (peek().kind != TokKind::Ident)
            syntax_error(peek().pos, "expected a statement; got " + std::string(tok_name(peek().kind)));
        if (peek(1).kind == TokKind::Equals) {
            const Token& name = advance();
            advance();  // '='
            stmt.kind = Statement::Kind::Assign;
            stmt.name = name.text;
            stmt.call = call();
            return stmt;
        }
        stmt.kind = Statement::Kind::BareCall;
        stmt.call = call();
        return stmt;
    }

    CallExpr call() {
        const Token& module = expect(TokKind::Ident, "expected module name");
        expect(TokKind::Dot, "expected '.' after module name");
        const Token& op = expect(TokKind::Ident, "expected operation name after '.'");
        expect(TokKind::LParen, "expected '(' after operation name");
        CallExpr c;
        c.module = module.text;
        c.op = op.text;
        if (peek().kind != TokKind::RParen) {
            c.args.push_back(expr());
            while (peek().kind == TokKind::Comma) {
                advance();
                c.args.push_back(expr());
            }
        }
        expect(TokKind::RParen, "expected ')'");
        return c;
    }

    ExprPtr expr() {
        auto e = std::make_shared<Expr>();
        e->pos = peek().pos;
        switch (peek().kind) {
            case TokKind::String:
                e->node = advance().text;
                return e;
            case TokKind::Number:
                e->node = advance().number;
                return e;
            case TokKind::LBracket: {
                advance();
                std::vector<ExprPtr> items;
                if (peek().kind != TokKind::RBracket) {
                    items.push_back(expr());
                    while (peek().kind == TokKind::Comma) {
                        advance();
                        items.push_back(expr());
                    }
                }
                expect(TokKind::RBracket, "expected ']'");
                e->node = std::move(items);
                return e;
            }
            case TokKind::Ident: {
                if (peek(1).kind == TokKind::Dot) {
                    e->node = call();
                    return e;
                }
                const Token& name = advance();
                if (!assigned_.count(name.text))
                    throw Error(ErrorCode::UseBeforeAssign,
                                "line " + std::to_string(name.pos.line) + ", col " +
                                    std::to_string(name.pos.col) + ": '" + name.text +
                                    "' used before assignment");
                e->node = VarRef{name.text};
                return e;
            }
            default:
                syntax_error(peek().pos,
                             "expected an expression; got " + std::string(tok_name(peek().kind)));
        }
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::set<std::string> assigned_;
};

std::string fmt_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string print_expr(const Expr& e);

std::string print_call(const CallExpr& c) {
    std::string out = c.module + "." + c.op + "(";
    for (size_t i = 0; i < c.args.size(); ++i) {
        if (i) out += ", ";
        out += print_expr(*c.args[i]);
    }
    return out + ")";
}

std::string print_expr(const Expr& e) {
    struct Visitor {
        std::string operator()(double d) const { return fmt_number(d); }
        std::string operator()(const std::string& s) const { return "\"" + s + "\""; }
        std::string operator()(const VarRef& v) const { return v.name; }
        std::string operator()(const std::vector<ExprPtr>& items) const {
            std::string out = "[";
            for (size_t i = 0; i < items.size(); ++i) {
                if (i) out += ", ";
                out += print_expr(*items[i]);
            }
            return out + "]";
        }
        std::string operator()(const CallExpr& c) const { return print_call(c); }
    };
    return std::visit(Visitor{}, e.node);
}

std::string print_statement(const Statement& stmt) {
    switch (stmt.kind) {
        case Statement::Kind::Assign: return stmt.name + " = " + print_call(stmt.call);
        case Statement::Kind::BareCall: return print_call(stmt.call);
        case Statement::Kind::Emit: return "emit \"" + stmt.name + "\" " + print_expr(*stmt.value);
    }
    return {};
}

} // namespace

Program parse(const std::string& text, const std::set<std::string>* known_names) {
    return Parser(lex(text), known_names).run();
}

std::string pretty_print(const Program& program) {
    std::string out;
    for (const auto& stmt : program.statements) {
        out += print_statement(stmt);
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Snapshot format: magic "MSSE", version, turn, binding count, then bindings
// as (name, kind tag, payload) with explicit little-endian sizes. Doubles are
// stored as raw IEEE-754 bytes so restore is bit-identical.
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'M', 'S', 'S', 'E'};
constexpr uint32_t kVersion = 1;

enum class Tag : uint8_t { Absent = 0, Number, String, Boolean, Vec3, Matrix, Label,
                           DescriptorMap, CandidateSet, ReconHandle };

struct Writer {
    std::vector<uint8_t> bytes;
    void raw(const void* p, size_t n) {
        const auto* b = static_cast<const uint8_t*>(p);
        bytes.insert(bytes.end(), b, b + n);
    }
    void u8(uint8_t v) { raw(&v, 1); }
    void u32(uint32_t v) { raw(&v, 4); }
    void u64(uint64_t v) { raw(&v, 8); }
    void f64(double v) { raw(&v, 8); }
    void str(const std::string& s) {
        u32(static_cast<uint32_t>(s.size()));
        raw(s.data(), s.size());
    }
    void vec3(const geometry::Vec3& v) {
        f64(v.x());
        f64(v.y());
        f64(v.z());
    }
};

struct Reader {
    const std::vector<uint8_t>& bytes;
    size_t pos = 0;
    void raw(void* p, size_t n) {
        if (pos + n > bytes.size())
            throw Error(ErrorCode::CorruptSnapshot, "truncated snapshot");
        std::memcpy(p, bytes.data() + pos, n);
        pos += n;
    }
    uint8_t u8() {
        uint8_t v;
        raw(&v, 1);
        return v;
    }
    uint32_t u32() {
        uint32_t v;
        raw(&v, 4);
        return v;
    }
    uint64_t u64() {
        uint64_t v;
        raw(&v, 8);
        return v;
    }
    double f64() {
        double v;
        raw(&v, 8);
        return v;
    }
    std::string str() {
        uint32_t n = u32();
        if (pos + n > bytes.size())
            throw Error(ErrorCode::CorruptSnapshot, "truncated snapshot string");
        std::string s(reinterpret_cast<const char*>(bytes.data() + pos), n);
        pos += n;
        return s;
    }
    geometry::Vec3 vec3() {
        geometry::Vec3 v;
        v.x() = f64();
        v.y() = f64();
        v.z() = f64();
        return v;
    }
};

void write_value(Writer& w, const Value& v) {
    struct Visitor {
        Writer& w;
        void operator()(const Absent&) const { w.u8(static_cast<uint8_t>(Tag::Absent)); }
        void operator()(double d) const {
            w.u8(static_cast<uint8_t>(Tag::Number));
            w.f64(d);
        }
        void operator()(const std::string& s) const {
            w.u8(static_cast<uint8_t>(Tag::String));
            w.str(s);
        }
        void operator()(bool b) const {
            w.u8(static_cast<uint8_t>(Tag::Boolean));
            w.u8(b ? 1 : 0);
        }
        void operator()(const geometry::Vec3& p) const {
            w.u8(static_cast<uint8_t>(Tag::Vec3));
            w.vec3(p);
        }
        void operator()(const Eigen::MatrixXd& m) const {
            w.u8(static_cast<uint8_t>(Tag::Matrix));
            w.u32(static_cast<uint32_t>(m.rows()));
            w.u32(static_cast<uint32_t>(m.cols()));
            for (Eigen::Index i = 0; i < m.size(); ++i) w.f64(m.data()[i]);
        }
        void operator()(const Label& l) const {
            w.u8(static_cast<uint8_t>(Tag::Label));
            w.str(l.text);
        }
        void operator()(const DescriptorMap& m) const {
            w.u8(static_cast<uint8_t>(Tag::DescriptorMap));
            w.u32(static_cast<uint32_t>(m.size()));
            for (const auto& [k, val] : m) {
                w.str(k);
                w.f64(val);
            }
        }
        void operator()(const perception::DirectionCandidateSet& s) const {
            w.u8(static_cast<uint8_t>(Tag::CandidateSet));
            w.vec3(s.anchor_point);
            w.u8(s.stage == perception::DirectionCandidateSet::Stage::Coarse ? 0 : 1);
            w.u32(static_cast<uint32_t>(s.vectors.size()));
            for (const auto& v : s.vectors) w.vec3(v);
            w.u32(static_cast<uint32_t>(s.labels.size()));
            for (const auto& l : s.labels) w.str(l);
        }
        void operator()(const ReconHandle& h) const {
            w.u8(static_cast<uint8_t>(Tag::ReconHandle));
            w.u32(static_cast<uint32_t>(h.id));
        }
    };
    std::visit(Visitor{w}, v);
}

Value read_value(Reader& r) {
    Tag tag = static_cast<Tag>(r.u8());
    switch (tag) {
        case Tag::Absent: return Absent{};
        case Tag::Number: return r.f64();
        case Tag::String: return r.str();
        case Tag::Boolean: return r.u8() != 0;
        case Tag::Vec3: return r.vec3();
        case Tag::Matrix: {
            uint32_t rows = r.u32(), cols = r.u32();
            Eigen::MatrixXd m(rows, cols);
            for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = r.f64();
            return m;
        }
        case Tag::Label: return Label{r.str()};
        case Tag::DescriptorMap: {
            DescriptorMap m;
            uint32_t n = r.u32();
            for (uint32_t i = 0; i < n; ++i) {
                std::string k = r.str();
                m[k] = r.f64();
            }
            return m;
        }
        case Tag::CandidateSet: {
            perception::DirectionCandidateSet s;
            s.anchor_point = r.vec3();
            s.stage = r.u8() == 0 ? perception::DirectionCandidateSet::Stage::Coarse
                                  : perception::DirectionCandidateSet::Stage::Fine;
            uint32_t nv = r.u32();
            for (uint32_t i = 0; i < nv; ++i) s.vectors.push_back(r.vec3());
            uint32_t nl = r.u32();
            for (uint32_t i = 0; i < nl; ++i) s.labels.push_back(r.str());
            return s;
        }
        case Tag::ReconHandle: return ReconHandle{static_cast<int>(r.u32())};
    }
    throw Error(ErrorCode::CorruptSnapshot, "unknown value tag");
}

} // namespace

std::vector<uint8_t> snapshot(const Environment& env) {
    Writer w;
    w.raw(kMagic, 4);
    w.u32(kVersion);
    w.u32(env.turn);
    w.u64(env.bindings.size());
    for (const auto& [name, value] : env.bindings) {
        w.str(name);
        write_value(w, value);
        auto it = env.provenance.find(name);
        if (it != env.provenance.end()) {
            w.u8(1);
            w.str(it->second.module);
            w.str(it->second.op);
            w.str(it->second.args);
            w.u32(it->second.turn);
        } else {
            w.u8(0);
        }
    }
    return w.bytes;
}

Environment restore(const std::vector<uint8_t>& bytes) {
    Reader r{bytes};
    char magic[4];
    r.raw(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw Error(ErrorCode::CorruptSnapshot, "bad magic header");
    uint32_t version = r.u32();
    if (version != kVersion)
        throw Error(ErrorCode::CorruptSnapshot, "unsupported snapshot version " +
                                                    std::to_string(version));
    Environment env;
    env.turn = r.u32();
    uint64_t count = r.u64();
    for (uint64_t i = 0; i < count; ++i) {
        std::string name = r.str();
        Value v = read_value(r);
        if (r.u8()) {
            Provenance p;
            p.module = r.str();
            p.op = r.str();
            p.args = r.str();
            p.turn = r.u32();
            env.provenance[name] = std::move(p);
        }
        env.bindings[name] = std::move(v);
    }
    if (r.pos != bytes.size())
        throw Error(ErrorCode::CorruptSnapshot, "trailing bytes after snapshot payload");
    return env;
}

// ---------------------------------------------------------------------------
// Registry and execution
// ---------------------------------------------------------------------------

void ToolRegistry::register_tool(const std::string& qualified_name, int arity, ToolFn fn) {
    tools_[qualified_name] = {arity, std::move(fn)};
}

bool ToolRegistry::has(const std::string& qualified_name) const {
    return tools_.count(qualified_name) != 0;
}

Value ToolRegistry::call(const std::string& qualified_name, const std::vector<Value>& args) const {
    auto it = tools_.find(qualified_name);
    if (it == tools_.end())
        throw Error(ErrorCode::UnknownTool, "no tool named " + qualified_name);
    if (it->second.arity >= 0 && static_cast<int>(args.size()) != it->second.arity)
        throw Error(ErrorCode::ArityMismatch,
                    qualified_name + " expects " + std::to_string(it->second.arity) +
                        " argument(s), got " + std::to_string(args.size()));
    return it->second.fn(args);
}

namespace {

struct EvalContext {
    Environment& env;
    const ToolRegistry& registry;
    // Provenance of the most recent call evaluated within the current
    // statement, so assignments and emits can attribute their value.
    std::optional<Provenance> last_call;
};

Value eval_expr(const Expr& e, EvalContext& ctx);

Value eval_call(const CallExpr& c, EvalContext& ctx) {
    std::vector<Value> args;
    std::string rendered;
    for (const auto& arg : c.args) {
        Value v = eval_expr(*arg, ctx);
        if (!rendered.empty()) rendered += ", ";
        rendered += value_to_string(v);
        args.push_back(std::move(v));
    }
    Value result = ctx.registry.call(c.module + "." + c.op, args);
    ctx.last_call = Provenance{c.module, c.op, rendered, ctx.env.turn};
    return result;
}

Value eval_expr(const Expr& e, EvalContext& ctx) {
    struct Visitor {
        EvalContext& ctx;
        const SourcePos& pos;
        Value operator()(double d) const { return d; }
        Value operator()(const std::string& s) const { return s; }
        Value operator()(const VarRef& v) const {
            auto it = ctx.env.bindings.find(v.name);
            if (it == ctx.env.bindings.end())
                throw Error(ErrorCode::UseBeforeAssign, "'" + v.name + "' is not bound");
            return it->second;
        }
        Value operator()(const std::vector<ExprPtr>& items) const {
            // Literal lists become a 3-vector (3 numbers), a row vector, or a
            // matrix (list of equal-length number lists).
            std::vector<Value> vals;
            for (const auto& item : items) vals.push_back(eval_expr(*item, ctx));
            bool all_numbers = !vals.empty();
            for (const auto& v : vals)
                if (!std::holds_alternative<double>(v)) all_numbers = false;
            if (all_numbers) {
                if (vals.size() == 3)
                    return geometry::Vec3(std::get<double>(vals[0]), std::get<double>(vals[1]),
                                          std::get<double>(vals[2]));
                Eigen::MatrixXd m(1, vals.size());
                for (size_t i = 0; i < vals.size(); ++i) m(0, i) = std::get<double>(vals[i]);
                return m;
            }
            bool all_rows = !vals.empty();
            for (const auto& v : vals)
                if (!std::holds_alternative<Eigen::MatrixXd>(v) &&
                    !std::holds_alternative<geometry::Vec3>(v))
                    all_rows = false;
            if (all_rows) {
                auto row_of = [](const Value& v) -> Eigen::RowVectorXd {
                    if (std::holds_alternative<geometry::Vec3>(v))
                        return std::get<geometry::Vec3>(v).transpose();
                    const auto& m = std::get<Eigen::MatrixXd>(v);
                    if (m.rows() != 1)
                        throw Error(ErrorCode::TypeMismatch, "nested list rows must be flat");
                    return m.row(0);
                };
                Eigen::RowVectorXd first = row_of(vals[0]);
                Eigen::MatrixXd m(vals.size(), first.cols());
                m.row(0) = first;
                for (size_t i = 1; i < vals.size(); ++i) {
                    Eigen::RowVectorXd row = row_of(vals[i]);
                    if (row.cols() != m.cols())
                        throw Error(ErrorCode::TypeMismatch, "ragged list literal");
                    m.row(static_cast<Eigen::Index>(i)) = row;
                }
                return m;
            }
            throw Error(ErrorCode::TypeMismatch, "list literals must contain numbers or rows");
        }
        Value operator()(const CallExpr& c) const { return eval_call(c, ctx); }
    };
    return std::visit(Visitor{ctx, e.pos}, e.node);
}

std::string span_prefix(const SourcePos& pos) {
    return "line " + std::to_string(pos.line) + ", col " + std::to_string(pos.col) + ": ";
}

} // namespace

ExecResult execute(const Program& program, Environment env, const ToolRegistry& registry) {
    ExecResult result;
    result.env = std::move(env);
    result.env.turn += 1;

    for (const auto& stmt : program.statements) {
        LogRecord record;
        record.pos = stmt.pos;
        record.statement = print_statement(stmt);
        auto started = std::chrono::steady_clock::now();
        EvalContext ctx{result.env, registry, std::nullopt};
        try {
            switch (stmt.kind) {
                case Statement::Kind::Assign: {
                    Value v = eval_call(stmt.call, ctx);
                    record.outcome = value_kind(v) + " " + value_to_string(v);
                    result.env.bindings[stmt.name] = std::move(v);
                    if (ctx.last_call) result.env.provenance[stmt.name] = *ctx.last_call;
                    break;
                }
                case Statement::Kind::BareCall: {
                    Value v = eval_call(stmt.call, ctx);
                    record.outcome = value_kind(v) + " " + value_to_string(v);
                    break;
                }
                case Statement::Kind::Emit: {
                    Value v = eval_expr(*stmt.value, ctx);
                    record.outcome = "emit " + value_kind(v) + " " + value_to_string(v);
                    Provenance prov;
                    if (ctx.last_call) {
                        prov = *ctx.last_call;
                    } else if (std::holds_alternative<VarRef>(stmt.value->node)) {
                        const auto& name = std::get<VarRef>(stmt.value->node).name;
                        auto it = result.env.provenance.find(name);
                        prov = it != result.env.provenance.end()
                                   ? it->second
                                   : Provenance{"dsl", "binding", name, result.env.turn};
                    } else {
                        prov = Provenance{"dsl", "literal", print_expr(*stmt.value),
                                          result.env.turn};
                    }
                    result.emits.push_back({stmt.name, std::move(v), std::move(prov)});
                    break;
                }
            }
            record.ok = true;
        } catch (const Error& e) {
            record.ok = false;
            record.outcome = e.what();
            result.error = span_prefix(stmt.pos) + e.what();
        }
        record.wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - started)
                             .count();
        result.log.records.push_back(std::move(record));
        if (result.error) break;  // halt at the failing statement
    }
    return result;
}

std::string ExecutionLog::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : records) {
        j.push_back({{"line", r.pos.line},
                     {"col", r.pos.col},
                     {"statement", r.statement},
                     {"ok", r.ok},
                     {"outcome", r.outcome},
                     {"wall_ms", r.wall_ms}});
    }
    return j.dump(2);
}

double arg_number(const std::vector<Value>& args, size_t i) {
    if (i >= args.size() || !std::holds_alternative<double>(args[i]))
        throw Error(ErrorCode::TypeMismatch,
                    "argument " + std::to_string(i + 1) + " must be a number");
    return std::get<double>(args[i]);
}

const std::string& arg_string(const std::vector<Value>& args, size_t i) {
    if (i >= args.size() || !std::holds_alternative<std::string>(args[i]))
        throw Error(ErrorCode::TypeMismatch,
                    "argument " + std::to_string(i + 1) + " must be a string");
    return std::get<std::string>(args[i]);
}

geometry::Vec3 arg_vec3(const std::vector<Value>& args, size_t i) {
    if (i < args.size() && std::holds_alternative<geometry::Vec3>(args[i]))
        return std::get<geometry::Vec3>(args[i]);
    throw Error(ErrorCode::TypeMismatch,
                "argument " + std::to_string(i + 1) + " must be a 3-vector");
}

const Eigen::MatrixXd& arg_matrix(const std::vector<Value>& args, size_t i) {
    if (i < args.size() && std::holds_alternative<Eigen::MatrixXd>(args[i]))
        return std::get<Eigen::MatrixXd>(args[i]);
    throw Error(ErrorCode::TypeMismatch,
                "argument " + std::to_string(i + 1) + " must be a matrix");
}

} // namespace mss::dsl
