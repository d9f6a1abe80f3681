#include <algorithm>
#include <array>
#include <functional>
#include <optional>

#include "callflow/syntax.hpp"
#include "lexer.hpp"

namespace callflow::syntax {

SyntaxError::SyntaxError(const std::string& message, Pos pos)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + message),
      pos_(pos),
      detail_(message) {}

SyntaxError::SyntaxError(const std::string& message, Pos pos, const std::string& file)
    : std::runtime_error(file + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + message),
      pos_(pos),
      detail_(message),
      file_(file) {}

namespace {

ExprPtr make_expr(ExprKind kind, Pos pos) { return std::make_unique<Expr>(kind, pos); }
StmtPtr make_stmt(StmtKind kind, Pos pos) { return std::make_unique<Stmt>(kind, pos); }

// Decodes the body of a (non-f) string literal. Escapes are resolved well
// enough to recover dictionary keys; exotic escapes are kept verbatim.
std::string decode_string_body(std::string_view body, bool raw) {
    if (raw) {
        return std::string(body);
    }
    std::string out;
    for (size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c != '\\' || i + 1 >= body.size()) {
            out.push_back(c);
            continue;
        }
        char n = body[++i];
        switch (n) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case 'r': out.push_back('\r'); break;
            case '0': out.push_back('\0'); break;
            case '\\': out.push_back('\\'); break;
            case '\'': out.push_back('\''); break;
            case '"': out.push_back('"'); break;
            case '\n': break;
            default:
                out.push_back('\\');
                out.push_back(n);
        }
    }
    return out;
}

struct StringPiece {
    std::string prefix;  // lower-cased
    std::string body;    // between the quotes
    int quote_len = 1;
};

StringPiece split_string_token(const std::string& text) {
    StringPiece piece;
    size_t i = 0;
    while (i < text.size() && text[i] != '\'' && text[i] != '"') {
        piece.prefix.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
        ++i;
    }
    char q = text[i];
    piece.quote_len = (text.size() >= i + 6 && text[i + 1] == q && text[i + 2] == q) ? 3 : 1;
    size_t begin = i + piece.quote_len;
    size_t end = text.size() - piece.quote_len;
    piece.body = end >= begin ? text.substr(begin, end - begin) : std::string();
    return piece;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Module parse_module() {
        Module module;
        while (!at(TokKind::End)) {
            if (at(TokKind::Newline)) {
                advance();
                continue;
            }
            parse_statement(module.body);
        }
        return module;
    }

    ExprPtr parse_standalone_expression() {
        while (at(TokKind::Newline)) {
            advance();
        }
        auto e = parse_star_expressions();
        while (at(TokKind::Newline)) {
            advance();
        }
        if (!at(TokKind::End)) {
            fail("invalid syntax");
        }
        return e;
    }

private:
    // ---- token helpers -------------------------------------------------

    const Token& cur() const { return toks_[idx_]; }
    const Token& look(size_t ahead) const { return toks_[std::min(idx_ + ahead, toks_.size() - 1)]; }
    Pos pos() const { return cur().pos; }
    bool at(TokKind kind) const { return cur().kind == kind; }
    bool at_op(std::string_view op) const { return cur().kind == TokKind::Op && cur().text == op; }
    bool at_kw(std::string_view kw) const { return cur().kind == TokKind::Name && cur().text == kw; }
    bool at_name() const { return cur().kind == TokKind::Name && !is_keyword(cur().text); }

    const Token& advance() {
        const Token& t = toks_[idx_];
        if (idx_ + 1 < toks_.size()) {
            ++idx_;
        }
        return t;
    }

    bool accept_op(std::string_view op) {
        if (at_op(op)) {
            advance();
            return true;
        }
        return false;
    }

    bool accept_kw(std::string_view kw) {
        if (at_kw(kw)) {
            advance();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& message) const {
        if (at(TokKind::End)) {
            throw SyntaxError("unexpected EOF while parsing", pos());
        }
        if (at(TokKind::Indent)) {
            throw SyntaxError("unexpected indent", pos());
        }
        throw SyntaxError(message, pos());
    }

    void expect_op(std::string_view op) {
        if (!accept_op(op)) {
            fail("expected '" + std::string(op) + "'");
        }
    }

    void expect_kw(std::string_view kw) {
        if (!accept_kw(kw)) {
            fail("expected '" + std::string(kw) + "'");
        }
    }

    std::string expect_name() {
        if (!at_name()) {
            fail("invalid syntax");
        }
        return advance().text;
    }

    void expect_newline() {
        if (!at(TokKind::Newline)) {
            fail("invalid syntax");
        }
        advance();
    }

    // ---- statements ----------------------------------------------------

    void parse_statement(Block& out) {
        if (at_op("@")) {
            out.push_back(parse_decorated());
            return;
        }
        if (at_kw("def")) {
            out.push_back(parse_funcdef({}, false));
            return;
        }
        if (at_kw("class")) {
            out.push_back(parse_classdef({}));
            return;
        }
        if (at_kw("if")) {
            out.push_back(parse_if());
            return;
        }
        if (at_kw("while")) {
            out.push_back(parse_while());
            return;
        }
        if (at_kw("for")) {
            out.push_back(parse_for(false));
            return;
        }
        if (at_kw("try")) {
            out.push_back(parse_try());
            return;
        }
        if (at_kw("with")) {
            out.push_back(parse_with(false));
            return;
        }
        if (at_kw("async")) {
            Pos p = pos();
            advance();
            if (at_kw("def")) {
                auto s = parse_funcdef({}, true);
                s->pos = p;
                out.push_back(std::move(s));
                return;
            }
            if (at_kw("for")) {
                out.push_back(parse_for(true));
                return;
            }
            if (at_kw("with")) {
                out.push_back(parse_with(true));
                return;
            }
            fail("invalid syntax");
        }
        if (cur().kind == TokKind::Name && cur().text == "match") {
            if (auto m = try_parse_match()) {
                out.push_back(std::move(m));
                return;
            }
        }
        if (at(TokKind::Indent)) {
            fail("unexpected indent");
        }
        parse_simple_statements(out);
    }

    void parse_simple_statements(Block& out) {
        out.push_back(parse_simple_statement());
        while (accept_op(";")) {
            if (at(TokKind::Newline)) {
                break;
            }
            out.push_back(parse_simple_statement());
        }
        expect_newline();
    }

    Block parse_block() {
        Block body;
        if (!at(TokKind::Newline)) {
            parse_simple_statements(body);
            return body;
        }
        advance();
        if (!at(TokKind::Indent)) {
            fail("expected an indented block");
        }
        advance();
        while (!at(TokKind::Dedent) && !at(TokKind::End)) {
            if (at(TokKind::Newline)) {
                advance();
                continue;
            }
            parse_statement(body);
        }
        if (at(TokKind::Dedent)) {
            advance();
        }
        return body;
    }

    StmtPtr parse_simple_statement() {
        Pos p = pos();
        if (at(TokKind::Name)) {
            const std::string& w = cur().text;
            if (w == "pass") {
                advance();
                return make_stmt(StmtKind::Pass, p);
            }
            if (w == "break") {
                advance();
                return make_stmt(StmtKind::Break, p);
            }
            if (w == "continue") {
                advance();
                return make_stmt(StmtKind::Continue, p);
            }
            if (w == "return") {
                advance();
                auto s = make_stmt(StmtKind::Return, p);
                if (!at_statement_end()) {
                    s->value = parse_star_expressions();
                }
                return s;
            }
            if (w == "raise") {
                advance();
                auto s = make_stmt(StmtKind::Raise, p);
                if (!at_statement_end()) {
                    s->value = parse_expression();
                    if (accept_kw("from")) {
                        s->annotation = parse_expression();
                    }
                }
                return s;
            }
            if (w == "global" || w == "nonlocal") {
                advance();
                auto s = make_stmt(w == "global" ? StmtKind::Global : StmtKind::Nonlocal, p);
                do {
                    Pos np = pos();
                    s->names.push_back({expect_name(), "", np});
                } while (accept_op(","));
                return s;
            }
            if (w == "del") {
                advance();
                auto s = make_stmt(StmtKind::Delete, p);
                auto targets = parse_target_list();
                if (targets->kind == ExprKind::Tuple && !targets->text.empty()) {
                    for (auto& t : targets->items) {
                        s->targets.push_back(std::move(t));
                    }
                } else {
                    s->targets.push_back(std::move(targets));
                }
                return s;
            }
            if (w == "assert") {
                advance();
                auto s = make_stmt(StmtKind::Assert, p);
                s->value = parse_expression();
                if (accept_op(",")) {
                    s->annotation = parse_expression();
                }
                return s;
            }
            if (w == "import") {
                return parse_import();
            }
            if (w == "from") {
                return parse_from_import();
            }
            if (w == "type" && look(1).kind == TokKind::Name && !is_keyword(look(1).text) &&
                look(2).kind == TokKind::Op && (look(2).text == "=" || look(2).text == "[")) {
                advance();
                auto s = make_stmt(StmtKind::TypeAlias, p);
                auto name = make_expr(ExprKind::Name, pos());
                name->text = advance().text;
                if (at_op("[")) {
                    skip_type_params();
                }
                expect_op("=");
                s->targets.push_back(std::move(name));
                s->value = parse_expression();
                return s;
            }
        }
        return parse_expression_statement();
    }

    bool at_statement_end() const { return at(TokKind::Newline) || at_op(";") || at(TokKind::End); }

    StmtPtr parse_expression_statement() {
        Pos p = pos();
        ExprPtr first = at_kw("yield") ? parse_yield() : parse_star_expressions();
        if (at_op("=")) {
            auto s = make_stmt(StmtKind::Assign, p);
            check_assignable(*first);
            s->targets.push_back(std::move(first));
            while (accept_op("=")) {
                ExprPtr next = at_kw("yield") ? parse_yield() : parse_star_expressions();
                if (at_op("=")) {
                    check_assignable(*next);
                    s->targets.push_back(std::move(next));
                } else {
                    s->value = std::move(next);
                }
            }
            return s;
        }
        if (at_op(":")) {
            advance();
            auto s = make_stmt(StmtKind::AnnAssign, p);
            check_assignable(*first);
            s->targets.push_back(std::move(first));
            s->annotation = parse_expression();
            if (accept_op("=")) {
                s->value = at_kw("yield") ? parse_yield() : parse_star_expressions();
            }
            return s;
        }
        static constexpr std::array kAug = {"+=", "-=", "*=", "/=", "//=", "%=", "@=",
                                             "&=", "|=", "^=", ">>=", "<<=", "**="};
        if (cur().kind == TokKind::Op &&
            std::find(kAug.begin(), kAug.end(), cur().text) != kAug.end()) {
            auto s = make_stmt(StmtKind::AugAssign, p);
            std::string op = advance().text;
            op.pop_back();
            s->text = op;
            if (first->kind != ExprKind::Name && first->kind != ExprKind::Attribute &&
                first->kind != ExprKind::Subscript) {
                throw SyntaxError("illegal expression for augmented assignment", first->pos);
            }
            s->targets.push_back(std::move(first));
            s->value = at_kw("yield") ? parse_yield() : parse_star_expressions();
            return s;
        }
        auto s = make_stmt(StmtKind::Expr, p);
        s->value = std::move(first);
        return s;
    }

    void check_assignable(const Expr& e) const {
        switch (e.kind) {
            case ExprKind::Name:
            case ExprKind::Attribute:
            case ExprKind::Subscript:
                return;
            case ExprKind::Starred:
                check_assignable(*e.value);
                return;
            case ExprKind::Tuple:
            case ExprKind::List:
                for (const auto& item : e.items) {
                    check_assignable(*item);
                }
                return;
            default:
                throw SyntaxError(std::string("cannot assign to ") + to_string(e.kind), e.pos);
        }
    }

    std::string parse_dotted_name() {
        std::string name = expect_name();
        while (at_op(".") && look(1).kind == TokKind::Name) {
            advance();
            name += "." + expect_name();
        }
        return name;
    }

    StmtPtr parse_import() {
        Pos p = pos();
        expect_kw("import");
        auto s = make_stmt(StmtKind::Import, p);
        do {
            Pos np = pos();
            Alias alias{parse_dotted_name(), "", np};
            if (accept_kw("as")) {
                alias.asname = expect_name();
            }
            s->names.push_back(std::move(alias));
        } while (accept_op(","));
        return s;
    }

    StmtPtr parse_from_import() {
        Pos p = pos();
        expect_kw("from");
        auto s = make_stmt(StmtKind::ImportFrom, p);
        while (at_op(".") || at_op("...")) {
            s->level += static_cast<int>(advance().text.size());
        }
        if (!at_kw("import")) {
            s->text = parse_dotted_name();
        } else if (s->level == 0) {
            fail("invalid syntax");
        }
        expect_kw("import");
        if (at_op("*")) {
            Pos np = pos();
            advance();
            s->names.push_back({"*", "", np});
            return s;
        }
        bool paren = accept_op("(");
        do {
            if (paren && at_op(")")) {
                break;
            }
            Pos np = pos();
            Alias alias{expect_name(), "", np};
            if (accept_kw("as")) {
                alias.asname = expect_name();
            }
            s->names.push_back(std::move(alias));
        } while (accept_op(","));
        if (paren) {
            expect_op(")");
        }
        return s;
    }

    StmtPtr parse_decorated() {
        std::vector<ExprPtr> decorators;
        while (accept_op("@")) {
            decorators.push_back(parse_named_expression());
            expect_newline();
        }
        if (at_kw("def")) {
            return parse_funcdef(std::move(decorators), false);
        }
        if (at_kw("async") && look(1).kind == TokKind::Name && look(1).text == "def") {
            advance();
            return parse_funcdef(std::move(decorators), true);
        }
        if (at_kw("class")) {
            return parse_classdef(std::move(decorators));
        }
        fail("invalid syntax");
    }

    void skip_type_params() {
        int depth = 0;
        do {
            if (at_op("[")) {
                ++depth;
            } else if (at_op("]")) {
                --depth;
            } else if (at(TokKind::End)) {
                fail("invalid syntax");
            }
            advance();
        } while (depth > 0);
    }

    StmtPtr parse_funcdef(std::vector<ExprPtr> decorators, bool is_async) {
        Pos p = pos();
        expect_kw("def");
        auto s = make_stmt(StmtKind::FunctionDef, p);
        s->is_async = is_async;
        s->decorators = std::move(decorators);
        s->text = expect_name();
        if (at_op("[")) {
            skip_type_params();
        }
        expect_op("(");
        s->params = parse_parameters(")", true);
        expect_op(")");
        if (accept_op("->")) {
            s->annotation = parse_expression();
        }
        expect_op(":");
        s->body = parse_block();
        return s;
    }

    std::vector<Param> parse_parameters(std::string_view closer, bool annotations) {
        std::vector<Param> params;
        bool seen_star = false;
        bool seen_default = false;
        while (!at_op(closer)) {
            Pos p = pos();
            if (accept_op("/")) {
                bool any = false;
                for (auto& param : params) {
                    if (param.kind == ParamKind::Normal) {
                        param.kind = ParamKind::PositionalOnly;
                        any = true;
                    }
                }
                if (!any || seen_star) {
                    throw SyntaxError("invalid syntax", p);
                }
            } else if (accept_op("**")) {
                Param param;
                param.pos = pos();
                param.name = expect_name();
                param.kind = ParamKind::VarKeyword;
                if (annotations && accept_op(":")) {
                    param.annotation = parse_expression();
                }
                params.push_back(std::move(param));
                accept_op(",");
                if (!at_op(closer)) {
                    fail("arguments cannot follow var-keyword argument");
                }
                break;
            } else if (accept_op("*")) {
                if (seen_star) {
                    throw SyntaxError("* argument may appear only once", p);
                }
                seen_star = true;
                if (at_name()) {
                    Param param;
                    param.pos = pos();
                    param.name = expect_name();
                    param.kind = ParamKind::VarPositional;
                    if (annotations && accept_op(":")) {
                        param.annotation = parse_expression();
                    }
                    params.push_back(std::move(param));
                } else if (at_op(closer)) {
                    throw SyntaxError("named arguments must follow bare *", p);
                }
            } else {
                Param param;
                param.pos = pos();
                param.name = expect_name();
                param.kind = seen_star ? ParamKind::KeywordOnly : ParamKind::Normal;
                if (annotations && accept_op(":")) {
                    param.annotation = parse_expression();
                }
                if (accept_op("=")) {
                    param.default_value = parse_expression();
                    if (!seen_star) {
                        seen_default = true;
                    }
                } else if (seen_default && !seen_star) {
                    throw SyntaxError("non-default argument follows default argument", param.pos);
                }
                for (const auto& other : params) {
                    if (other.name == param.name) {
                        throw SyntaxError("duplicate argument '" + param.name + "' in function definition",
                                          param.pos);
                    }
                }
                params.push_back(std::move(param));
            }
            if (!accept_op(",")) {
                break;
            }
        }
        return params;
    }

    StmtPtr parse_classdef(std::vector<ExprPtr> decorators) {
        Pos p = pos();
        expect_kw("class");
        auto s = make_stmt(StmtKind::ClassDef, p);
        s->decorators = std::move(decorators);
        s->text = expect_name();
        if (at_op("[")) {
            skip_type_params();
        }
        if (accept_op("(")) {
            parse_call_arguments(s->bases, s->keywords);
            expect_op(")");
        }
        expect_op(":");
        s->body = parse_block();
        return s;
    }

    StmtPtr parse_if() {
        Pos p = pos();
        advance();  // if / elif
        auto s = make_stmt(StmtKind::If, p);
        s->value = parse_named_expression();
        expect_op(":");
        s->body = parse_block();
        if (at_kw("elif")) {
            s->orelse.push_back(parse_if());
        } else if (accept_kw("else")) {
            expect_op(":");
            s->orelse = parse_block();
        }
        return s;
    }

    StmtPtr parse_while() {
        Pos p = pos();
        expect_kw("while");
        auto s = make_stmt(StmtKind::While, p);
        s->value = parse_named_expression();
        expect_op(":");
        s->body = parse_block();
        if (accept_kw("else")) {
            expect_op(":");
            s->orelse = parse_block();
        }
        return s;
    }

    StmtPtr parse_for(bool is_async) {
        Pos p = pos();
        expect_kw("for");
        auto s = make_stmt(StmtKind::For, p);
        s->is_async = is_async;
        s->targets.push_back(parse_target_list());
        expect_kw("in");
        s->value = parse_star_expressions();
        expect_op(":");
        s->body = parse_block();
        if (accept_kw("else")) {
            expect_op(":");
            s->orelse = parse_block();
        }
        return s;
    }

    StmtPtr parse_try() {
        Pos p = pos();
        expect_kw("try");
        expect_op(":");
        auto s = make_stmt(StmtKind::Try, p);
        s->body = parse_block();
        while (at_kw("except")) {
            ExceptHandler handler;
            handler.pos = pos();
            advance();
            accept_op("*");
            if (!at_op(":")) {
                handler.type = parse_expression();
                if (at_op(",")) {
                    // Python 3 requires parentheses around multiple types.
                    fail("multiple exception types must be parenthesized");
                }
                if (accept_kw("as")) {
                    handler.name = expect_name();
                }
            }
            expect_op(":");
            handler.body = parse_block();
            s->handlers.push_back(std::move(handler));
        }
        if (accept_kw("else")) {
            if (s->handlers.empty()) {
                fail("invalid syntax");
            }
            expect_op(":");
            s->orelse = parse_block();
        }
        if (accept_kw("finally")) {
            expect_op(":");
            s->finalbody = parse_block();
        }
        if (s->handlers.empty() && s->finalbody.empty()) {
            fail("expected 'except' or 'finally' block");
        }
        return s;
    }

    WithItem parse_with_item() {
        WithItem item;
        item.context = parse_expression();
        if (accept_kw("as")) {
            item.target = parse_target();
        }
        return item;
    }

    StmtPtr parse_with(bool is_async) {
        Pos p = pos();
        expect_kw("with");
        auto s = make_stmt(StmtKind::With, p);
        s->is_async = is_async;
        if (at_op("(")) {
            // Parenthesized with-items, falling back to an ordinary
            // parenthesized expression when that reading fails.
            size_t save = idx_;
            try {
                advance();
                std::vector<WithItem> items;
                while (!at_op(")")) {
                    items.push_back(parse_with_item());
                    if (!accept_op(",")) {
                        break;
                    }
                }
                expect_op(")");
                if (!at_op(":")) {
                    throw SyntaxError("not a parenthesized with", pos());
                }
                s->items = std::move(items);
            } catch (const SyntaxError&) {
                idx_ = save;
                s->items.clear();
            }
        }
        if (s->items.empty()) {
            do {
                s->items.push_back(parse_with_item());
            } while (accept_op(","));
        }
        expect_op(":");
        s->body = parse_block();
        return s;
    }

    StmtPtr try_parse_match() {
        size_t save = idx_;
        Pos p = pos();
        try {
            advance();  // match
            if (at(TokKind::Newline) || at_op("=") || at_op(".") || at_op(":")) {
                throw SyntaxError("not a match statement", pos());
            }
            auto s = make_stmt(StmtKind::Match, p);
            s->value = parse_star_named_expressions();
            expect_op(":");
            expect_newline();
            if (!at(TokKind::Indent)) {
                throw SyntaxError("expected an indented block", pos());
            }
            advance();
            if (!(cur().kind == TokKind::Name && cur().text == "case")) {
                throw SyntaxError("expected 'case'", pos());
            }
            while (cur().kind == TokKind::Name && cur().text == "case") {
                MatchCase mc;
                mc.pos = pos();
                advance();
                mc.pattern = parse_pattern();
                if (accept_kw("if")) {
                    mc.guard = parse_named_expression();
                }
                expect_op(":");
                mc.body = parse_block();
                s->cases.push_back(std::move(mc));
                while (at(TokKind::Newline)) {
                    advance();
                }
            }
            if (!at(TokKind::Dedent)) {
                fail("expected 'case'");
            }
            advance();
            return s;
        } catch (const SyntaxError&) {
            idx_ = save;
            return nullptr;
        }
    }

    // Patterns reuse the expression grammar: class patterns look like calls,
    // mapping and sequence patterns like displays, `|` like bitwise or.
    ExprPtr parse_pattern() {
        struct PatternScope {
            int& depth;
            explicit PatternScope(int& d) : depth(d) { ++depth; }
            ~PatternScope() { --depth; }
        } scope(pattern_depth_);
        Pos p = pos();
        auto first = parse_as_pattern();
        if (!at_op(",")) {
            return first;
        }
        auto tuple = make_expr(ExprKind::Tuple, p);
        tuple->items.push_back(std::move(first));
        while (accept_op(",")) {
            if (at_op(":") || at_kw("if")) {
                break;
            }
            tuple->items.push_back(parse_as_pattern());
        }
        return tuple;
    }

    ExprPtr parse_as_pattern() {
        ExprPtr e = at_op("*") ? parse_star_expression() : parse_bitwise_or();
        if (accept_kw("as")) {
            auto named = make_expr(ExprKind::NamedExpr, e->pos);
            named->target = make_expr(ExprKind::Name, pos());
            named->target->text = expect_name();
            named->value = std::move(e);
            return named;
        }
        return e;
    }

    // ---- expressions ---------------------------------------------------

    ExprPtr parse_yield() {
        Pos p = pos();
        expect_kw("yield");
        if (accept_kw("from")) {
            auto e = make_expr(ExprKind::YieldFrom, p);
            e->value = parse_expression();
            return e;
        }
        auto e = make_expr(ExprKind::Yield, p);
        if (!at_statement_end() && !at_op(")") && !at_op("=") && !at_op("]") && !at_op("}")) {
            e->value = parse_star_expressions();
        }
        return e;
    }

    // Comma-separated expressions; builds a Tuple when a comma is present.
    // Tuples built from a bare comma list carry text "," so `del a, b`
    // can be distinguished from `del (a, b)`.
    ExprPtr parse_star_expressions() {
        Pos p = pos();
        auto first = parse_star_expression();
        if (!at_op(",")) {
            return first;
        }
        auto tuple = make_expr(ExprKind::Tuple, p);
        tuple->text = ",";
        tuple->items.push_back(std::move(first));
        while (accept_op(",")) {
            if (!starts_expression()) {
                break;
            }
            tuple->items.push_back(parse_star_expression());
        }
        return tuple;
    }

    ExprPtr parse_star_named_expressions() {
        Pos p = pos();
        auto first = at_op("*") ? parse_star_expression() : parse_named_expression();
        if (!at_op(",")) {
            return first;
        }
        auto tuple = make_expr(ExprKind::Tuple, p);
        tuple->items.push_back(std::move(first));
        while (accept_op(",")) {
            if (!starts_expression()) {
                break;
            }
            tuple->items.push_back(at_op("*") ? parse_star_expression() : parse_named_expression());
        }
        return tuple;
    }

    bool starts_expression() const {
        const Token& t = cur();
        switch (t.kind) {
            case TokKind::Name:
                if (!is_keyword(t.text)) {
                    return true;
                }
                return t.text == "None" || t.text == "True" || t.text == "False" || t.text == "not" ||
                       t.text == "lambda" || t.text == "await" || t.text == "yield";
            case TokKind::Number:
            case TokKind::String:
                return true;
            case TokKind::Op:
                return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" || t.text == "+" ||
                       t.text == "~" || t.text == "*" || t.text == "..." || t.text == "**";
            default:
                return false;
        }
    }

    ExprPtr parse_star_expression() {
        if (at_op("*")) {
            Pos p = pos();
            advance();
            auto e = make_expr(ExprKind::Starred, p);
            e->value = parse_bitwise_or();
            return e;
        }
        return parse_expression();
    }

    // Targets for `for` and `del`: stops before `in`.
    ExprPtr parse_target_list() {
        Pos p = pos();
        auto first = parse_target();
        if (!at_op(",")) {
            return first;
        }
        auto tuple = make_expr(ExprKind::Tuple, p);
        tuple->text = ",";
        tuple->items.push_back(std::move(first));
        while (accept_op(",")) {
            if (at_kw("in") || at_op("=") || at(TokKind::Newline) || at_op(";")) {
                break;
            }
            tuple->items.push_back(parse_target());
        }
        return tuple;
    }

    ExprPtr parse_target() {
        if (at_op("*")) {
            Pos p = pos();
            advance();
            auto e = make_expr(ExprKind::Starred, p);
            e->value = parse_target();
            return e;
        }
        auto e = parse_bitwise_or();
        check_assignable(*e);
        return e;
    }

    ExprPtr parse_named_expression() {
        if (at_name() && look(1).kind == TokKind::Op && look(1).text == ":=") {
            Pos p = pos();
            auto e = make_expr(ExprKind::NamedExpr, p);
            e->target = make_expr(ExprKind::Name, p);
            e->target->text = advance().text;
            advance();
            e->value = parse_expression();
            return e;
        }
        return parse_expression();
    }

    ExprPtr parse_expression() {
        if (at_kw("lambda")) {
            return parse_lambda();
        }
        Pos p = pos();
        auto body = parse_disjunction();
        if (pattern_depth_ > 0 && at_kw("as")) {
            // Capture inside a nested pattern, e.g. `Point(x=int() as n)`.
            advance();
            auto named = make_expr(ExprKind::NamedExpr, p);
            named->target = make_expr(ExprKind::Name, pos());
            named->target->text = expect_name();
            named->value = std::move(body);
            return named;
        }
        if (at_kw("if")) {
            advance();
            auto e = make_expr(ExprKind::IfExp, p);
            auto test = parse_disjunction();
            expect_kw("else");
            auto orelse = parse_expression();
            e->items.push_back(std::move(test));
            e->items.push_back(std::move(body));
            e->items.push_back(std::move(orelse));
            return e;
        }
        return body;
    }

    ExprPtr parse_expression_nocond() {
        if (at_kw("lambda")) {
            return parse_lambda();
        }
        return parse_disjunction();
    }

    ExprPtr parse_lambda() {
        Pos p = pos();
        expect_kw("lambda");
        auto e = make_expr(ExprKind::Lambda, p);
        e->params = parse_parameters(":", false);
        expect_op(":");
        e->value = parse_expression();
        return e;
    }

    ExprPtr parse_disjunction() {
        Pos p = pos();
        auto first = parse_conjunction();
        if (!at_kw("or")) {
            return first;
        }
        auto e = make_expr(ExprKind::BoolOp, p);
        e->text = "or";
        e->items.push_back(std::move(first));
        while (accept_kw("or")) {
            e->items.push_back(parse_conjunction());
        }
        return e;
    }

    ExprPtr parse_conjunction() {
        Pos p = pos();
        auto first = parse_inversion();
        if (!at_kw("and")) {
            return first;
        }
        auto e = make_expr(ExprKind::BoolOp, p);
        e->text = "and";
        e->items.push_back(std::move(first));
        while (accept_kw("and")) {
            e->items.push_back(parse_inversion());
        }
        return e;
    }

    ExprPtr parse_inversion() {
        if (at_kw("not")) {
            Pos p = pos();
            advance();
            auto e = make_expr(ExprKind::UnaryOp, p);
            e->text = "not";
            e->value = parse_inversion();
            return e;
        }
        return parse_comparison();
    }

    std::optional<std::string> comparison_operator() {
        if (cur().kind == TokKind::Op) {
            static constexpr std::array kOps = {"<", ">", "==", ">=", "<=", "!="};
            if (std::find(kOps.begin(), kOps.end(), cur().text) != kOps.end()) {
                return advance().text;
            }
            return std::nullopt;
        }
        if (at_kw("in")) {
            advance();
            return "in";
        }
        if (at_kw("not") && look(1).kind == TokKind::Name && look(1).text == "in") {
            advance();
            advance();
            return "not in";
        }
        if (at_kw("is")) {
            advance();
            if (accept_kw("not")) {
                return "is not";
            }
            return "is";
        }
        return std::nullopt;
    }

    ExprPtr parse_comparison() {
        Pos p = pos();
        auto first = parse_bitwise_or();
        auto op = comparison_operator();
        if (!op) {
            return first;
        }
        auto e = make_expr(ExprKind::Compare, p);
        e->items.push_back(std::move(first));
        while (op) {
            e->ops.push_back(*op);
            e->items.push_back(parse_bitwise_or());
            op = comparison_operator();
        }
        return e;
    }

    template <typename Next>
    ExprPtr parse_binary(std::initializer_list<std::string_view> ops, Next next) {
        Pos p = pos();
        auto lhs = (this->*next)();
        while (cur().kind == TokKind::Op &&
               std::find(ops.begin(), ops.end(), std::string_view(cur().text)) != ops.end()) {
            auto e = make_expr(ExprKind::BinOp, p);
            e->text = advance().text;
            e->items.push_back(std::move(lhs));
            e->items.push_back((this->*next)());
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr parse_bitwise_or() { return parse_binary({"|"}, &Parser::parse_bitwise_xor); }
    ExprPtr parse_bitwise_xor() { return parse_binary({"^"}, &Parser::parse_bitwise_and); }
    ExprPtr parse_bitwise_and() { return parse_binary({"&"}, &Parser::parse_shift); }
    ExprPtr parse_shift() { return parse_binary({"<<", ">>"}, &Parser::parse_sum); }
    ExprPtr parse_sum() { return parse_binary({"+", "-"}, &Parser::parse_term); }
    ExprPtr parse_term() { return parse_binary({"*", "/", "//", "%", "@"}, &Parser::parse_factor); }

    ExprPtr parse_factor() {
        if (at_op("+") || at_op("-") || at_op("~")) {
            Pos p = pos();
            auto e = make_expr(ExprKind::UnaryOp, p);
            e->text = advance().text;
            e->value = parse_factor();
            return e;
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        Pos p = pos();
        auto base = parse_await_primary();
        if (at_op("**")) {
            advance();
            auto e = make_expr(ExprKind::BinOp, p);
            e->text = "**";
            e->items.push_back(std::move(base));
            e->items.push_back(parse_factor());
            return e;
        }
        return base;
    }

    ExprPtr parse_await_primary() {
        if (at_kw("await")) {
            Pos p = pos();
            advance();
            auto e = make_expr(ExprKind::Await, p);
            e->value = parse_primary();
            return e;
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        auto e = parse_atom();
        while (true) {
            if (at_op(".")) {
                advance();
                auto attr = make_expr(ExprKind::Attribute, e->pos);
                attr->text = expect_name();
                attr->value = std::move(e);
                e = std::move(attr);
            } else if (at_op("(")) {
                advance();
                auto call = make_expr(ExprKind::Call, e->pos);
                call->value = std::move(e);
                parse_call_arguments(call->items, call->keywords);
                expect_op(")");
                e = std::move(call);
            } else if (at_op("[")) {
                advance();
                auto sub = make_expr(ExprKind::Subscript, e->pos);
                sub->value = std::move(e);
                sub->items.push_back(parse_slices());
                expect_op("]");
                e = std::move(sub);
            } else {
                return e;
            }
        }
    }

    void parse_call_arguments(std::vector<ExprPtr>& args, std::vector<Keyword>& keywords) {
        while (!at_op(")")) {
            Pos p = pos();
            if (accept_op("**")) {
                keywords.push_back({"", parse_expression(), p});
            } else if (at_op("*")) {
                args.push_back(parse_star_expression());
            } else if (at_name() && look(1).kind == TokKind::Op && look(1).text == "=") {
                std::string name = advance().text;
                advance();
                keywords.push_back({name, parse_expression(), p});
            } else {
                auto value = parse_named_expression();
                if (at_kw("for") || at_kw("async")) {
                    auto gen = make_expr(ExprKind::Comprehension, value->pos);
                    gen->comp = CompKind::Generator;
                    gen->value = std::move(value);
                    parse_comprehension_clauses(gen->clauses);
                    value = std::move(gen);
                }
                if (!keywords.empty() && keywords.back().name.size() > 0) {
                    throw SyntaxError("positional argument follows keyword argument", p);
                }
                args.push_back(std::move(value));
            }
            if (!accept_op(",")) {
                break;
            }
        }
    }

    ExprPtr parse_slices() {
        Pos p = pos();
        auto first = parse_slice();
        if (!at_op(",")) {
            return first;
        }
        auto tuple = make_expr(ExprKind::Tuple, p);
        tuple->items.push_back(std::move(first));
        while (accept_op(",")) {
            if (at_op("]")) {
                break;
            }
            tuple->items.push_back(parse_slice());
        }
        return tuple;
    }

    ExprPtr parse_slice() {
        Pos p = pos();
        ExprPtr lower;
        if (!at_op(":")) {
            lower = at_op("*") ? parse_star_expression() : parse_named_expression();
            if (!at_op(":")) {
                return lower;
            }
        }
        auto slice = make_expr(ExprKind::Slice, p);
        advance();  // ':'
        ExprPtr upper;
        ExprPtr step;
        if (!at_op(":") && !at_op("]") && !at_op(",")) {
            upper = parse_expression();
        }
        if (accept_op(":")) {
            if (!at_op("]") && !at_op(",")) {
                step = parse_expression();
            }
        }
        slice->items.push_back(std::move(lower));
        slice->items.push_back(std::move(upper));
        slice->items.push_back(std::move(step));
        return slice;
    }

    void parse_comprehension_clauses(std::vector<ComprehensionClause>& clauses) {
        while (at_kw("for") || (at_kw("async") && look(1).text == "for")) {
            ComprehensionClause clause;
            clause.is_async = accept_kw("async");
            expect_kw("for");
            clause.target = parse_target_list();
            expect_kw("in");
            clause.iter = parse_disjunction();
            while (at_kw("if")) {
                advance();
                clause.conditions.push_back(parse_expression_nocond());
            }
            clauses.push_back(std::move(clause));
        }
    }

    ExprPtr parse_atom() {
        Pos p = pos();
        const Token& t = cur();
        switch (t.kind) {
            case TokKind::Name: {
                if (t.text == "None" || t.text == "True" || t.text == "False") {
                    auto e = make_expr(ExprKind::Constant, p);
                    e->constant = t.text == "None" ? ConstKind::None
                                  : t.text == "True" ? ConstKind::True
                                                     : ConstKind::False;
                    e->text = t.text;
                    advance();
                    return e;
                }
                if (is_keyword(t.text)) {
                    fail("invalid syntax");
                }
                auto e = make_expr(ExprKind::Name, p);
                e->text = t.text;
                advance();
                return e;
            }
            case TokKind::Number: {
                auto e = make_expr(ExprKind::Constant, p);
                e->text = t.text;
                char last = t.text.back();
                bool is_hex = t.text.size() > 1 && (t.text[1] == 'x' || t.text[1] == 'X');
                if (last == 'j' || last == 'J') {
                    e->constant = ConstKind::Complex;
                } else if (!is_hex && t.text.find_first_of(".eE") != std::string::npos) {
                    e->constant = ConstKind::Float;
                } else {
                    e->constant = ConstKind::Int;
                }
                advance();
                return e;
            }
            case TokKind::String:
                return parse_strings();
            case TokKind::Op:
                if (t.text == "(") {
                    return parse_paren();
                }
                if (t.text == "[") {
                    return parse_list();
                }
                if (t.text == "{") {
                    return parse_brace();
                }
                if (t.text == "...") {
                    auto e = make_expr(ExprKind::Constant, p);
                    e->constant = ConstKind::Ellipsis;
                    e->text = "...";
                    advance();
                    return e;
                }
                break;
            default:
                break;
        }
        fail("invalid syntax");
    }

    ExprPtr parse_strings() {
        Pos p = pos();
        bool is_fstring = false;
        bool is_bytes = false;
        std::string value;
        std::vector<ExprPtr> fields;
        while (at(TokKind::String)) {
            const Token& t = advance();
            StringPiece piece = split_string_token(t.text);
            bool raw = piece.prefix.find('r') != std::string::npos;
            if (piece.prefix.find('b') != std::string::npos) {
                is_bytes = true;
            }
            if (piece.prefix.find('f') != std::string::npos) {
                is_fstring = true;
                parse_fstring_fields(piece, t.pos, fields);
                value += piece.body;
            } else {
                value += decode_string_body(piece.body, raw);
            }
        }
        if (is_fstring) {
            auto e = make_expr(ExprKind::FString, p);
            e->items = std::move(fields);
            e->text = std::move(value);
            return e;
        }
        auto e = make_expr(ExprKind::Constant, p);
        e->constant = is_bytes ? ConstKind::Bytes : ConstKind::String;
        e->text = std::move(value);
        return e;
    }

    // Extracts `{expr!conv:spec}` replacement fields and parses each one.
    void parse_fstring_fields(const StringPiece& piece, Pos token_pos, std::vector<ExprPtr>& out) {
        const std::string& s = piece.body;
        bool raw = piece.prefix.find('r') != std::string::npos;
        int origin_col = token_pos.col + static_cast<int>(piece.prefix.size()) + piece.quote_len;
        int line = token_pos.line;
        size_t line_begin = 0;
        size_t i = 0;
        auto column_of = [&](size_t at) {
            return line == token_pos.line ? origin_col + static_cast<int>(at - line_begin)
                                          : static_cast<int>(at - line_begin);
        };
        std::function<void(size_t, size_t)> scan;
        scan = [&](size_t begin, size_t end) {
            for (i = begin; i < end; ++i) {
                char c = s[i];
                if (c == '\n') {
                    ++line;
                    line_begin = i + 1;
                    continue;
                }
                if (c == '}' ) {
                    if (i + 1 < end && s[i + 1] == '}') {
                        ++i;
                    }
                    continue;
                }
                if (c == '\\' && !raw && i + 1 < end && s[i + 1] == 'N' && i + 2 < end && s[i + 2] == '{') {
                    // \N{NAME} escape, not a replacement field.
                    size_t close = s.find('}', i);
                    i = close == std::string::npos ? end : close;
                    continue;
                }
                if (c == '\\' && i + 1 < end && s[i + 1] != '{' && s[i + 1] != '}') {
                    ++i;
                    continue;
                }
                if (c != '{') {
                    continue;
                }
                if (i + 1 < end && s[i + 1] == '{') {
                    ++i;
                    continue;
                }
                size_t start = i + 1;
                Pos field_pos{line, column_of(start)};
                int depth = 0;
                char quote = 0;
                size_t j = start;
                for (; j < end; ++j) {
                    char d = s[j];
                    if (quote) {
                        if (d == quote) {
                            quote = 0;
                        }
                        continue;
                    }
                    if (d == '\'' || d == '"') {
                        quote = d;
                    } else if (d == '(' || d == '[' || d == '{') {
                        ++depth;
                    } else if (d == ')' || d == ']' || d == '}') {
                        if (depth == 0) {
                            break;
                        }
                        --depth;
                    } else if (depth == 0 && (d == ':' || (d == '!' && j + 1 < end && s[j + 1] != '='))) {
                        break;
                    }
                }
                if (j >= end) {
                    throw SyntaxError("f-string: expecting '}'", field_pos);
                }
                std::string_view expr_text(s.data() + start, j - start);
                while (!expr_text.empty() && (expr_text.back() == ' ' || expr_text.back() == '=')) {
                    expr_text.remove_suffix(1);
                }
                if (expr_text.find_first_not_of(" \t\n") == std::string_view::npos) {
                    throw SyntaxError("f-string: empty expression not allowed", field_pos);
                }
                out.push_back(parse_fragment(expr_text, field_pos));
                size_t k = j;
                if (s[k] == '!') {
                    k += 2;
                }
                if (k < end && s[k] == ':') {
                    // Format specs may hold nested replacement fields.
                    size_t spec_begin = k + 1;
                    int d2 = 0;
                    size_t m = spec_begin;
                    for (; m < end; ++m) {
                        if (s[m] == '{') {
                            ++d2;
                        } else if (s[m] == '}') {
                            if (d2 == 0) {
                                break;
                            }
                            --d2;
                        }
                    }
                    size_t resume = m;
                    scan(spec_begin, m);
                    k = resume;
                }
                if (k >= end || s[k] != '}') {
                    throw SyntaxError("f-string: expecting '}'", field_pos);
                }
                i = k;
            }
        };
        scan(0, s.size());
    }

    static ExprPtr parse_fragment(std::string_view text, Pos origin) {
        std::string wrapped = "(" + std::string(text) + ")";
        Pos shifted{origin.line, origin.col - 1};
        Parser sub(tokenize(wrapped, shifted));
        return sub.parse_standalone_expression();
    }

    ExprPtr parse_paren() {
        Pos p = pos();
        expect_op("(");
        if (accept_op(")")) {
            return make_expr(ExprKind::Tuple, p);
        }
        if (at_kw("yield")) {
            auto e = parse_yield();
            expect_op(")");
            return e;
        }
        auto first = at_op("*") ? parse_star_expression() : parse_named_expression();
        if (at_kw("for") || at_kw("async")) {
            auto gen = make_expr(ExprKind::Comprehension, p);
            gen->comp = CompKind::Generator;
            gen->value = std::move(first);
            parse_comprehension_clauses(gen->clauses);
            expect_op(")");
            return gen;
        }
        if (accept_op(")")) {
            if (first->kind == ExprKind::Starred) {
                throw SyntaxError("cannot use starred expression here", first->pos);
            }
            return first;
        }
        auto tuple = make_expr(ExprKind::Tuple, p);
        tuple->items.push_back(std::move(first));
        while (accept_op(",")) {
            if (at_op(")")) {
                break;
            }
            tuple->items.push_back(at_op("*") ? parse_star_expression() : parse_named_expression());
        }
        expect_op(")");
        return tuple;
    }

    ExprPtr parse_list() {
        Pos p = pos();
        expect_op("[");
        auto list = make_expr(ExprKind::List, p);
        if (accept_op("]")) {
            return list;
        }
        auto first = at_op("*") ? parse_star_expression() : parse_named_expression();
        if (at_kw("for") || at_kw("async")) {
            auto comp = make_expr(ExprKind::Comprehension, p);
            comp->comp = CompKind::List;
            comp->value = std::move(first);
            parse_comprehension_clauses(comp->clauses);
            expect_op("]");
            return comp;
        }
        list->items.push_back(std::move(first));
        while (accept_op(",")) {
            if (at_op("]")) {
                break;
            }
            list->items.push_back(at_op("*") ? parse_star_expression() : parse_named_expression());
        }
        expect_op("]");
        return list;
    }

    ExprPtr parse_brace() {
        Pos p = pos();
        expect_op("{");
        if (accept_op("}")) {
            return make_expr(ExprKind::Dict, p);
        }
        if (at_op("**")) {
            return parse_dict_rest(p, nullptr, nullptr);
        }
        auto first = at_op("*") ? parse_star_expression() : parse_named_expression();
        if (accept_op(":")) {
            auto value = parse_expression();
            if (at_kw("for") || at_kw("async")) {
                auto comp = make_expr(ExprKind::Comprehension, p);
                comp->comp = CompKind::Dict;
                comp->keys.push_back(std::move(first));
                comp->value = std::move(value);
                parse_comprehension_clauses(comp->clauses);
                expect_op("}");
                return comp;
            }
            return parse_dict_rest(p, std::move(first), std::move(value));
        }
        if (at_kw("for") || at_kw("async")) {
            auto comp = make_expr(ExprKind::Comprehension, p);
            comp->comp = CompKind::Set;
            comp->value = std::move(first);
            parse_comprehension_clauses(comp->clauses);
            expect_op("}");
            return comp;
        }
        auto set = make_expr(ExprKind::Set, p);
        set->items.push_back(std::move(first));
        while (accept_op(",")) {
            if (at_op("}")) {
                break;
            }
            set->items.push_back(at_op("*") ? parse_star_expression() : parse_named_expression());
        }
        expect_op("}");
        return set;
    }

    ExprPtr parse_dict_rest(Pos p, ExprPtr key, ExprPtr value) {
        auto dict = make_expr(ExprKind::Dict, p);
        bool first = true;
        if (key) {
            dict->keys.push_back(std::move(key));
            dict->items.push_back(std::move(value));
            first = false;
        }
        while (first || accept_op(",")) {
            first = false;
            if (at_op("}")) {
                break;
            }
            if (accept_op("**")) {
                dict->keys.push_back(nullptr);
                dict->items.push_back(parse_bitwise_or());
                continue;
            }
            dict->keys.push_back(parse_expression());
            expect_op(":");
            dict->items.push_back(parse_expression());
        }
        expect_op("}");
        return dict;
    }

    std::vector<Token> toks_;
    size_t idx_ = 0;
    int pattern_depth_ = 0;
};

}  // namespace

Module parse(std::string_view text) {
    Parser parser(tokenize(text));
    return parser.parse_module();
}

ExprPtr parse_expression(std::string_view text, Pos origin) {
    Parser parser(tokenize(text, origin));
    return parser.parse_standalone_expression();
}

const char* to_string(ExprKind kind) {
    switch (kind) {
        case ExprKind::Name: return "name";
        case ExprKind::Constant: return "literal";
        case ExprKind::Attribute: return "attribute";
        case ExprKind::Subscript: return "subscript";
        case ExprKind::Slice: return "slice";
        case ExprKind::Call: return "function call";
        case ExprKind::Lambda: return "lambda";
        case ExprKind::List: return "list";
        case ExprKind::Tuple: return "tuple";
        case ExprKind::Set: return "set display";
        case ExprKind::Dict: return "dict literal";
        case ExprKind::Comprehension: return "comprehension";
        case ExprKind::BinOp: return "expression";
        case ExprKind::BoolOp: return "expression";
        case ExprKind::UnaryOp: return "expression";
        case ExprKind::Compare: return "comparison";
        case ExprKind::IfExp: return "conditional expression";
        case ExprKind::NamedExpr: return "named expression";
        case ExprKind::Starred: return "starred";
        case ExprKind::DoubleStarred: return "double starred";
        case ExprKind::Await: return "await expression";
        case ExprKind::Yield: return "yield expression";
        case ExprKind::YieldFrom: return "yield expression";
        case ExprKind::FString: return "f-string expression";
    }
    return "expression";
}

const char* to_string(StmtKind kind) {
    switch (kind) {
        case StmtKind::Expr: return "Expr";
        case StmtKind::Assign: return "Assign";
        case StmtKind::AugAssign: return "AugAssign";
        case StmtKind::AnnAssign: return "AnnAssign";
        case StmtKind::Delete: return "Delete";
        case StmtKind::Pass: return "Pass";
        case StmtKind::Break: return "Break";
        case StmtKind::Continue: return "Continue";
        case StmtKind::Return: return "Return";
        case StmtKind::Raise: return "Raise";
        case StmtKind::Global: return "Global";
        case StmtKind::Nonlocal: return "Nonlocal";
        case StmtKind::Import: return "Import";
        case StmtKind::ImportFrom: return "ImportFrom";
        case StmtKind::If: return "If";
        case StmtKind::While: return "While";
        case StmtKind::For: return "For";
        case StmtKind::Try: return "Try";
        case StmtKind::With: return "With";
        case StmtKind::FunctionDef: return "FunctionDef";
        case StmtKind::ClassDef: return "ClassDef";
        case StmtKind::Assert: return "Assert";
        case StmtKind::Match: return "Match";
        case StmtKind::TypeAlias: return "TypeAlias";
    }
    return "Stmt";
}

}  // namespace callflow::syntax
