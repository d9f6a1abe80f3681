#include <sstream>

#include "callflow/syntax.hpp"

namespace callflow::syntax {

namespace {

class Dumper {
public:
    std::string take() { return out_.str(); }

    void expr(const Expr* e) {
        if (!e) {
            out_ << "_";
            return;
        }
        out_ << "(" << to_string(e->kind) << "@" << e->pos.line << ":" << e->pos.col;
        if (!e->text.empty()) {
            out_ << " " << quoted(e->text);
        }
        if (e->kind == ExprKind::Constant) {
            out_ << " c" << static_cast<int>(e->constant);
        }
        if (e->kind == ExprKind::Comprehension) {
            out_ << " k" << static_cast<int>(e->comp);
        }
        for (const auto& op : e->ops) {
            out_ << " " << op;
        }
        if (e->value) {
            out_ << " v=";
            expr(e->value.get());
        }
        if (e->target) {
            out_ << " t=";
            expr(e->target.get());
        }
        list("items", e->items);
        list("keys", e->keys);
        for (const auto& kw : e->keywords) {
            out_ << " kw " << quoted(kw.name) << "=";
            expr(kw.value.get());
        }
        params(e->params);
        for (const auto& c : e->clauses) {
            out_ << " for" << (c.is_async ? "-async " : " ");
            expr(c.target.get());
            out_ << " in ";
            expr(c.iter.get());
            list("if", c.conditions);
        }
        out_ << ")";
    }

    void block(const char* label, const Block& b) {
        if (b.empty()) {
            return;
        }
        out_ << " " << label << "[";
        for (const auto& s : b) {
            stmt(*s);
        }
        out_ << "]";
    }

    void stmt(const Stmt& s) {
        out_ << "(" << to_string(s.kind) << "@" << s.pos.line << ":" << s.pos.col;
        if (!s.text.empty()) {
            out_ << " " << quoted(s.text);
        }
        if (s.level) {
            out_ << " level=" << s.level;
        }
        if (s.is_async) {
            out_ << " async";
        }
        if (s.value) {
            out_ << " v=";
            expr(s.value.get());
        }
        if (s.annotation) {
            out_ << " a=";
            expr(s.annotation.get());
        }
        list("targets", s.targets);
        for (const auto& n : s.names) {
            out_ << " name " << quoted(n.name) << (n.asname.empty() ? "" : " as " + quoted(n.asname));
        }
        list("decorators", s.decorators);
        params(s.params);
        list("bases", s.bases);
        for (const auto& kw : s.keywords) {
            out_ << " kw " << quoted(kw.name) << "=";
            expr(kw.value.get());
        }
        for (const auto& item : s.items) {
            out_ << " with ";
            expr(item.context.get());
            out_ << " as ";
            expr(item.target.get());
        }
        block("body", s.body);
        for (const auto& h : s.handlers) {
            out_ << " except ";
            expr(h.type.get());
            out_ << " " << quoted(h.name);
            block("do", h.body);
        }
        for (const auto& c : s.cases) {
            out_ << " case ";
            expr(c.pattern.get());
            out_ << " if ";
            expr(c.guard.get());
            block("do", c.body);
        }
        block("orelse", s.orelse);
        block("finally", s.finalbody);
        out_ << ")";
    }

private:
    static std::string quoted(const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') {
                q += '\\';
                q += c;
            } else if (c == '\n') {
                q += "\\n";
            } else {
                q += c;
            }
        }
        return q + "\"";
    }

    void list(const char* label, const std::vector<ExprPtr>& v) {
        if (v.empty()) {
            return;
        }
        out_ << " " << label << "[";
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) {
                out_ << " ";
            }
            expr(v[i].get());
        }
        out_ << "]";
    }

    void params(const std::vector<Param>& ps) {
        for (const auto& p : ps) {
            out_ << " param " << p.name << "/" << static_cast<int>(p.kind);
            if (p.default_value) {
                out_ << "=";
                expr(p.default_value.get());
            }
        }
    }

    std::ostringstream out_;
};

}  // namespace

std::string dump(const Module& module) {
    Dumper d;
    d.block("module", module.body);
    return d.take();
}

std::string dump(const Expr& expr) {
    Dumper d;
    d.expr(&expr);
    return d.take();
}

}  // namespace callflow::syntax
