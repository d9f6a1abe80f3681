#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "callflow/ir.hpp"

namespace callflow::ir {

namespace {

using syntax::ExprKind;
using syntax::StmtKind;

// Decorators with built-in semantics that the analysis models directly
// (method kinds) or deliberately ignores.
const std::set<std::string> kTransparentDecorators = {
    "staticmethod", "classmethod", "property",      "abstractmethod", "wraps",    "cached_property",
    "lru_cache",    "cache",       "dataclass",     "total_ordering", "override", "final",
    "abstractproperty", "abstractclassmethod", "abstractstaticmethod", "unique", "runtime_checkable",
};

// Callee spelling of a decorator: `a.b` for `@a.b` and `@a.b(...)`.
std::string decorator_name(const syntax::Expr& e) {
    const syntax::Expr* cur = &e;
    if (cur->kind == ExprKind::Call) {
        cur = cur->value.get();
    }
    std::string name;
    while (cur->kind == ExprKind::Attribute) {
        name = "." + cur->text + name;
        cur = cur->value.get();
    }
    if (cur->kind == ExprKind::Name) {
        return cur->text + name;
    }
    return {};
}

std::string last_component(const std::string& dotted) {
    auto dot = dotted.rfind('.');
    return dot == std::string::npos ? dotted : dotted.substr(dot + 1);
}

// Walks the expressions of a statement list without entering nested
// function, lambda or class scopes.
void for_each_expr_in_scope(const syntax::Block& block, const std::function<void(const syntax::Expr&)>& fn);

void for_each_subexpr(const syntax::Expr& e, const std::function<void(const syntax::Expr&)>& fn) {
    fn(e);
    if (e.kind == ExprKind::Lambda) {
        for (const auto& p : e.params) {
            if (p.default_value) {
                for_each_subexpr(*p.default_value, fn);
            }
        }
        return;
    }
    auto visit = [&](const syntax::ExprPtr& p) {
        if (p) {
            for_each_subexpr(*p, fn);
        }
    };
    visit(e.value);
    visit(e.target);
    for (const auto& i : e.items) {
        visit(i);
    }
    for (const auto& k : e.keys) {
        visit(k);
    }
    for (const auto& kw : e.keywords) {
        visit(kw.value);
    }
    for (const auto& c : e.clauses) {
        visit(c.target);
        visit(c.iter);
        for (const auto& cond : c.conditions) {
            visit(cond);
        }
    }
}

void for_each_expr_in_scope(const syntax::Block& block, const std::function<void(const syntax::Expr&)>& fn) {
    auto visit = [&](const syntax::ExprPtr& p) {
        if (p) {
            for_each_subexpr(*p, fn);
        }
    };
    for (const auto& s : block) {
        if (s->kind == StmtKind::FunctionDef || s->kind == StmtKind::ClassDef) {
            for (const auto& d : s->decorators) {
                visit(d);
            }
            for (const auto& p : s->params) {
                visit(p.default_value);
            }
            for (const auto& b : s->bases) {
                visit(b);
            }
            continue;
        }
        visit(s->value);
        visit(s->annotation);
        for (const auto& t : s->targets) {
            visit(t);
        }
        for (const auto& item : s->items) {
            visit(item.context);
            visit(item.target);
        }
        for (const auto& h : s->handlers) {
            visit(h.type);
            for_each_expr_in_scope(h.body, fn);
        }
        for (const auto& c : s->cases) {
            visit(c.pattern);
            visit(c.guard);
            for_each_expr_in_scope(c.body, fn);
        }
        for_each_expr_in_scope(s->body, fn);
        for_each_expr_in_scope(s->orelse, fn);
        for_each_expr_in_scope(s->finalbody, fn);
    }
}

void for_each_stmt_in_scope(const syntax::Block& block, const std::function<void(const syntax::Stmt&)>& fn) {
    for (const auto& s : block) {
        fn(*s);
        if (s->kind == StmtKind::FunctionDef || s->kind == StmtKind::ClassDef) {
            continue;
        }
        for_each_stmt_in_scope(s->body, fn);
        for_each_stmt_in_scope(s->orelse, fn);
        for_each_stmt_in_scope(s->finalbody, fn);
        for (const auto& h : s->handlers) {
            for_each_stmt_in_scope(h.body, fn);
        }
        for (const auto& c : s->cases) {
            for_each_stmt_in_scope(c.body, fn);
        }
    }
}

// Every lambda in the file, in any scope, for source-order numbering.
void collect_lambdas(const syntax::Block& block, std::vector<Pos>& out) {
    std::function<void(const syntax::Expr&)> on_expr = [&](const syntax::Expr& e) {
        if (e.kind == ExprKind::Lambda) {
            out.push_back(e.pos);
            // Lambdas nested in the body are not reached by for_each_subexpr.
            for_each_subexpr(*e.value, on_expr);
        }
    };
    for_each_expr_in_scope(block, on_expr);
    for_each_stmt_in_scope(block, [&](const syntax::Stmt& s) {
        if (s.kind == StmtKind::FunctionDef || s.kind == StmtKind::ClassDef) {
            collect_lambdas(s.body, out);
        }
    });
}

struct Scope {
    enum Type { Module, Function, Class } type;
    NamespacePath path;
    std::set<std::string> classes;    // names bound by `class` statements in this scope
    std::set<std::string> globals;
    std::set<std::string> nonlocals;
    std::string first_param;          // functions only
    bool is_method = false;
};

class Lowerer {
public:
    explicit Lowerer(const ModuleUnit& unit) : unit_(unit) {
        out_.module_name = unit.module_name;
        out_.source = unit.file_path;
    }

    IRModule run() {
        const syntax::Block& body = unit_.syntax_tree->body;
        std::vector<Pos> lambdas;
        collect_lambdas(body, lambdas);
        std::sort(lambdas.begin(), lambdas.end(),
                  [](Pos a, Pos b) { return std::tie(a.line, a.col) < std::tie(b.line, b.col); });
        for (size_t i = 0; i < lambdas.size(); ++i) {
            lambda_numbers_.emplace(std::make_pair(lambdas[i].line, lambdas[i].col), static_cast<int>(i + 1));
        }
        for_each_stmt_in_scope(body, [&](const syntax::Stmt& s) {
            if (s.kind == StmtKind::FunctionDef || s.kind == StmtKind::ClassDef) {
                module_defs_.insert(s.text);
            }
        });

        Scope module{Scope::Module, NamespacePath::module(unit_.module_name), {}, {}, {}, {}, false};
        prescan(body, module);
        scopes_.push_back(std::move(module));
        out_.body = lower_block(body, {1, 0});
        scopes_.pop_back();

        int next_id = 0;
        number(*out_.body, next_id);
        out_.node_count = next_id;
        std::sort(out_.imports.begin(), out_.imports.end());
        out_.imports.erase(std::unique(out_.imports.begin(), out_.imports.end()), out_.imports.end());
        return std::move(out_);
    }

private:
    // ---- node helpers --------------------------------------------------

    static NodePtr make(Payload payload, Pos pos) {
        auto n = std::make_unique<Node>();
        n->payload = std::move(payload);
        n->pos = pos;
        return n;
    }

    static NodePtr inert(Pos pos) { return make(ObjectRef{}, pos); }
    static NodePtr ident(const std::string& name, Pos pos) { return make(Identifier{name}, pos); }

    static NodePtr seq(std::vector<NodePtr> parts, Pos pos) {
        std::erase(parts, nullptr);
        if (parts.empty()) {
            return inert(pos);
        }
        NodePtr tail = std::move(parts.back());
        for (size_t i = parts.size() - 1; i-- > 0;) {
            Pos p = parts[i]->pos;
            tail = make(Seq{std::move(parts[i]), std::move(tail)}, p);
        }
        return tail;
    }

    static void number(Node& n, int& next) {
        n.id = next++;
        std::visit(
            [&](auto& p) {
                using T = std::decay_t<decltype(p)>;
                auto sub = [&](NodePtr& c) {
                    if (c) {
                        number(*c, next);
                    }
                };
                if constexpr (std::is_same_v<T, Assign> || std::is_same_v<T, Return> || std::is_same_v<T, Iter>) {
                    sub(p.value);
                } else if constexpr (std::is_same_v<T, FunctionDef>) {
                    for (auto& param : p.params) {
                        sub(param.default_value);
                    }
                    sub(p.body);
                } else if constexpr (std::is_same_v<T, Call>) {
                    sub(p.callee);
                    for (auto& a : p.args) {
                        sub(a.value);
                    }
                } else if constexpr (std::is_same_v<T, New>) {
                    for (auto& a : p.args) {
                        sub(a.value);
                    }
                } else if constexpr (std::is_same_v<T, ClassDef>) {
                    for (auto& b : p.bases) {
                        sub(b);
                    }
                    sub(p.body);
                } else if constexpr (std::is_same_v<T, AttrAccess>) {
                    sub(p.receiver);
                } else if constexpr (std::is_same_v<T, AttrAssign>) {
                    sub(p.receiver);
                    sub(p.value);
                } else if constexpr (std::is_same_v<T, Seq>) {
                    sub(p.first);
                    sub(p.second);
                }
            },
            n.payload);
    }

    void diagnose(Pos pos, std::string message) { out_.diagnostics.push_back({pos, std::move(message)}); }

    Scope& scope() { return scopes_.back(); }
    const NamespacePath& path() { return scope().path; }

    std::string fresh_tmp() { return "<tmp" + std::to_string(++tmp_counter_) + ">"; }

    QualifiedObject fresh_allocation(const char* kind) {
        return {path(), {"<" + std::string(kind) + "#" + std::to_string(++alloc_counter_) + ">", Kind::Var}};
    }

    void prescan(const syntax::Block& body, Scope& s) {
        for_each_stmt_in_scope(body, [&](const syntax::Stmt& st) {
            if (st.kind == StmtKind::ClassDef) {
                s.classes.insert(st.text);
            } else if (st.kind == StmtKind::Global) {
                for (const auto& n : st.names) {
                    s.globals.insert(n.name);
                }
            } else if (st.kind == StmtKind::Nonlocal) {
                for (const auto& n : st.names) {
                    s.nonlocals.insert(n.name);
                }
            }
        });
    }

    Binding binding_for(const std::string& name) {
        if (scope().globals.count(name)) {
            return Binding::Global;
        }
        if (scope().nonlocals.count(name)) {
            return Binding::Nonlocal;
        }
        return Binding::Local;
    }

    bool names_class(const std::string& name) {
        for (size_t i = scopes_.size(); i-- > 0;) {
            const Scope& s = scopes_[i];
            if (s.type == Scope::Class && i + 1 != scopes_.size()) {
                continue;
            }
            if (s.classes.count(name)) {
                return true;
            }
        }
        return false;
    }

    // ---- statements ----------------------------------------------------

    NodePtr lower_block(const syntax::Block& block, Pos pos) {
        std::vector<NodePtr> parts;
        for (const auto& s : block) {
            parts.push_back(lower_stmt(*s));
        }
        return seq(std::move(parts), block.empty() ? pos : block.front()->pos);
    }

    NodePtr lower_stmt(const syntax::Stmt& s) {
        Pos p = s.pos;
        switch (s.kind) {
            case StmtKind::Expr:
                return lower_expr(*s.value);
            case StmtKind::Assign: {
                if (s.targets.size() == 1) {
                    return assign_pattern(*s.targets[0], *s.value);
                }
                std::string tmp = fresh_tmp();
                std::vector<NodePtr> parts;
                parts.push_back(make(Assign{tmp, lower_expr(*s.value), Binding::Local}, p));
                for (const auto& t : s.targets) {
                    parts.push_back(assign_to(*t, ident(tmp, t->pos)));
                }
                return seq(std::move(parts), p);
            }
            case StmtKind::AugAssign: {
                const syntax::Expr& t = *s.targets[0];
                auto current = lower_expr(t);
                auto combined = make(Seq{std::move(current), lower_expr(*s.value)}, p);
                return assign_to(t, std::move(combined));
            }
            case StmtKind::AnnAssign:
                if (s.value) {
                    return assign_pattern(*s.targets[0], *s.value);
                }
                return nullptr;
            case StmtKind::TypeAlias:
                return assign_to(*s.targets[0], lower_expr(*s.value));
            case StmtKind::Delete:
            case StmtKind::Pass:
            case StmtKind::Break:
            case StmtKind::Continue:
            case StmtKind::Global:
            case StmtKind::Nonlocal:
                return nullptr;
            case StmtKind::Return:
                return make(Return{s.value ? lower_expr(*s.value) : inert(p)}, p);
            case StmtKind::Raise: {
                std::vector<NodePtr> parts;
                if (s.value) {
                    parts.push_back(lower_expr(*s.value));
                }
                if (s.annotation) {
                    parts.push_back(lower_expr(*s.annotation));
                }
                return seq(std::move(parts), p);
            }
            case StmtKind::Assert: {
                std::vector<NodePtr> parts;
                parts.push_back(lower_expr(*s.value));
                if (s.annotation) {
                    parts.push_back(lower_expr(*s.annotation));
                }
                return seq(std::move(parts), p);
            }
            case StmtKind::Import:
                return lower_import(s);
            case StmtKind::ImportFrom:
                return lower_import_from(s);
            case StmtKind::If:
            case StmtKind::While: {
                std::vector<NodePtr> parts;
                parts.push_back(lower_expr(*s.value));
                parts.push_back(lower_block(s.body, p));
                parts.push_back(s.orelse.empty() ? nullptr : lower_block(s.orelse, p));
                return seq(std::move(parts), p);
            }
            case StmtKind::For: {
                std::vector<NodePtr> parts;
                auto iter = make(Iter{lower_expr(*s.value)}, s.value->pos);
                parts.push_back(assign_to(*s.targets[0], std::move(iter)));
                parts.push_back(lower_block(s.body, p));
                parts.push_back(s.orelse.empty() ? nullptr : lower_block(s.orelse, p));
                return seq(std::move(parts), p);
            }
            case StmtKind::Try: {
                std::vector<NodePtr> parts;
                parts.push_back(lower_block(s.body, p));
                for (const auto& h : s.handlers) {
                    if (h.type) {
                        parts.push_back(lower_handler_binding(h));
                    }
                    parts.push_back(lower_block(h.body, h.pos));
                }
                parts.push_back(s.orelse.empty() ? nullptr : lower_block(s.orelse, p));
                parts.push_back(s.finalbody.empty() ? nullptr : lower_block(s.finalbody, p));
                return seq(std::move(parts), p);
            }
            case StmtKind::With: {
                std::vector<NodePtr> parts;
                for (const auto& item : s.items) {
                    auto ctx = lower_expr(*item.context);
                    parts.push_back(item.target ? assign_to(*item.target, std::move(ctx)) : std::move(ctx));
                }
                parts.push_back(lower_block(s.body, p));
                return seq(std::move(parts), p);
            }
            case StmtKind::Match: {
                std::vector<NodePtr> parts;
                parts.push_back(lower_expr(*s.value));
                for (const auto& c : s.cases) {
                    if (c.guard) {
                        parts.push_back(lower_expr(*c.guard));
                    }
                    parts.push_back(lower_block(c.body, c.pos));
                }
                return seq(std::move(parts), p);
            }
            case StmtKind::FunctionDef:
                return lower_function_stmt(s);
            case StmtKind::ClassDef:
                return lower_class(s);
        }
        return nullptr;
    }

    // `except E as x` binds x to the exception class; `except (A, B) as x`
    // binds it to both.
    NodePtr lower_handler_binding(const syntax::ExceptHandler& h) {
        if (h.name.empty()) {
            return lower_expr(*h.type);
        }
        std::vector<NodePtr> parts;
        if (h.type->kind == ExprKind::Tuple) {
            for (const auto& t : h.type->items) {
                parts.push_back(make(Assign{h.name, lower_expr(*t), binding_for(h.name)}, t->pos));
            }
        } else {
            parts.push_back(make(Assign{h.name, lower_expr(*h.type), binding_for(h.name)}, h.pos));
        }
        return seq(std::move(parts), h.pos);
    }

    NodePtr lower_import(const syntax::Stmt& s) {
        std::vector<NodePtr> parts;
        for (const auto& alias : s.names) {
            out_.imports.push_back(alias.name);
            if (!alias.asname.empty()) {
                parts.push_back(make(Import{alias.name, alias.name, alias.asname}, alias.pos));
            } else {
                std::string top = alias.name.substr(0, alias.name.find('.'));
                parts.push_back(make(Import{top, top, top}, alias.pos));
            }
        }
        return seq(std::move(parts), s.pos);
    }

    NodePtr lower_import_from(const syntax::Stmt& s) {
        std::string module = s.text;
        bool names_are_modules = false;
        if (s.level > 0) {
            module = resolve_relative(unit_.module_name, unit_.is_package, s.level, s.text);
            if (module.empty()) {
                if (s.text.empty() && s.level == 1 && !unit_.is_package &&
                    unit_.module_name.find('.') == std::string::npos) {
                    names_are_modules = true;
                } else {
                    diagnose(s.pos, "relative import beyond top-level package");
                    return nullptr;
                }
            }
        }
        std::vector<NodePtr> parts;
        for (const auto& alias : s.names) {
            const std::string& bound = alias.asname.empty() ? alias.name : alias.asname;
            if (names_are_modules) {
                out_.imports.push_back(alias.name);
                parts.push_back(make(Import{alias.name, alias.name, bound}, alias.pos));
                continue;
            }
            out_.imports.push_back(module);
            if (alias.name == "*") {
                parts.push_back(make(Import{"*", module, "*"}, alias.pos));
            } else {
                out_.imports.push_back(module + "." + alias.name);
                parts.push_back(make(Import{alias.name, module, bound}, alias.pos));
            }
        }
        return seq(std::move(parts), s.pos);
    }

    NodePtr decorate(const std::vector<syntax::ExprPtr>& decorators, const std::string& name,
                     const QualifiedObject& defined, Pos pos) {
        NodePtr value;
        bool any = false;
        for (auto it = decorators.rbegin(); it != decorators.rend(); ++it) {
            const syntax::Expr& d = **it;
            std::string dname = decorator_name(d);
            std::string last = last_component(dname);
            bool builtin = kTransparentDecorators.count(last) && !module_defs_.count(dname);
            bool accessor = last == "setter" || last == "getter" || last == "deleter";
            if (builtin || accessor) {
                continue;
            }
            if (!value) {
                value = make(ObjectRef{defined}, pos);
            }
            Call call;
            call.callee = lower_expr(d);
            call.args.push_back({"0", std::move(value)});
            call.decorator = true;
            value = make(std::move(call), d.pos);
            any = true;
        }
        if (!any) {
            return nullptr;
        }
        return make(Assign{name, std::move(value), binding_for(name)}, pos);
    }

    MethodKind method_kind_for(const syntax::Stmt& s) {
        if (scope().type != Scope::Class) {
            return MethodKind::Function;
        }
        for (const auto& d : s.decorators) {
            std::string last = last_component(decorator_name(*d));
            if (last == "staticmethod" || last == "abstractstaticmethod") {
                return MethodKind::StaticMethod;
            }
            if (last == "classmethod" || last == "abstractclassmethod") {
                return MethodKind::ClassMethod;
            }
            if (last == "property" || last == "cached_property" || last == "abstractproperty" ||
                last == "setter" || last == "getter" || last == "deleter") {
                return MethodKind::Property;
            }
        }
        return MethodKind::Method;
    }

    std::vector<Param> lower_params(const std::vector<syntax::Param>& params) {
        std::vector<Param> out;
        int position = 0;
        for (const auto& sp : params) {
            Param p;
            p.info.name = sp.name;
            switch (sp.kind) {
                case syntax::ParamKind::PositionalOnly:
                    p.info.positional_only = true;
                    p.info.position = position++;
                    break;
                case syntax::ParamKind::Normal:
                    p.info.position = position++;
                    break;
                case syntax::ParamKind::VarPositional:
                    p.info.role = ParamRole::VarArgs;
                    break;
                case syntax::ParamKind::KeywordOnly:
                    break;
                case syntax::ParamKind::VarKeyword:
                    p.info.role = ParamRole::VarKw;
                    break;
            }
            if (sp.default_value) {
                p.default_value = lower_expr(*sp.default_value);
            }
            out.push_back(std::move(p));
        }
        return out;
    }

    static bool contains_yield(const syntax::Block& body) {
        bool found = false;
        for_each_expr_in_scope(body, [&](const syntax::Expr& e) {
            if (e.kind == ExprKind::Yield || e.kind == ExprKind::YieldFrom) {
                found = true;
            }
        });
        return found;
    }

    NodePtr lower_function_stmt(const syntax::Stmt& s) {
        Pos p = s.pos;
        MethodKind kind = method_kind_for(s);
        bool in_class = scope().type == Scope::Class;
        FunctionDef def;
        def.name = s.text;
        def.method_kind = kind;
        def.params = lower_params(s.params);
        def.is_generator = contains_yield(s.body);

        Scope fn{Scope::Function, path().extended({s.text, Kind::Func}), {}, {}, {}, {}, in_class};
        if (!s.params.empty() && s.params[0].kind != syntax::ParamKind::KeywordOnly &&
            s.params[0].kind != syntax::ParamKind::VarKeyword) {
            fn.first_param = s.params[0].name;
        }
        prescan(s.body, fn);
        QualifiedObject defined{path(), {s.text, Kind::Func}};
        scopes_.push_back(std::move(fn));
        def.body = lower_block(s.body, p);
        scopes_.pop_back();

        auto node = make(std::move(def), p);
        auto decorated = decorate(s.decorators, s.text, defined, p);
        if (!decorated) {
            return node;
        }
        std::vector<NodePtr> parts;
        parts.push_back(std::move(node));
        parts.push_back(std::move(decorated));
        return seq(std::move(parts), p);
    }

    NodePtr lower_class(const syntax::Stmt& s) {
        Pos p = s.pos;
        ClassDef def;
        def.name = s.text;
        for (const auto& b : s.bases) {
            def.bases.push_back(lower_expr(*b));
        }
        std::vector<NodePtr> effects;
        for (const auto& kw : s.keywords) {
            effects.push_back(lower_expr(*kw.value));
        }
        Scope cls{Scope::Class, path().extended({s.text, Kind::Cls}), {}, {}, {}, {}, false};
        prescan(s.body, cls);
        QualifiedObject defined{path(), {s.text, Kind::Cls}};
        scopes_.push_back(std::move(cls));
        def.body = lower_block(s.body, p);
        scopes_.pop_back();

        effects.push_back(make(std::move(def), p));
        effects.push_back(decorate(s.decorators, s.text, defined, p));
        return seq(std::move(effects), p);
    }

    // ---- assignment targets -------------------------------------------

    // Assignment with the right-hand side still in syntax form, so that
    // `a, b = x, y` can be lowered pairwise.
    NodePtr assign_pattern(const syntax::Expr& target, const syntax::Expr& value) {
        bool target_seq = target.kind == ExprKind::Tuple || target.kind == ExprKind::List;
        bool value_seq = value.kind == ExprKind::Tuple || value.kind == ExprKind::List;
        if (target_seq && value_seq && target.items.size() == value.items.size()) {
            bool starred = std::any_of(target.items.begin(), target.items.end(),
                                       [](const auto& e) { return e->kind == ExprKind::Starred; }) ||
                           std::any_of(value.items.begin(), value.items.end(),
                                       [](const auto& e) { return e->kind == ExprKind::Starred; });
            if (!starred) {
                // Evaluate every right-hand side before binding, as the
                // interpreter does for `a, b = b, a`.
                std::vector<NodePtr> parts;
                std::vector<std::string> tmps;
                for (const auto& v : value.items) {
                    tmps.push_back(fresh_tmp());
                    parts.push_back(make(Assign{tmps.back(), lower_expr(*v), Binding::Local}, v->pos));
                }
                for (size_t i = 0; i < target.items.size(); ++i) {
                    parts.push_back(assign_pattern_from_tmp(*target.items[i], tmps[i]));
                }
                return seq(std::move(parts), target.pos);
            }
        }
        return assign_to(target, lower_expr(value));
    }

    NodePtr assign_pattern_from_tmp(const syntax::Expr& target, const std::string& tmp) {
        return assign_to(target, ident(tmp, target.pos));
    }

    NodePtr assign_to(const syntax::Expr& target, NodePtr value) {
        Pos p = target.pos;
        switch (target.kind) {
            case ExprKind::Name:
                return make(Assign{target.text, std::move(value), binding_for(target.text)}, p);
            case ExprKind::Attribute:
                return make(AttrAssign{lower_expr(*target.value), target.text, std::move(value)}, p);
            case ExprKind::Subscript: {
                const syntax::Expr& index = *target.items[0];
                auto receiver = lower_expr(*target.value);
                std::string attr = key_attr(index);
                auto store = make(AttrAssign{std::move(receiver), attr, std::move(value)}, p);
                if (attr != kWildcardIndex || index.kind == ExprKind::Constant) {
                    return store;
                }
                std::vector<NodePtr> parts;
                parts.push_back(lower_expr(index));
                parts.push_back(std::move(store));
                return seq(std::move(parts), p);
            }
            case ExprKind::Tuple:
            case ExprKind::List: {
                std::string tmp = fresh_tmp();
                std::vector<NodePtr> parts;
                parts.push_back(make(Assign{tmp, std::move(value), Binding::Local}, p));
                bool after_star = false;
                for (size_t i = 0; i < target.items.size(); ++i) {
                    const syntax::Expr& t = *target.items[i];
                    if (t.kind == ExprKind::Starred) {
                        diagnose(t.pos, "starred assignment target is not supported");
                        after_star = true;
                        continue;
                    }
                    std::string attr = after_star ? std::string(kWildcardIndex) : index_attr(static_cast<long long>(i));
                    parts.push_back(assign_to(t, make(AttrAccess{ident(tmp, t.pos), attr}, t.pos)));
                }
                return seq(std::move(parts), p);
            }
            case ExprKind::Starred:
                diagnose(p, "starred assignment target is not supported");
                return value;
            default:
                diagnose(p, std::string("cannot assign to ") + syntax::to_string(target.kind));
                return value;
        }
    }

    // Attribute name modelling a subscript.
    static std::string key_attr(const syntax::Expr& index) {
        if (index.kind == ExprKind::Constant) {
            if (index.constant == syntax::ConstKind::String) {
                return dict_attr(index.text);
            }
            if (index.constant == syntax::ConstKind::Int) {
                try {
                    std::string digits;
                    for (char c : index.text) {
                        if (c != '_') {
                            digits += c;
                        }
                    }
                    return index_attr(std::stoll(digits, nullptr, 0));
                } catch (const std::exception&) {
                    return kWildcardIndex;
                }
            }
            if (index.constant == syntax::ConstKind::True) {
                return index_attr(1);
            }
            if (index.constant == syntax::ConstKind::False) {
                return index_attr(0);
            }
        }
        return kWildcardIndex;
    }

    // ---- expressions ---------------------------------------------------

    std::vector<Arg> lower_args(const std::vector<syntax::ExprPtr>& items, const std::vector<syntax::Keyword>& keywords) {
        std::vector<Arg> args;
        long long index = 0;
        for (const auto& item : items) {
            if (item->kind == ExprKind::Starred) {
                args.push_back({"*", lower_expr(*item->value)});
            } else {
                args.push_back({std::to_string(index++), lower_expr(*item)});
            }
        }
        for (const auto& kw : keywords) {
            args.push_back({kw.name.empty() ? "**" : kw.name, lower_expr(*kw.value)});
        }
        return args;
    }

    NodePtr allocation(const char* kind, std::vector<std::pair<std::string, NodePtr>> elements, Pos pos) {
        QualifiedObject obj = fresh_allocation(kind);
        std::vector<NodePtr> parts;
        for (auto& [attr, value] : elements) {
            Pos vp = value->pos;
            parts.push_back(make(AttrAssign{make(ObjectRef{obj}, vp), attr, std::move(value)}, vp));
        }
        parts.push_back(make(ObjectRef{obj}, pos));
        return seq(std::move(parts), pos);
    }

    NodePtr lower_sequence(const char* kind, const syntax::Expr& e) {
        std::vector<std::pair<std::string, NodePtr>> elements;
        bool after_star = false;
        for (size_t i = 0; i < e.items.size(); ++i) {
            const syntax::Expr& item = *e.items[i];
            if (item.kind == ExprKind::Starred) {
                // Splicing another iterable: its elements land at unknown indices.
                auto spliced = make(Iter{lower_expr(*item.value)}, item.pos);
                elements.emplace_back(kWildcardIndex, std::move(spliced));
                after_star = true;
                continue;
            }
            std::string attr = after_star ? std::string(kWildcardIndex) : index_attr(static_cast<long long>(i));
            elements.emplace_back(attr, lower_expr(item));
        }
        return allocation(kind, std::move(elements), e.pos);
    }

    NodePtr union_of(std::vector<NodePtr> prefix, std::vector<NodePtr> values, Pos pos) {
        std::string tmp = fresh_tmp();
        for (auto& v : values) {
            Pos vp = v->pos;
            prefix.push_back(make(Assign{tmp, std::move(v), Binding::Local}, vp));
        }
        prefix.push_back(ident(tmp, pos));
        return seq(std::move(prefix), pos);
    }

    NodePtr lower_lambda(const syntax::Expr& e) {
        FunctionDef def;
        auto it = lambda_numbers_.find({e.pos.line, e.pos.col});
        def.name = lambda_name(it == lambda_numbers_.end() ? 0 : it->second);
        def.params = lower_params(e.params);
        Scope fn{Scope::Function, path().extended({def.name, Kind::Func}), {}, {}, {}, {}, false};
        if (!e.params.empty()) {
            fn.first_param = e.params[0].name;
        }
        scopes_.push_back(std::move(fn));
        def.is_generator = false;
        for_each_subexpr(*e.value, [&](const syntax::Expr& sub) {
            if (sub.kind == ExprKind::Yield || sub.kind == ExprKind::YieldFrom) {
                def.is_generator = true;
            }
        });
        def.body = make(Return{lower_expr(*e.value)}, e.value->pos);
        scopes_.pop_back();
        return make(std::move(def), e.pos);
    }

    NodePtr lower_comprehension(const syntax::Expr& e) {
        std::vector<NodePtr> parts;
        for (const auto& clause : e.clauses) {
            auto iter = make(Iter{lower_expr(*clause.iter)}, clause.iter->pos);
            parts.push_back(assign_to(*clause.target, std::move(iter)));
            for (const auto& cond : clause.conditions) {
                parts.push_back(lower_expr(*cond));
            }
        }
        const char* kind = e.comp == syntax::CompKind::Set    ? "set"
                           : e.comp == syntax::CompKind::Dict ? "dict"
                                                              : "list";
        std::vector<std::pair<std::string, NodePtr>> elements;
        if (e.comp == syntax::CompKind::Dict) {
            parts.push_back(lower_expr(*e.keys[0]));
        }
        elements.emplace_back(kWildcardIndex, lower_expr(*e.value));
        parts.push_back(allocation(kind, std::move(elements), e.pos));
        return seq(std::move(parts), e.pos);
    }

    // `super()` inside a method evaluates to the `<super>` proxy, which
    // holds the instance; attribute lookups on it skip the defining class.
    bool is_super_call(const syntax::Expr& e) const {
        if (e.value->kind != ExprKind::Name || e.value->text != "super" || !e.keywords.empty()) {
            return false;
        }
        if (e.items.size() != 0 && e.items.size() != 2) {
            return false;
        }
        for (size_t i = scopes_.size(); i-- > 0;) {
            if (scopes_[i].type == Scope::Function) {
                return scopes_[i].is_method && !scopes_[i].first_param.empty();
            }
        }
        return false;
    }

    NodePtr lower_super(const syntax::Expr& e) {
        std::string self;
        for (size_t i = scopes_.size(); i-- > 0;) {
            if (scopes_[i].type == Scope::Function) {
                self = scopes_[i].first_param;
                break;
            }
        }
        std::vector<NodePtr> parts;
        for (const auto& item : e.items) {
            parts.push_back(lower_expr(*item));
        }
        parts.push_back(make(Assign{kSuper, ident(self, e.pos), Binding::Local}, e.pos));
        parts.push_back(ident(kSuper, e.pos));
        return seq(std::move(parts), e.pos);
    }

    NodePtr lower_expr(const syntax::Expr& e) {
        Pos p = e.pos;
        switch (e.kind) {
            case ExprKind::Name:
                return ident(e.text, p);
            case ExprKind::Constant:
                return inert(p);
            case ExprKind::Attribute:
                return make(AttrAccess{lower_expr(*e.value), e.text}, p);
            case ExprKind::Subscript: {
                const syntax::Expr& index = *e.items[0];
                if (index.kind == ExprKind::Slice) {
                    std::vector<NodePtr> parts;
                    for (const auto& bound : index.items) {
                        if (bound) {
                            parts.push_back(lower_expr(*bound));
                        }
                    }
                    parts.push_back(lower_expr(*e.value));
                    return seq(std::move(parts), p);
                }
                std::string attr = key_attr(index);
                auto access = make(AttrAccess{lower_expr(*e.value), attr}, p);
                if (attr != kWildcardIndex || index.kind == ExprKind::Constant) {
                    return access;
                }
                std::vector<NodePtr> parts;
                parts.push_back(lower_expr(index));
                parts.push_back(std::move(access));
                return seq(std::move(parts), p);
            }
            case ExprKind::Slice: {
                std::vector<NodePtr> parts;
                for (const auto& bound : e.items) {
                    if (bound) {
                        parts.push_back(lower_expr(*bound));
                    }
                }
                parts.push_back(inert(p));
                return seq(std::move(parts), p);
            }
            case ExprKind::Call: {
                if (is_super_call(e)) {
                    return lower_super(e);
                }
                if (e.value->kind == ExprKind::Name && names_class(e.value->text)) {
                    return make(New{e.value->text, lower_args(e.items, e.keywords)}, p);
                }
                Call call;
                call.callee = lower_expr(*e.value);
                call.args = lower_args(e.items, e.keywords);
                return make(std::move(call), p);
            }
            case ExprKind::Lambda:
                return lower_lambda(e);
            case ExprKind::List:
                return lower_sequence("list", e);
            case ExprKind::Tuple:
                return lower_sequence("tuple", e);
            case ExprKind::Set:
                return lower_sequence("set", e);
            case ExprKind::Dict: {
                std::vector<std::pair<std::string, NodePtr>> elements;
                std::vector<NodePtr> effects;
                for (size_t i = 0; i < e.items.size(); ++i) {
                    if (!e.keys[i]) {
                        // `**mapping` merges unknown keys.
                        elements.emplace_back(kWildcardIndex, make(Iter{lower_expr(*e.items[i])}, e.items[i]->pos));
                        continue;
                    }
                    std::string attr = key_attr(*e.keys[i]);
                    if (attr == kWildcardIndex && e.keys[i]->kind != ExprKind::Constant) {
                        effects.push_back(lower_expr(*e.keys[i]));
                    }
                    elements.emplace_back(attr, lower_expr(*e.items[i]));
                }
                effects.push_back(allocation("dict", std::move(elements), p));
                return seq(std::move(effects), p);
            }
            case ExprKind::Comprehension:
                return lower_comprehension(e);
            case ExprKind::BinOp:
            case ExprKind::Compare:
            case ExprKind::FString: {
                std::vector<NodePtr> parts;
                for (const auto& item : e.items) {
                    parts.push_back(lower_expr(*item));
                }
                parts.push_back(inert(p));
                return seq(std::move(parts), p);
            }
            case ExprKind::UnaryOp: {
                std::vector<NodePtr> parts;
                parts.push_back(lower_expr(*e.value));
                parts.push_back(inert(p));
                return seq(std::move(parts), p);
            }
            case ExprKind::BoolOp: {
                std::vector<NodePtr> values;
                for (const auto& item : e.items) {
                    values.push_back(lower_expr(*item));
                }
                return union_of({}, std::move(values), p);
            }
            case ExprKind::IfExp: {
                std::vector<NodePtr> prefix;
                prefix.push_back(lower_expr(*e.items[0]));
                std::vector<NodePtr> values;
                values.push_back(lower_expr(*e.items[1]));
                values.push_back(lower_expr(*e.items[2]));
                return union_of(std::move(prefix), std::move(values), p);
            }
            case ExprKind::NamedExpr:
                if (e.target->kind == ExprKind::Name) {
                    return make(Assign{e.target->text, lower_expr(*e.value), binding_for(e.target->text)}, p);
                }
                return lower_expr(*e.value);
            case ExprKind::Starred:
            case ExprKind::DoubleStarred:
            case ExprKind::Await:
                return lower_expr(*e.value);
            case ExprKind::Yield: {
                std::vector<NodePtr> parts;
                parts.push_back(make(Return{e.value ? lower_expr(*e.value) : inert(p)}, p));
                parts.push_back(inert(p));
                return seq(std::move(parts), p);
            }
            case ExprKind::YieldFrom:
                return make(Return{make(Iter{lower_expr(*e.value)}, e.value->pos)}, p);
        }
        return inert(p);
    }

    const ModuleUnit& unit_;
    IRModule out_;
    std::vector<Scope> scopes_;
    std::map<std::pair<int, int>, int> lambda_numbers_;
    std::set<std::string> module_defs_;
    int tmp_counter_ = 0;
    int alloc_counter_ = 0;
};

}  // namespace

std::string index_attr(long long i) { return "<idx>" + std::to_string(i); }
std::string dict_attr(const std::string& k) { return "<dict>" + k; }
std::string lambda_name(int n) { return "<lambda" + std::to_string(n) + ">"; }

IRModule lower(const ModuleUnit& unit) { return Lowerer(unit).run(); }

}  // namespace callflow::ir
