#include "callflow/analysis.hpp"

#include <algorithm>
#include <map>

namespace callflow {

namespace {

using Value = std::optional<QualifiedObject>;
using ObjectSet = std::set<QualifiedObject>;

const std::set<std::string> kBuiltins = {
    "abs", "aiter", "all", "anext", "any", "ascii", "bin", "bool", "breakpoint", "bytearray", "bytes",
    "callable", "chr", "classmethod", "compile", "complex", "copyright", "credits", "delattr", "dict", "dir",
    "divmod", "enumerate", "eval", "exec", "exit", "filter", "float", "format", "frozenset", "getattr",
    "globals", "hasattr", "hash", "help", "hex", "id", "input", "int", "isinstance", "issubclass", "iter",
    "len", "license", "list", "locals", "map", "max", "memoryview", "min", "next", "object", "oct", "open",
    "ord", "pow", "print", "property", "quit", "range", "repr", "reversed", "round", "set", "setattr",
    "slice", "sorted", "staticmethod", "str", "sum", "super", "tuple", "type", "vars", "zip", "__import__",
    "__name__", "__file__", "__doc__", "__package__", "__spec__", "__loader__", "__builtins__", "__debug__",
    "__dict__", "__class__", "__qualname__", "__module__", "__annotations__", "NotImplemented", "Ellipsis",
    "BaseException", "Exception", "ArithmeticError", "AssertionError", "AttributeError", "BufferError",
    "EOFError", "FloatingPointError", "GeneratorExit", "ImportError", "ModuleNotFoundError", "IndexError",
    "KeyError", "KeyboardInterrupt", "LookupError", "MemoryError", "NameError", "NotImplementedError",
    "OSError", "IOError", "EnvironmentError", "OverflowError", "RecursionError", "ReferenceError",
    "RuntimeError", "StopIteration", "StopAsyncIteration", "SyntaxError", "IndentationError", "TabError",
    "SystemError", "SystemExit", "TypeError", "UnboundLocalError", "UnicodeError", "UnicodeEncodeError",
    "UnicodeDecodeError", "UnicodeTranslateError", "ValueError", "ZeroDivisionError", "BlockingIOError",
    "ChildProcessError", "ConnectionError", "BrokenPipeError", "ConnectionAbortedError",
    "ConnectionRefusedError", "ConnectionResetError", "FileExistsError", "FileNotFoundError",
    "InterruptedError", "IsADirectoryError", "NotADirectoryError", "PermissionError", "ProcessLookupError",
    "TimeoutError", "Warning", "UserWarning", "DeprecationWarning", "PendingDeprecationWarning",
    "SyntaxWarning", "RuntimeWarning", "FutureWarning", "ImportWarning", "UnicodeWarning", "BytesWarning",
    "ResourceWarning", "EncodingWarning", "BaseExceptionGroup", "ExceptionGroup",
};

// Namespace length of the longest external attribute object, e.g.
// `os.path.join.x` but not `os.path.join.x.y`.
constexpr size_t kMaxExternalDepth = 3;

bool starts_with(const std::string& s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

bool is_allocation(const QualifiedObject& o) {
    const std::string& id = o.def.identifier;
    return o.def.kind == Kind::Var && (starts_with(id, "<list#") || starts_with(id, "<dict#") ||
                                       starts_with(id, "<tuple#") || starts_with(id, "<set#"));
}

bool is_thunk(const QualifiedObject& o) {
    return o.def.identifier == ir::kThunk && !o.ns.empty() && o.ns.back().kind == Kind::Func;
}

bool is_index_attr(const std::string& attr) { return starts_with(attr, "<idx>") || starts_with(attr, "<dict>"); }

QualifiedObject ret_of(const QualifiedObject& fn) { return {fn.inner(), {ir::kReturn, Kind::Var}}; }

// The function whose namespace `o` lives in (thunks and parameters).
QualifiedObject owner_of(const QualifiedObject& o) { return {o.ns.prefix(o.ns.size() - 1), o.ns.back()}; }

}  // namespace

std::string AnalysisDiagnostic::str() const {
    return module + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + message;
}

bool is_builtin_name(const std::string& name) { return kBuiltins.count(name) != 0; }

struct Evaluator::Impl {
    Evaluator& ev;
    AnalysisState& st;
    const ir::Node* current = nullptr;

    // ---- helpers -------------------------------------------------------

    void diagnose(const std::string& message) {
        ev.diagnostics_.insert({ev.module_, current ? current->pos : syntax::Pos{}, message});
    }

    bool external(const QualifiedObject& o) const { return st.is_external(o); }

    // Objects that carry attributes of their own: functions, classes,
    // modules, container allocations, generator thunks and anything external.
    bool is_value_object(const QualifiedObject& o) const {
        return o.def.kind != Kind::Var || is_allocation(o) || is_thunk(o) || external(o);
    }

    // Value objects reachable from `from` without passing through another
    // value object.
    ObjectSet value_targets(const QualifiedObject& from) const {
        ObjectSet out;
        ObjectSet seen;
        std::vector<QualifiedObject> stack{from};
        while (!stack.empty()) {
            QualifiedObject o = std::move(stack.back());
            stack.pop_back();
            if (!seen.insert(o).second) {
                continue;
            }
            if (is_value_object(o)) {
                out.insert(o);
                continue;
            }
            for (const auto& next : st.graph.successors(o)) {
                stack.push_back(next);
            }
        }
        return out;
    }

    // Functions and classes a call through `from` may invoke. Functions do
    // not stop the search: an overwritten method keeps its old target.
    ObjectSet call_targets(const QualifiedObject& from) const {
        ObjectSet out;
        ObjectSet seen;
        std::vector<QualifiedObject> stack{from};
        while (!stack.empty()) {
            QualifiedObject o = std::move(stack.back());
            stack.pop_back();
            if (!seen.insert(o).second) {
                continue;
            }
            if (o.def.kind == Kind::Func || o.def.kind == Kind::Cls) {
                out.insert(o);
                if (o.def.kind == Kind::Cls) {
                    continue;
                }
            }
            for (const auto& next : st.graph.successors(o)) {
                stack.push_back(next);
            }
        }
        return out;
    }

    Value junction(const std::string& tag, const ObjectSet& values) {
        if (values.empty()) {
            return std::nullopt;
        }
        if (values.size() == 1) {
            return *values.begin();
        }
        QualifiedObject j{st.ns, {"<" + tag + std::to_string(current->id) + ">", Kind::Var}};
        for (const auto& v : values) {
            st.add_edge(j, v);
        }
        return j;
    }

    std::vector<QualifiedObject> mro(const QualifiedObject& cls) {
        try {
            return linearize(st.hierarchy, cls);
        } catch (const InconsistentMRO& e) {
            diagnose(e.what());
            return depth_first_order(st.hierarchy, cls);
        }
    }

    Value mro_lookup(const std::vector<QualifiedObject>& order, const std::string& attr) {
        for (const auto& c : order) {
            if (external(c)) {
                continue;
            }
            NamespacePath inner = c.inner();
            if (auto def = st.scopes.find(inner, attr)) {
                return QualifiedObject{std::move(inner), *def};
            }
        }
        return std::nullopt;
    }

    Value class_member(const QualifiedObject& cls, const std::string& attr) { return mro_lookup(mro(cls), attr); }

    // Element reads on containers: an exact key also sees wildcard writes,
    // and the wildcard sees every element.
    ObjectSet index_read(const QualifiedObject& t, const std::string& attr) {
        ObjectSet out;
        NamespacePath inner = t.inner();
        for (const auto& child : st.scopes.children(inner)) {
            bool match = attr == ir::kWildcardIndex ? is_index_attr(child.identifier)
                                                    : child.identifier == attr || child.identifier == ir::kWildcardIndex;
            if (match) {
                out.insert({inner, child});
            }
        }
        return out;
    }

    // Attribute lookup on a single value object.
    ObjectSet lookup_on(const QualifiedObject& t, const std::string& attr) {
        if (external(t)) {
            // Deeper chains collapse into the receiver so that loops such
            // as `e = e.cause` keep the domain finite.
            if (t.ns.size() >= kMaxExternalDepth) {
                return {t};
            }
            return {QualifiedObject{t.inner(), {attr, Kind::Func}}};
        }
        if (t.def.kind == Kind::Cls) {
            if (auto found = class_member(t, attr)) {
                return {*found};
            }
            return {};
        }
        if (t.def.kind == Kind::Mod) {
            if (auto def = st.scopes.find(t.inner(), attr)) {
                return {QualifiedObject{t.inner(), *def}};
            }
            std::string sub = t.def.identifier + "." + attr;
            if (st.module_roots.count(sub)) {
                return {module_object(sub)};
            }
            return {};
        }
        if (is_index_attr(attr)) {
            return index_read(t, attr);
        }
        if (auto def = st.scopes.find(t.inner(), attr)) {
            return {QualifiedObject{t.inner(), *def}};
        }
        return {};
    }

    // `<super>` lives in a method of class C; lookups continue after C in
    // the linearization of each class the instance may have.
    ObjectSet super_lookup(const QualifiedObject& proxy, const std::string& attr) {
        ObjectSet out;
        const NamespacePath& ns = proxy.ns;
        if (ns.size() < 2 || ns.elements[ns.size() - 2].kind != Kind::Cls) {
            return out;
        }
        QualifiedObject defining{ns.prefix(ns.size() - 2), ns.elements[ns.size() - 2]};
        ObjectSet instances;
        for (const auto& t : value_targets(proxy)) {
            if (t.def.kind == Kind::Cls) {
                instances.insert(t);
            }
        }
        if (instances.empty()) {
            instances.insert(defining);
        }
        for (const auto& inst : instances) {
            auto order = mro(inst);
            auto it = std::find(order.begin(), order.end(), defining);
            std::vector<QualifiedObject> rest;
            if (it == order.end()) {
                auto own = mro(defining);
                rest.assign(own.begin() + 1, own.end());
            } else {
                rest.assign(it + 1, order.end());
            }
            if (auto found = mro_lookup(rest, attr)) {
                out.insert(*found);
            }
        }
        return out;
    }

    ObjectSet attribute_objects(const QualifiedObject& receiver, const std::string& attr) {
        if (receiver.def.identifier == ir::kSuper) {
            return super_lookup(receiver, attr);
        }
        ObjectSet targets = value_targets(receiver);
        if (targets.empty()) {
            targets.insert(receiver);
        }
        ObjectSet out;
        for (const auto& t : targets) {
            auto found = lookup_on(t, attr);
            out.insert(found.begin(), found.end());
        }
        return out;
    }

    const FunctionInfo* info_of(const QualifiedObject& fn) const {
        auto it = st.functions.find(fn);
        return it == st.functions.end() ? nullptr : &it->second;
    }

    QualifiedObject caller() const {
        for (size_t i = st.ns.size(); i-- > 0;) {
            const Definition& d = st.ns.elements[i];
            if (d.kind == Kind::Func || d.kind == Kind::Mod) {
                return {st.ns.prefix(i), d};
            }
        }
        return {};
    }

    void report_call(const ObjectSet& callees) {
        if (ev.observer_ && !callees.empty()) {
            ev.observer_({caller(), callees, ev.module_, current->pos});
        }
    }

    // ---- argument binding ---------------------------------------------

    struct EvaluatedArg {
        std::string key;
        Value value;
    };

    QualifiedObject param_object(const QualifiedObject& fn, const std::string& name) {
        return {fn.inner(), {name, Kind::Var}};
    }

    void flow(const QualifiedObject& to, const Value& from) {
        if (from) {
            st.add_edge(to, *from);
        }
    }

    void bind(const QualifiedObject& fn, const FunctionInfo& info, const std::vector<EvaluatedArg>& args,
              const Value& self_value, bool shift) {
        if (!ev.options_.interprocedural_flow) {
            return;
        }
        const int offset = shift ? 1 : 0;
        std::set<std::string> bound;
        const ParamInfo* varargs = nullptr;
        const ParamInfo* varkw = nullptr;
        int positional_params = 0;
        for (const auto& p : info.params) {
            if (p.role == ParamRole::VarArgs) {
                varargs = &p;
            } else if (p.role == ParamRole::VarKw) {
                varkw = &p;
            } else if (p.position >= 0) {
                ++positional_params;
            }
        }
        auto by_position = [&](int pos) -> const ParamInfo* {
            for (const auto& p : info.params) {
                if (p.role == ParamRole::Normal && p.position == pos) {
                    return &p;
                }
            }
            return nullptr;
        };
        if (shift) {
            if (const ParamInfo* self = by_position(0)) {
                flow(param_object(fn, self->name), self_value);
                bound.insert(self->name);
            }
        }
        int positional_args = 0;
        for (const auto& arg : args) {
            if (arg.key.empty() || !std::isdigit(static_cast<unsigned char>(arg.key[0]))) {
                continue;
            }
            int index = std::stoi(arg.key);
            positional_args = std::max(positional_args, index + 1);
            int pos = index + offset;
            if (const ParamInfo* p = by_position(pos)) {
                flow(param_object(fn, p->name), arg.value);
                bound.insert(p->name);
            } else if (varargs) {
                QualifiedObject holder = param_object(fn, varargs->name);
                Definition slot{ir::index_attr(pos - positional_params), Kind::Var};
                st.add_scope(holder.inner(), slot);
                flow({holder.inner(), slot}, arg.value);
            }
        }
        for (const auto& arg : args) {
            if (arg.key.empty() || std::isdigit(static_cast<unsigned char>(arg.key[0])) || arg.key == "*" ||
                arg.key == "**") {
                continue;
            }
            const ParamInfo* target = nullptr;
            for (const auto& p : info.params) {
                if (p.role == ParamRole::Normal && !p.positional_only && p.name == arg.key) {
                    target = &p;
                }
            }
            if (target) {
                flow(param_object(fn, target->name), arg.value);
                bound.insert(target->name);
            } else if (varkw) {
                QualifiedObject holder = param_object(fn, varkw->name);
                Definition slot{ir::dict_attr(arg.key), Kind::Var};
                st.add_scope(holder.inner(), slot);
                flow({holder.inner(), slot}, arg.value);
            }
        }
        // Unpacked arguments reach every parameter that nothing else bound.
        for (const auto& arg : args) {
            if ((arg.key != "*" && arg.key != "**") || !arg.value) {
                continue;
            }
            bool star = arg.key == "*";
            for (const auto& p : info.params) {
                if (p.role != ParamRole::Normal || bound.count(p.name)) {
                    continue;
                }
                if (star && (p.position < 0 || p.position < positional_args + offset)) {
                    continue;
                }
                std::string key = star ? std::string(ir::kWildcardIndex) : ir::dict_attr(p.name);
                for (const auto& t : value_targets(*arg.value)) {
                    for (const auto& element : lookup_on(t, key)) {
                        st.add_edge(param_object(fn, p.name), element);
                    }
                }
            }
            const ParamInfo* rest = star ? varargs : varkw;
            if (rest) {
                QualifiedObject holder = param_object(fn, rest->name);
                Definition slot{ir::kWildcardIndex, Kind::Var};
                st.add_scope(holder.inner(), slot);
                for (const auto& t : value_targets(*arg.value)) {
                    for (const auto& element : lookup_on(t, ir::kWildcardIndex)) {
                        st.add_edge({holder.inner(), slot}, element);
                    }
                }
            }
        }
    }

    // Invokes one function object. Generators produce a thunk and no call
    // edge; the edge appears when the thunk is iterated.
    Value invoke(const QualifiedObject& fn, const std::vector<EvaluatedArg>& args, const Value& self_value,
                 bool bound_receiver, ObjectSet& edges) {
        const FunctionInfo* info = info_of(fn);
        if (!info) {
            edges.insert(fn);
            return std::nullopt;
        }
        bool shift = false;
        switch (info->method_kind) {
            case MethodKind::Method:
            case MethodKind::Property:
                shift = bound_receiver;
                break;
            case MethodKind::ClassMethod:
                shift = true;
                break;
            case MethodKind::StaticMethod:
            case MethodKind::Function:
                break;
        }
        bind(fn, *info, args, self_value, shift);
        if (info->is_generator) {
            QualifiedObject thunk{fn.inner(), {ir::kThunk, Kind::Var}};
            st.add_scope(thunk.ns, thunk.def);
            return thunk;
        }
        edges.insert(fn);
        return ret_of(fn);
    }

    // Instantiation: run __init__ found through the MRO with self bound to
    // the class; the value is the class itself.
    Value instantiate(const QualifiedObject& cls, const std::vector<EvaluatedArg>& args, ObjectSet& edges) {
        if (external(cls)) {
            edges.insert(cls);
            return std::nullopt;
        }
        if (auto init = class_member(cls, "__init__"); init && init->def.kind == Kind::Func) {
            Value ignored = invoke(*init, args, cls, true, edges);
            (void)ignored;
        }
        return cls;
    }

    // Instances are represented by their class, so whether a receiver is
    // the class itself depends on the expression: constructor and call
    // results are instances.
    static bool names_class(const ir::Node& receiver_node, const QualifiedObject& value) {
        return value.def.kind == Kind::Cls && !receiver_node.as<ir::New>() && !receiver_node.as<ir::Call>();
    }

    // Properties read through an instance run the getter.
    ObjectSet apply_properties(const ObjectSet& found, const QualifiedObject& receiver, bool receiver_is_class,
                               ObjectSet& edges) {
        ObjectSet out;
        for (const auto& f : found) {
            const FunctionInfo* info = f.def.kind == Kind::Func ? info_of(f) : nullptr;
            if (info && info->method_kind == MethodKind::Property && !receiver_is_class) {
                if (Value v = invoke(f, {}, receiver, true, edges)) {
                    out.insert(*v);
                }
            } else {
                out.insert(f);
            }
        }
        return out;
    }

    // ---- rules ---------------------------------------------------------

    Value eval(const ir::Node& node) {
        const ir::Node* saved = current;
        current = &node;
        Value v = std::visit([&](const auto& p) { return rule(p); }, node.payload);
        current = saved;
        return v;
    }

    Value rule(const ir::ObjectRef& p) {
        if (p.object && !external(*p.object) && !p.object->ns.empty() && st.scopes.has_path(p.object->ns)) {
            st.add_scope(p.object->ns, p.object->def);
        }
        return p.object;
    }

    Value rule(const ir::Identifier& p) {
        if (auto obj = get_object(st.scopes, st.ns, p.name)) {
            return obj;
        }
        if (!is_builtin_name(p.name)) {
            diagnose("unresolved name '" + p.name + "'");
        }
        return std::nullopt;
    }

    QualifiedObject assign_target(const std::string& name, ir::Binding binding) {
        NamespacePath where = st.ns;
        if (binding == ir::Binding::Global) {
            where = st.ns.prefix(1);
        } else if (binding == ir::Binding::Nonlocal) {
            where = st.ns.prefix(std::max<size_t>(1, st.ns.size() - 1));
            for (size_t n = st.ns.size() - 1; n > 1; --n) {
                NamespacePath candidate = st.ns.prefix(n);
                if (candidate.back().kind == Kind::Func && st.scopes.find(candidate, name)) {
                    where = std::move(candidate);
                    break;
                }
            }
        }
        Definition def{name, Kind::Var};
        st.add_scope(where, def);
        return {std::move(where), def};
    }

    Value rule(const ir::Assign& p) {
        Value v = eval(*p.value);
        QualifiedObject lhs = assign_target(p.target, p.binding);
        flow(lhs, v);
        return v;
    }

    Value rule(const ir::FunctionDef& p) {
        QualifiedObject fn{st.ns, {p.name, Kind::Func}};
        st.add_scope(fn.ns, fn.def);
        FunctionInfo info;
        info.method_kind = p.method_kind;
        info.is_generator = p.is_generator;
        std::vector<Value> defaults;
        for (const auto& param : p.params) {
            info.params.push_back(param.info);
            defaults.push_back(param.default_value ? eval(*param.default_value) : std::nullopt);
        }
        st.set_function(fn, info);
        NamespacePath inner = fn.inner();
        for (size_t i = 0; i < p.params.size(); ++i) {
            Definition def{p.params[i].info.name, Kind::Var};
            st.add_scope(inner, def);
            flow({inner, def}, defaults[i]);
        }
        st.add_scope(inner, {ir::kReturn, Kind::Var});
        NamespacePath saved = std::move(st.ns);
        st.ns = inner;
        eval(*p.body);
        st.ns = std::move(saved);
        return fn;
    }

    Value rule(const ir::Return& p) {
        Value v = eval(*p.value);
        for (size_t i = st.ns.size(); i-- > 0;) {
            if (st.ns.elements[i].kind == Kind::Func) {
                QualifiedObject ret = ret_of({st.ns.prefix(i), st.ns.elements[i]});
                flow(ret, v);
                return ret;
            }
        }
        diagnose("'return' outside function");
        return std::nullopt;
    }

    std::vector<EvaluatedArg> eval_args(const std::vector<ir::Arg>& args) {
        std::vector<EvaluatedArg> out;
        for (const auto& a : args) {
            out.push_back({a.key, eval(*a.value)});
        }
        return out;
    }

    Value rule(const ir::Call& p) {
        // Callees: either a method looked up on a receiver or a plain value.
        ObjectSet direct;
        Value receiver;
        bool receiver_is_class = false;
        ObjectSet edges;
        if (const auto* access = p.callee->as<ir::AttrAccess>()) {
            const ir::Node* saved = current;
            current = p.callee.get();
            receiver = eval(*access->receiver);
            if (receiver) {
                receiver_is_class = names_class(*access->receiver, *receiver);
                ObjectSet found = attribute_objects(*receiver, access->attr);
                direct = apply_properties(found, *receiver, receiver_is_class, edges);
                if (direct.empty() && !value_targets(*receiver).empty()) {
                    diagnose("unresolved attribute '" + access->attr + "'");
                }
            }
            current = saved;
        } else if (Value callee = eval(*p.callee)) {
            direct.insert(*callee);
        }
        std::vector<EvaluatedArg> args = eval_args(p.args);

        ObjectSet results;
        bool reached_package_code = false;
        for (const auto& d : direct) {
            for (const auto& target : call_targets(d)) {
                if (!external(target)) {
                    reached_package_code = true;
                }
                if (target.def.kind == Kind::Cls) {
                    // A class reached through a variable may be an instance
                    // being called.
                    if (target != d) {
                        if (auto call = class_member(target, "__call__"); call && call->def.kind == Kind::Func) {
                            if (Value v = invoke(*call, args, target, true, edges)) {
                                results.insert(*v);
                            }
                            continue;
                        }
                    }
                    if (Value v = instantiate(target, args, edges)) {
                        results.insert(*v);
                    }
                    continue;
                }
                if (external(target)) {
                    edges.insert(target);
                    continue;
                }
                bool bound = receiver && !receiver_is_class;
                Value self_value = receiver;
                if (Value v = invoke(target, args, self_value, bound, edges)) {
                    results.insert(*v);
                }
            }
        }
        report_call(edges);
        if (p.decorator && !reached_package_code && !args.empty()) {
            // Unknown decorators are assumed to return the function.
            return args.front().value;
        }
        return junction("call", results);
    }

    Value rule(const ir::New& p) {
        Value cls = get_object(st.scopes, st.ns, p.cls);
        std::vector<EvaluatedArg> args = eval_args(p.args);
        if (!cls) {
            diagnose("unresolved class '" + p.cls + "'");
            return std::nullopt;
        }
        ObjectSet edges;
        ObjectSet results;
        for (const auto& target : call_targets(*cls)) {
            if (target.def.kind == Kind::Cls) {
                if (Value v = instantiate(target, args, edges)) {
                    results.insert(*v);
                }
            } else if (external(target)) {
                edges.insert(target);
            } else if (Value v = invoke(target, args, std::nullopt, false, edges)) {
                results.insert(*v);
            }
        }
        report_call(edges);
        return junction("new", results);
    }

    Value rule(const ir::ClassDef& p) {
        QualifiedObject cls{st.ns, {p.name, Kind::Cls}};
        st.add_scope(cls.ns, cls.def);
        std::vector<QualifiedObject> bases;
        for (const auto& b : p.bases) {
            if (Value v = eval(*b)) {
                for (const auto& t : value_targets(*v)) {
                    if ((t.def.kind == Kind::Cls || external(t)) && t != cls) {
                        bases.push_back(t);
                    }
                }
            }
        }
        st.add_parents(cls, bases);
        NamespacePath saved = std::move(st.ns);
        st.ns = cls.inner();
        eval(*p.body);
        st.ns = std::move(saved);
        return cls;
    }

    Value rule(const ir::AttrAccess& p) {
        Value receiver = eval(*p.receiver);
        if (!receiver) {
            return std::nullopt;
        }
        ObjectSet edges;
        ObjectSet found = attribute_objects(*receiver, p.attr);
        found = apply_properties(found, *receiver, names_class(*p.receiver, *receiver), edges);
        report_call(edges);
        if (found.empty()) {
            if (!value_targets(*receiver).empty() && !is_index_attr(p.attr)) {
                diagnose("unresolved attribute '" + p.attr + "'");
            }
            return std::nullopt;
        }
        return junction("attr", found);
    }

    Value rule(const ir::AttrAssign& p) {
        Value receiver = eval(*p.receiver);
        Value v = eval(*p.value);
        if (!receiver) {
            return std::nullopt;
        }
        ObjectSet targets = value_targets(*receiver);
        if (targets.empty()) {
            targets.insert(*receiver);
        }
        Value last;
        for (const auto& t : targets) {
            if (external(t)) {
                continue;
            }
            Value found;
            if (t.def.kind == Kind::Cls) {
                found = class_member(t, p.attr);
            } else if (auto def = st.scopes.find(t.inner(), p.attr)) {
                found = QualifiedObject{t.inner(), *def};
            }
            if (!found) {
                Definition def{p.attr, Kind::Var};
                st.add_scope(t.inner(), def);
                found = QualifiedObject{t.inner(), def};
            }
            flow(*found, v);
            last = found;
        }
        return last;
    }

    Value rule(const ir::Import& p) {
        bool known = st.module_roots.count(p.module) != 0;
        if (p.name == "*") {
            if (!known) {
                diagnose("star import from unresolved module '" + p.module + "'");
                return std::nullopt;
            }
            NamespacePath mod = NamespacePath::module(p.module);
            std::vector<Definition> names = st.scopes.children(mod);
            for (const auto& def : names) {
                if (def.identifier.empty() || def.identifier[0] == '_' || def.identifier[0] == '<') {
                    continue;
                }
                flow(assign_target(def.identifier, ir::Binding::Local), QualifiedObject{mod, def});
            }
            return std::nullopt;
        }
        Value target;
        if (p.name == p.module) {
            target = module_object(p.module);
        } else if (known) {
            NamespacePath mod = NamespacePath::module(p.module);
            if (auto def = st.scopes.find(mod, p.name)) {
                target = QualifiedObject{mod, *def};
            } else if (st.module_roots.count(p.module + "." + p.name)) {
                target = module_object(p.module + "." + p.name);
            } else {
                diagnose("cannot import '" + p.name + "' from '" + p.module + "'");
            }
        } else {
            target = QualifiedObject{NamespacePath::module(p.module), {p.name, Kind::Func}};
        }
        QualifiedObject alias = assign_target(p.alias, ir::Binding::Local);
        flow(alias, target);
        return alias;
    }

    // Iterating a generator thunk runs the generator; iterating an
    // iterable instance runs __iter__ and then __next__.
    void iterate_target(const QualifiedObject& t, ObjectSet& results, ObjectSet& edges, int depth) {
        if (is_thunk(t)) {
            QualifiedObject fn = owner_of(t);
            edges.insert(fn);
            results.insert(ret_of(fn));
            return;
        }
        if (is_allocation(t)) {
            auto elements = index_read(t, ir::kWildcardIndex);
            results.insert(elements.begin(), elements.end());
            return;
        }
        if (t.def.kind != Kind::Cls || external(t)) {
            return;
        }
        Value iter_fn = class_member(t, "__iter__");
        if (iter_fn && iter_fn->def.kind == Kind::Func && depth == 0) {
            Value iterator = invoke(*iter_fn, {}, t, true, edges);
            if (iterator) {
                for (const auto& it : value_targets(*iterator)) {
                    iterate_target(it, results, edges, depth + 1);
                }
            }
            return;
        }
        if (Value next_fn = class_member(t, "__next__"); next_fn && next_fn->def.kind == Kind::Func) {
            if (Value v = invoke(*next_fn, {}, t, true, edges)) {
                results.insert(*v);
            }
        }
    }

    Value rule(const ir::Iter& p) {
        Value v = eval(*p.value);
        if (!v) {
            return std::nullopt;
        }
        ObjectSet results;
        ObjectSet edges;
        for (const auto& t : value_targets(*v)) {
            iterate_target(t, results, edges, 0);
        }
        report_call(edges);
        return junction("iter", results);
    }

    Value rule(const ir::Seq& p) {
        const ir::Seq* s = &p;
        while (true) {
            eval(*s->first);
            const ir::Node& rest = *s->second;
            const auto* next = rest.as<ir::Seq>();
            if (!next) {
                return eval(rest);
            }
            s = next;
        }
    }
};

Evaluator::Evaluator(AnalysisState& state, AnalysisOptions options, CallObserver observer)
    : state_(state), options_(options), observer_(std::move(observer)) {}

std::optional<QualifiedObject> Evaluator::eval_module(const ir::IRModule& module) {
    module_ = module.module_name;
    state_.module_roots.insert(module.module_name);
    if (state_.scopes.add_root(module.module_name)) {
        ++state_.version;
    }
    state_.ns = NamespacePath::module(module.module_name);
    Impl impl{*this, state_};
    return impl.eval(*module.body);
}

std::optional<QualifiedObject> Evaluator::eval(const ir::Node& node) {
    Impl impl{*this, state_};
    return impl.eval(node);
}

EvalResult eval(AnalysisState state, const ir::Node& expr) {
    if (state.ns.empty()) {
        state.ns = NamespacePath::module("__main__");
        state.module_roots.insert("__main__");
        state.scopes.add_root("__main__");
    }
    Evaluator evaluator(state);
    Value v = evaluator.eval(expr);
    std::vector<AnalysisDiagnostic> diagnostics(evaluator.diagnostics().begin(), evaluator.diagnostics().end());
    return {v, std::move(state), std::move(diagnostics)};
}

AnalysisState initial_state(const std::vector<std::string>& package_modules) {
    AnalysisState state;
    for (const auto& m : package_modules) {
        state.module_roots.insert(m);
        state.scopes.add_root(m);
    }
    return state;
}

std::pair<AnalysisState, FixpointReport> run_fixpoint(const std::vector<const ir::IRModule*>& modules,
                                                      AnalysisState initial, const AnalysisOptions& options) {
    if (options.max_passes < 1) {
        throw std::invalid_argument("max_passes must be at least 1");
    }
    AnalysisState state = std::move(initial);
    for (const auto* m : modules) {
        state.module_roots.insert(m->module_name);
        state.scopes.add_root(m->module_name);
    }
    FixpointReport report;
    Evaluator evaluator(state, options);
    AssignmentGraph previous;
    for (int pass = 1; pass <= options.max_passes; ++pass) {
        uint64_t before = state.version;
        evaluator.clear_diagnostics();
        if (options.verify_monotonic) {
            previous = state.graph;
        }
        for (const auto* m : modules) {
            evaluator.eval_module(*m);
        }
        if (options.verify_monotonic && !state.graph.includes(previous)) {
            throw MonotonicityViolation("assignment graph lost edges in pass " + std::to_string(pass));
        }
        report.iterations = pass;
        if (state.version == before) {
            report.converged = true;
            break;
        }
    }
    state.ns = NamespacePath();
    if (!report.converged) {
        throw NonConvergence(options.max_passes);
    }
    report.diagnostics.assign(evaluator.diagnostics().begin(), evaluator.diagnostics().end());
    return {std::move(state), std::move(report)};
}

std::pair<AnalysisState, FixpointReport> run_fixpoint(const std::vector<ir::IRModule>& modules,
                                                      AnalysisState initial, const AnalysisOptions& options) {
    return run_fixpoint(topological_order(modules), std::move(initial), options);
}

std::vector<const ir::IRModule*> topological_order(const std::vector<ir::IRModule>& modules) {
    std::map<std::string, const ir::IRModule*> by_name;
    for (const auto& m : modules) {
        by_name[m.module_name] = &m;
    }
    std::vector<const ir::IRModule*> order;
    std::set<std::string> done;
    std::set<std::string> active;
    std::function<void(const ir::IRModule&)> visit = [&](const ir::IRModule& m) {
        if (done.count(m.module_name) || !active.insert(m.module_name).second) {
            return;
        }
        std::vector<std::string> deps;
        for (const auto& imported : m.imports) {
            // Importing a.b.c runs a, a.b and a.b.c.
            for (size_t dot = 0; dot != std::string::npos;) {
                dot = imported.find('.', dot + 1);
                deps.push_back(imported.substr(0, dot));
            }
        }
        for (const auto& d : deps) {
            if (auto it = by_name.find(d); it != by_name.end() && d != m.module_name) {
                visit(*it->second);
            }
        }
        active.erase(m.module_name);
        done.insert(m.module_name);
        order.push_back(&m);
    };
    for (const auto& [name, m] : by_name) {
        visit(*m);
    }
    return order;
}

}  // namespace callflow
