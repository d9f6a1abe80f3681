#include <sstream>

#include "callflow/ir.hpp"

namespace callflow::ir {

namespace {

void print(std::ostream& out, const Node& n);

void print_args(std::ostream& out, const std::vector<Arg>& args) {
    out << "{";
    for (size_t i = 0; i < args.size(); ++i) {
        out << (i ? ", " : "") << args[i].key << ": ";
        print(out, *args[i].value);
    }
    out << "}";
}

const char* method_tag(MethodKind k) {
    switch (k) {
        case MethodKind::Function: return "";
        case MethodKind::Method: return " method";
        case MethodKind::StaticMethod: return " staticmethod";
        case MethodKind::ClassMethod: return " classmethod";
        case MethodKind::Property: return " property";
    }
    return "";
}

void print(std::ostream& out, const Node& n) {
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ObjectRef>) {
                if (p.object) {
                    out << "Obj(" << p.object->str() << ":" << to_string(p.object->def.kind) << ")";
                } else {
                    out << "Obj(-)";
                }
            } else if constexpr (std::is_same_v<T, Identifier>) {
                out << "Id(" << p.name << ")";
            } else if constexpr (std::is_same_v<T, Assign>) {
                out << "Assign(" << (p.binding == Binding::Global     ? "global "
                                     : p.binding == Binding::Nonlocal ? "nonlocal "
                                                                      : "")
                    << p.target << ", ";
                print(out, *p.value);
                out << ")";
            } else if constexpr (std::is_same_v<T, FunctionDef>) {
                out << "Def(" << p.name << method_tag(p.method_kind) << (p.is_generator ? " generator" : "")
                    << ", [";
                for (size_t i = 0; i < p.params.size(); ++i) {
                    const auto& param = p.params[i];
                    out << (i ? ", " : "")
                        << (param.info.role == ParamRole::VarArgs  ? "*"
                            : param.info.role == ParamRole::VarKw ? "**"
                                                                   : "")
                        << param.info.name;
                    if (param.default_value) {
                        out << "=";
                        print(out, *param.default_value);
                    }
                }
                out << "], ";
                print(out, *p.body);
                out << ")";
            } else if constexpr (std::is_same_v<T, Return>) {
                out << "Return(";
                print(out, *p.value);
                out << ")";
            } else if constexpr (std::is_same_v<T, Call>) {
                out << (p.decorator ? "Decorate(" : "Call(");
                print(out, *p.callee);
                out << ", ";
                print_args(out, p.args);
                out << ")";
            } else if constexpr (std::is_same_v<T, ClassDef>) {
                out << "Class(" << p.name << ", [";
                for (size_t i = 0; i < p.bases.size(); ++i) {
                    out << (i ? ", " : "");
                    print(out, *p.bases[i]);
                }
                out << "], ";
                print(out, *p.body);
                out << ")";
            } else if constexpr (std::is_same_v<T, AttrAccess>) {
                out << "Attr(";
                print(out, *p.receiver);
                out << ", " << p.attr << ")";
            } else if constexpr (std::is_same_v<T, AttrAssign>) {
                out << "SetAttr(";
                print(out, *p.receiver);
                out << ", " << p.attr << ", ";
                print(out, *p.value);
                out << ")";
            } else if constexpr (std::is_same_v<T, New>) {
                out << "New(" << p.cls << ", ";
                print_args(out, p.args);
                out << ")";
            } else if constexpr (std::is_same_v<T, Import>) {
                out << "Import(" << p.name << ", " << p.module << ", " << p.alias << ")";
            } else if constexpr (std::is_same_v<T, Iter>) {
                out << "Iter(";
                print(out, *p.value);
                out << ")";
            } else if constexpr (std::is_same_v<T, Seq>) {
                // Right-nested chains print flat.
                out << "Seq(";
                print(out, *p.first);
                const Node* rest = p.second.get();
                while (const auto* s = rest->as<Seq>()) {
                    out << ", ";
                    print(out, *s->first);
                    rest = s->second.get();
                }
                out << ", ";
                print(out, *rest);
                out << ")";
            }
        },
        n.payload);
}

}  // namespace

std::string to_string(const Node& node) {
    std::ostringstream out;
    print(out, node);
    return out.str();
}

void walk(const Node& node, const std::function<void(const Node&)>& fn) {
    fn(node);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            auto sub = [&](const NodePtr& c) {
                if (c) {
                    walk(*c, fn);
                }
            };
            if constexpr (std::is_same_v<T, Assign> || std::is_same_v<T, Return> || std::is_same_v<T, Iter>) {
                sub(p.value);
            } else if constexpr (std::is_same_v<T, FunctionDef>) {
                for (const auto& param : p.params) {
                    sub(param.default_value);
                }
                sub(p.body);
            } else if constexpr (std::is_same_v<T, Call>) {
                sub(p.callee);
                for (const auto& a : p.args) {
                    sub(a.value);
                }
            } else if constexpr (std::is_same_v<T, New>) {
                for (const auto& a : p.args) {
                    sub(a.value);
                }
            } else if constexpr (std::is_same_v<T, ClassDef>) {
                for (const auto& b : p.bases) {
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
        node.payload);
}

}  // namespace callflow::ir
