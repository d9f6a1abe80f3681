#include "callflow/definition.hpp"

namespace callflow {

const char* to_string(Kind kind) {
    switch (kind) {
        case Kind::Func: return "func";
        case Kind::Var: return "var";
        case Kind::Cls: return "cls";
        case Kind::Mod: return "mod";
    }
    return "?";
}

NamespacePath NamespacePath::extended(const Definition& d) const {
    NamespacePath out = *this;
    out.elements.push_back(d);
    return out;
}

NamespacePath NamespacePath::prefix(size_t n) const {
    return NamespacePath(std::vector<Definition>(elements.begin(), elements.begin() + static_cast<long>(n)));
}

std::string NamespacePath::str() const {
    std::string out;
    for (const auto& d : elements) {
        if (!out.empty()) {
            out += '.';
        }
        out += d.identifier;
    }
    return out;
}

std::string QualifiedObject::str() const {
    if (ns.empty()) {
        return def.identifier;
    }
    return ns.str() + "." + def.identifier;
}

QualifiedObject module_object(const std::string& dotted) { return {NamespacePath(), {dotted, Kind::Mod}}; }

}  // namespace callflow
