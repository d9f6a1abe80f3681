#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace callflow {

enum class Kind { Func, Var, Cls, Mod };

const char* to_string(Kind kind);

struct Definition {
    std::string identifier;
    Kind kind = Kind::Var;

    friend auto operator<=>(const Definition&, const Definition&) = default;
};

struct NamespacePath {
    std::vector<Definition> elements;

    NamespacePath() = default;
    explicit NamespacePath(std::vector<Definition> e) : elements(std::move(e)) {}

    static NamespacePath module(const std::string& dotted) { return NamespacePath({{dotted, Kind::Mod}}); }

    bool empty() const { return elements.empty(); }
    size_t size() const { return elements.size(); }
    const Definition& back() const { return elements.back(); }
    NamespacePath extended(const Definition& d) const;
    NamespacePath prefix(size_t n) const;

    /// "crypto.Crypto.apply"
    std::string str() const;

    friend auto operator<=>(const NamespacePath&, const NamespacePath&) = default;
};

struct QualifiedObject {
    NamespacePath ns;
    Definition def;

    /// The namespace this object opens: ns followed by def.
    NamespacePath inner() const { return ns.extended(def); }
    /// Name of the module the object belongs to (first namespace element,
    /// or the object itself for a module object).
    const std::string& root_module() const { return ns.empty() ? def.identifier : ns.elements.front().identifier; }
    /// "cryptops.encrypt"; a module object prints as its dotted name.
    std::string str() const;

    friend auto operator<=>(const QualifiedObject&, const QualifiedObject&) = default;
};

QualifiedObject module_object(const std::string& dotted);

}  // namespace callflow
