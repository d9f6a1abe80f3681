#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "callflow/definition.hpp"

namespace callflow {

class InconsistentMRO : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Edges u -> v meaning "u may hold v".
class AssignmentGraph {
public:
    using EdgeMap = std::map<QualifiedObject, std::set<QualifiedObject>>;

    bool add_edge(const QualifiedObject& from, const QualifiedObject& to);
    const std::set<QualifiedObject>& successors(const QualifiedObject& from) const;
    bool has_edge(const QualifiedObject& from, const QualifiedObject& to) const;
    const EdgeMap& edges() const { return edges_; }
    size_t edge_count() const { return count_; }
    /// True when every edge of `other` is also an edge here.
    bool includes(const AssignmentGraph& other) const;

    friend bool operator==(const AssignmentGraph& a, const AssignmentGraph& b) { return a.edges_ == b.edges_; }

private:
    EdgeMap edges_;
    size_t count_ = 0;
};

/// Children per namespace path, in insertion order. Module roots are paths
/// of length one.
class ScopeTree {
public:
    bool add(const NamespacePath& ns, const Definition& def);
    bool add_root(const std::string& module);
    bool has_path(const NamespacePath& ns) const { return children_.count(ns) != 0; }
    const std::vector<Definition>& children(const NamespacePath& ns) const;
    /// Most recently added definition named `identifier` directly under `ns`.
    std::optional<Definition> find(const NamespacePath& ns, const std::string& identifier) const;
    const std::map<NamespacePath, std::vector<Definition>>& paths() const { return children_; }

    friend bool operator==(const ScopeTree& a, const ScopeTree& b) { return a.children_ == b.children_; }

private:
    std::map<NamespacePath, std::vector<Definition>> children_;
};

class ClassHierarchy {
public:
    /// Appends bases not yet recorded for `cls`, keeping first-seen order.
    bool add_parents(const QualifiedObject& cls, const std::vector<QualifiedObject>& bases);
    const std::vector<QualifiedObject>& parents(const QualifiedObject& cls) const;
    bool contains(const QualifiedObject& cls) const { return parents_.count(cls) != 0; }
    const std::map<QualifiedObject, std::vector<QualifiedObject>>& all() const { return parents_; }

    friend bool operator==(const ClassHierarchy& a, const ClassHierarchy& b) { return a.parents_ == b.parents_; }

private:
    std::map<QualifiedObject, std::vector<QualifiedObject>> parents_;
};

enum class ParamRole { Normal, VarArgs, VarKw };

struct ParamInfo {
    std::string name;
    ParamRole role = ParamRole::Normal;
    int position = -1;  // index among positional parameters, -1 for keyword-only
    bool positional_only = false;

    friend bool operator==(const ParamInfo&, const ParamInfo&) = default;
};

enum class MethodKind { Function, Method, StaticMethod, ClassMethod, Property };

struct FunctionInfo {
    std::vector<ParamInfo> params;
    MethodKind method_kind = MethodKind::Function;
    bool is_generator = false;

    friend bool operator==(const FunctionInfo&, const FunctionInfo&) = default;
};

struct AnalysisState {
    AssignmentGraph graph;
    ScopeTree scopes;
    NamespacePath ns;  // current namespace
    ClassHierarchy hierarchy;

    // Signatures of analyzed functions, used to bind positional arguments.
    std::map<QualifiedObject, FunctionInfo> functions;
    // Modules (and namespace packages) that belong to the analyzed package;
    // everything else is external.
    std::set<std::string> module_roots;
    // Bumped on every change to one of the domains above.
    uint64_t version = 0;

    bool is_external(const QualifiedObject& obj) const;

    bool add_edge(const QualifiedObject& from, const QualifiedObject& to);
    bool add_scope(const NamespacePath& ns, const Definition& def);
    bool add_parents(const QualifiedObject& cls, const std::vector<QualifiedObject>& bases);
    bool set_function(const QualifiedObject& fn, const FunctionInfo& info);
};

/// Resolves `identifier` from `ns` outward. Class scopes are only consulted
/// when they are the innermost element, as in the host language.
std::optional<QualifiedObject> get_object(const ScopeTree& scopes, const NamespacePath& ns,
                                          const std::string& identifier);

ScopeTree add_scope(const ScopeTree& scopes, const NamespacePath& ns, const std::string& identifier, Kind kind);

/// C3 linearization starting with `cls`. Classes without recorded parents
/// (including external ones) are leaves. Throws InconsistentMRO.
std::vector<QualifiedObject> linearize(const ClassHierarchy& hierarchy, const QualifiedObject& cls);

/// Left-to-right depth-first order without duplicates; the fallback used
/// when C3 fails.
std::vector<QualifiedObject> depth_first_order(const ClassHierarchy& hierarchy, const QualifiedObject& cls);

/// Class receivers search their linearization; any other receiver looks in
/// its own namespace.
std::optional<QualifiedObject> get_class_attr_object(const QualifiedObject& receiver, const std::string& attr,
                                                     const ClassHierarchy& hierarchy, const ScopeTree& scopes);

}  // namespace callflow
