#include "callflow/state.hpp"

#include <algorithm>
#include <functional>

namespace callflow {

namespace {

const std::set<QualifiedObject> kNoSuccessors;
const std::vector<Definition> kNoChildren;
const std::vector<QualifiedObject> kNoParents;

}  // namespace

bool AssignmentGraph::add_edge(const QualifiedObject& from, const QualifiedObject& to) {
    bool inserted = edges_[from].insert(to).second;
    if (inserted) {
        ++count_;
    }
    return inserted;
}

const std::set<QualifiedObject>& AssignmentGraph::successors(const QualifiedObject& from) const {
    auto it = edges_.find(from);
    return it == edges_.end() ? kNoSuccessors : it->second;
}

bool AssignmentGraph::has_edge(const QualifiedObject& from, const QualifiedObject& to) const {
    return successors(from).count(to) != 0;
}

bool AssignmentGraph::includes(const AssignmentGraph& other) const {
    for (const auto& [from, targets] : other.edges_) {
        const auto& mine = successors(from);
        if (!std::includes(mine.begin(), mine.end(), targets.begin(), targets.end())) {
            return false;
        }
    }
    return true;
}

bool ScopeTree::add(const NamespacePath& ns, const Definition& def) {
    auto& kids = children_[ns];
    if (std::find(kids.begin(), kids.end(), def) != kids.end()) {
        return false;
    }
    kids.push_back(def);
    children_.try_emplace(ns.extended(def));
    return true;
}

bool ScopeTree::add_root(const std::string& module) {
    return children_.try_emplace(NamespacePath::module(module)).second;
}

const std::vector<Definition>& ScopeTree::children(const NamespacePath& ns) const {
    auto it = children_.find(ns);
    return it == children_.end() ? kNoChildren : it->second;
}

std::optional<Definition> ScopeTree::find(const NamespacePath& ns, const std::string& identifier) const {
    const auto& kids = children(ns);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
        if (it->identifier == identifier) {
            return *it;
        }
    }
    return std::nullopt;
}

bool ClassHierarchy::add_parents(const QualifiedObject& cls, const std::vector<QualifiedObject>& bases) {
    auto [it, created] = parents_.try_emplace(cls);
    bool changed = created;
    for (const auto& base : bases) {
        if (base == cls || std::find(it->second.begin(), it->second.end(), base) != it->second.end()) {
            continue;
        }
        it->second.push_back(base);
        changed = true;
    }
    return changed;
}

const std::vector<QualifiedObject>& ClassHierarchy::parents(const QualifiedObject& cls) const {
    auto it = parents_.find(cls);
    return it == parents_.end() ? kNoParents : it->second;
}

bool AnalysisState::is_external(const QualifiedObject& obj) const {
    return module_roots.count(obj.root_module()) == 0;
}

bool AnalysisState::add_edge(const QualifiedObject& from, const QualifiedObject& to) {
    if (!graph.add_edge(from, to)) {
        return false;
    }
    ++version;
    return true;
}

bool AnalysisState::add_scope(const NamespacePath& ns, const Definition& def) {
    if (!scopes.add(ns, def)) {
        return false;
    }
    ++version;
    return true;
}

bool AnalysisState::add_parents(const QualifiedObject& cls, const std::vector<QualifiedObject>& bases) {
    if (!hierarchy.add_parents(cls, bases)) {
        return false;
    }
    ++version;
    return true;
}

bool AnalysisState::set_function(const QualifiedObject& fn, const FunctionInfo& info) {
    // First definition wins; redefinitions under the same name would
    // otherwise alternate on every pass.
    if (!functions.try_emplace(fn, info).second) {
        return false;
    }
    ++version;
    return true;
}

std::optional<QualifiedObject> get_object(const ScopeTree& scopes, const NamespacePath& ns,
                                          const std::string& identifier) {
    for (size_t n = ns.size(); n > 0; --n) {
        const Definition& last = ns.elements[n - 1];
        if (last.kind == Kind::Cls && n != ns.size()) {
            continue;
        }
        NamespacePath prefix = ns.prefix(n);
        if (auto def = scopes.find(prefix, identifier)) {
            return QualifiedObject{std::move(prefix), *def};
        }
    }
    return std::nullopt;
}

ScopeTree add_scope(const ScopeTree& scopes, const NamespacePath& ns, const std::string& identifier, Kind kind) {
    ScopeTree out = scopes;
    out.add(ns, {identifier, kind});
    return out;
}

std::vector<QualifiedObject> linearize(const ClassHierarchy& hierarchy, const QualifiedObject& cls) {
    std::set<QualifiedObject> active;
    std::function<std::vector<QualifiedObject>(const QualifiedObject&)> run =
        [&](const QualifiedObject& c) -> std::vector<QualifiedObject> {
        if (!active.insert(c).second) {
            throw InconsistentMRO("cyclic class hierarchy at " + c.str());
        }
        const auto& bases = hierarchy.parents(c);
        std::vector<std::vector<QualifiedObject>> seqs;
        for (const auto& base : bases) {
            seqs.push_back(run(base));
        }
        seqs.push_back(bases);
        active.erase(c);

        std::vector<QualifiedObject> result{c};
        while (true) {
            seqs.erase(std::remove_if(seqs.begin(), seqs.end(), [](const auto& s) { return s.empty(); }),
                       seqs.end());
            if (seqs.empty()) {
                return result;
            }
            const QualifiedObject* candidate = nullptr;
            for (const auto& seq : seqs) {
                const QualifiedObject& head = seq.front();
                bool in_tail = std::any_of(seqs.begin(), seqs.end(), [&](const auto& other) {
                    return std::find(other.begin() + 1, other.end(), head) != other.end();
                });
                if (!in_tail) {
                    candidate = &head;
                    break;
                }
            }
            if (!candidate) {
                throw InconsistentMRO("cannot create a consistent method resolution order for " + c.str());
            }
            QualifiedObject next = *candidate;
            result.push_back(next);
            for (auto& seq : seqs) {
                if (!seq.empty() && seq.front() == next) {
                    seq.erase(seq.begin());
                }
            }
        }
    };
    return run(cls);
}

std::vector<QualifiedObject> depth_first_order(const ClassHierarchy& hierarchy, const QualifiedObject& cls) {
    std::vector<QualifiedObject> order;
    std::set<QualifiedObject> seen;
    std::function<void(const QualifiedObject&)> visit = [&](const QualifiedObject& c) {
        if (!seen.insert(c).second) {
            return;
        }
        order.push_back(c);
        for (const auto& base : hierarchy.parents(c)) {
            visit(base);
        }
    };
    visit(cls);
    return order;
}

std::optional<QualifiedObject> get_class_attr_object(const QualifiedObject& receiver, const std::string& attr,
                                                     const ClassHierarchy& hierarchy, const ScopeTree& scopes) {
    if (receiver.def.kind == Kind::Cls) {
        for (const auto& c : linearize(hierarchy, receiver)) {
            NamespacePath inner = c.inner();
            if (auto def = scopes.find(inner, attr)) {
                return QualifiedObject{std::move(inner), *def};
            }
        }
        return std::nullopt;
    }
    NamespacePath inner = receiver.inner();
    if (auto def = scopes.find(inner, attr)) {
        return QualifiedObject{std::move(inner), *def};
    }
    return std::nullopt;
}

}  // namespace callflow
