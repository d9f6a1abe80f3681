#include "callflow/callgraph.hpp"

#include <json.hpp>

#include <sstream>

namespace callflow {

void CallGraph::add_node(const std::string& node) { edges_[node]; }

void CallGraph::add_edge(const std::string& caller, const std::string& callee) {
    edges_[caller].insert(callee);
    edges_[callee];
}

bool CallGraph::remove_edge(const std::string& caller, const std::string& callee) {
    auto it = edges_.find(caller);
    return it != edges_.end() && it->second.erase(callee) != 0;
}

const std::set<std::string>& CallGraph::callees(const std::string& node) const {
    static const std::set<std::string> kEmpty;
    auto it = edges_.find(node);
    return it == edges_.end() ? kEmpty : it->second;
}

bool CallGraph::has_edge(const std::string& caller, const std::string& callee) const {
    return callees(caller).count(callee) != 0;
}

std::set<Edge> CallGraph::edges() const {
    std::set<Edge> out;
    for (const auto& [caller, callees] : edges_) {
        for (const auto& callee : callees) {
            out.emplace(caller, callee);
        }
    }
    return out;
}

size_t CallGraph::edge_count() const {
    size_t n = 0;
    for (const auto& [caller, callees] : edges_) {
        n += callees.size();
    }
    return n;
}

CallGraph build_call_graph(const std::vector<const ir::IRModule*>& modules, const AnalysisState& converged,
                           const AnalysisOptions& options) {
    CallGraph cg;
    AnalysisState state = converged;
    for (const auto& [fn, info] : state.functions) {
        cg.add_node(fn.str());
    }
    for (const auto* m : modules) {
        cg.add_node(m->module_name);
    }
    Evaluator evaluator(state, options, [&](const CallEvent& event) {
        std::string caller = event.caller.str();
        for (const auto& callee : event.callees) {
            cg.add_edge(caller, callee.str());
        }
    });
    uint64_t before = state.version;
    for (const auto* m : modules) {
        evaluator.eval_module(*m);
    }
    if (state.version != before) {
        throw std::logic_error("call graph construction ran on a state that is not a fixpoint");
    }
    return cg;
}

std::set<QualifiedObject> reachable_functions(const AssignmentGraph& graph, const QualifiedObject& source) {
    std::set<QualifiedObject> out;
    std::set<QualifiedObject> seen;
    std::vector<QualifiedObject> stack{source};
    while (!stack.empty()) {
        QualifiedObject o = std::move(stack.back());
        stack.pop_back();
        if (!seen.insert(o).second) {
            continue;
        }
        if (o.def.kind == Kind::Func) {
            out.insert(o);
        }
        for (const auto& next : graph.successors(o)) {
            stack.push_back(next);
        }
    }
    return out;
}

std::string serialize(const CallGraph& cg) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [caller, callees] : cg.adjacency()) {
        j[caller] = nlohmann::json::array();
        for (const auto& callee : callees) {
            j[caller].push_back(callee);
        }
    }
    return j.dump(2);
}

CallGraph parse_call_graph(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CallGraphFormatError(std::string("malformed call graph: ") + e.what());
    }
    if (!j.is_object()) {
        throw CallGraphFormatError("call graph must be a JSON object");
    }
    CallGraph cg;
    for (const auto& [caller, callees] : j.items()) {
        if (!callees.is_array()) {
            throw CallGraphFormatError("callees of '" + caller + "' must be an array");
        }
        cg.add_node(caller);
        for (const auto& callee : callees) {
            if (!callee.is_string()) {
                throw CallGraphFormatError("callee of '" + caller + "' must be a string");
            }
            cg.add_edge(caller, callee.get<std::string>());
        }
    }
    return cg;
}

std::string to_dot(const CallGraph& cg) {
    auto quote = [](const std::string& s) { return nlohmann::json(s).dump(); };
    std::ostringstream out;
    out << "digraph callgraph {\n";
    for (const auto& [node, callees] : cg.adjacency()) {
        out << "  " << quote(node) << ";\n";
    }
    for (const auto& [caller, callee] : cg.edges()) {
        out << "  " << quote(caller) << " -> " << quote(callee) << ";\n";
    }
    out << "}\n";
    return out.str();
}

EdgeDiff diff(const CallGraph& generated, const CallGraph& truth) {
    EdgeDiff d;
    std::set<Edge> gen = generated.edges();
    std::set<Edge> want = truth.edges();
    for (const auto& e : gen) {
        (want.count(e) ? d.true_positives : d.false_positives).insert(e);
    }
    for (const auto& e : want) {
        if (!gen.count(e)) {
            d.false_negatives.insert(e);
        }
    }
    return d;
}

Reachability is_reachable(const CallGraph& cg, const std::string& target) {
    Reachability r;
    for (const auto& [caller, callees] : cg.adjacency()) {
        if (callees.count(target)) {
            r.witnesses.insert(caller);
        }
    }
    r.reachable = !r.witnesses.empty();
    return r;
}

}  // namespace callflow
