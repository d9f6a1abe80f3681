#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "callflow/analysis.hpp"
#include "callflow/ir.hpp"
#include "callflow/state.hpp"

namespace callflow {

class CallGraphFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Edge = std::pair<std::string, std::string>;

/// Call graph over canonical dotted names. Every node has an entry, so
/// uncalled functions map to an empty set.
class CallGraph {
public:
    void add_node(const std::string& node);
    void add_edge(const std::string& caller, const std::string& callee);
    bool remove_edge(const std::string& caller, const std::string& callee);

    const std::map<std::string, std::set<std::string>>& adjacency() const { return edges_; }
    const std::set<std::string>& callees(const std::string& node) const;
    bool has_node(const std::string& node) const { return edges_.count(node) != 0; }
    bool has_edge(const std::string& caller, const std::string& callee) const;
    std::set<Edge> edges() const;
    size_t edge_count() const;
    size_t node_count() const { return edges_.size(); }

    friend bool operator==(const CallGraph&, const CallGraph&) = default;

private:
    std::map<std::string, std::set<std::string>> edges_;
};

/// Re-evaluates every module once under the converged state and records an
/// edge from the enclosing function (or module) to every function a call
/// site may invoke. Throws std::logic_error if the state is not a fixpoint.
CallGraph build_call_graph(const std::vector<const ir::IRModule*>& modules, const AnalysisState& converged,
                           const AnalysisOptions& options = {});

/// Function objects reachable from `source` over assignment-graph edges,
/// including `source` itself when it is a function.
std::set<QualifiedObject> reachable_functions(const AssignmentGraph& graph, const QualifiedObject& source);

/// Canonical JSON: sorted keys, sorted callee arrays, two-space indent, no
/// trailing newline.
std::string serialize(const CallGraph& cg);
/// Inverse of serialize; accepts any JSON object of string arrays.
CallGraph parse_call_graph(std::string_view json);
/// Graphviz rendering with one node per call-graph node.
std::string to_dot(const CallGraph& cg);

struct Ratio {
    uint64_t num = 0;
    uint64_t den = 0;

    double percent() const { return den == 0 ? 100.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den); }
};

struct EdgeDiff {
    std::set<Edge> true_positives;
    std::set<Edge> false_positives;
    std::set<Edge> false_negatives;

    // Empty denominators count as 100%.
    Ratio precision() const { return {true_positives.size(), true_positives.size() + false_positives.size()}; }
    Ratio recall() const { return {true_positives.size(), true_positives.size() + false_negatives.size()}; }
    bool complete() const { return false_positives.empty(); }
    bool sound() const { return false_negatives.empty(); }
};

EdgeDiff diff(const CallGraph& generated, const CallGraph& truth);

struct Reachability {
    bool reachable = false;
    std::set<std::string> witnesses;  // callers of the target
};

Reachability is_reachable(const CallGraph& cg, const std::string& target);

}  // namespace callflow
