#pragma once

#include <string>
#include <vector>

#include "callflow/analysis.hpp"
#include "callflow/callgraph.hpp"
#include "callflow/frontend.hpp"
#include "callflow/ir.hpp"

namespace callflow {

struct AnalysisResult {
    PackageIndex index;
    std::vector<ir::IRModule> modules;
    AnalysisState state;
    FixpointReport report;
    CallGraph call_graph;
    // Loader failures, constructs lowered to no-ops and analysis
    // diagnostics, each prefixed with a module name and position.
    std::vector<std::string> diagnostics;
};

/// Resolves, lowers and analyzes everything reachable from `entrypoints`
/// inside `package_root`. Throws IOError or SyntaxError for unusable
/// entrypoints and NonConvergence when the pass cap is hit.
AnalysisResult analyze(const std::vector<fs::path>& entrypoints, const fs::path& package_root,
                       const AnalysisOptions& options = {});

}  // namespace callflow
