#include "callflow/pipeline.hpp"

namespace callflow {

AnalysisResult analyze(const std::vector<fs::path>& entrypoints, const fs::path& package_root,
                       const AnalysisOptions& options) {
    AnalysisResult result;
    result.index = resolve_imports(entrypoints, package_root);
    result.diagnostics = result.index.diagnostics;

    std::vector<std::string> names;
    for (const auto& [name, unit] : result.index.modules) {
        names.push_back(name);
        result.modules.push_back(ir::lower(unit));
        for (const auto& d : result.modules.back().diagnostics) {
            result.diagnostics.push_back(AnalysisDiagnostic{name, d.pos, d.message}.str());
        }
    }
    names.insert(names.end(), result.index.namespace_packages.begin(), result.index.namespace_packages.end());

    std::vector<const ir::IRModule*> order = topological_order(result.modules);
    auto [state, report] = run_fixpoint(order, initial_state(names), options);
    for (const auto& d : report.diagnostics) {
        result.diagnostics.push_back(d.str());
    }
    result.call_graph = build_call_graph(order, state, options);
    result.state = std::move(state);
    result.report = std::move(report);
    return result;
}

}  // namespace callflow
