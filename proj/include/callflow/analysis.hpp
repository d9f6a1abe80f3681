#pragma once

#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "callflow/ir.hpp"
#include "callflow/state.hpp"

namespace callflow {

struct AnalysisOptions {
    int max_passes = 100;
    // Binds call arguments to parameters. Turning it off reproduces the
    // behaviour of analyzers without inter-procedural flow.
    bool interprocedural_flow = true;
    // Checks after every pass that no assignment-graph edge disappeared.
    bool verify_monotonic = true;
};

struct AnalysisDiagnostic {
    std::string module;
    syntax::Pos pos;
    std::string message;

    std::string str() const;
    friend auto operator<=>(const AnalysisDiagnostic&, const AnalysisDiagnostic&) = default;
};

struct FixpointReport {
    int iterations = 0;
    bool converged = false;
    std::vector<AnalysisDiagnostic> diagnostics;  // from the last pass, sorted
};

class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(int passes)
        : std::runtime_error("analysis did not converge within " + std::to_string(passes) + " passes"),
          passes_(passes) {}
    int passes() const { return passes_; }

private:
    int passes_;
};

class MonotonicityViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// One resolved call site, reported to observers during evaluation.
struct CallEvent {
    QualifiedObject caller;
    std::set<QualifiedObject> callees;
    std::string module;
    syntax::Pos pos;
};

using CallObserver = std::function<void(const CallEvent&)>;

/// Evaluates IR under the transition rules, mutating the state it was given.
class Evaluator {
public:
    Evaluator(AnalysisState& state, AnalysisOptions options = {}, CallObserver observer = {});

    /// Evaluates a module body in that module's namespace.
    std::optional<QualifiedObject> eval_module(const ir::IRModule& module);
    /// Evaluates `node` in the state's current namespace.
    std::optional<QualifiedObject> eval(const ir::Node& node);

    const std::set<AnalysisDiagnostic>& diagnostics() const { return diagnostics_; }
    void clear_diagnostics() { diagnostics_.clear(); }

private:
    struct Impl;
    AnalysisState& state_;
    AnalysisOptions options_;
    CallObserver observer_;
    std::string module_;
    std::set<AnalysisDiagnostic> diagnostics_;
    friend struct Impl;
};

struct EvalResult {
    std::optional<QualifiedObject> value;  // empty for the inert object
    AnalysisState state;
    std::vector<AnalysisDiagnostic> diagnostics;
};

/// Pure form of a single evaluation step.
EvalResult eval(AnalysisState state, const ir::Node& expr);

/// State seeded with the module roots of the analyzed package.
AnalysisState initial_state(const std::vector<std::string>& package_modules);

/// Full passes over all modules until no domain changes. Throws
/// NonConvergence when `options.max_passes` is exhausted.
std::pair<AnalysisState, FixpointReport> run_fixpoint(const std::vector<const ir::IRModule*>& modules,
                                                      AnalysisState initial, const AnalysisOptions& options = {});
std::pair<AnalysisState, FixpointReport> run_fixpoint(const std::vector<ir::IRModule>& modules,
                                                      AnalysisState initial, const AnalysisOptions& options = {});

/// Orders modules so that imported modules come first; cycles are broken by
/// name order.
std::vector<const ir::IRModule*> topological_order(const std::vector<ir::IRModule>& modules);

/// Names that the host language provides without an import.
bool is_builtin_name(const std::string& name);

}  // namespace callflow
