#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "callflow/analysis.hpp"
#include "callflow/callgraph.hpp"
#include "callflow/frontend.hpp"

namespace callflow::bench {

class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The sixteen micro-benchmark categories.
const std::vector<std::string>& categories();

struct BenchmarkCase {
    std::string category;
    std::string name;
    fs::path dir;
    std::vector<fs::path> sources;  // main.py first
    CallGraph expected;
    std::string description;
    // "Limitation:" lines of the case README; the case is a known
    // exception when non-empty.
    std::vector<std::string> limitations;

    std::string id() const { return category + "/" + name; }
};

/// Loads `corpus/<category>/<case>/{main.py, *.py, callgraph.json, README.md}`.
/// Throws CorpusError on layout problems, including an empty corpus.
std::vector<BenchmarkCase> load_corpus(const fs::path& corpus_dir);
BenchmarkCase load_case(const fs::path& case_dir, const std::string& category);

/// Branch syntax found in a case's sources; an empty result means the case
/// has a single execution path.
std::vector<std::string> lint_case(const BenchmarkCase& c);

struct CaseResult {
    std::string category;
    std::string name;
    bool complete = false;
    bool sound = false;
    EdgeDiff diff;
    std::string error;  // analyzer failure, if any
    bool nonconvergent = false;
    std::vector<std::string> limitations;
    int iterations = 0;

    std::string id() const { return category + "/" + name; }
};

struct Tally {
    int cases = 0;
    int complete = 0;
    int sound = 0;
};

struct SuiteReport {
    std::vector<CaseResult> cases;  // sorted by id
    std::map<std::string, Tally> categories;
    Tally totals;

    bool all_passed() const { return totals.complete == totals.cases && totals.sound == totals.cases; }
    std::string table() const;
    std::string json() const;
};

struct SuiteOptions {
    AnalysisOptions analysis;
    unsigned jobs = 0;  // 0 picks the hardware concurrency
};

CaseResult run_case(const BenchmarkCase& c, const AnalysisOptions& options = {});
SuiteReport run_suite(const fs::path& corpus_dir, const SuiteOptions& options = {});
SuiteReport summarize(std::vector<CaseResult> results);

struct Measurement {
    double median_seconds = 0;
    double peak_mb = 0;
    std::vector<double> samples;
};

/// Every .py file under `dir`, sorted.
std::vector<fs::path> python_sources(const fs::path& dir);

/// Analyzes every source of the package `repetitions` times, each in a
/// child process, and reports the median wall time and the largest peak
/// resident set. Analyzer failures are rethrown as std::runtime_error.
Measurement measure(const fs::path& package_dir, int repetitions, const AnalysisOptions& options = {});

struct SyntheticSpec {
    uint64_t seed = 7;
    int target_loc = 3500;
    std::string package = "synth";
};

/// Writes a deterministic package of classes, inheritance, higher-order
/// calls and cross-module imports under `out_dir/<package>`. Returns the
/// number of lines written.
int generate_synthetic(const fs::path& out_dir, const SyntheticSpec& spec = {});

}  // namespace callflow::bench
