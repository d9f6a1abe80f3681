#include "callflow/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "callflow/bench.hpp"
#include "callflow/pipeline.hpp"

namespace callflow {

namespace {

struct CliConfig {
    std::vector<std::string> entrypoints;
    std::string package_root = ".";
    std::string output_path;  // empty for stdout
    int max_passes = 100;
    bool fail_on_diagnostics = false;
    bool no_interprocedural = false;
    std::string format = "json";

    std::string corpus;
    std::string report_json;
    unsigned jobs = 0;

    std::string generated;
    std::string truth;
    std::string graph;
    std::string target;

    std::string package_dir;
    int repetitions = 20;

    std::string synth_out;
    uint64_t seed = 7;
    int loc = 3500;

    AnalysisOptions analysis() const {
        AnalysisOptions o;
        o.max_passes = max_passes;
        o.interprocedural_flow = !no_interprocedural;
        return o;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IOError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << text)) {
        throw IOError("cannot write " + path);
    }
}

int cmd_analyze(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<fs::path> entrypoints(cfg.entrypoints.begin(), cfg.entrypoints.end());
    AnalysisResult result = analyze(entrypoints, cfg.package_root, cfg.analysis());
    for (const auto& d : result.diagnostics) {
        err << d << "\n";
    }
    std::string text = cfg.format == "dot" ? to_dot(result.call_graph) : serialize(result.call_graph) + "\n";
    write_output(cfg.output_path, text, out);
    if (cfg.fail_on_diagnostics && !result.diagnostics.empty()) {
        return kExitInputError;
    }
    return kExitOk;
}

int cmd_suite(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    bench::SuiteOptions options;
    options.analysis = cfg.analysis();
    options.jobs = cfg.jobs;
    bench::SuiteReport report = bench::run_suite(cfg.corpus, options);
    out << report.table();
    if (!cfg.report_json.empty()) {
        write_output(cfg.report_json, report.json() + "\n", out);
    }
    bool nonconvergent = false;
    for (const auto& c : report.cases) {
        if (c.nonconvergent) {
            err << c.id() << ": " << c.error << "\n";
            nonconvergent = true;
        }
    }
    if (nonconvergent) {
        return kExitNonConvergence;
    }
    return report.all_passed() ? kExitOk : kExitSuiteFailure;
}

std::string ratio_text(const Ratio& r) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << r.percent() << "% (" << r.num << "/" << r.den << ")";
    return s.str();
}

int cmd_compare(const CliConfig& cfg, std::ostream& out) {
    CallGraph generated = parse_call_graph(read_file(cfg.generated));
    CallGraph truth = parse_call_graph(read_file(cfg.truth));
    EdgeDiff d = diff(generated, truth);
    out << "precision: " << ratio_text(d.precision()) << "\n";
    out << "recall: " << ratio_text(d.recall()) << "\n";
    out << "true positives: " << d.true_positives.size() << "\n";
    out << "false positives: " << d.false_positives.size() << "\n";
    out << "false negatives: " << d.false_negatives.size() << "\n";
    out << "complete: " << (d.complete() ? "yes" : "no") << "\n";
    out << "sound: " << (d.sound() ? "yes" : "no") << "\n";
    for (const auto& [a, b] : d.false_positives) {
        out << "FP " << a << " -> " << b << "\n";
    }
    for (const auto& [a, b] : d.false_negatives) {
        out << "FN " << a << " -> " << b << "\n";
    }
    return kExitOk;
}

int cmd_reach(const CliConfig& cfg, std::ostream& out) {
    CallGraph cg = parse_call_graph(read_file(cfg.graph));
    Reachability r = is_reachable(cg, cfg.target);
    if (!r.reachable) {
        out << cfg.target << " is not reachable\n";
        return kExitNotReachable;
    }
    out << cfg.target << " is called by:\n";
    for (const auto& w : r.witnesses) {
        out << "  " << w << "\n";
    }
    return kExitOk;
}

int cmd_measure(const CliConfig& cfg, std::ostream& out) {
    bench::Measurement m = bench::measure(cfg.package_dir, cfg.repetitions, cfg.analysis());
    out << std::fixed << std::setprecision(3) << "median seconds: " << m.median_seconds << "\n"
        << std::setprecision(1) << "peak memory MB: " << m.peak_mb << "\n"
        << "repetitions: " << m.samples.size() << "\n";
    return kExitOk;
}

int cmd_synth(const CliConfig& cfg, std::ostream& out) {
    bench::SyntheticSpec spec;
    spec.seed = cfg.seed;
    spec.target_loc = cfg.loc;
    int lines = bench::generate_synthetic(cfg.synth_out, spec);
    out << "wrote " << lines << " lines to " << cfg.synth_out << "\n";
    return kExitOk;
}

void add_analysis_flags(CLI::App* cmd, CliConfig& cfg) {
    cmd->add_option("--max-passes", cfg.max_passes, "Fixpoint pass cap")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-interprocedural", cfg.no_interprocedural,
                  "Debug: do not bind call arguments to parameters");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    CLI::App app{"Static call graphs for Python 3 packages", "callflow"};
    app.require_subcommand(1);

    auto* analyze_cmd = app.add_subcommand("analyze", "Write the call graph of a package");
    analyze_cmd->add_option("entrypoints", cfg.entrypoints, "Entry-point files")->required();
    analyze_cmd->add_option("--package", cfg.package_root, "Package root directory");
    analyze_cmd->add_option("-o,--output", cfg.output_path, "Output file (default stdout)");
    analyze_cmd->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "dot"}));
    analyze_cmd->add_flag("--fail-on-diagnostics", cfg.fail_on_diagnostics, "Exit 1 when diagnostics were emitted");
    add_analysis_flags(analyze_cmd, cfg);

    auto* suite_cmd = app.add_subcommand("suite", "Run the micro-benchmark corpus");
    suite_cmd->add_option("corpus", cfg.corpus, "Corpus directory")->required();
    suite_cmd->add_option("--json", cfg.report_json, "Also write the report as JSON");
    suite_cmd->add_option("--jobs", cfg.jobs, "Worker threads");
    add_analysis_flags(suite_cmd, cfg);

    auto* compare_cmd = app.add_subcommand("compare", "Precision and recall of a call graph");
    compare_cmd->add_option("generated", cfg.generated, "Generated call graph JSON")->required();
    compare_cmd->add_option("truth", cfg.truth, "Ground-truth call graph JSON")->required();
    add_analysis_flags(compare_cmd, cfg);

    auto* reach_cmd = app.add_subcommand("reach", "Check whether a function is called");
    reach_cmd->add_option("graph", cfg.graph, "Call graph JSON")->required();
    reach_cmd->add_option("target", cfg.target, "Dotted function name")->required();
    add_analysis_flags(reach_cmd, cfg);

    auto* measure_cmd = app.add_subcommand("measure", "Time and memory of analyzing a package");
    measure_cmd->add_option("package", cfg.package_dir, "Package directory")->required();
    measure_cmd->add_option("-n,--repetitions", cfg.repetitions, "Runs")->check(CLI::PositiveNumber);
    add_analysis_flags(measure_cmd, cfg);

    auto* synth_cmd = app.add_subcommand("synth", "Generate the synthetic benchmark package");
    synth_cmd->add_option("output", cfg.synth_out, "Output directory")->required();
    synth_cmd->add_option("--seed", cfg.seed, "Generator seed");
    synth_cmd->add_option("--loc", cfg.loc, "Approximate lines of code")->check(CLI::PositiveNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInputError;
    }

    try {
        if (analyze_cmd->parsed()) {
            return cmd_analyze(cfg, out, err);
        }
        if (suite_cmd->parsed()) {
            return cmd_suite(cfg, out, err);
        }
        if (compare_cmd->parsed()) {
            return cmd_compare(cfg, out);
        }
        if (reach_cmd->parsed()) {
            return cmd_reach(cfg, out);
        }
        if (measure_cmd->parsed()) {
            return cmd_measure(cfg, out);
        }
        return cmd_synth(cfg, out);
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace callflow
