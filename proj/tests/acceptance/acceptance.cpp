// Runs the acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "callflow/bench.hpp"
#include "callflow/cli.hpp"
#include "callflow/pipeline.hpp"
#include "json.hpp"
#include "random_program.hpp"
#include "test_util.hpp"

using namespace callflow;
using testutil::TempDir;
using testutil::write_file;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) {
                detail.str("");
            }
            pass = false;
            detail << what << "; ";
        }
    }
};

fs::path source(const std::string& rel) { return testutil::source_dir() / rel; }

std::vector<bench::BenchmarkCase> corpus() { return bench::load_corpus(source("corpus")); }

std::string python_tool(const std::string& tool, const fs::path& root) {
    auto r = testutil::run_command(testutil::python() + " " + testutil::shell_quote(source("tools/" + tool).string()) +
                                   " " + testutil::shell_quote(root.string()) + " 2>/dev/null");
    if (r.status != 0) {
        throw std::runtime_error(tool + " failed on " + root.string());
    }
    return r.output;
}

std::vector<ir::IRModule> lower_package(const fs::path& root, const fs::path& entry) {
    PackageIndex index = resolve_imports({entry}, root);
    std::vector<ir::IRModule> modules;
    for (const auto& [name, unit] : index.modules) {
        modules.push_back(ir::lower(unit));
    }
    return modules;
}

std::vector<std::string> names_of(const std::vector<ir::IRModule>& modules) {
    std::vector<std::string> names;
    for (const auto& m : modules) {
        names.push_back(m.module_name);
    }
    return names;
}

void crypto_reproduction(Outcome& o) {
    fs::path dir = source("tests/fixtures/crypto");
    auto start = std::chrono::steady_clock::now();
    AnalysisResult r = analyze({dir / "crypto.py"}, dir);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::set<Edge> expected = {{"crypto", "crypto.Crypto.__init__"},
                               {"crypto", "crypto.Crypto.apply"},
                               {"crypto.Crypto.apply", "cryptops.encrypt"},
                               {"crypto.Crypto.apply", "cryptops.decrypt"}};
    o.require(r.call_graph.edges() == expected, "call edges differ");
    NamespacePath apply({{"crypto", Kind::Mod}, {"Crypto", Kind::Cls}, {"apply", Kind::Func}});
    NamespacePath cryptops = NamespacePath::module("cryptops");
    QualifiedObject func{apply, {"func", Kind::Var}};
    o.require(r.state.graph.has_edge(func, {cryptops, {"encrypt", Kind::Func}}), "func -/-> encrypt");
    o.require(r.state.graph.has_edge(func, {cryptops, {"decrypt", Kind::Func}}), "func -/-> decrypt");
    o.require(r.state.graph.has_edge({apply, {"msg", Kind::Var}},
                                     {NamespacePath::module("crypto"), {"encrypted", Kind::Var}}),
              "msg -/-> encrypted");
    o.require(seconds < 1.0, "took " + std::to_string(seconds) + " s");
    o.detail << "4 edges, " << seconds * 1000 << " ms";
}

void benchmark_verdicts(Outcome& o, const bench::SuiteReport& report) {
    const auto& t = report.totals;
    o.require(t.cases >= 48, "only " + std::to_string(t.cases) + " cases");
    for (const auto& cat : bench::categories()) {
        auto it = report.categories.find(cat);
        o.require(it != report.categories.end() && it->second.cases >= 3, "category " + cat + " has fewer than 3 cases");
    }
    o.require(t.complete * 100 >= 95 * t.cases, "complete below 95%");
    o.require(t.sound * 100 >= 90 * t.cases, "sound below 90%");
    std::string table = report.table();
    for (const auto& c : report.cases) {
        if (!c.complete || !c.sound) {
            o.require(!c.limitations.empty() && table.find(c.id() + ": " + c.limitations.front()) != std::string::npos,
                      c.id() + " fails without a listed exception");
        }
    }
    o.detail << "complete " << t.complete << "/" << t.cases << ", sound " << t.sound << "/" << t.cases;
}

void interprocedural_categories(Outcome& o, const bench::SuiteReport& report) {
    int cases = 0;
    for (const char* cat : {"parameters", "returns", "kwargs", "direct_calls", "generators", "exceptions"}) {
        const auto& t = report.categories.at(cat);
        o.require(t.sound == t.cases, std::string(cat) + " " + std::to_string(t.sound) + "/" + std::to_string(t.cases));
        cases += t.cases;
    }
    o.detail << cases << " cases sound";
}

void precision_recall(Outcome& o) {
    TempDir dir;
    write_file(dir / "ab_ac.json", "{\"a\": [\"b\", \"c\"]}");
    write_file(dir / "ab.json", "{\"a\": [\"b\"]}");
    auto compare = [&](const std::string& gen, const std::string& truth) {
        std::ostringstream out;
        std::ostringstream err;
        int code = run_cli({"compare", (dir / gen).string(), (dir / truth).string()}, out, err);
        return code == kExitOk ? out.str() : std::string();
    };
    std::string extra = compare("ab_ac.json", "ab.json");
    o.require(extra.find("precision: 50.0% (1/2)\nrecall: 100.0% (1/1)") == 0 &&
                  extra.find("complete: no\nsound: yes\n") != std::string::npos,
              "extra-edge example");
    std::string same = compare("ab.json", "ab.json");
    o.require(same.find("precision: 100.0% (1/1)\nrecall: 100.0% (1/1)") == 0 &&
                  same.find("complete: yes\nsound: yes\n") != std::string::npos,
              "identity example");
    std::string missing = compare("ab.json", "ab_ac.json");
    o.require(missing.find("precision: 100.0% (1/1)\nrecall: 50.0% (1/2)") == 0, "missing-edge example");

    // Random deletions from a golden graph.
    TempDir synth;
    bench::SyntheticSpec spec;
    spec.target_loc = 800;
    bench::generate_synthetic(synth.path(), spec);
    CallGraph truth = analyze({synth / "main.py"}, synth.path()).call_graph;
    std::set<Edge> truth_edges = truth.edges();
    std::vector<Edge> edges(truth_edges.begin(), truth_edges.end());
    std::mt19937_64 rng(42);
    int trials = 0;
    for (size_t k : {size_t{0}, size_t{1}, size_t{7}, edges.size() / 3, edges.size()}) {
        std::vector<Edge> shuffled = edges;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CallGraph generated = truth;
        for (size_t i = 0; i < k; ++i) {
            generated.remove_edge(shuffled[i].first, shuffled[i].second);
        }
        Ratio recall = diff(generated, truth).recall();
        o.require(recall.num == edges.size() - k && recall.den == edges.size(),
                  "recall after deleting " + std::to_string(k) + " edges");
        o.require(diff(generated, truth).precision().num == diff(generated, truth).precision().den,
                  "precision after deletion");
        ++trials;
    }
    o.detail << "3 examples, " << trials << " deletion trials on " << edges.size() << " edges";
}

void performance(Outcome& o) {
    TempDir dir;
    int lines = bench::generate_synthetic(dir.path());
    bench::Measurement m = bench::measure(dir.path(), 5);
    o.require(m.median_seconds <= 5.0, "median " + std::to_string(m.median_seconds) + " s");
    o.require(m.peak_mb <= 256.0, "peak " + std::to_string(m.peak_mb) + " MB");
    o.detail << lines << " LoC, median " << m.median_seconds << " s, peak " << m.peak_mb << " MB";
}

void fixpoint_properties(Outcome& o, const std::vector<bench::BenchmarkCase>& cases) {
    // (a) monotonicity is checked after every pass; (c) one more pass is
    // a no-op.
    for (const auto& c : cases) {
        std::vector<ir::IRModule> modules = lower_package(c.dir, c.dir / "main.py");
        try {
            AnalysisOptions options;
            options.verify_monotonic = true;
            auto [state, report] = run_fixpoint(modules, initial_state(names_of(modules)), options);
            AnalysisState again = state;
            Evaluator evaluator(again);
            for (const auto* m : topological_order(modules)) {
                evaluator.eval_module(*m);
            }
            o.require(again.version == state.version && again.graph == state.graph, c.id() + " changed on extra pass");
        } catch (const MonotonicityViolation& e) {
            o.require(false, c.id() + ": " + e.what());
        }
    }
    // (b) module order does not matter.
    std::mt19937_64 rng(2024);
    for (uint64_t seed = 0; seed < 20; ++seed) {
        TempDir dir;
        for (const auto& [name, text] : testutil::random_program(seed)) {
            write_file(dir / name, text);
        }
        std::vector<ir::IRModule> modules = lower_package(dir.path(), dir / "main.py");
        std::vector<const ir::IRModule*> order = topological_order(modules);
        auto [reference, r0] = run_fixpoint(order, initial_state(names_of(modules)));
        for (int perm = 0; perm < 3; ++perm) {
            std::shuffle(order.begin(), order.end(), rng);
            auto [state, r] = run_fixpoint(order, initial_state(names_of(modules)));
            o.require(state.graph == reference.graph && state.scopes == reference.scopes &&
                          state.hierarchy == reference.hierarchy,
                      "program " + std::to_string(seed) + " depends on module order");
        }
    }
    o.detail << cases.size() << " corpus cases, 20 random programs";
}

void oracle_soundness(Outcome& o, const std::vector<bench::BenchmarkCase>& cases) {
    int checked = 0;
    int excluded = 0;
    size_t traced_edges = 0;
    for (const auto& c : cases) {
        if (!c.limitations.empty()) {
            ++excluded;
            continue;
        }
        CallGraph traced = parse_call_graph(python_tool("trace_calls.py", c.dir));
        CallGraph generated = analyze({c.dir / "main.py"}, c.dir).call_graph;
        for (const auto& [caller, callee] : traced.edges()) {
            o.require(generated.has_edge(caller, callee), c.id() + " misses " + caller + " -> " + callee);
        }
        traced_edges += traced.edge_count();
        ++checked;
    }
    o.detail << checked << " programs, " << traced_edges << " traced edges, " << excluded << " documented exceptions";
}

using MroMap = std::map<std::string, std::vector<std::string>>;

MroMap analyzer_mro(const fs::path& root) {
    AnalysisResult r = analyze({root / "main.py"}, root);
    MroMap out;
    for (const auto& [c, parents] : r.state.hierarchy.all()) {
        if (r.state.is_external(c)) {
            continue;
        }
        std::vector<std::string> order;
        for (const auto& k : linearize(r.state.hierarchy, c)) {
            if (!r.state.is_external(k)) {
                order.push_back(k.str());
            }
        }
        out[c.str()] = order;
    }
    return out;
}

void mro_oracle(Outcome& o, const std::vector<bench::BenchmarkCase>& cases) {
    int classes = 0;
    auto check = [&](const fs::path& root, const std::string& label) {
        MroMap expected = nlohmann::json::parse(python_tool("mro_oracle.py", root)).get<MroMap>();
        MroMap actual = analyzer_mro(root);
        for (const auto& [name, mro] : expected) {
            auto it = actual.find(name);
            o.require(it != actual.end() && it->second == mro, label + " " + name);
        }
        classes += static_cast<int>(expected.size());
        return expected;
    };
    for (const auto& c : cases) {
        check(c.dir, c.id());
    }
    TempDir dir;
    write_file(dir / "main.py",
               "class A:\n    pass\n\n\nclass B(A):\n    pass\n\n\nclass C(B, A):\n    pass\n\n\n"
               "class L(A):\n    pass\n\n\nclass R(A):\n    pass\n\n\nclass D(L, R):\n    pass\n");
    MroMap layout = check(dir.path(), "layout");
    o.require(layout["main.C"] == std::vector<std::string>{"main.C", "main.B", "main.A"}, "C(B, A) order");
    o.require(layout["main.D"] == std::vector<std::string>{"main.D", "main.L", "main.R", "main.A"}, "diamond order");
    o.detail << classes << " classes";
}

void reachability(Outcome& o) {
    fs::path root = source("tests/fixtures/reach");
    TempDir dir;
    auto run = [&](std::vector<std::string> args, std::string* stdout_text = nullptr) {
        std::ostringstream out;
        std::ostringstream err;
        int code = run_cli(args, out, err);
        if (stdout_text) {
            *stdout_text = out.str();
        }
        return code;
    };
    for (const char* app : {"app_calls", "app_imports"}) {
        int code = run({"analyze", (root / (std::string(app) + ".py")).string(), "--package", root.string(), "-o",
                        (dir / (std::string(app) + ".json")).string()});
        o.require(code == kExitOk, std::string("analyze ") + app);
    }
    std::string out;
    int calls = run({"reach", (dir / "app_calls.json").string(), "yamlish.loader.load"}, &out);
    o.require(calls == kExitOk, "app_calls exit " + std::to_string(calls));
    o.require(out == "yamlish.loader.load is called by:\n  app_calls.parse_config\n", "app_calls witnesses");
    int imports = run({"reach", (dir / "app_imports.json").string(), "yamlish.loader.load"});
    o.require(imports == kExitNotReachable, "app_imports exit " + std::to_string(imports));
    o.detail << "app_calls exit " << calls << " (witness app_calls.parse_config), app_imports exit " << imports;
}

}  // namespace

int main() {
    std::vector<bench::BenchmarkCase> cases;
    bench::SuiteReport report;
    try {
        cases = corpus();
        report = bench::run_suite(source("corpus"));
    } catch (const std::exception& e) {
        std::cerr << "cannot load the corpus: " << e.what() << "\n";
        return 9;
    }

    std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"crypto reproduction", crypto_reproduction},
        {"micro-benchmark verdicts", [&](Outcome& o) { benchmark_verdicts(o, report); }},
        {"inter-procedural categories sound", [&](Outcome& o) { interprocedural_categories(o, report); }},
        {"precision/recall machinery", precision_recall},
        {"performance at desk scale", performance},
        {"fixpoint properties", [&](Outcome& o) { fixpoint_properties(o, cases); }},
        {"oracle soundness", [&](Outcome& o) { oracle_soundness(o, cases); }},
        {"MRO oracle", [&](Outcome& o) { mro_oracle(o, cases); }},
        {"reachability case study", reachability},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail.str("");
            o.detail << "error: " << e.what();
        }
        failed += o.pass ? 0 : 1;
        std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL") << " - "
                  << o.detail.str() << std::endl;
    }
    return failed;
}
