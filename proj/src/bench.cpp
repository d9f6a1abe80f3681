#include "callflow/bench.hpp"

#include <json.hpp>

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include "callflow/pipeline.hpp"

namespace callflow::bench {

namespace {

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw CorpusError("cannot read " + p.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> limitation_lines(const std::string& readme) {
    std::vector<std::string> out;
    std::istringstream in(readme);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("Limitation:", 0) == 0) {
            std::string rest = line.substr(std::strlen("Limitation:"));
            rest.erase(0, rest.find_first_not_of(' '));
            out.push_back(rest);
        }
    }
    return out;
}

std::string first_paragraph(const std::string& readme) {
    std::istringstream in(readme);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            if (!out.empty()) {
                break;
            }
            continue;
        }
        out += (out.empty() ? "" : " ") + line;
    }
    return out;
}

class BranchFinder {
public:
    BranchFinder(std::string file, std::vector<std::string>& out) : file_(std::move(file)), out_(out) {}

    void block(const syntax::Block& b) {
        for (const auto& s : b) {
            stmt(*s);
        }
    }

private:
    void report(syntax::Pos pos, const std::string& what) {
        out_.push_back(file_ + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + what);
    }

    void stmt(const syntax::Stmt& s) {
        using syntax::StmtKind;
        switch (s.kind) {
            case StmtKind::If:
                report(s.pos, "if statement");
                break;
            case StmtKind::While:
                report(s.pos, "while loop");
                break;
            case StmtKind::Match:
                report(s.pos, "match statement");
                break;
            default:
                break;
        }
        expr(s.value.get());
        expr(s.annotation.get());
        for (const auto& t : s.targets) {
            expr(t.get());
        }
        for (const auto& d : s.decorators) {
            expr(d.get());
        }
        for (const auto& b : s.bases) {
            expr(b.get());
        }
        for (const auto& k : s.keywords) {
            expr(k.value.get());
        }
        for (const auto& p : s.params) {
            expr(p.default_value.get());
        }
        for (const auto& w : s.items) {
            expr(w.context.get());
            expr(w.target.get());
        }
        block(s.body);
        block(s.orelse);
        block(s.finalbody);
        for (const auto& h : s.handlers) {
            expr(h.type.get());
            block(h.body);
        }
        for (const auto& c : s.cases) {
            block(c.body);
        }
    }

    void expr(const syntax::Expr* e) {
        if (!e) {
            return;
        }
        using syntax::ExprKind;
        if (e->kind == ExprKind::IfExp) {
            report(e->pos, "conditional expression");
        } else if (e->kind == ExprKind::BoolOp) {
            report(e->pos, "short-circuit '" + e->text + "'");
        }
        expr(e->value.get());
        expr(e->target.get());
        for (const auto& i : e->items) {
            expr(i.get());
        }
        for (const auto& k : e->keys) {
            expr(k.get());
        }
        for (const auto& k : e->keywords) {
            expr(k.value.get());
        }
        for (const auto& p : e->params) {
            expr(p.default_value.get());
        }
        for (const auto& c : e->clauses) {
            expr(c.target.get());
            expr(c.iter.get());
            if (!c.conditions.empty()) {
                report(e->pos, "comprehension condition");
            }
            for (const auto& cond : c.conditions) {
                expr(cond.get());
            }
        }
    }

    std::string file_;
    std::vector<std::string>& out_;
};

std::string pct(const Ratio& r) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(1) << r.percent() << "%";
    return out.str();
}

nlohmann::json edges_json(const std::set<Edge>& edges) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [a, b] : edges) {
        out.push_back({a, b});
    }
    return out;
}

}  // namespace

const std::vector<std::string>& categories() {
    static const std::vector<std::string> kCategories = {
        "assignments", "built-ins", "classes",   "decorators", "dicts",      "direct_calls", "exceptions", "functions",
        "generators",  "imports",   "kwargs",    "lambdas",    "lists",      "mro",          "parameters", "returns",
    };
    return kCategories;
}

BenchmarkCase load_case(const fs::path& case_dir, const std::string& category) {
    BenchmarkCase c;
    c.category = category;
    c.name = case_dir.filename().string();
    c.dir = case_dir;
    fs::path main = case_dir / "main.py";
    if (!fs::is_regular_file(main)) {
        throw CorpusError(c.id() + ": missing main.py");
    }
    c.sources.push_back(main);
    std::vector<fs::path> others;
    for (const auto& p : python_sources(case_dir)) {
        if (p != main) {
            others.push_back(p);
        }
    }
    c.sources.insert(c.sources.end(), others.begin(), others.end());
    fs::path expected = case_dir / "callgraph.json";
    if (!fs::is_regular_file(expected)) {
        throw CorpusError(c.id() + ": missing callgraph.json");
    }
    try {
        c.expected = parse_call_graph(read_text(expected));
    } catch (const CallGraphFormatError& e) {
        throw CorpusError(c.id() + ": " + e.what());
    }
    fs::path readme = case_dir / "README.md";
    if (fs::is_regular_file(readme)) {
        std::string text = read_text(readme);
        c.description = first_paragraph(text);
        c.limitations = limitation_lines(text);
    }
    return c;
}

std::vector<BenchmarkCase> load_corpus(const fs::path& corpus_dir) {
    if (!fs::is_directory(corpus_dir)) {
        throw CorpusError("corpus directory not found: " + corpus_dir.string());
    }
    const auto& known = categories();
    std::vector<BenchmarkCase> out;
    std::vector<fs::path> category_dirs;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (entry.is_directory()) {
            category_dirs.push_back(entry.path());
        }
    }
    std::sort(category_dirs.begin(), category_dirs.end());
    for (const auto& dir : category_dirs) {
        std::string category = dir.filename().string();
        if (std::find(known.begin(), known.end(), category) == known.end()) {
            throw CorpusError("unknown category directory: " + category);
        }
        std::vector<fs::path> cases;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_directory()) {
                cases.push_back(entry.path());
            }
        }
        std::sort(cases.begin(), cases.end());
        for (const auto& c : cases) {
            out.push_back(load_case(c, category));
        }
    }
    if (out.empty()) {
        throw CorpusError("corpus contains no cases: " + corpus_dir.string());
    }
    return out;
}

std::vector<std::string> lint_case(const BenchmarkCase& c) {
    std::vector<std::string> out;
    for (const auto& src : c.sources) {
        ModuleUnit unit = parse_module(src);
        BranchFinder finder(fs::relative(src, c.dir).string(), out);
        finder.block(unit.syntax_tree->body);
    }
    return out;
}

CaseResult run_case(const BenchmarkCase& c, const AnalysisOptions& options) {
    CaseResult r;
    r.category = c.category;
    r.name = c.name;
    r.limitations = c.limitations;
    try {
        AnalysisResult analysis = analyze({c.dir / "main.py"}, c.dir, options);
        r.diff = diff(analysis.call_graph, c.expected);
        r.complete = r.diff.complete();
        r.sound = r.diff.sound();
        r.iterations = analysis.report.iterations;
    } catch (const NonConvergence& e) {
        r.error = e.what();
        r.nonconvergent = true;
    } catch (const std::exception& e) {
        r.error = e.what();
        r.complete = false;
        r.sound = false;
    }
    return r;
}

SuiteReport summarize(std::vector<CaseResult> results) {
    SuiteReport report;
    std::sort(results.begin(), results.end(),
              [](const CaseResult& a, const CaseResult& b) { return a.id() < b.id(); });
    for (const auto& r : results) {
        for (Tally* t : {&report.categories[r.category], &report.totals}) {
            ++t->cases;
            t->complete += r.complete ? 1 : 0;
            t->sound += r.sound ? 1 : 0;
        }
    }
    report.cases = std::move(results);
    return report;
}

SuiteReport run_suite(const fs::path& corpus_dir, const SuiteOptions& options) {
    std::vector<BenchmarkCase> cases = load_corpus(corpus_dir);
    std::vector<CaseResult> results(cases.size());
    unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(cases.size()));
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < cases.size(); i = next++) {
            results[i] = run_case(cases[i], options.analysis);
        }
    };
    std::vector<std::thread> threads;
    for (unsigned i = 1; i < jobs; ++i) {
        threads.emplace_back(worker);
    }
    worker();
    for (auto& t : threads) {
        t.join();
    }
    return summarize(std::move(results));
}

std::string SuiteReport::table() const {
    std::ostringstream out;
    out << std::left << std::setw(16) << "Category" << std::right << std::setw(7) << "Cases" << std::setw(11)
        << "Complete" << std::setw(9) << "Sound" << "\n";
    auto row = [&](const std::string& name, const Tally& t) {
        out << std::left << std::setw(16) << name << std::right << std::setw(7) << t.cases << std::setw(11)
            << (std::to_string(t.complete) + "/" + std::to_string(t.cases)) << std::setw(9)
            << (std::to_string(t.sound) + "/" + std::to_string(t.cases)) << "\n";
    };
    for (const auto& [name, t] : categories) {
        row(name, t);
    }
    row("total", totals);
    bool header = false;
    for (const auto& c : cases) {
        if (c.complete && c.sound) {
            continue;
        }
        if (!header) {
            out << "\nFailing cases:\n";
            header = true;
        }
        out << "  " << c.id() << (c.complete ? "" : " incomplete") << (c.sound ? "" : " unsound") << "\n";
        if (!c.error.empty()) {
            out << "    error: " << c.error << "\n";
        }
        for (const auto& [a, b] : c.diff.false_positives) {
            out << "    extra   " << a << " -> " << b << "\n";
        }
        for (const auto& [a, b] : c.diff.false_negatives) {
            out << "    missing " << a << " -> " << b << "\n";
        }
    }
    header = false;
    for (const auto& c : cases) {
        if (c.limitations.empty()) {
            continue;
        }
        if (!header) {
            out << "\nKnown exceptions:\n";
            header = true;
        }
        for (const auto& l : c.limitations) {
            out << "  " << c.id() << ": " << l << "\n";
        }
    }
    return out.str();
}

std::string SuiteReport::json() const {
    nlohmann::json j;
    j["cases"] = nlohmann::json::array();
    for (const auto& c : cases) {
        nlohmann::json jc;
        jc["id"] = c.id();
        jc["category"] = c.category;
        jc["name"] = c.name;
        jc["complete"] = c.complete;
        jc["sound"] = c.sound;
        jc["iterations"] = c.iterations;
        jc["precision"] = pct(c.diff.precision());
        jc["recall"] = pct(c.diff.recall());
        jc["true_positives"] = c.diff.true_positives.size();
        jc["false_positives"] = edges_json(c.diff.false_positives);
        jc["false_negatives"] = edges_json(c.diff.false_negatives);
        if (!c.error.empty()) {
            jc["error"] = c.error;
        }
        jc["limitations"] = c.limitations;
        j["cases"].push_back(std::move(jc));
    }
    auto tally = [](const Tally& t) { return nlohmann::json{{"cases", t.cases}, {"complete", t.complete}, {"sound", t.sound}}; };
    j["categories"] = nlohmann::json::object();
    for (const auto& [name, t] : categories) {
        j["categories"][name] = tally(t);
    }
    j["totals"] = tally(totals);
    return j.dump(2);
}

std::vector<fs::path> python_sources(const fs::path& dir) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) {
        return out;
    }
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".py") {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Measurement measure(const fs::path& package_dir, int repetitions, const AnalysisOptions& options) {
    if (repetitions < 1) {
        throw std::invalid_argument("repetitions must be at least 1");
    }
    if (!fs::is_directory(package_dir)) {
        throw IOError("package directory not found: " + package_dir.string());
    }
    std::vector<fs::path> sources = python_sources(package_dir);
    // A regular package is imported from its parent directory.
    fs::path root = package_dir;
    if (fs::exists(package_dir / "__init__.py")) {
        root = fs::canonical(package_dir).parent_path();
    }
    Measurement m;
    long peak_kb = 0;
    for (int i = 0; i < repetitions; ++i) {
        int fds[2];
        if (pipe(fds) != 0) {
            throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
        }
        auto start = std::chrono::steady_clock::now();
        pid_t pid = fork();
        if (pid < 0) {
            throw std::runtime_error(std::string("fork: ") + std::strerror(errno));
        }
        if (pid == 0) {
            close(fds[0]);
            int status = 0;
            try {
                analyze(sources, root, options);
            } catch (const NonConvergence&) {
                status = 2;
            } catch (const std::exception& e) {
                std::string msg = e.what();
                ssize_t written = write(fds[1], msg.data(), msg.size());
                (void)written;
                status = 1;
            }
            close(fds[1]);
            _exit(status);
        }
        close(fds[1]);
        std::string error;
        char buf[512];
        for (ssize_t n; (n = read(fds[0], buf, sizeof buf)) > 0;) {
            error.append(buf, static_cast<size_t>(n));
        }
        close(fds[0]);
        int status = 0;
        struct rusage usage {};
        if (wait4(pid, &status, 0, &usage) < 0) {
            throw std::runtime_error(std::string("wait4: ") + std::strerror(errno));
        }
        auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (WIFEXITED(status) && WEXITSTATUS(status) == 2) {
            throw NonConvergence(options.max_passes);
        }
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
            throw std::runtime_error(error.empty() ? "analysis process failed" : error);
        }
        m.samples.push_back(elapsed);
        peak_kb = std::max(peak_kb, usage.ru_maxrss);
    }
    std::vector<double> sorted = m.samples;
    std::sort(sorted.begin(), sorted.end());
    size_t n = sorted.size();
    m.median_seconds = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2;
    m.peak_mb = static_cast<double>(peak_kb) / 1024.0;
    return m;
}

namespace {

// Deterministic across platforms: only raw engine output is used.
class Dice {
public:
    explicit Dice(uint64_t seed) : engine_(seed) {}
    int below(int n) { return static_cast<int>(engine_() % static_cast<uint64_t>(n)); }

private:
    std::mt19937_64 engine_;
};

struct SynthModule {
    std::string name;
    std::vector<std::string> classes;
    std::vector<std::string> functions;
};

std::string synth_module(Dice& dice, int index, const std::vector<SynthModule>& earlier, SynthModule& self,
                         const std::string& package) {
    std::ostringstream out;
    std::vector<const SynthModule*> deps;
    for (int k = 0; k < 2 && !earlier.empty(); ++k) {
        const SynthModule* d = &earlier[static_cast<size_t>(dice.below(static_cast<int>(earlier.size())))];
        if (std::find(deps.begin(), deps.end(), d) == deps.end()) {
            deps.push_back(d);
        }
    }
    out << "\"\"\"Generated module " << index << ".\"\"\"\n\n";
    for (const auto* d : deps) {
        out << "from " << package << " import " << d->name << "\n";
    }
    out << "\n\n";
    std::string prefix = "M" + std::to_string(index);
    for (int f = 0; f < 6; ++f) {
        std::string fn = "helper_" + std::to_string(index) + "_" + std::to_string(f);
        out << "def " << fn << "(value, callback=None):\n";
        out << "    result = [value, value]\n";
        if (f > 0) {
            out << "    result.append(" << self.functions[static_cast<size_t>(dice.below(f))] << "(value))\n";
        }
        if (!deps.empty()) {
            const SynthModule* d = deps[static_cast<size_t>(dice.below(static_cast<int>(deps.size())))];
            out << "    other = " << d->name << "." << d->functions[static_cast<size_t>(dice.below(6))]
                << "(value)\n";
        } else {
            out << "    other = value\n";
        }
        out << "    if callback is not None:\n";
        out << "        return callback(other)\n";
        out << "    return result\n\n\n";
        self.functions.push_back(fn);
    }
    for (int c = 0; c < 4; ++c) {
        std::string cls = prefix + "Worker" + std::to_string(c);
        std::string base;
        if (c > 0 && dice.below(2) == 0) {
            base = self.classes[static_cast<size_t>(dice.below(c))];
        } else if (!deps.empty() && dice.below(2) == 0) {
            const SynthModule* d = deps[static_cast<size_t>(dice.below(static_cast<int>(deps.size())))];
            base = d->name + "." + d->classes[static_cast<size_t>(dice.below(4))];
        }
        out << "class " << cls << (base.empty() ? "" : "(" + base + ")") << ":\n";
        out << "    \"\"\"Worker " << c << " of module " << index << ".\"\"\"\n\n";
        out << "    def __init__(self, size=3):\n";
        if (!base.empty()) {
            out << "        super().__init__(size)\n";
        }
        out << "        self.size = size\n";
        out << "        self.handler = " << self.functions[static_cast<size_t>(dice.below(6))] << "\n";
        out << "        self.items = {'first': self.step, 'second': self.finish}\n\n";
        for (int m = 0; m < 5; ++m) {
            out << "    def method_" << m << "(self, data):\n";
            out << "        total = self.size\n";
            out << "        for item in data:\n";
            out << "            total = total + 1\n";
            if (m > 0) {
                out << "        self.method_" << dice.below(m) << "(data)\n";
            }
            out << "        return self.handler(total)\n\n";
        }
        out << "    def step(self, value):\n";
        out << "        func = self.items['first']\n";
        out << "        return " << self.functions[static_cast<size_t>(dice.below(6))]
            << "(value, callback=lambda x: x)\n\n";
        out << "    def finish(self, value):\n";
        out << "        return self.method_4([value])\n\n";
        out << "    def generate(self, count):\n";
        out << "        for i in range(count):\n";
        out << "            yield self.step(i)\n\n\n";
        self.classes.push_back(cls);
    }
    out << "def run_" << index << "():\n";
    for (const auto& cls : self.classes) {
        std::string var = "w" + cls.substr(cls.size() - 1);
        out << "    " << var << " = " << cls << "()\n";
        out << "    " << var << ".method_" << dice.below(5) << "([1, 2])\n";
        out << "    for value in " << var << ".generate(2):\n";
        out << "        " << var << ".finish(value)\n";
    }
    out << "    return " << self.functions.back() << "(1, callback=" << self.functions.front() << ")\n";
    return out.str();
}

}  // namespace

int generate_synthetic(const fs::path& out_dir, const SyntheticSpec& spec) {
    Dice dice(spec.seed);
    fs::path root = out_dir / spec.package;
    fs::create_directories(root);
    std::vector<SynthModule> modules;
    int lines = 0;
    auto write = [&](const fs::path& p, const std::string& text) {
        std::ofstream out(p, std::ios::binary);
        if (!out) {
            throw IOError("cannot write " + p.string());
        }
        out << text;
        lines += static_cast<int>(std::count(text.begin(), text.end(), '\n'));
    };
    write(root / "__init__.py", "");
    for (int i = 0; lines < spec.target_loc - 40; ++i) {
        SynthModule m;
        m.name = "mod" + std::to_string(i);
        write(root / (m.name + ".py"), synth_module(dice, i, modules, m, spec.package));
        modules.push_back(std::move(m));
    }
    std::ostringstream main;
    for (const auto& m : modules) {
        main << "from " << spec.package << " import " << m.name << "\n";
    }
    main << "\n\ndef main():\n";
    for (size_t i = 0; i < modules.size(); ++i) {
        main << "    " << modules[i].name << ".run_" << i << "()\n";
    }
    main << "\n\nmain()\n";
    write(out_dir / "main.py", main.str());
    return lines;
}

}  // namespace callflow::bench
