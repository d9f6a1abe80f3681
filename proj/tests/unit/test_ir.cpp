#include <random>
#include <set>
#include <sstream>

#include "callflow/bench.hpp"
#include "callflow/ir.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace callflow;
using testutil::TempDir;
using testutil::write_file;

namespace {

ir::IRModule lower_text(const TempDir& dir, const std::string& module, const std::string& text) {
    fs::path path = dir / (module + ".py");
    write_file(path, text);
    return ir::lower(parse_module(path));
}

std::string lowered(const std::string& text, const std::string& module = "m") {
    TempDir dir;
    return ir::to_string(*lower_text(dir, module, text).body);
}

// Random programs over a broad slice of the grammar. Every production is
// valid Python 3.10; the generator output is checked against the
// interpreter's compiler before use.
class ProgramGen {
public:
    explicit ProgramGen(uint64_t seed) : rng_(seed) {}

    std::string program() {
        std::string out;
        int n = 1 + pick(6);
        for (int i = 0; i < n; ++i) {
            out += stmt(0, 0);
        }
        return out;
    }

private:
    int pick(int n) { return static_cast<int>(rng_() % static_cast<uint64_t>(n)); }

    std::string name() {
        static const char* names[] = {"a", "b", "f", "g", "obj", "self", "value", "cls", "x1"};
        return names[pick(9)];
    }

    std::string atom() {
        switch (pick(8)) {
            case 0: return std::to_string(pick(100));
            case 1: return "'s" + std::to_string(pick(9)) + "'";
            case 2: return "None";
            case 3: return "f'{" + name() + "}!'";
            case 4: return "b'raw'";
            case 5: return "3.5j";
            default: return name();
        }
    }

    std::string expr(int depth) {
        if (depth > 3) {
            return atom();
        }
        int d = depth + 1;
        switch (pick(22)) {
            case 0: return "(" + expr(d) + ")(" + args(d) + ")";
            case 1: return "(" + expr(d) + ")." + name();
            case 2: return "(" + expr(d) + ")[" + expr(d) + "]";
            case 3: return "(" + expr(d) + ")[" + expr(d) + ":" + expr(d) + "]";
            case 4: return "[" + expr(d) + ", " + expr(d) + "]";
            case 5: return "(" + expr(d) + ", " + expr(d) + ")";
            case 6: return "{" + expr(d) + ": " + expr(d) + "}";
            case 7: return "{" + expr(d) + "}";
            case 8: return "(lambda " + name() + ": " + expr(d) + ")";
            case 9: return "[" + expr(d) + " for " + name() + " in " + expr(d) + " if " + expr(d) + "]";
            case 10: return "{" + name() + ": " + expr(d) + " for " + name() + " in " + expr(d) + "}";
            case 11: return "(" + expr(d) + " for " + name() + " in " + expr(d) + ")";
            case 12: return "(" + expr(d) + " if " + expr(d) + " else " + expr(d) + ")";
            case 13: return "(" + expr(d) + " and " + expr(d) + ")";
            case 14: return "(" + expr(d) + " + " + expr(d) + ")";
            case 15: return "(not " + expr(d) + ")";
            case 16: return "(" + expr(d) + " < " + expr(d) + " <= " + expr(d) + ")";
            case 17: return "(" + expr(d) + " or " + expr(d) + ")";
            case 18: return "[*" + expr(d) + "]";
            case 19: return "{**" + expr(d) + "}";
            case 20: return "(-" + expr(d) + " ** 2)";
            default: return atom();
        }
    }

    std::string args(int depth) {
        switch (pick(5)) {
            case 0: return "";
            case 1: return expr(depth);
            case 2: return expr(depth) + ", " + name() + "=" + expr(depth);
            case 3: return "*" + expr(depth) + ", **" + expr(depth);
            default: return expr(depth) + ", " + expr(depth);
        }
    }

    std::string params() {
        switch (pick(6)) {
            case 0: return "";
            case 1: return "a, b=1";
            case 2: return "self, *args, **kwargs";
            case 3: return "a, /, b, *, c=None";
            case 4: return "x: int = 0";
            default: return "a";
        }
    }

    std::string block(int depth, int indent, bool in_function) {
        std::string out;
        int n = 1 + pick(3);
        for (int i = 0; i < n; ++i) {
            out += stmt(depth, indent, in_function);
        }
        return out;
    }

    std::string stmt(int depth, int indent, bool in_function = false) {
        std::string pad(static_cast<size_t>(indent) * 4, ' ');
        int d = depth + 1;
        int choice = depth > 2 ? pick(8) : pick(26);
        switch (choice) {
            case 0: return pad + name() + " = " + expr(d) + "\n";
            case 1: return pad + expr(d) + "\n";
            case 2: return pad + name() + ", *" + name() + " = " + expr(d) + "\n";
            case 3: return pad + name() + "." + name() + " = " + expr(d) + "\n";
            case 4: return pad + name() + "[" + expr(d) + "] = " + expr(d) + "\n";
            case 5: return pad + name() + " += " + expr(d) + "\n";
            case 6: return pad + "pass\n";
            case 7: return pad + name() + ": int = " + expr(d) + "\n";
            case 8:
                return pad + "def " + name() + "(" + params() + "):\n" + block(d, indent + 1, true);
            case 9:
                return pad + "@" + name() + "\n" + pad + "def " + name() + "(" + params() + "):\n" +
                       block(d, indent + 1, true);
            case 10:
                return pad + "class " + name() + "(" + (pick(2) ? name() : "") + "):\n" + block(d, indent + 1, false);
            case 11:
                return pad + "if " + expr(d) + ":\n" + block(d, indent + 1, in_function) + pad + "elif " + expr(d) +
                       ":\n" + block(d, indent + 1, in_function) + pad + "else:\n" + block(d, indent + 1, in_function);
            case 12:
                return pad + "for " + name() + " in " + expr(d) + ":\n" + block(d, indent + 1, in_function) + pad +
                       "else:\n" + block(d, indent + 1, in_function);
            case 13: return pad + "while " + expr(d) + ":\n" + block(d, indent + 1, in_function);
            case 14:
                return pad + "try:\n" + block(d, indent + 1, in_function) + pad + "except " + name() + " as " +
                       name() + ":\n" + block(d, indent + 1, in_function) + pad + "finally:\n" +
                       block(d, indent + 1, in_function);
            case 15:
                return pad + "with " + expr(d) + " as " + name() + ":\n" + block(d, indent + 1, in_function);
            case 16: return pad + "import os.path as " + name() + "\n";
            case 17: return pad + "from collections import " + name() + "\n";
            case 18:
                return in_function ? pad + "return " + expr(d) + "\n" : pad + "del " + name() + "\n";
            case 19: return in_function ? pad + "yield " + expr(d) + "\n" : pad + "assert " + expr(d) + "\n";
            case 20: return pad + "(" + name() + " := " + expr(d) + ")\n";
            case 21: return pad + "raise " + expr(d) + "\n";
            case 22:
                return pad + "match " + expr(d) + ":\n" + pad + "    case [" + name() + ", *_]:\n" +
                       block(d, indent + 2, in_function) + pad + "    case _:\n" + block(d, indent + 2, in_function);
            case 23:
                return pad + "async def " + name() + "(" + params() + "):\n" + pad + "    await " + expr(d) + "\n";
            case 24: return in_function ? pad + "yield from " + expr(d) + "\n" : pad + "pass\n";
            default: return pad + name() + " = " + name() + " = " + expr(d) + "\n";
        }
    }

    std::mt19937_64 rng_;
};

}  // namespace

TEST_CASE("simplest assignment") {
    CHECK(lowered("x = 1\n") == "Assign(x, Obj(-))");
}

TEST_CASE("call form of the crypto example") {
    fs::path path = testutil::source_dir() / "tests/fixtures/crypto/crypto.py";
    ir::IRModule m = ir::lower(parse_module(path));
    std::string text = ir::to_string(*m.body);
    CHECK(text.find("Assign(encrypted, Call(Attr(Id(crp), apply), {0: Obj(-), 1: Attr(Id(cryptops), encrypt)}))") !=
          std::string::npos);
    CHECK(text.find("Def(apply method, [self, msg, func], Return(Call(Id(func), {0: Attr(Id(self), key), 1: Id(msg)})))") !=
          std::string::npos);
    CHECK(m.module_name == "crypto");
    CHECK(m.diagnostics.empty());
}

TEST_CASE("mixed module checked node by node") {
    // Hand-lowered: the decorator becomes an application of `dec` to the
    // function object and the dict store an attribute assignment.
    const std::string src = "@dec\ndef f(a, b=g):\n    return a\n\ntable[\"k\"] = f\n";
    CHECK(lowered(src) ==
          "Seq(Seq(Def(f, [a, b=Id(g)], Return(Id(a))), Assign(f, Decorate(Id(dec), {0: Obj(m.f:func)}))), "
          "SetAttr(Id(table), <dict>k, Id(f)))");

    TempDir dir;
    ir::IRModule m = lower_text(dir, "m", src);
    const auto* top = m.body->as<ir::Seq>();
    REQUIRE(top);
    const auto* def_seq = top->first->as<ir::Seq>();
    REQUIRE(def_seq);
    const auto* def = def_seq->first->as<ir::FunctionDef>();
    REQUIRE(def);
    CHECK(def->name == "f");
    REQUIRE(def->params.size() == 2);
    CHECK(def->params[0].info.name == "a");
    CHECK(def->params[0].info.position == 0);
    CHECK(def->params[1].info.position == 1);
    REQUIRE(def->params[1].default_value);
    CHECK(def->params[1].default_value->as<ir::Identifier>()->name == "g");
    CHECK(def->body->as<ir::Return>()->value->as<ir::Identifier>()->name == "a");
    const auto* rebind = def_seq->second->as<ir::Assign>();
    REQUIRE(rebind);
    CHECK(rebind->target == "f");
    const auto* application = rebind->value->as<ir::Call>();
    REQUIRE(application);
    CHECK(application->decorator);
    CHECK(application->callee->as<ir::Identifier>()->name == "dec");
    REQUIRE(application->args.size() == 1);
    CHECK(application->args[0].key == "0");
    const auto* store = top->second->as<ir::AttrAssign>();
    REQUIRE(store);
    CHECK(store->attr == "<dict>k");
    CHECK(store->receiver->as<ir::Identifier>()->name == "table");
    CHECK(store->value->as<ir::Identifier>()->name == "f");
}

TEST_CASE("desugaring table") {
    SUBCASE("generator call is iterated") {
        CHECK(lowered("def g():\n    yield 1\nfor x in g():\n    pass\n") ==
              "Seq(Def(g generator, [], Seq(Return(Obj(-)), Obj(-))), Assign(x, Iter(Call(Id(g), {}))), Obj(-))");
    }
    SUBCASE("dict subscripts") {
        CHECK(lowered("d = {}\nd[\"key\"] = f\nd[\"key\"]\n", "dict") ==
              "Seq(Assign(d, Obj(dict.<dict#1>:var)), SetAttr(Id(d), <dict>key, Id(f)), Attr(Id(d), <dict>key))");
    }
    SUBCASE("list literal and indices") {
        CHECK(lowered("l = [a, b]\nl[3]\nl[i]\n", "lst") ==
              "Seq(Assign(l, Seq(SetAttr(Obj(lst.<list#1>:var), <idx>0, Id(a)), SetAttr(Obj(lst.<list#1>:var), "
              "<idx>1, Id(b)), Obj(lst.<list#1>:var))), Attr(Id(l), <idx>3), Id(i), Attr(Id(l), <idx>*))");
    }
    SUBCASE("lambdas are numbered in source order") {
        CHECK(lowered("f = lambda p: p\ng = lambda: 0\n") ==
              "Seq(Assign(f, Def(<lambda1>, [p], Return(Id(p)))), Assign(g, Def(<lambda2>, [], Return(Obj(-)))))");
    }
    SUBCASE("both branches of a conditional") {
        CHECK(lowered("if c:\n    x = f\nelse:\n    x = g\n") == "Seq(Id(c), Assign(x, Id(f)), Assign(x, Id(g)))");
    }
    SUBCASE("loop body lowered once") {
        CHECK(lowered("while c:\n    f()\n") == "Seq(Id(c), Call(Id(f), {}))");
    }
    SUBCASE("try, except binding, finally and raise") {
        CHECK(lowered("try:\n    a()\nexcept E as e:\n    b()\nfinally:\n    c()\nraise X()\n") ==
              "Seq(Seq(Call(Id(a), {}), Assign(e, Id(E)), Call(Id(b), {}), Call(Id(c), {})), Call(Id(X), {}))");
    }
    SUBCASE("imports") {
        CHECK(lowered("import m\nfrom m import x as y\nimport m as z\n", "imp") ==
              "Seq(Import(m, m, m), Import(x, m, y), Import(m, m, z))");
    }
    SUBCASE("chained and augmented assignment") {
        CHECK(lowered("x = y = e\nx += e\n") ==
              "Seq(Seq(Assign(<tmp1>, Id(e)), Assign(x, Id(<tmp1>)), Assign(y, Id(<tmp1>))), "
              "Assign(x, Seq(Id(x), Id(e))))");
    }
    SUBCASE("instantiation of a known class versus a call through an expression") {
        CHECK(lowered("class C:\n    pass\nC(1)\nfactory()(1)\n") ==
              "Seq(Class(C, [], Obj(-)), New(C, {0: Obj(-)}), Call(Call(Id(factory), {}), {0: Obj(-)}))");
    }
    SUBCASE("bare return") {
        CHECK(lowered("def f():\n    return\n") == "Def(f, [], Return(Obj(-)))");
    }
    SUBCASE("empty function body is never empty") {
        TempDir dir;
        ir::IRModule m = lower_text(dir, "m", "def f():\n    pass\n");
        const auto* def = m.body->as<ir::FunctionDef>();
        REQUIRE(def);
        REQUIRE(def->body);
    }
}

TEST_CASE("unsupported constructs become diagnostics") {
    TempDir dir;
    ir::IRModule m = lower_text(dir, "m", "a, *rest = x\neval('1')\n");
    CHECK_FALSE(m.diagnostics.empty());
    std::set<int> lines;
    for (const auto& d : m.diagnostics) {
        lines.insert(d.pos.line);
    }
    CHECK(lines.count(1) == 1);
}

TEST_CASE("reserved spellings cannot be identifiers") {
    for (const std::string& s : {ir::index_attr(3), ir::dict_attr("k"), ir::lambda_name(1), std::string(ir::kSuper),
                                 std::string(ir::kThunk), std::string(ir::kWildcardIndex)}) {
        CHECK(s.find_first_of("<>*") != std::string::npos);
    }
    CHECK(ir::index_attr(3) == "<idx>3");
    CHECK(ir::dict_attr("key") == "<dict>key");
    CHECK(ir::lambda_name(2) == "<lambda2>");
}

TEST_CASE("property: totality on random programs") {
    TempDir dir;
    const int kPrograms = 300;
    std::vector<fs::path> files;
    for (int i = 0; i < kPrograms; ++i) {
        ProgramGen gen(1000 + static_cast<uint64_t>(i));
        fs::path path = dir / ("p" + std::to_string(i) + ".py");
        write_file(path, gen.program());
        files.push_back(path);
    }
    // The interpreter's compiler confirms every generated program is valid.
    std::string check =
        "import sys\n"
        "import warnings; warnings.simplefilter('ignore')\n"
        "bad = []\n"
        "for p in sys.argv[1:]:\n"
        "    try:\n"
        "        compile(open(p).read(), p, 'exec')\n"
        "    except SyntaxError as e:\n"
        "        bad.append(p + ': ' + str(e))\n"
        "print('\\n'.join(bad))\n";
    write_file(dir / "check.py", check);
    std::string cmd = testutil::python() + " " + testutil::shell_quote((dir / "check.py").string());
    for (const auto& f : files) {
        cmd += " " + testutil::shell_quote(f.string());
    }
    auto result = testutil::run_command(cmd);
    REQUIRE(result.status == 0);
    INFO(result.output);
    CHECK(result.output == "\n");

    for (const auto& f : files) {
        INFO(f.string());
        ModuleUnit unit = parse_module(f);
        CHECK_NOTHROW(ir::lower(unit));
    }
}

TEST_CASE("property: totality on the standard library") {
    fs::path stdlib = "/usr/lib/python3.10";
    if (!fs::is_directory(stdlib)) {
        MESSAGE("standard library not found, skipped");
        return;
    }
    int lowered_files = 0;
    int undecodable = 0;
    for (const auto& entry : fs::directory_iterator(stdlib)) {
        if (entry.path().extension() != ".py") {
            continue;
        }
        ModuleUnit unit;
        try {
            unit = parse_module(entry.path());
        } catch (const SyntaxError& e) {
            // Only files that are not UTF-8 are rejected.
            std::string what = e.what();
            CHECK_MESSAGE(what.find("UTF-8") != std::string::npos, (entry.path().string() + ": " + what));
            ++undecodable;
            continue;
        }
        INFO(entry.path().string());
        CHECK_NOTHROW(ir::lower(unit));
        ++lowered_files;
    }
    CHECK(lowered_files > 150);
    CHECK(undecodable <= 2);
}

TEST_CASE("lowering is deterministic and keeps positions inside the file") {
    auto corpus = bench::load_corpus(testutil::source_dir() / "corpus");
    for (const auto& c : corpus) {
        for (const auto& src : c.sources) {
            INFO(src.string());
            ModuleUnit unit = parse_module(src);
            ir::IRModule a = ir::lower(unit);
            ir::IRModule b = ir::lower(unit);
            CHECK(ir::to_string(*a.body) == ir::to_string(*b.body));

            std::string text = testutil::read_file(src);
            std::vector<size_t> line_lengths;
            std::istringstream lines(text);
            for (std::string line; std::getline(lines, line);) {
                line_lengths.push_back(line.size());
            }
            int nodes = 0;
            int previous_id = -1;
            ir::walk(*a.body, [&](const ir::Node& n) {
                ++nodes;
                CHECK(n.id > previous_id);
                previous_id = n.id;
                CHECK(n.pos.line >= 1);
                CHECK(static_cast<size_t>(n.pos.line) <= std::max<size_t>(line_lengths.size(), 1));
                if (n.pos.line >= 1 && static_cast<size_t>(n.pos.line) <= line_lengths.size()) {
                    CHECK(static_cast<size_t>(n.pos.col) <= line_lengths[static_cast<size_t>(n.pos.line) - 1]);
                }
            });
            CHECK(nodes == a.node_count);
        }
    }
}

TEST_CASE("property: single-path corpus programs lower to a straight sequence") {
    // Without branches the top-level chain contains no duplicated
    // alternatives: statements appear in source order.
    auto corpus = bench::load_corpus(testutil::source_dir() / "corpus");
    for (const auto& c : corpus) {
        REQUIRE(bench::lint_case(c).empty());
        for (const auto& src : c.sources) {
            INFO(src.string());
            ir::IRModule m = ir::lower(parse_module(src));
            std::vector<int> lines;
            std::function<void(const ir::Node&)> flatten = [&](const ir::Node& n) {
                if (const auto* s = n.as<ir::Seq>()) {
                    flatten(*s->first);
                    flatten(*s->second);
                } else {
                    lines.push_back(n.pos.line);
                }
            };
            flatten(*m.body);
            CHECK(std::is_sorted(lines.begin(), lines.end()));
        }
    }
}
