#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "callflow/frontend.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace callflow;
using testutil::TempDir;
using testutil::write_file;

namespace {

std::set<std::string> module_names(const PackageIndex& index) {
    std::set<std::string> names;
    for (const auto& [name, unit] : index.modules) {
        names.insert(name);
    }
    return names;
}

// Imports `entry` under the reference interpreter and lists every loaded
// module whose file lives under `root`.
std::set<std::string> interpreter_modules(const fs::path& root, const std::string& entry) {
    std::string script =
        "import sys, os\n"
        "root = sys.argv[1]\n"
        "sys.path.insert(0, root)\n"
        "sys.dont_write_bytecode = True\n"
        "import importlib; importlib.import_module(sys.argv[2])\n"
        "for name, m in sorted(sys.modules.items()):\n"
        "    f = getattr(m, '__file__', None)\n"
        "    if f and os.path.realpath(f).startswith(os.path.realpath(root) + os.sep):\n"
        "        print(name)\n";
    fs::path script_path = root.parent_path() / (root.filename().string() + "-oracle.py");
    write_file(script_path, script);
    auto result = testutil::run_command(testutil::python() + " " + testutil::shell_quote(script_path.string()) + " " +
                                        testutil::shell_quote(root.string()) + " " + entry);
    fs::remove(script_path);
    REQUIRE(result.status == 0);
    std::set<std::string> names;
    std::istringstream lines(result.output);
    for (std::string line; std::getline(lines, line);) {
        names.insert(line);
    }
    return names;
}

}  // namespace

TEST_CASE("parse_module on an empty file") {
    TempDir dir;
    write_file(dir / "empty.py", "");
    ModuleUnit unit = parse_module(dir / "empty.py");
    CHECK(unit.module_name == "empty");
    CHECK(unit.syntax_tree->body.empty());
}

TEST_CASE("parse_module errors") {
    TempDir dir;
    CHECK_THROWS_AS(parse_module(dir / "missing.py"), IOError);
    write_file(dir / "bad.py", "def f(:\n    pass\n");
    try {
        parse_module(dir / "bad.py");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.pos().line == 1);
        CHECK(std::string(e.what()).find("bad.py:1:") != std::string::npos);
    }
    write_file(dir / "latin1.py", "x = '\xe9'\n");
    CHECK_THROWS_AS(parse_module(dir / "latin1.py"), SyntaxError);
    write_file(dir / "bom.py", "\xEF\xBB\xBFx = 1\n");
    CHECK(parse_module(dir / "bom.py").syntax_tree->body.size() == 1);
}

TEST_CASE("external import is recorded, not parsed") {
    TempDir dir;
    write_file(dir / "crypto.py", "import cryptops\nx = cryptops.encrypt\n");
    PackageIndex index = resolve_imports({dir / "crypto.py"}, dir.path());
    CHECK(module_names(index) == std::set<std::string>{"crypto"});
    REQUIRE(index.unresolved_imports.size() == 1);
    CHECK(index.unresolved_imports[0] == UnresolvedImport{"crypto", "cryptops"});
    CHECK(index.modules.at("crypto").is_entrypoint);
}

TEST_CASE("cyclic imports parse each file once") {
    TempDir dir;
    write_file(dir / "a.py", "import b\n");
    write_file(dir / "b.py", "import a\n");
    PackageIndex index = resolve_imports({dir / "a.py"}, dir.path());
    CHECK(module_names(index) == std::set<std::string>{"a", "b"});
    CHECK(index.unresolved_imports.empty());
    CHECK(index.modules.at("a").is_entrypoint);
    CHECK_FALSE(index.modules.at("b").is_entrypoint);
}

TEST_CASE("nested package layout agrees with the interpreter") {
    TempDir dir;
    write_file(dir / "pkg/__init__.py", "");
    write_file(dir / "pkg/sub/__init__.py", "");
    write_file(dir / "pkg/sub/m.py", "def f():\n    pass\n");
    write_file(dir / "main.py", "import pkg.sub.m\npkg.sub.m.f()\n");
    PackageIndex index = resolve_imports({dir / "main.py"}, dir.path());
    auto expected = std::set<std::string>{"main", "pkg", "pkg.sub", "pkg.sub.m"};
    CHECK(module_names(index) == expected);
    CHECK(interpreter_modules(dir.path(), "main") == expected);
    CHECK(index.modules.at("pkg").is_package);
    CHECK_FALSE(index.modules.at("pkg.sub.m").is_package);
}

TEST_CASE("relative imports, namespace packages and partial resolution") {
    TempDir dir;
    write_file(dir / "app/__init__.py", "from . import util\nfrom .core import engine\n");
    write_file(dir / "app/util.py", "from .core.engine import run\nfrom .. import nowhere\n");
    write_file(dir / "app/core/__init__.py", "from .engine import *\n");
    write_file(dir / "app/core/engine.py", "import app.missing.deep\nfrom ns.inner import tool\n");
    write_file(dir / "ns/inner.py", "import json\n");
    write_file(dir / "main.py", "import app\nfrom app import util as u\n");
    PackageIndex index = resolve_imports({dir / "main.py"}, dir.path());
    CHECK(module_names(index) ==
          std::set<std::string>{"main", "app", "app.util", "app.core", "app.core.engine", "ns.inner"});
    CHECK(index.namespace_packages == std::set<std::string>{"ns"});
    std::set<UnresolvedImport> unresolved(index.unresolved_imports.begin(), index.unresolved_imports.end());
    CHECK(unresolved.count({"app.core.engine", "app.missing.deep"}) == 1);
    CHECK(unresolved.count({"app.util", ".."}) == 1);
    CHECK(unresolved.count({"ns.inner", "json"}) == 1);
    CHECK(unresolved.size() == 3);
}

TEST_CASE("relative helper") {
    CHECK(resolve_relative("a.b.c", false, 1, "x") == "a.b.x");
    CHECK(resolve_relative("a.b.c", false, 2, "") == "a");
    CHECK(resolve_relative("a.b", true, 1, "x") == "a.b.x");
    CHECK(resolve_relative("a", true, 2, "x") == "");
    CHECK(module_name_for("/r/pkg/__init__.py", "/r") == "pkg");
    CHECK(module_name_for("/r/pkg/mod.py", "/r") == "pkg.mod");
    CHECK(module_name_for("/elsewhere/mod.py", "/r") == "");
}

TEST_CASE("entrypoint outside the root is rejected") {
    TempDir dir;
    write_file(dir / "root/a.py", "");
    write_file(dir / "other.py", "");
    CHECK_THROWS_AS(resolve_imports({dir / "other.py"}, dir / "root"), IOError);
    CHECK_THROWS_AS(resolve_imports({dir / "root/none.py"}, dir / "root"), IOError);
    CHECK_THROWS_AS(resolve_imports({dir / "root/a.py"}, dir / "nope"), IOError);
}

TEST_CASE("broken non-entrypoint module degrades to a diagnostic") {
    TempDir dir;
    write_file(dir / "main.py", "import broken\n");
    write_file(dir / "broken.py", "def (\n");
    PackageIndex index = resolve_imports({dir / "main.py"}, dir.path());
    CHECK(module_names(index) == std::set<std::string>{"main"});
    CHECK(index.diagnostics.size() == 1);
    CHECK(index.unresolved_imports.size() == 1);
}

// Random package trees with decoys of every imported name placed beside the
// root: nothing outside the root may be parsed, every import is accounted
// for, resolving twice gives the same index, and the interpreter agrees.
TEST_CASE("property: closure, idempotence and decoy isolation over random trees") {
    std::mt19937 rng(20240611);
    const std::vector<std::string> names = {"alpha", "beta", "gamma", "delta", "eps"};
    for (int round = 0; round < 12; ++round) {
        TempDir dir;
        fs::path root = dir / "root";
        std::vector<std::string> modules;
        for (const auto& n : names) {
            if (rng() % 3 == 0) {
                write_file(root / n / "__init__.py", "");
                for (const auto& child : {"one", "two"}) {
                    if (rng() % 2) {
                        modules.push_back(n + "." + child);
                        write_file(root / n / (std::string(child) + ".py"), "");
                    }
                }
                modules.push_back(n);
            } else if (rng() % 2) {
                write_file(root / (n + ".py"), "");
                modules.push_back(n);
            }
            // A decoy that would be importable if the analyzer looked outside the root.
            write_file(dir / (n + ".py"), "this is not python (\n");
            write_file(dir / "site" / (n + ".py"), "raise SystemExit\n");
        }
        // Give each module imports of random (possibly missing) names.
        auto pick = [&]() -> std::string {
            const auto& base = names[rng() % names.size()];
            return rng() % 3 == 0 ? base + ".one" : base;
        };
        for (const auto& m : modules) {
            fs::path file = root;
            std::string rest = m;
            size_t dot;
            while ((dot = rest.find('.')) != std::string::npos) {
                file /= rest.substr(0, dot);
                rest = rest.substr(dot + 1);
            }
            fs::path target = fs::exists(file / rest / "__init__.py") ? file / rest / "__init__.py" : file / (rest + ".py");
            write_file(target, "import " + pick() + "\nfrom " + pick() + " import thing\n");
        }
        std::string entry_text;
        for (int i = 0; i < 3; ++i) {
            entry_text += "import " + pick() + "\n";
        }
        write_file(root / "main.py", entry_text);

        PackageIndex first = resolve_imports({root / "main.py"}, root);
        PackageIndex second = resolve_imports({root / "main.py"}, root);
        CHECK(same_index(first, second));
        for (const auto& [name, unit] : first.modules) {
            auto rel = unit.file_path.lexically_relative(first.package_root);
            CHECK(*rel.begin() != "..");
        }
        CHECK(first.diagnostics.empty());
        // Closure over `import` statements.
        for (const auto& [name, unit] : first.modules) {
            for (const auto& stmt : unit.syntax_tree->body) {
                if (stmt->kind != syntax::StmtKind::Import) {
                    continue;
                }
                const std::string& target = stmt->names[0].name;
                bool indexed = first.modules.count(target) || first.namespace_packages.count(target);
                bool recorded = std::find(first.unresolved_imports.begin(), first.unresolved_imports.end(),
                                          UnresolvedImport{name, target}) != first.unresolved_imports.end();
                CHECK_MESSAGE(indexed != recorded, name << " imports " << target);
            }
        }
    }
}

TEST_CASE("interpreter agreement on a layout with only resolvable imports") {
    TempDir dir;
    fs::path root = dir / "root";
    write_file(root / "main.py", "import lib.a\nfrom lib import b\nfrom lib.c import thing\n");
    write_file(root / "lib/__init__.py", "from . import util\n");
    write_file(root / "lib/util.py", "");
    write_file(root / "lib/a.py", "from .b import x\n");
    write_file(root / "lib/b.py", "x = 1\n");
    write_file(root / "lib/c/__init__.py", "from .impl import thing\n");
    write_file(root / "lib/c/impl.py", "thing = 2\n");
    write_file(root / "lib/unused.py", "");
    PackageIndex index = resolve_imports({root / "main.py"}, root);
    CHECK(module_names(index) == interpreter_modules(root, "main"));
}
