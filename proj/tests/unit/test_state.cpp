#include <map>
#include <random>
#include <set>

#include "callflow/bench.hpp"
#include "callflow/pipeline.hpp"
#include "callflow/state.hpp"
#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"

using namespace callflow;
using testutil::TempDir;
using testutil::write_file;

namespace {

NamespacePath path(std::initializer_list<Definition> elements) { return NamespacePath(std::vector<Definition>(elements)); }

QualifiedObject cls(const std::string& module, const std::string& name) {
    return {NamespacePath::module(module), {name, Kind::Cls}};
}

std::vector<std::string> names(const std::vector<QualifiedObject>& objs) {
    std::vector<std::string> out;
    for (const auto& o : objs) {
        out.push_back(o.str());
    }
    return out;
}

// `__mro__` of every class of the program at `root`, restricted to the
// program's own classes.
std::map<std::string, std::vector<std::string>> interpreter_mro(const fs::path& root, const std::string& entry) {
    auto result = testutil::run_command(testutil::python() + " " +
                                        testutil::shell_quote((testutil::source_dir() / "tools/mro_oracle.py").string()) +
                                        " " + testutil::shell_quote(root.string()) + " --entry " + entry);
    REQUIRE(result.status == 0);
    return nlohmann::json::parse(result.output).get<std::map<std::string, std::vector<std::string>>>();
}

// Linearization of every class the analysis recorded, keyed by name.
std::map<std::string, std::vector<std::string>> analyzer_mro(const fs::path& root, const fs::path& entry) {
    AnalysisResult r = analyze({entry}, root);
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [c, parents] : r.state.hierarchy.all()) {
        if (r.state.is_external(c)) {
            continue;
        }
        std::vector<std::string> order;
        for (const auto& o : linearize(r.state.hierarchy, c)) {
            if (!r.state.is_external(o)) {
                order.push_back(o.str());
            }
        }
        out[c.str()] = order;
    }
    return out;
}

}  // namespace

TEST_CASE("qualified object naming") {
    QualifiedObject apply{path({{"crypto", Kind::Mod}, {"Crypto", Kind::Cls}}), {"apply", Kind::Func}};
    CHECK(apply.str() == "crypto.Crypto.apply");
    CHECK(apply.inner().str() == "crypto.Crypto.apply");
    CHECK(module_object("pkg.mod").str() == "pkg.mod");
    CHECK(module_object("pkg.mod").root_module() == "pkg.mod");
    QualifiedObject other{apply.ns, {"apply", Kind::Var}};
    CHECK(apply != other);
    std::set<QualifiedObject> keys{apply, other, apply};
    CHECK(keys.size() == 2);
}

TEST_CASE("get_object on the crypto scope tree") {
    AnalysisResult r = analyze({testutil::source_dir() / "tests/fixtures/crypto/crypto.py"},
                               testutil::source_dir() / "tests/fixtures/crypto");
    NamespacePath apply = path({{"crypto", Kind::Mod}, {"Crypto", Kind::Cls}, {"apply", Kind::Func}});
    auto found = get_object(r.state.scopes, apply, "func");
    REQUIRE(found);
    CHECK(found->ns == apply);
    CHECK(found->def == Definition{"func", Kind::Var});

    NamespacePath init = path({{"crypto", Kind::Mod}, {"Crypto", Kind::Cls}, {"__init__", Kind::Func}});
    auto key = get_object(r.state.scopes, init, "key");
    REQUIRE(key);
    CHECK(key->ns == init);
    // Module-level names are visible from the method.
    auto crp = get_object(r.state.scopes, apply, "crp");
    REQUIRE(crp);
    CHECK(crp->str() == "crypto.crp");
    // Class members are not visible from inside a method body.
    CHECK_FALSE(get_object(r.state.scopes, apply, "apply").has_value());
}

TEST_CASE("module-level and class-level variables are distinct objects") {
    // var = 1 / class A: var = 2
    ScopeTree s;
    s.add_root("main");
    NamespacePath main = NamespacePath::module("main");
    s.add(main, {"var", Kind::Var});
    s.add(main, {"A", Kind::Cls});
    NamespacePath a = main.extended({"A", Kind::Cls});
    s.add(a, {"var", Kind::Var});

    auto in_class = get_object(s, a, "var");
    REQUIRE(in_class);
    CHECK(in_class->ns == path({{"main", Kind::Mod}, {"A", Kind::Cls}}));
    auto in_module = get_object(s, main, "var");
    REQUIRE(in_module);
    CHECK(in_module->ns == main);
    CHECK(*in_class != *in_module);
}

TEST_CASE("get_object on an empty tree") {
    ScopeTree s;
    CHECK_FALSE(get_object(s, NamespacePath::module("m"), "x").has_value());
    CHECK_FALSE(get_object(s, NamespacePath(), "x").has_value());
}

TEST_CASE("kind collision prefers the most recent definition") {
    ScopeTree s;
    NamespacePath m = NamespacePath::module("m");
    s.add(m, {"f", Kind::Func});
    s.add(m, {"f", Kind::Var});
    CHECK(s.children(m).size() == 2);
    CHECK(get_object(s, m, "f")->def.kind == Kind::Var);
}

TEST_CASE("add_scope") {
    ScopeTree s;
    s.add_root("crypto");
    NamespacePath init = path({{"crypto", Kind::Mod}, {"Crypto", Kind::Cls}, {"__init__", Kind::Func}});
    s = add_scope(s, NamespacePath::module("crypto"), "Crypto", Kind::Cls);
    s = add_scope(s, path({{"crypto", Kind::Mod}, {"Crypto", Kind::Cls}}), "__init__", Kind::Func);

    ScopeTree once = add_scope(s, init, "key", Kind::Var);
    auto key = get_object(once, init, "key");
    REQUIRE(key);
    CHECK(key->str() == "crypto.Crypto.__init__.key");

    ScopeTree twice = add_scope(once, init, "key", Kind::Var);
    CHECK(twice == once);

    NamespacePath fresh = NamespacePath::module("crypto").extended({"g", Kind::Func});
    ScopeTree with_ret = add_scope(once, fresh, "ret", Kind::Var);
    auto ret = get_object(with_ret, fresh, "ret");
    REQUIRE(ret);
    CHECK(ret->ns == fresh);
    CHECK(ret->def == Definition{"ret", Kind::Var});

    AnalysisState st;
    CHECK(st.add_scope(init, {"key", Kind::Var}));
    uint64_t v = st.version;
    CHECK_FALSE(st.add_scope(init, {"key", Kind::Var}));
    CHECK(st.version == v);
}

TEST_CASE("property: inner definitions shadow outer ones") {
    std::mt19937_64 rng(11);
    const char* idents[] = {"x", "y", "z", "w"};
    for (int trial = 0; trial < 300; ++trial) {
        ScopeTree s;
        NamespacePath ns = NamespacePath::module("m");
        s.add_root("m");
        int depth = 1 + static_cast<int>(rng() % 5);
        std::vector<NamespacePath> prefixes{ns};
        for (int i = 0; i < depth; ++i) {
            ns = ns.extended({"f" + std::to_string(i), Kind::Func});
            prefixes.push_back(ns);
        }
        // Brute-force oracle: the innermost prefix defining the name.
        std::map<std::string, size_t> innermost;
        for (size_t p = 0; p < prefixes.size(); ++p) {
            for (const char* id : idents) {
                if (rng() % 3 == 0) {
                    s.add(prefixes[p], {id, rng() % 2 ? Kind::Var : Kind::Func});
                    innermost[id] = p;
                }
            }
        }
        for (const char* id : idents) {
            auto found = get_object(s, ns, id);
            auto it = innermost.find(id);
            if (it == innermost.end()) {
                CHECK_FALSE(found.has_value());
            } else {
                REQUIRE(found);
                CHECK(found->ns == prefixes[it->second]);
            }
        }
    }
}

TEST_CASE("linearize") {
    QualifiedObject a = cls("main", "A");
    QualifiedObject b = cls("main", "B");
    QualifiedObject c = cls("main", "C");
    QualifiedObject d = cls("main", "D");

    SUBCASE("C(B, A)") {
        ClassHierarchy h;
        h.add_parents(c, {b, a});
        CHECK(names(linearize(h, c)) == std::vector<std::string>{"main.C", "main.B", "main.A"});
    }
    SUBCASE("leaf class") {
        ClassHierarchy h;
        CHECK(names(linearize(h, a)) == std::vector<std::string>{"main.A"});
    }
    SUBCASE("diamond") {
        ClassHierarchy h;
        h.add_parents(b, {a});
        h.add_parents(c, {a});
        h.add_parents(d, {b, c});
        CHECK(names(linearize(h, d)) == std::vector<std::string>{"main.D", "main.B", "main.C", "main.A"});
    }
    SUBCASE("external bases are opaque leaves") {
        ClassHierarchy h;
        QualifiedObject ext{NamespacePath::module("lib"), {"Base", Kind::Cls}};
        h.add_parents(b, {ext, a});
        CHECK(names(linearize(h, b)) == std::vector<std::string>{"main.B", "lib.Base", "main.A"});
    }
    SUBCASE("inconsistent order") {
        QualifiedObject x = cls("main", "X");
        QualifiedObject y = cls("main", "Y");
        QualifiedObject z = cls("main", "Z");
        ClassHierarchy h;
        h.add_parents(x, {a, b});
        h.add_parents(y, {b, a});
        h.add_parents(z, {x, y});
        CHECK_THROWS_AS(linearize(h, z), InconsistentMRO);
        CHECK(names(depth_first_order(h, z)) ==
              std::vector<std::string>{"main.Z", "main.X", "main.A", "main.B", "main.Y"});
    }
    SUBCASE("bases keep their written order and never include the class") {
        ClassHierarchy h;
        CHECK(h.add_parents(c, {b, a, c}));
        CHECK_FALSE(h.add_parents(c, {b}));
        CHECK(names(h.parents(c)) == std::vector<std::string>{"main.B", "main.A"});
    }
}

TEST_CASE("linearize agrees with the interpreter") {
    TempDir dir;
    write_file(dir / "main.py",
               "class A:\n    pass\n\n\nclass B(A):\n    pass\n\n\nclass C(A):\n    pass\n\n\n"
               "class D(B, C):\n    pass\n\n\nclass E(C, B):\n    pass\n\n\nclass F(B, A):\n    pass\n\n\n"
               "class G(D, F):\n    class Inner(C):\n        pass\n");
    auto expected = interpreter_mro(dir.path(), "main.py");
    CHECK(expected.at("main.D") == std::vector<std::string>{"main.D", "main.B", "main.C", "main.A"});
    CHECK(analyzer_mro(dir.path(), dir / "main.py") == expected);
}

TEST_CASE("linearize agrees with the interpreter on the corpus") {
    int classes = 0;
    for (const auto& c : bench::load_corpus(testutil::source_dir() / "corpus")) {
        INFO(c.id());
        auto expected = interpreter_mro(c.dir, "main.py");
        auto actual = analyzer_mro(c.dir, c.dir / "main.py");
        // Classes defined inside functions are not visible to the oracle.
        for (auto it = actual.begin(); it != actual.end();) {
            it = expected.count(it->first) ? std::next(it) : actual.erase(it);
        }
        CHECK(actual == expected);
        classes += static_cast<int>(expected.size());
    }
    CHECK(classes >= 40);
}

TEST_CASE("get_class_attr_object") {
    ScopeTree s;
    ClassHierarchy h;
    QualifiedObject a = cls("main", "A");
    QualifiedObject b = cls("main", "B");
    QualifiedObject c = cls("main", "C");
    for (const auto& k : {a, b, c}) {
        s.add(k.ns, k.def);
    }
    s.add(a.inner(), {"func", Kind::Func});
    s.add(b.inner(), {"func", Kind::Func});
    s.add(a.inner(), {"only_a", Kind::Func});
    h.add_parents(c, {b, a});

    SUBCASE("first match in the resolution order") {
        auto found = get_class_attr_object(c, "func", h, s);
        REQUIRE(found);
        CHECK(found->str() == "main.B.func");
        CHECK(get_class_attr_object(c, "only_a", h, s)->str() == "main.A.only_a");
    }
    SUBCASE("unrelated classes never share attributes") {
        ClassHierarchy flat;
        CHECK(get_class_attr_object(a, "func", flat, s)->str() == "main.A.func");
        CHECK(get_class_attr_object(b, "func", flat, s)->str() == "main.B.func");
        CHECK_FALSE(get_class_attr_object(b, "only_a", flat, s).has_value());
    }
    SUBCASE("absent attribute on a function") {
        QualifiedObject f{NamespacePath::module("main"), {"f", Kind::Func}};
        s.add(f.ns, f.def);
        CHECK_FALSE(get_class_attr_object(f, "__next__", h, s).has_value());
    }
    SUBCASE("non-class receivers look in their own namespace") {
        QualifiedObject v{NamespacePath::module("main"), {"v", Kind::Var}};
        s.add(v.inner(), {"attr", Kind::Var});
        CHECK(get_class_attr_object(v, "attr", h, s)->str() == "main.v.attr");
    }
}

TEST_CASE("property: same-named methods of different classes never alias") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        ScopeTree s;
        ClassHierarchy h;
        int n = 2 + static_cast<int>(rng() % 10);
        std::vector<QualifiedObject> classes;
        for (int i = 0; i < n; ++i) {
            QualifiedObject k = cls("m" + std::to_string(rng() % 3), "K" + std::to_string(i));
            s.add(k.ns, k.def);
            s.add(k.inner(), {"method", Kind::Func});
            h.add_parents(k, {});
            classes.push_back(k);
        }
        std::set<QualifiedObject> resolved;
        for (const auto& k : classes) {
            auto found = get_class_attr_object(k, "method", h, s);
            REQUIRE(found);
            CHECK(found->ns == k.inner());
            resolved.insert(*found);
        }
        CHECK(resolved.size() == classes.size());
    }
}

TEST_CASE("assignment graph") {
    AssignmentGraph g;
    QualifiedObject x{NamespacePath::module("m"), {"x", Kind::Var}};
    QualifiedObject f{NamespacePath::module("m"), {"f", Kind::Func}};
    CHECK(g.add_edge(x, f));
    CHECK_FALSE(g.add_edge(x, f));
    CHECK(g.edge_count() == 1);
    CHECK(g.has_edge(x, f));
    CHECK_FALSE(g.has_edge(f, x));
    AssignmentGraph bigger = g;
    bigger.add_edge(f, x);
    CHECK(bigger.includes(g));
    CHECK_FALSE(g.includes(bigger));
}
