#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "callflow/syntax.hpp"

namespace callflow {

namespace fs = std::filesystem;

using syntax::SyntaxError;

class IOError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModuleUnit {
    std::string module_name;
    fs::path file_path;
    std::shared_ptr<const syntax::Module> syntax_tree;
    bool is_entrypoint = false;
    bool is_package = false;  // loaded from an __init__.py
};

struct UnresolvedImport {
    std::string importer;
    std::string name;

    friend auto operator<=>(const UnresolvedImport&, const UnresolvedImport&) = default;
};

struct PackageIndex {
    fs::path package_root;
    std::map<std::string, ModuleUnit> modules;
    std::vector<UnresolvedImport> unresolved_imports;  // sorted, unique
    std::set<std::string> namespace_packages;          // directories without __init__.py
    std::vector<std::string> diagnostics;               // non-entrypoint modules that failed to load
};

/// Reads and parses one file. The module name defaults to the file stem.
ModuleUnit parse_module(const fs::path& path);
ModuleUnit parse_module(const fs::path& path, const std::string& module_name);

/// Dotted module name of `file` relative to `root`, or empty when `file`
/// does not live under `root`.
std::string module_name_for(const fs::path& file, const fs::path& root);

/// Absolute module named by a relative `from` import, or empty when the
/// import climbs above the top level.
std::string resolve_relative(const std::string& importer, bool importer_is_package, int level,
                             const std::string& module);

PackageIndex resolve_imports(const std::vector<fs::path>& entrypoints, const fs::path& package_root);

/// Structural equality used by the idempotence checks.
bool same_index(const PackageIndex& a, const PackageIndex& b);

}  // namespace callflow
