#include "callflow/frontend.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <sstream>

namespace callflow {

namespace {

// Returns the byte offset of the first invalid sequence, or npos.
size_t find_invalid_utf8(std::string_view s) {
    size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        size_t len = 0;
        uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return i;
        }
        if (i + len > s.size()) {
            return i;
        }
        for (size_t k = 1; k < len; ++k) {
            auto d = static_cast<unsigned char>(s[i + k]);
            if ((d & 0xC0) != 0x80) {
                return i;
            }
            cp = (cp << 6) | (d & 0x3F);
        }
        bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
        if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            return i;
        }
        i += len;
    }
    return std::string_view::npos;
}

syntax::Pos offset_to_pos(std::string_view s, size_t offset) {
    syntax::Pos p{1, 0};
    for (size_t i = 0; i < offset; ++i) {
        if (s[i] == '\n') {
            ++p.line;
            p.col = 0;
        } else {
            ++p.col;
        }
    }
    return p;
}

std::string read_file(const fs::path& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw IOError("cannot read " + path.string() + ": no such file");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IOError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IOError("error while reading " + path.string());
    }
    return ss.str();
}

bool is_under(const fs::path& file, const fs::path& root) {
    auto rel = file.lexically_relative(root);
    return !rel.empty() && *rel.begin() != "..";
}

fs::path canonical_or_absolute(const fs::path& p) {
    std::error_code ec;
    auto c = fs::weakly_canonical(p, ec);
    return ec ? fs::absolute(p) : c;
}

std::string parent_name(const std::string& dotted) {
    auto dot = dotted.rfind('.');
    return dot == std::string::npos ? std::string() : dotted.substr(0, dot);
}

// Every import in a syntax tree, wherever it appears (function bodies,
// conditionals and try blocks included).
void collect_imports(const syntax::Block& block, std::vector<const syntax::Stmt*>& out) {
    for (const auto& stmt : block) {
        if (stmt->kind == syntax::StmtKind::Import || stmt->kind == syntax::StmtKind::ImportFrom) {
            out.push_back(stmt.get());
        }
        collect_imports(stmt->body, out);
        collect_imports(stmt->orelse, out);
        collect_imports(stmt->finalbody, out);
        for (const auto& h : stmt->handlers) {
            collect_imports(h.body, out);
        }
        for (const auto& c : stmt->cases) {
            collect_imports(c.body, out);
        }
    }
}

class Resolver {
public:
    explicit Resolver(fs::path root) { index_.package_root = std::move(root); }

    PackageIndex run(const std::vector<fs::path>& entrypoints) {
        for (const auto& entry : entrypoints) {
            if (!fs::is_regular_file(entry)) {
                throw IOError("cannot read entrypoint " + entry.string() + ": no such file");
            }
            fs::path path = canonical_or_absolute(entry);
            if (!is_under(path, index_.package_root)) {
                throw IOError("entrypoint " + entry.string() + " is not under package root " +
                              index_.package_root.string());
            }
            std::string name = module_name_for(path, index_.package_root);
            if (name.empty()) {
                throw IOError("cannot derive a module name for " + entry.string());
            }
            if (auto it = index_.modules.find(name); it != index_.modules.end()) {
                it->second.is_entrypoint = true;
                continue;
            }
            ModuleUnit unit = parse_module(path, name);
            unit.is_entrypoint = true;
            enqueue(std::move(unit));
            // The parent packages of an entrypoint are executed by the
            // interpreter before it, just like for an import.
            for (std::string p = parent_name(name); !p.empty(); p = parent_name(p)) {
                ensure_module(p);
            }
        }
        while (!queue_.empty()) {
            std::string name = queue_.front();
            queue_.pop_front();
            scan(index_.modules.at(name));
        }
        std::sort(index_.unresolved_imports.begin(), index_.unresolved_imports.end());
        index_.unresolved_imports.erase(
            std::unique(index_.unresolved_imports.begin(), index_.unresolved_imports.end()),
            index_.unresolved_imports.end());
        return std::move(index_);
    }

private:
    void enqueue(ModuleUnit unit) {
        std::string name = unit.module_name;
        index_.modules.emplace(name, std::move(unit));
        queue_.push_back(name);
    }

    // Locates `dotted` under the root. Returns false when it does not exist.
    bool ensure_module(const std::string& dotted) {
        if (index_.modules.count(dotted) || index_.namespace_packages.count(dotted)) {
            return true;
        }
        if (failed_.count(dotted)) {
            return false;
        }
        fs::path base = index_.package_root;
        std::string part;
        std::istringstream parts(dotted);
        while (std::getline(parts, part, '.')) {
            base /= part;
        }
        std::error_code ec;
        fs::path file = base;
        file += ".py";
        fs::path init = base / "__init__.py";
        fs::path chosen;
        // A regular package wins over a same-named module, as in the
        // interpreter's path finder.
        if (fs::is_regular_file(init, ec)) {
            chosen = init;
        } else if (fs::is_directory(base, ec)) {
            index_.namespace_packages.insert(dotted);
            return true;
        } else if (fs::is_regular_file(file, ec)) {
            chosen = file;
        } else {
            failed_.insert(dotted);
            return false;
        }
        try {
            enqueue(parse_module(chosen, dotted));
        } catch (const std::exception& e) {
            index_.diagnostics.push_back(e.what());
            failed_.insert(dotted);
            return false;
        }
        return true;
    }

    // Resolves every prefix of `dotted`; returns false at the first miss.
    bool ensure_with_parents(const std::string& dotted) {
        size_t start = 0;
        while (true) {
            size_t dot = dotted.find('.', start);
            std::string prefix = dotted.substr(0, dot);
            if (!ensure_module(prefix)) {
                return false;
            }
            if (dot == std::string::npos) {
                return true;
            }
            start = dot + 1;
        }
    }

    void scan(const ModuleUnit& unit) {
        std::vector<const syntax::Stmt*> imports;
        collect_imports(unit.syntax_tree->body, imports);
        const std::string importer = unit.module_name;
        const bool is_package = unit.is_package;
        for (const auto* stmt : imports) {
            if (stmt->kind == syntax::StmtKind::Import) {
                for (const auto& alias : stmt->names) {
                    if (!ensure_with_parents(alias.name)) {
                        unresolved(importer, alias.name);
                    }
                }
                continue;
            }
            std::string target = stmt->text;
            if (stmt->level > 0) {
                target = resolve_relative(importer, is_package, stmt->level, stmt->text);
                if (target.empty() && stmt->text.empty() && parent_name(importer).empty() && !is_package) {
                    // `from . import x` in a top-level module: x is a sibling.
                    for (const auto& alias : stmt->names) {
                        if (alias.name != "*" && !ensure_module(alias.name)) {
                            unresolved(importer, std::string(stmt->level, '.') + alias.name);
                        }
                    }
                    continue;
                }
                if (target.empty()) {
                    unresolved(importer, std::string(stmt->level, '.') + stmt->text);
                    continue;
                }
            }
            if (!ensure_with_parents(target)) {
                unresolved(importer, target);
                continue;
            }
            for (const auto& alias : stmt->names) {
                if (alias.name != "*") {
                    // Either a submodule or an attribute of the package.
                    ensure_module(target + "." + alias.name);
                }
            }
        }
    }

    void unresolved(const std::string& importer, const std::string& name) {
        index_.unresolved_imports.push_back({importer, name});
    }

    PackageIndex index_;
    std::deque<std::string> queue_;
    std::set<std::string> failed_;
};

}  // namespace

ModuleUnit parse_module(const fs::path& path) { return parse_module(path, path.stem().string()); }

ModuleUnit parse_module(const fs::path& path, const std::string& module_name) {
    std::string text = read_file(path);
    std::string_view body = text;
    if (body.substr(0, 3) == "\xEF\xBB\xBF") {
        body.remove_prefix(3);
    }
    if (size_t bad = find_invalid_utf8(body); bad != std::string_view::npos) {
        throw SyntaxError("file is not valid UTF-8", offset_to_pos(body, bad), path.string());
    }
    ModuleUnit unit;
    unit.module_name = module_name;
    unit.file_path = path;
    unit.is_package = path.filename() == "__init__.py";
    try {
        unit.syntax_tree = std::make_shared<const syntax::Module>(syntax::parse(body));
    } catch (const SyntaxError& e) {
        throw SyntaxError(e.detail(), e.pos(), path.string());
    }
    return unit;
}

std::string module_name_for(const fs::path& file, const fs::path& root) {
    fs::path rel = canonical_or_absolute(file).lexically_relative(canonical_or_absolute(root));
    if (rel.empty() || *rel.begin() == "..") {
        return {};
    }
    std::string name;
    std::vector<std::string> parts;
    for (const auto& part : rel) {
        parts.push_back(part.string());
    }
    std::string& last = parts.back();
    if (last.size() > 3 && last.ends_with(".py")) {
        last.resize(last.size() - 3);
    }
    if (last == "__init__") {
        parts.pop_back();
    }
    for (const auto& part : parts) {
        if (!name.empty()) {
            name += '.';
        }
        name += part;
    }
    return name;
}

std::string resolve_relative(const std::string& importer, bool importer_is_package, int level,
                             const std::string& module) {
    std::string base = importer_is_package ? importer : parent_name(importer);
    for (int i = 1; i < level; ++i) {
        if (base.empty()) {
            return {};
        }
        base = parent_name(base);
    }
    if (base.empty()) {
        return level == 1 && !importer_is_package ? module : std::string();
    }
    return module.empty() ? base : base + "." + module;
}

PackageIndex resolve_imports(const std::vector<fs::path>& entrypoints, const fs::path& package_root) {
    std::error_code ec;
    if (!fs::is_directory(package_root, ec)) {
        throw IOError("package root " + package_root.string() + " is not a directory");
    }
    Resolver resolver(canonical_or_absolute(package_root));
    return resolver.run(entrypoints);
}

bool same_index(const PackageIndex& a, const PackageIndex& b) {
    if (a.package_root != b.package_root || a.unresolved_imports != b.unresolved_imports ||
        a.namespace_packages != b.namespace_packages || a.modules.size() != b.modules.size()) {
        return false;
    }
    for (const auto& [name, unit] : a.modules) {
        auto it = b.modules.find(name);
        if (it == b.modules.end()) {
            return false;
        }
        const ModuleUnit& other = it->second;
        if (unit.file_path != other.file_path || unit.is_entrypoint != other.is_entrypoint ||
            unit.is_package != other.is_package ||
            syntax::dump(*unit.syntax_tree) != syntax::dump(*other.syntax_tree)) {
            return false;
        }
    }
    return true;
}

}  // namespace callflow
