#pragma once

// The model language the analysis runs on. Every Python construct is
// lowered to one of these productions; anything the analysis cannot use is
// reduced to its side effects or to an inert object.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "callflow/definition.hpp"
#include "callflow/frontend.hpp"
#include "callflow/state.hpp"
#include "callflow/syntax.hpp"

namespace callflow::ir {

using syntax::Pos;

struct Node;
using NodePtr = std::unique_ptr<Node>;

/// A fixed object; `object` is empty for the inert object that literals and
/// unsupported expressions evaluate to.
struct ObjectRef {
    std::optional<QualifiedObject> object;
};

struct Identifier {
    std::string name;
};

enum class Binding { Local, Global, Nonlocal };

struct Assign {
    std::string target;
    NodePtr value;
    Binding binding = Binding::Local;
};

struct Param {
    ParamInfo info;
    NodePtr default_value;  // may be null
};

struct FunctionDef {
    std::string name;
    std::vector<Param> params;
    NodePtr body;
    MethodKind method_kind = MethodKind::Function;
    bool is_generator = false;
};

struct Return {
    NodePtr value;
};

/// Argument keys: "0", "1", ... for positional arguments, the parameter
/// name for keywords, "*" for `*iterable` and "**" for `**mapping`.
struct Arg {
    std::string key;
    NodePtr value;
};

struct Call {
    NodePtr callee;
    std::vector<Arg> args;
    bool decorator = false;
};

struct ClassDef {
    std::string name;
    std::vector<NodePtr> bases;
    NodePtr body;
};

struct AttrAccess {
    NodePtr receiver;
    std::string attr;
};

struct AttrAssign {
    NodePtr receiver;
    std::string attr;
    NodePtr value;
};

struct New {
    std::string cls;
    std::vector<Arg> args;
};

/// `name` == `module` imports the module itself, "*" imports every public
/// top-level name.
struct Import {
    std::string name;
    std::string module;
    std::string alias;
};

struct Iter {
    NodePtr value;
};

struct Seq {
    NodePtr first;
    NodePtr second;
};

using Payload = std::variant<ObjectRef, Identifier, Assign, FunctionDef, Return, Call, ClassDef, AttrAccess,
                             AttrAssign, New, Import, Iter, Seq>;

struct Node {
    Payload payload;
    Pos pos;
    int id = 0;  // pre-order index within its module

    template <typename T>
    const T* as() const {
        return std::get_if<T>(&payload);
    }
};

struct Diagnostic {
    Pos pos;
    std::string message;

    friend auto operator<=>(const Diagnostic&, const Diagnostic&) = default;
};

struct IRModule {
    std::string module_name;
    NodePtr body;
    fs::path source;
    std::vector<Diagnostic> diagnostics;  // constructs lowered to no-ops
    std::vector<std::string> imports;     // absolute module names referenced by imports
    int node_count = 0;
};

/// Reserved spellings; all contain characters that cannot appear in
/// identifiers.
inline constexpr const char* kReturn = "ret";
inline constexpr const char* kSuper = "<super>";
inline constexpr const char* kThunk = "<gen>";
inline constexpr const char* kWildcardIndex = "<idx>*";
std::string index_attr(long long i);          // "<idx>3"
std::string dict_attr(const std::string& k);  // "<dict>key"
std::string lambda_name(int n);               // "<lambda1>"

IRModule lower(const ModuleUnit& unit);

/// Compact textual form used by tests, e.g.
/// Seq(Assign(x, Obj(-)), Call(Id(f), {0: Id(x)})).
std::string to_string(const Node& node);

/// Visits every node in pre-order.
void walk(const Node& node, const std::function<void(const Node&)>& fn);

}  // namespace callflow::ir
