#pragma once

// Python 3 syntax trees as produced by the parser. The shape follows the
// host language's own `ast` module closely enough that lowering can be read
// side by side with the reference grammar, but nodes are plain structs with
// a kind tag instead of a class per production.

#include <compare>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace callflow::syntax {

struct Pos {
    int line = 0;  // 1-based
    int col = 0;   // 0-based, in bytes

    friend auto operator<=>(const Pos&, const Pos&) = default;
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& message, Pos pos);
    SyntaxError(const std::string& message, Pos pos, const std::string& file);

    Pos pos() const { return pos_; }
    const std::string& detail() const { return detail_; }
    const std::string& file() const { return file_; }

private:
    Pos pos_;
    std::string detail_;
    std::string file_;
};

enum class ExprKind {
    Name,
    Constant,
    Attribute,
    Subscript,
    Slice,
    Call,
    Lambda,
    List,
    Tuple,
    Set,
    Dict,
    Comprehension,
    BinOp,
    BoolOp,
    UnaryOp,
    Compare,
    IfExp,
    NamedExpr,
    Starred,
    DoubleStarred,
    Await,
    Yield,
    YieldFrom,
    FString,
};

enum class ConstKind { None, True, False, Int, Float, Complex, String, Bytes, Ellipsis };

enum class CompKind { List, Set, Dict, Generator };

enum class ParamKind { PositionalOnly, Normal, VarPositional, KeywordOnly, VarKeyword };

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct Keyword {
    std::string name;  // empty for `**mapping`
    ExprPtr value;
    Pos pos;
};

struct Param {
    std::string name;
    ParamKind kind = ParamKind::Normal;
    ExprPtr default_value;
    ExprPtr annotation;
    Pos pos;
};

struct ComprehensionClause {
    ExprPtr target;
    ExprPtr iter;
    std::vector<ExprPtr> conditions;
    bool is_async = false;
};

// Field usage per kind:
//   Name          text = identifier
//   Constant      constant, text = decoded value (strings) or literal spelling
//   Attribute     value . text
//   Subscript     value [ items[0] ]
//   Slice         items = {lower, upper, step}, entries may be null
//   Call          value ( items..., keywords... ); Starred items are `*args`
//   Lambda        params : value
//   List/Tuple/Set items
//   Dict          keys[i] : items[i]; a null key marks `**mapping`
//   Comprehension comp, value = element (dict: keys[0] = key), clauses
//   BinOp         items = {lhs, rhs}, text = operator
//   BoolOp        items = operands, text = "and" | "or"
//   UnaryOp       value, text = operator
//   Compare       items = operands, ops = operators
//   IfExp         items = {test, body, orelse}
//   NamedExpr     target := value
//   Starred       * value;  DoubleStarred ** value
//   Await/Yield/YieldFrom value (Yield value may be null)
//   FString       items = embedded expressions
struct Expr {
    ExprKind kind;
    Pos pos;
    std::string text;
    ConstKind constant = ConstKind::None;
    ExprPtr value;
    ExprPtr target;
    std::vector<ExprPtr> items;
    std::vector<ExprPtr> keys;
    std::vector<std::string> ops;
    std::vector<Keyword> keywords;
    std::vector<Param> params;
    std::vector<ComprehensionClause> clauses;
    CompKind comp = CompKind::List;

    Expr(ExprKind k, Pos p) : kind(k), pos(p) {}
};

enum class StmtKind {
    Expr,
    Assign,
    AugAssign,
    AnnAssign,
    Delete,
    Pass,
    Break,
    Continue,
    Return,
    Raise,
    Global,
    Nonlocal,
    Import,
    ImportFrom,
    If,
    While,
    For,
    Try,
    With,
    FunctionDef,
    ClassDef,
    Assert,
    Match,
    TypeAlias,
};

struct Alias {
    std::string name;
    std::string asname;
    Pos pos;
};

struct ExceptHandler {
    ExprPtr type;
    std::string name;
    Block body;
    Pos pos;
};

struct WithItem {
    ExprPtr context;
    ExprPtr target;
};

struct MatchCase {
    ExprPtr pattern;
    std::string capture;  // trailing `as NAME`
    ExprPtr guard;
    Block body;
    Pos pos;
};

// Field usage per kind:
//   Expr          value
//   Assign        targets = t1 = t2 = ... = value
//   AugAssign     targets[0] text= value  (text holds the operator, e.g. "+")
//   AnnAssign     targets[0] : annotation [= value]
//   Delete        targets
//   Return        value (nullable)
//   Raise         value (nullable) from annotation(cause)
//   Global/Nonlocal names
//   Import        names (dotted name, asname)
//   ImportFrom    text = module (possibly empty), level, names ("*" for star)
//   If/While      value = test, body, orelse
//   For           targets[0] in value: body, orelse
//   Try           body, handlers, orelse, finalbody
//   With          items: body
//   FunctionDef   decorators, text = name, params, annotation = returns, body
//   ClassDef      decorators, text = name, bases, keywords, body
//   Assert        value, annotation = message
//   Match         value = subject, cases
//   TypeAlias     targets[0] = value
struct Stmt {
    StmtKind kind;
    Pos pos;
    std::string text;
    int level = 0;
    bool is_async = false;
    ExprPtr value;
    ExprPtr annotation;
    std::vector<ExprPtr> targets;
    std::vector<Alias> names;
    Block body;
    Block orelse;
    Block finalbody;
    std::vector<ExceptHandler> handlers;
    std::vector<WithItem> items;
    std::vector<ExprPtr> decorators;
    std::vector<Param> params;
    std::vector<ExprPtr> bases;
    std::vector<Keyword> keywords;
    std::vector<MatchCase> cases;

    Stmt(StmtKind k, Pos p) : kind(k), pos(p) {}
};

struct Module {
    Block body;
};

/// Parses a complete Python 3 source file. `text` must already be valid UTF-8.
/// Throws SyntaxError with the position of the first offending token.
Module parse(std::string_view text);

/// Parses a single expression (used for f-string fields and tests).
ExprPtr parse_expression(std::string_view text, Pos origin = {1, 0});

/// S-expression rendering with positions; used for structural comparison.
std::string dump(const Module& module);
std::string dump(const Expr& expr);

const char* to_string(ExprKind kind);
const char* to_string(StmtKind kind);

}  // namespace callflow::syntax
