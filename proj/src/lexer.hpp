#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "callflow/syntax.hpp"

namespace callflow::syntax {

enum class TokKind { Name, Number, String, Op, Newline, Indent, Dedent, End };

struct Token {
    TokKind kind;
    std::string text;
    Pos pos;
};

/// Splits source text into tokens, synthesizing NEWLINE/INDENT/DEDENT the
/// way the reference tokenizer does. Comments and blank lines vanish.
std::vector<Token> tokenize(std::string_view text, Pos origin = {1, 0});

bool is_keyword(std::string_view word);

}  // namespace callflow::syntax
