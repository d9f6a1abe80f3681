#include "lexer.hpp"

#include <algorithm>
#include <array>

namespace callflow::syntax {

namespace {

constexpr std::array kKeywords = {
    "False", "None",   "True",    "and",      "as",       "assert", "async",
    "await", "break",  "class",   "continue", "def",      "del",    "elif",
    "else",  "except", "finally", "for",      "from",     "global", "if",
    "import", "in",    "is",      "lambda",   "nonlocal", "not",    "or",
    "pass",  "raise",  "return",  "try",      "while",    "with",   "yield",
};

// Longest operators first so that a greedy prefix match is correct.
constexpr std::array kOperators = {
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "<<", ">>", "<=", ">=", "==",
    "!=",  "+=",  "-=",  "*=",  "/=",  "%=", "&=", "|=", "^=", "@=", "+",  "-",  "*",  "/",
    "%",   "@",   "&",   "|",   "^",   "~",  "<",  ">",  "(",  ")",  "[",  "]",  "{",  "}",
    ",",   ":",   ".",   ";",   "=",
};

bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

bool is_ident_char(unsigned char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_string_prefix(std::string_view word) {
    if (word.size() > 2) {
        return false;
    }
    std::string lower;
    for (char c : word) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    static constexpr std::array kPrefixes = {"r", "u", "b", "f", "br", "rb", "fr", "rf"};
    return std::find(kPrefixes.begin(), kPrefixes.end(), lower) != kPrefixes.end();
}

class Lexer {
public:
    Lexer(std::string_view text, Pos origin) : src_(text), line_(origin.line), line_start_col_(origin.col) {}

    std::vector<Token> run() {
        while (pos_ < src_.size()) {
            if (at_line_start_ && depth_ == 0) {
                if (!handle_indentation()) {
                    continue;
                }
            }
            lex_token();
        }
        if (!tokens_.empty() && tokens_.back().kind != TokKind::Newline &&
            tokens_.back().kind != TokKind::Dedent) {
            push(TokKind::Newline, "", here());
        }
        while (indents_.size() > 1) {
            indents_.pop_back();
            push(TokKind::Dedent, "", here());
        }
        push(TokKind::End, "", here());
        return std::move(tokens_);
    }

private:
    Pos here() const { return {line_, static_cast<int>(pos_ - line_begin_) + line_start_col_}; }

    void push(TokKind kind, std::string text, Pos pos) { tokens_.push_back({kind, std::move(text), pos}); }

    [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(message, here()); }

    char peek(size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

    void newline_consumed() {
        ++line_;
        line_begin_ = pos_;
        line_start_col_ = 0;
    }

    // Returns false when the line turned out to be blank or a comment.
    bool handle_indentation() {
        int width = 0;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ') {
                ++width;
            } else if (c == '\t') {
                width = (width / 8 + 1) * 8;
            } else if (c == '\f') {
                width = 0;
            } else {
                break;
            }
            ++pos_;
        }
        char c = peek();
        if (c == '#' || c == '\n' || c == '\r' || c == '\0') {
            while (pos_ < src_.size() && src_[pos_] != '\n') {
                ++pos_;
            }
            if (pos_ < src_.size()) {
                ++pos_;
                newline_consumed();
            }
            return false;
        }
        at_line_start_ = false;
        Pos p = here();
        if (width > indents_.back()) {
            indents_.push_back(width);
            push(TokKind::Indent, "", p);
        } else {
            while (width < indents_.back()) {
                indents_.pop_back();
                push(TokKind::Dedent, "", p);
            }
            if (width != indents_.back()) {
                throw SyntaxError("unindent does not match any outer indentation level", p);
            }
        }
        return true;
    }

    void lex_token() {
        char c = peek();
        if (c == ' ' || c == '\t' || c == '\f') {
            ++pos_;
            return;
        }
        if (c == '#') {
            while (pos_ < src_.size() && src_[pos_] != '\n') {
                ++pos_;
            }
            return;
        }
        if (c == '\r') {
            ++pos_;
            return;
        }
        if (c == '\n') {
            if (depth_ == 0) {
                push(TokKind::Newline, "", here());
                at_line_start_ = true;
            }
            ++pos_;
            newline_consumed();
            return;
        }
        if (c == '\\') {
            size_t ahead = 1;
            if (peek(ahead) == '\r') {
                ++ahead;
            }
            if (peek(ahead) == '\n') {
                pos_ += ahead + 1;
                newline_consumed();
                return;
            }
            fail("unexpected character after line continuation character");
        }
        Pos start = here();
        auto uc = static_cast<unsigned char>(c);
        if (is_ident_start(uc)) {
            size_t begin = pos_;
            while (pos_ < src_.size() && is_ident_char(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
            }
            std::string_view word = src_.substr(begin, pos_ - begin);
            if ((peek() == '\'' || peek() == '"') && is_string_prefix(word)) {
                lex_string(begin, start);
                return;
            }
            push(TokKind::Name, std::string(word), start);
            return;
        }
        if (is_digit(uc) || (c == '.' && is_digit(static_cast<unsigned char>(peek(1))))) {
            lex_number(start);
            return;
        }
        if (c == '\'' || c == '"') {
            lex_string(pos_, start);
            return;
        }
        for (std::string_view op : kOperators) {
            if (src_.substr(pos_, op.size()) == op) {
                pos_ += op.size();
                if (op == "(" || op == "[" || op == "{") {
                    ++depth_;
                } else if (op == ")" || op == "]" || op == "}") {
                    if (depth_ == 0) {
                        throw SyntaxError("unmatched '" + std::string(op) + "'", start);
                    }
                    --depth_;
                }
                push(TokKind::Op, std::string(op), start);
                return;
            }
        }
        if (c == '!') {
            fail("invalid syntax");
        }
        fail(std::string("invalid character '") + c + "'");
    }

    void lex_number(Pos start) {
        size_t begin = pos_;
        auto digits = [&](auto pred) {
            while (pos_ < src_.size() && (pred(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
        };
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X' || peek(1) == 'o' || peek(1) == 'O' ||
                              peek(1) == 'b' || peek(1) == 'B')) {
            pos_ += 2;
            digits([](unsigned char ch) { return std::isxdigit(ch) != 0; });
        } else {
            digits(is_digit);
            if (peek() == '.') {
                ++pos_;
                digits(is_digit);
            }
            if (peek() == 'e' || peek() == 'E') {
                size_t save = pos_;
                ++pos_;
                if (peek() == '+' || peek() == '-') {
                    ++pos_;
                }
                if (!is_digit(static_cast<unsigned char>(peek()))) {
                    pos_ = save;
                } else {
                    digits(is_digit);
                }
            }
            if (peek() == 'j' || peek() == 'J') {
                ++pos_;
            }
        }
        if (is_ident_start(static_cast<unsigned char>(peek()))) {
            fail("invalid decimal literal");
        }
        push(TokKind::Number, std::string(src_.substr(begin, pos_ - begin)), start);
    }

    void lex_string(size_t begin, Pos start) {
        char quote = peek();
        bool triple = peek(1) == quote && peek(2) == quote;
        pos_ += triple ? 3 : 1;
        while (true) {
            if (pos_ >= src_.size()) {
                throw SyntaxError(triple ? "unterminated triple-quoted string literal"
                                         : "unterminated string literal",
                                  start);
            }
            char c = src_[pos_];
            if (c == '\\') {
                // Even raw strings cannot end on an escaped quote.
                pos_ += 2;
                if (pos_ <= src_.size() && src_[pos_ - 1] == '\n') {
                    newline_consumed();
                }
                continue;
            }
            if (c == '\n') {
                if (!triple) {
                    throw SyntaxError("unterminated string literal", start);
                }
                ++pos_;
                newline_consumed();
                continue;
            }
            if (c == quote) {
                if (!triple) {
                    ++pos_;
                    break;
                }
                if (peek(1) == quote && peek(2) == quote) {
                    pos_ += 3;
                    break;
                }
            }
            ++pos_;
        }
        push(TokKind::String, std::string(src_.substr(begin, pos_ - begin)), start);
    }

    std::string_view src_;
    size_t pos_ = 0;
    size_t line_begin_ = 0;
    int line_;
    int line_start_col_;
    int depth_ = 0;
    bool at_line_start_ = true;
    std::vector<int> indents_{0};
    std::vector<Token> tokens_;
};

}  // namespace

bool is_keyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view text, Pos origin) { return Lexer(text, origin).run(); }

}  // namespace callflow::syntax
