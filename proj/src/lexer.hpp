#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "susmod/diagnostic.hpp"

namespace susmod {

enum class TokenType {
    identifier,  // letters, digits, '_', '.', '-' (not "->"); starts with letter or '_'
    string,      // quoted, escapes resolved
    lbrace,
    rbrace,
    lbracket,
    rbracket,
    lparen,
    rparen,
    comma,
    equals,
    colon,
    arrow,  // ->
    end_of_file,
};

struct Token {
    TokenType type = TokenType::end_of_file;
    std::string text;  // identifier spelling or decoded string value
    SourceSpan span;
};

// Tokenizes the whole input. Lexical problems (unterminated string, bad
// escape, stray character) are reported as SYN diagnostics; scanning
// continues so the parser still sees an end_of_file token.
std::vector<Token> lex(std::string_view text, const std::string& file,
                       std::vector<Diagnostic>& diags);

}  // namespace susmod
