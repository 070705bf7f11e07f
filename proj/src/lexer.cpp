#include "lexer.hpp"

namespace susmod {

namespace {

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9') || c == '.' || c == '-';
}

}  // namespace

std::vector<Token> lex(std::string_view text, const std::string& file,
                       std::vector<Diagnostic>& diags) {
    std::vector<Token> tokens;
    size_t i = 0;
    int line = 1;
    int col = 1;

    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto span_here = [&](int length) { return SourceSpan{file, line, col, length}; };
    auto push = [&](TokenType type, std::string value, SourceSpan span) {
        tokens.push_back(Token{type, std::move(value), std::move(span)});
    };

    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            push(TokenType::arrow, "->", span_here(2));
            advance(2);
            continue;
        }
        if (is_ident_start(c)) {
            SourceSpan span = span_here(0);
            size_t start = i;
            // '-' stays in the identifier unless it opens an arrow
            while (i < text.size() && is_ident_char(text[i]) &&
                   !(text[i] == '-' && i + 1 < text.size() && text[i + 1] == '>')) {
                advance(1);
            }
            span.length = static_cast<int>(i - start);
            push(TokenType::identifier, std::string(text.substr(start, i - start)), span);
            continue;
        }
        if (c == '"') {
            SourceSpan span = span_here(1);
            size_t start = i;
            advance(1);
            std::string value;
            bool closed = false;
            while (i < text.size()) {
                char d = text[i];
                if (d == '"') {
                    advance(1);
                    closed = true;
                    break;
                }
                if (d == '\n') break;  // strings do not span lines
                if (d == '\\') {
                    if (i + 1 >= text.size()) break;
                    char e = text[i + 1];
                    switch (e) {
                        case '"': value += '"'; break;
                        case '\\': value += '\\'; break;
                        case 'n': value += '\n'; break;
                        case 't': value += '\t'; break;
                        default:
                            diags.push_back({Severity::error, "SYN",
                                             std::string("unknown escape '\\") + e + "' in string",
                                             span_here(2)});
                            value += e;
                            break;
                    }
                    advance(2);
                    continue;
                }
                value += d;
                advance(1);
            }
            span.length = static_cast<int>(i - start);
            if (!closed)
                diags.push_back({Severity::error, "SYN", "unterminated string", span});
            push(TokenType::string, std::move(value), span);
            continue;
        }
        TokenType type;
        switch (c) {
            case '{': type = TokenType::lbrace; break;
            case '}': type = TokenType::rbrace; break;
            case '[': type = TokenType::lbracket; break;
            case ']': type = TokenType::rbracket; break;
            case '(': type = TokenType::lparen; break;
            case ')': type = TokenType::rparen; break;
            case ',': type = TokenType::comma; break;
            case '=': type = TokenType::equals; break;
            case ':': type = TokenType::colon; break;
            default:
                diags.push_back({Severity::error, "SYN",
                                 std::string("unexpected character '") + c + "'", span_here(1)});
                advance(1);
                continue;
        }
        push(type, std::string(1, c), span_here(1));
        advance(1);
    }
    push(TokenType::end_of_file, "", span_here(1));
    return tokens;
}

}  // namespace susmod
