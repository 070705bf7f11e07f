#pragma once

#include <optional>
#include <string>
#include <vector>

namespace susmod {

struct SourceSpan {
    std::string file;
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    int length = 1;

    friend auto operator<=>(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { error, warning };

// A coded finding. Errors block downstream operations, warnings do not.
struct Diagnostic {
    Severity severity = Severity::error;
    std::string code;  // e.g. "V4", "P1", "C1", "SYN"
    std::string message;
    std::optional<SourceSpan> span;
};

// Stable order: (code, span, message). Spanless diagnostics sort before
// spanned ones of the same code.
bool diagnostic_less(const Diagnostic& a, const Diagnostic& b);
void sort_diagnostics(std::vector<Diagnostic>& diags);

bool has_errors(const std::vector<Diagnostic>& diags);
bool has_warnings(const std::vector<Diagnostic>& diags);

// `file:line:col: [code] message` (position omitted when there is no span).
std::string format_diagnostic(const Diagnostic& d);

}  // namespace susmod
