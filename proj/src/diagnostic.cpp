#include "susmod/diagnostic.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace susmod {

bool diagnostic_less(const Diagnostic& a, const Diagnostic& b) {
    static const SourceSpan no_span{};
    const SourceSpan& sa = a.span ? *a.span : no_span;
    const SourceSpan& sb = b.span ? *b.span : no_span;
    return std::tie(a.code, sa.file, sa.line, sa.column, sa.length, a.message) <
           std::tie(b.code, sb.file, sb.line, sb.column, sb.length, b.message);
}

void sort_diagnostics(std::vector<Diagnostic>& diags) {
    std::stable_sort(diags.begin(), diags.end(), diagnostic_less);
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::error; });
}

bool has_warnings(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::warning; });
}

std::string format_diagnostic(const Diagnostic& d) {
    std::ostringstream out;
    if (d.span)
        out << d.span->file << ':' << d.span->line << ':' << d.span->column << ": ";
    out << '[' << d.code << "] " << d.message;
    return out.str();
}

}  // namespace susmod
