#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "susmod/catalogue.hpp"
#include "susmod/model.hpp"
#include "susmod/pattern.hpp"

namespace susmod {

// Resolves a path referenced by a `from "<path>"` clause (already joined with
// the including file's directory) to file contents, or nullopt when the file
// cannot be read.
using FileLoader = std::function<std::optional<std::string>(const std::string& path)>;

FileLoader filesystem_loader();

template <typename T>
struct ParseOutcome {
    std::optional<T> value;
    std::vector<Diagnostic> diagnostics;

    // Errors block downstream use; warnings (alias notes etc.) do not.
    bool ok() const { return value.has_value() && !has_errors(diagnostics); }
};

ParseOutcome<Model> parse_model(std::string_view text, const std::string& source = "<memory>",
                                const FileLoader& loader = filesystem_loader());

ParseOutcome<PatternDoc> parse_pattern(std::string_view text,
                                       const std::string& source = "<memory>");

ParseOutcome<Catalogue> parse_catalogue(std::string_view text,
                                        const std::string& source = "<memory>",
                                        const FileLoader& loader = filesystem_loader());

ParseOutcome<Binding> parse_binding(std::string_view text, const std::string& source = "<memory>");

// Convenience: reads the file and dispatches on its extension internally.
ParseOutcome<Model> parse_model_file(const std::string& path,
                                     const FileLoader& loader = filesystem_loader());
ParseOutcome<PatternDoc> parse_pattern_file(const std::string& path,
                                            const FileLoader& loader = filesystem_loader());
ParseOutcome<Catalogue> parse_catalogue_file(const std::string& path,
                                             const FileLoader& loader = filesystem_loader());
ParseOutcome<Binding> parse_binding_file(const std::string& path,
                                         const FileLoader& loader = filesystem_loader());

}  // namespace susmod
