#pragma once

#include <string>

#include "susmod/catalogue.hpp"
#include "susmod/model.hpp"
#include "susmod/pattern.hpp"

namespace susmod {

// Canonical text form: declarations sorted by (kind, id), two-space
// indentation, normalized dimension names, LF newlines. Parsing the output
// yields a structurally equal object, and serializing is byte-idempotent.
std::string serialize(const Model& model);
std::string serialize(const PatternDoc& pattern);
std::string serialize(const Catalogue& catalogue);

std::string quote(const std::string& text);

}  // namespace susmod
