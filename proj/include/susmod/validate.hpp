#pragma once

#include <vector>

#include "susmod/model.hpp"
#include "susmod/pattern.hpp"

namespace susmod {

// Well-formedness rules over a model. Errors: V1 resolvable/disjoint ids,
// V2 endpoint-kind table, V3 refinement acyclicity, V4 fragment connectivity,
// V5 anchor resolution. Warnings: V6 unmitigated obstacles, V7 value/goal
// without contributing activity, V8 mitigation without strategy.
// The result is complete and deterministically ordered by (code, span).
std::vector<Diagnostic> validate_model(const Model& model);

// Pattern rules: P1 mandatory template fields, P2 archetype is a valid
// connected fragment, P3 declared role never used (warning).
std::vector<Diagnostic> validate_pattern(const PatternDoc& pattern);

}  // namespace susmod
