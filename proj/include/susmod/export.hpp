#pragma once

#include <string>

#include "susmod/catalogue.hpp"
#include "susmod/model.hpp"
#include "susmod/pattern.hpp"
#include "susmod/result.hpp"

namespace susmod {

// Graphviz rendering of a model: one node per element (shape by kind),
// IS-tagged elements filled dark grey, fragments as clusters, mitigation
// edges labelled with their strategy. Fails on models with validation errors.
Result<std::string> export_model_dot(const Model& model);

// Hexagon per pattern at its computed placement (pinned coordinates, scaled
// x5), category anchors as labelled rings, related edges dashed.
Result<std::string> export_catalogue_dot(const Catalogue& catalogue,
                                         const PlacementOptions& options = {});

// Pattern sheet with sections in template order; the archetype is embedded
// as a fenced DOT block. Optional sections are skipped when absent.
std::string export_pattern_markdown(const PatternDoc& pattern);

// DOT of the archetype body alone (role placeholders shown as-is).
std::string export_archetype_dot(const PatternDoc& pattern);

}  // namespace susmod
