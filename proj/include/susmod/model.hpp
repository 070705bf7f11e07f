#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "susmod/diagnostic.hpp"
#include "susmod/result.hpp"

namespace susmod {

// The five canonical sustainability dimensions. "financial" and "individual"
// are accepted on input and normalized to economic / personal.
enum class Dimension { environmental, economic, social, personal, technical };

enum class ElementKind {
    value,
    goal,
    activity,
    obstacle,
    assumption,
    regulation,
    resource,
    indicator,
    stakeholder,
};

enum class LinkKind {
    refines,
    contributes,
    obstructs,
    mitigates,
    monitors,
    uses_resource,
    responsible_for,
};

// Obstacle resolution tactics; legal on mitigates links only.
enum class MitigationStrategy { avoidance, anticipation, repair, degraded_mode };

const char* to_string(Dimension d);
const char* to_string(ElementKind k);
const char* to_string(LinkKind k);
const char* to_string(MitigationStrategy s);

std::optional<ElementKind> element_kind_from(std::string_view word);
std::optional<LinkKind> link_kind_from(std::string_view word);
std::optional<MitigationStrategy> strategy_from(std::string_view word);

// Parses a dimension name. Aliases are normalized; `was_alias` is set so the
// caller can emit a note.
std::optional<Dimension> dimension_from(std::string_view word, bool* was_alias = nullptr);

// True for kinds that may carry an empty dimension set.
bool dimensions_optional(ElementKind k);

struct Element {
    std::string id;
    ElementKind kind = ElementKind::value;
    std::string label;
    std::set<Dimension> dimensions;
    bool is_tagged = false;  // information-system membership
    std::map<std::string, std::string> attrs;
    std::optional<SourceSpan> span;  // set by the parser; not part of identity

    friend bool operator==(const Element& a, const Element& b) {
        return a.id == b.id && a.kind == b.kind && a.label == b.label &&
               a.dimensions == b.dimensions && a.is_tagged == b.is_tagged && a.attrs == b.attrs;
    }
};

struct Link {
    std::string id;
    LinkKind kind = LinkKind::refines;
    std::string source;
    std::string target;
    std::optional<MitigationStrategy> strategy;
    std::optional<SourceSpan> span;

    friend bool operator==(const Link& a, const Link& b) {
        return a.id == b.id && a.kind == b.kind && a.source == b.source && a.target == b.target &&
               a.strategy == b.strategy;
    }
};

// A named connected sub-model. Members reference ids of the containing model;
// the anchor, when set, points at an element outside the fragment.
struct Fragment {
    std::string name;
    std::set<std::string> elements;
    std::set<std::string> links;
    std::optional<std::string> anchor;
    std::optional<SourceSpan> span;

    friend bool operator==(const Fragment& a, const Fragment& b) {
        return a.name == b.name && a.elements == b.elements && a.links == b.links &&
               a.anchor == b.anchor;
    }
};

struct Model {
    std::string name;
    std::map<std::string, Element> elements;
    std::map<std::string, Link> links;
    std::map<std::string, Fragment> fragments;
    std::map<std::string, std::string> meta;

    bool has_id(const std::string& id) const {
        return elements.count(id) != 0 || links.count(id) != 0;
    }

    friend bool operator==(const Model& a, const Model& b) {
        return a.name == b.name && a.elements == b.elements && a.links == b.links &&
               a.fragments == b.fragments && a.meta == b.meta;
    }
};

// Endpoint-kind table for links. One row per admissible
// (link kind, source kind, target kind) combination.
bool link_kinds_admissible(LinkKind kind, ElementKind source, ElementKind target);

// Pure insertion ops: the input model is never mutated, a new model is
// returned. Preconditions are checked and reported as OpError.
Result<Model> add_element(const Model& model, const Element& element);
Result<Model> add_link(const Model& model, const Link& link);

// Partitions `subset` into connected components under the model's links
// restricted to the subset, ignoring link direction. Components are sorted
// internally and ordered by smallest member id.
Result<std::vector<std::vector<std::string>>> undirected_components(
    const Model& model, const std::set<std::string>& subset);

}  // namespace susmod
