#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "susmod/model.hpp"

namespace susmod {

// A role to bind at instantiation time, with the element kind a binding
// must provide.
struct RoleSpec {
    std::string name;
    ElementKind kind = ElementKind::value;
    std::optional<SourceSpan> span;

    friend bool operator==(const RoleSpec& a, const RoleSpec& b) {
        return a.name == b.name && a.kind == b.kind;
    }
};

// The generic structural content of a pattern. Body elements whose label is
// exactly "$<role>" are placeholders substituted at instantiation; "$<role>"
// inside longer labels is replaced textually by the bound element's label.
struct Archetype {
    std::vector<RoleSpec> roles;  // declaration order
    std::vector<Element> body_elements;
    std::vector<Link> body_links;

    friend bool operator==(const Archetype& a, const Archetype& b);
};

// One catalogue entry following the nine-field documentation template.
struct PatternDoc {
    std::string name;
    std::string summary;
    std::string category_primary;
    std::optional<std::string> category_secondary;
    std::set<Dimension> dimensions;
    std::string applicability;
    std::string content;
    Archetype archetype;
    std::string example;
    std::optional<std::string> discussion;
    std::vector<std::string> related;  // pattern names, resolved at catalogue level
    std::map<std::string, std::string> meta;
    std::optional<SourceSpan> span;

    friend bool operator==(const PatternDoc& a, const PatternDoc& b);
};

// "Violation Anticipation" -> "violation-anticipation"
std::string slugify(const std::string& name);

struct FreshSpec {
    std::string label;
    ElementKind kind = ElementKind::value;
    std::set<Dimension> dimensions;
};

struct BindingEntry {
    std::string role;
    // exactly one of the two is set
    std::optional<std::string> existing_id;
    std::optional<FreshSpec> fresh;
};

struct Binding {
    std::vector<BindingEntry> entries;

    const BindingEntry* find(const std::string& role) const;
};

// Roles in archetype declaration order.
std::vector<RoleSpec> free_roles(const PatternDoc& pattern);

// Splices the bound archetype into `target`: placeholders are substituted per
// binding, everything else gets fresh "<slug>.<n>" ids, and the instantiated
// elements are recorded as a new fragment anchored at `anchor`. Purely
// additive; the target's content is never touched.
Result<Model> instantiate(const PatternDoc& pattern, const Binding& binding, const Model& target,
                          const std::optional<std::string>& anchor);

struct InstantiationDiff {
    std::vector<std::string> added_elements;  // sorted ids
    std::vector<std::string> added_links;
    std::vector<std::string> added_fragments;

    std::string to_text() const;
};

InstantiationDiff diff_instantiation(const Model& before, const Model& after,
                                     const PatternDoc& pattern);

}  // namespace susmod
