#include "susmod/model.hpp"

#include <algorithm>
#include <map>

namespace susmod {

const char* to_string(Dimension d) {
    switch (d) {
        case Dimension::environmental: return "environmental";
        case Dimension::economic: return "economic";
        case Dimension::social: return "social";
        case Dimension::personal: return "personal";
        case Dimension::technical: return "technical";
    }
    return "?";
}

const char* to_string(ElementKind k) {
    switch (k) {
        case ElementKind::value: return "value";
        case ElementKind::goal: return "goal";
        case ElementKind::activity: return "activity";
        case ElementKind::obstacle: return "obstacle";
        case ElementKind::assumption: return "assumption";
        case ElementKind::regulation: return "regulation";
        case ElementKind::resource: return "resource";
        case ElementKind::indicator: return "indicator";
        case ElementKind::stakeholder: return "stakeholder";
    }
    return "?";
}

const char* to_string(LinkKind k) {
    switch (k) {
        case LinkKind::refines: return "refines";
        case LinkKind::contributes: return "contributes";
        case LinkKind::obstructs: return "obstructs";
        case LinkKind::mitigates: return "mitigates";
        case LinkKind::monitors: return "monitors";
        case LinkKind::uses_resource: return "uses_resource";
        case LinkKind::responsible_for: return "responsible_for";
    }
    return "?";
}

const char* to_string(MitigationStrategy s) {
    switch (s) {
        case MitigationStrategy::avoidance: return "avoidance";
        case MitigationStrategy::anticipation: return "anticipation";
        case MitigationStrategy::repair: return "repair";
        case MitigationStrategy::degraded_mode: return "degraded_mode";
    }
    return "?";
}

const char* to_string(OpErrorCode code) {
    switch (code) {
        case OpErrorCode::duplicate_id: return "DuplicateId";
        case OpErrorCode::dangling_endpoint: return "DanglingEndpoint";
        case OpErrorCode::illegal_endpoint_kinds: return "IllegalEndpointKinds";
        case OpErrorCode::strategy_on_non_mitigation: return "StrategyOnNonMitigation";
        case OpErrorCode::missing_dimensions: return "MissingDimensions";
        case OpErrorCode::unknown_id: return "UnknownId";
        case OpErrorCode::unbound_role: return "UnboundRole";
        case OpErrorCode::unknown_role: return "UnknownRole";
        case OpErrorCode::kind_mismatch: return "KindMismatch";
        case OpErrorCode::anchor_unknown: return "AnchorUnknown";
        case OpErrorCode::anchor_in_fragment: return "AnchorInFragment";
        case OpErrorCode::binding_conflict: return "BindingConflict";
        case OpErrorCode::collision_exhausted: return "CollisionExhausted";
        case OpErrorCode::invalid_model: return "InvalidModel";
        case OpErrorCode::invalid_pattern: return "InvalidPattern";
        case OpErrorCode::unknown_category: return "UnknownCategory";
        case OpErrorCode::unknown_pattern: return "UnknownPattern";
        case OpErrorCode::chain_too_short: return "ChainTooShort";
        case OpErrorCode::io_error: return "IoError";
        case OpErrorCode::parse_error: return "ParseError";
    }
    return "?";
}

std::optional<ElementKind> element_kind_from(std::string_view word) {
    static const std::map<std::string_view, ElementKind> table = {
        {"value", ElementKind::value},           {"goal", ElementKind::goal},
        {"activity", ElementKind::activity},     {"obstacle", ElementKind::obstacle},
        {"assumption", ElementKind::assumption}, {"regulation", ElementKind::regulation},
        {"resource", ElementKind::resource},     {"indicator", ElementKind::indicator},
        {"stakeholder", ElementKind::stakeholder},
    };
    auto it = table.find(word);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

std::optional<LinkKind> link_kind_from(std::string_view word) {
    static const std::map<std::string_view, LinkKind> table = {
        {"refines", LinkKind::refines},
        {"contributes", LinkKind::contributes},
        {"obstructs", LinkKind::obstructs},
        {"mitigates", LinkKind::mitigates},
        {"monitors", LinkKind::monitors},
        {"uses_resource", LinkKind::uses_resource},
        {"responsible_for", LinkKind::responsible_for},
    };
    auto it = table.find(word);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

std::optional<MitigationStrategy> strategy_from(std::string_view word) {
    static const std::map<std::string_view, MitigationStrategy> table = {
        {"avoidance", MitigationStrategy::avoidance},
        {"anticipation", MitigationStrategy::anticipation},
        {"repair", MitigationStrategy::repair},
        {"degraded_mode", MitigationStrategy::degraded_mode},
    };
    auto it = table.find(word);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

std::optional<Dimension> dimension_from(std::string_view word, bool* was_alias) {
    if (was_alias) *was_alias = false;
    if (word == "environmental") return Dimension::environmental;
    if (word == "economic") return Dimension::economic;
    if (word == "social") return Dimension::social;
    if (word == "personal") return Dimension::personal;
    if (word == "technical") return Dimension::technical;
    if (word == "financial") {
        if (was_alias) *was_alias = true;
        return Dimension::economic;
    }
    if (word == "individual") {
        if (was_alias) *was_alias = true;
        return Dimension::personal;
    }
    return std::nullopt;
}

bool dimensions_optional(ElementKind k) {
    switch (k) {
        case ElementKind::assumption:
        case ElementKind::regulation:
        case ElementKind::indicator:
        case ElementKind::stakeholder:
            return true;
        default:
            return false;
    }
}

bool link_kinds_admissible(LinkKind kind, ElementKind source, ElementKind target) {
    const bool src_value_or_goal = source == ElementKind::value || source == ElementKind::goal;
    const bool dst_value_or_goal = target == ElementKind::value || target == ElementKind::goal;
    switch (kind) {
        case LinkKind::refines:
            // same-kind refinement, plus goal -> value (a goal concretizes a value)
            return (src_value_or_goal && source == target) ||
                   (source == ElementKind::goal && target == ElementKind::value);
        case LinkKind::contributes:
            return (source == ElementKind::activity || source == ElementKind::assumption ||
                    source == ElementKind::regulation) &&
                   dst_value_or_goal;
        case LinkKind::obstructs:
            return source == ElementKind::obstacle &&
                   (dst_value_or_goal || target == ElementKind::activity);
        case LinkKind::mitigates:
            return source == ElementKind::activity && target == ElementKind::obstacle;
        case LinkKind::monitors:
            return source == ElementKind::indicator &&
                   (dst_value_or_goal || target == ElementKind::activity ||
                    target == ElementKind::resource);
        case LinkKind::uses_resource:
            return source == ElementKind::activity && target == ElementKind::resource;
        case LinkKind::responsible_for:
            return source == ElementKind::stakeholder && target == ElementKind::activity;
    }
    return false;
}

Result<Model> add_element(const Model& model, const Element& element) {
    if (element.id.empty())
        return OpError{OpErrorCode::duplicate_id, "element id must be non-empty"};
    if (model.has_id(element.id))
        return OpError{OpErrorCode::duplicate_id, "id '" + element.id + "' already exists"};
    if (element.dimensions.empty() && !dimensions_optional(element.kind))
        return OpError{OpErrorCode::missing_dimensions,
                       std::string(to_string(element.kind)) + " '" + element.id +
                           "' must carry at least one dimension"};
    Model out = model;
    out.elements.emplace(element.id, element);
    return out;
}

Result<Model> add_link(const Model& model, const Link& link) {
    if (link.id.empty()) return OpError{OpErrorCode::duplicate_id, "link id must be non-empty"};
    if (model.has_id(link.id))
        return OpError{OpErrorCode::duplicate_id, "id '" + link.id + "' already exists"};
    auto src = model.elements.find(link.source);
    auto dst = model.elements.find(link.target);
    if (src == model.elements.end())
        return OpError{OpErrorCode::dangling_endpoint,
                       "link '" + link.id + "' source '" + link.source + "' does not exist"};
    if (dst == model.elements.end())
        return OpError{OpErrorCode::dangling_endpoint,
                       "link '" + link.id + "' target '" + link.target + "' does not exist"};
    if (!link_kinds_admissible(link.kind, src->second.kind, dst->second.kind))
        return OpError{OpErrorCode::illegal_endpoint_kinds,
                       std::string(to_string(link.kind)) + " link '" + link.id +
                           "' may not connect " + to_string(src->second.kind) + " to " +
                           to_string(dst->second.kind)};
    if (link.strategy && link.kind != LinkKind::mitigates)
        return OpError{OpErrorCode::strategy_on_non_mitigation,
                       "link '" + link.id + "' carries a strategy but is not a mitigation"};
    Model out = model;
    out.links.emplace(link.id, link);
    return out;
}

Result<std::vector<std::vector<std::string>>> undirected_components(
    const Model& model, const std::set<std::string>& subset) {
    for (const auto& id : subset) {
        if (!model.elements.count(id))
            return OpError{OpErrorCode::unknown_id, "unknown element id '" + id + "'"};
    }

    // Union-find over the subset.
    std::map<std::string, std::string> parent;
    for (const auto& id : subset) parent[id] = id;
    auto find = [&](std::string id) {
        while (parent[id] != id) id = parent[id];
        return id;
    };
    for (const auto& [lid, link] : model.links) {
        (void)lid;
        if (!subset.count(link.source) || !subset.count(link.target)) continue;
        auto a = find(link.source);
        auto b = find(link.target);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }

    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& id : subset) groups[find(id)].push_back(id);
    std::vector<std::vector<std::string>> components;
    for (auto& [root, members] : groups) {
        (void)root;
        std::sort(members.begin(), members.end());
        components.push_back(std::move(members));
    }
    // groups is keyed by the smallest member, so the order is already the
    // required one (sorted by smallest member id).
    return components;
}

}  // namespace susmod
