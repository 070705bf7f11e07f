#include "susmod/validate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace susmod {

namespace {

std::string join_ids(const std::vector<std::string>& ids) {
    std::string out;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += ids[i];
    }
    return out;
}

void check_link_kinds(const Link& link, const std::map<std::string, Element>& elements,
                      std::vector<Diagnostic>& diags) {
    auto src = elements.find(link.source);
    auto dst = elements.find(link.target);
    if (src == elements.end() || dst == elements.end()) return;  // V1's business
    if (!link_kinds_admissible(link.kind, src->second.kind, dst->second.kind)) {
        diags.push_back({Severity::error, "V2",
                         std::string(to_string(link.kind)) + " link '" + link.id +
                             "' may not connect " + to_string(src->second.kind) + " '" +
                             link.source + "' to " + to_string(dst->second.kind) + " '" +
                             link.target + "'",
                         link.span});
    }
    if (link.strategy && link.kind != LinkKind::mitigates) {
        diags.push_back({Severity::error, "V2",
                         "link '" + link.id + "' carries a strategy but is not a mitigation",
                         link.span});
    }
}

// One V3 diagnostic per strongly connected refinement cluster (or self-loop).
void check_refinement_cycles(const Model& model, std::vector<Diagnostic>& diags) {
    std::map<std::string, std::vector<std::string>> edges;
    auto refinable = [&](const std::string& id) {
        auto it = model.elements.find(id);
        return it != model.elements.end() && (it->second.kind == ElementKind::value ||
                                              it->second.kind == ElementKind::goal);
    };
    for (const auto& [id, link] : model.links) {
        (void)id;
        if (link.kind != LinkKind::refines) continue;
        if (!refinable(link.source) || !refinable(link.target)) continue;
        edges[link.source].push_back(link.target);
    }

    // Tarjan over the refines subgraph.
    std::map<std::string, int> index, low;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    int counter = 0;
    std::vector<std::vector<std::string>> cycles;
    std::function<void(const std::string&)> strongconnect = [&](const std::string& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack.insert(v);
        for (const auto& w : edges[v]) {
            if (!index.count(w)) {
                strongconnect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack.count(w)) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::string> component;
            while (true) {
                std::string w = stack.back();
                stack.pop_back();
                on_stack.erase(w);
                component.push_back(w);
                if (w == v) break;
            }
            bool self_loop = false;
            if (component.size() == 1) {
                for (const auto& w : edges[component[0]])
                    if (w == component[0]) self_loop = true;
            }
            if (component.size() > 1 || self_loop) {
                std::sort(component.begin(), component.end());
                cycles.push_back(std::move(component));
            }
        }
    };
    std::vector<std::string> nodes;
    for (const auto& [from, tos] : edges) {
        (void)tos;
        nodes.push_back(from);
    }
    for (const auto& v : nodes)
        if (!index.count(v)) strongconnect(v);

    std::sort(cycles.begin(), cycles.end());
    for (const auto& cycle : cycles) {
        auto it = model.elements.find(cycle.front());
        diags.push_back({Severity::error, "V3",
                         "refinement cycle among [" + join_ids(cycle) + "]",
                         it != model.elements.end() ? it->second.span : std::nullopt});
    }
}

void check_fragments(const Model& model, std::vector<Diagnostic>& diags) {
    for (const auto& [name, fragment] : model.fragments) {
        (void)name;
        bool members_ok = true;
        for (const auto& id : fragment.elements) {
            if (!model.elements.count(id)) {
                diags.push_back({Severity::error, "V1",
                                 "fragment '" + fragment.name + "' references unknown element '" +
                                     id + "'",
                                 fragment.span});
                members_ok = false;
            }
        }
        for (const auto& id : fragment.links) {
            auto it = model.links.find(id);
            if (it == model.links.end()) {
                diags.push_back({Severity::error, "V1",
                                 "fragment '" + fragment.name + "' references unknown link '" +
                                     id + "'",
                                 fragment.span});
                members_ok = false;
                continue;
            }
            for (const std::string* endpoint : {&it->second.source, &it->second.target}) {
                if (!fragment.elements.count(*endpoint)) {
                    diags.push_back({Severity::error, "V4",
                                     "fragment '" + fragment.name + "' link '" + id +
                                         "' has endpoint '" + *endpoint +
                                         "' outside the fragment",
                                     fragment.span});
                }
            }
        }
        if (!members_ok) continue;
        if (fragment.elements.empty()) {
            diags.push_back({Severity::error, "V4",
                             "fragment '" + fragment.name + "' has no elements", fragment.span});
        } else {
            auto components = undirected_components(model, fragment.elements);
            if (components.ok() && components.value().size() > 1) {
                std::ostringstream msg;
                msg << "fragment '" << fragment.name << "' is not connected: "
                    << components.value().size() << " components:";
                for (const auto& component : components.value())
                    msg << " [" << join_ids(component) << "]";
                diags.push_back({Severity::error, "V4", msg.str(), fragment.span});
            }
        }
        if (fragment.anchor) {
            if (!model.elements.count(*fragment.anchor)) {
                diags.push_back({Severity::error, "V5",
                                 "fragment '" + fragment.name + "' anchor '" + *fragment.anchor +
                                     "' does not exist",
                                 fragment.span});
            } else if (fragment.elements.count(*fragment.anchor)) {
                diags.push_back({Severity::error, "V5",
                                 "fragment '" + fragment.name + "' anchor '" + *fragment.anchor +
                                     "' lies inside the fragment",
                                 fragment.span});
            }
        }
    }
}

// Contributions from activities flow up the refinement hierarchy.
void check_contribution_reach(const Model& model, std::vector<Diagnostic>& diags) {
    std::map<std::string, std::vector<std::string>> up;  // child -> parents
    std::set<std::string> covered;
    for (const auto& [id, link] : model.links) {
        (void)id;
        if (link.kind == LinkKind::refines) up[link.source].push_back(link.target);
        if (link.kind == LinkKind::contributes) {
            auto src = model.elements.find(link.source);
            if (src != model.elements.end() && src->second.kind == ElementKind::activity)
                covered.insert(link.target);
        }
    }
    std::vector<std::string> frontier(covered.begin(), covered.end());
    while (!frontier.empty()) {
        std::string id = frontier.back();
        frontier.pop_back();
        for (const auto& parent : up[id])
            if (covered.insert(parent).second) frontier.push_back(parent);
    }
    for (const auto& [id, el] : model.elements) {
        if (el.kind != ElementKind::value && el.kind != ElementKind::goal) continue;
        if (!covered.count(id))
            diags.push_back({Severity::warning, "V7",
                             std::string(to_string(el.kind)) + " '" + id +
                                 "' has no contributing activity",
                             el.span});
    }
}

}  // namespace

std::vector<Diagnostic> validate_model(const Model& model) {
    std::vector<Diagnostic> diags;

    // V1: resolvable ids, disjoint namespaces
    for (const auto& [id, el] : model.elements) {
        if (id.empty() || id != el.id)
            diags.push_back(
                {Severity::error, "V1", "element id map entry '" + id + "' is inconsistent",
                 el.span});
        if (model.links.count(id))
            diags.push_back({Severity::error, "V1",
                             "id '" + id + "' is used by both an element and a link", el.span});
    }
    for (const auto& [id, link] : model.links) {
        if (id.empty() || id != link.id)
            diags.push_back({Severity::error, "V1",
                             "link id map entry '" + id + "' is inconsistent", link.span});
        for (const std::string* endpoint : {&link.source, &link.target}) {
            if (!model.elements.count(*endpoint))
                diags.push_back({Severity::error, "V1",
                                 "link '" + link.id + "' references unknown element '" +
                                     *endpoint + "'",
                                 link.span});
        }
    }

    // V2
    for (const auto& [id, link] : model.links) {
        (void)id;
        check_link_kinds(link, model.elements, diags);
    }

    check_refinement_cycles(model, diags);  // V3
    check_fragments(model, diags);          // V4, V5

    // V6: every obstacle wants at least one incoming mitigation
    std::set<std::string> mitigated;
    for (const auto& [id, link] : model.links) {
        (void)id;
        if (link.kind == LinkKind::mitigates) mitigated.insert(link.target);
    }
    for (const auto& [id, el] : model.elements) {
        if (el.kind == ElementKind::obstacle && !mitigated.count(id))
            diags.push_back({Severity::warning, "V6",
                             "obstacle '" + id + "' has no mitigating activity", el.span});
    }

    check_contribution_reach(model, diags);  // V7

    // V8
    for (const auto& [id, link] : model.links) {
        (void)id;
        if (link.kind == LinkKind::mitigates && !link.strategy)
            diags.push_back({Severity::warning, "V8",
                             "mitigates link '" + link.id + "' carries no strategy", link.span});
    }

    sort_diagnostics(diags);
    return diags;
}

std::vector<Diagnostic> validate_pattern(const PatternDoc& pattern) {
    std::vector<Diagnostic> diags;

    auto missing = [&](const char* field) {
        diags.push_back({Severity::error, "P1",
                         "pattern '" + pattern.name + "' is missing mandatory field '" + field +
                             "'",
                         pattern.span});
    };
    if (pattern.name.empty()) missing("name");
    if (pattern.summary.empty()) missing("summary");
    if (pattern.category_primary.empty()) missing("category");
    if (pattern.dimensions.empty()) missing("dims");
    if (pattern.applicability.empty()) missing("applicability");
    if (pattern.content.empty()) missing("content");
    if (pattern.example.empty()) missing("example");

    const Archetype& archetype = pattern.archetype;
    std::map<std::string, ElementKind> role_kinds;
    for (const auto& role : archetype.roles) {
        if (!role_kinds.emplace(role.name, role.kind).second)
            diags.push_back({Severity::error, "P2",
                             "duplicate role '" + role.name + "'", role.span});
    }

    // P2: the body must be a valid connected fragment (placeholders count as
    // ordinary elements).
    if (archetype.body_elements.empty()) {
        diags.push_back({Severity::error, "P2",
                         "pattern '" + pattern.name + "' has an empty archetype", pattern.span});
    } else {
        Model body;
        body.name = pattern.name;
        bool body_ok = true;
        for (const auto& el : archetype.body_elements) {
            if (body.elements.count(el.id)) {
                diags.push_back(
                    {Severity::error, "P2", "duplicate archetype element '" + el.id + "'",
                     el.span});
                body_ok = false;
                continue;
            }
            if (el.dimensions.empty() && !dimensions_optional(el.kind)) {
                diags.push_back({Severity::error, "P2",
                                 "archetype " + std::string(to_string(el.kind)) + " '" + el.id +
                                     "' must carry at least one dimension",
                                 el.span});
                body_ok = false;
            }
            body.elements.emplace(el.id, el);
        }
        for (const auto& link : archetype.body_links) {
            if (body.has_id(link.id)) {
                diags.push_back({Severity::error, "P2",
                                 "duplicate archetype link '" + link.id + "'", link.span});
                body_ok = false;
                continue;
            }
            bool resolved = true;
            for (const std::string* endpoint : {&link.source, &link.target}) {
                if (!body.elements.count(*endpoint)) {
                    diags.push_back({Severity::error, "P2",
                                     "archetype link '" + link.id +
                                         "' references unknown element '" + *endpoint + "'",
                                     link.span});
                    resolved = false;
                }
            }
            if (!resolved) {
                body_ok = false;
                continue;
            }
            auto src = body.elements.find(link.source);
            auto dst = body.elements.find(link.target);
            if (!link_kinds_admissible(link.kind, src->second.kind, dst->second.kind)) {
                diags.push_back({Severity::error, "P2",
                                 std::string(to_string(link.kind)) + " archetype link '" +
                                     link.id + "' may not connect " +
                                     to_string(src->second.kind) + " to " +
                                     to_string(dst->second.kind),
                                 link.span});
            }
            if (link.strategy && link.kind != LinkKind::mitigates) {
                diags.push_back({Severity::error, "P2",
                                 "archetype link '" + link.id +
                                     "' carries a strategy but is not a mitigation",
                                 link.span});
            }
            body.links.emplace(link.id, link);
        }
        if (body_ok) {
            std::set<std::string> ids;
            for (const auto& [id, el] : body.elements) {
                (void)el;
                ids.insert(id);
            }
            auto components = undirected_components(body, ids);
            if (components.ok() && components.value().size() > 1) {
                std::ostringstream msg;
                msg << "archetype of '" << pattern.name << "' is not connected: "
                    << components.value().size() << " components:";
                for (const auto& component : components.value())
                    msg << " [" << join_ids(component) << "]";
                diags.push_back({Severity::error, "P2", msg.str(), pattern.span});
            }
        }
        // placeholder kinds must match their role's expected kind
        for (const auto& el : archetype.body_elements) {
            if (el.label.size() < 2 || el.label[0] != '$') continue;
            auto it = role_kinds.find(el.label.substr(1));
            if (it == role_kinds.end()) continue;
            if (el.kind != it->second)
                diags.push_back({Severity::error, "P2",
                                 "placeholder '" + el.id + "' is a " + to_string(el.kind) +
                                     " but role '" + it->first + "' expects a " +
                                     to_string(it->second),
                                 el.span});
        }
    }

    // P3: declared roles must occur in the body
    for (const auto& role : archetype.roles) {
        bool used = false;
        const std::string needle = "$" + role.name;
        for (const auto& el : archetype.body_elements) {
            size_t pos = el.label.find(needle);
            while (pos != std::string::npos) {
                size_t end = pos + needle.size();
                // reject partial matches like $RoleName inside $RoleNameLonger
                if (end >= el.label.size() ||
                    !(isalnum(static_cast<unsigned char>(el.label[end])) ||
                      el.label[end] == '_')) {
                    used = true;
                    break;
                }
                pos = el.label.find(needle, pos + 1);
            }
            if (used) break;
        }
        if (!used)
            diags.push_back({Severity::warning, "P3",
                             "role '" + role.name + "' never occurs in the archetype body",
                             role.span});
    }

    sort_diagnostics(diags);
    return diags;
}

}  // namespace susmod
