#include "susmod/export.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "susmod/validate.hpp"

namespace susmod {

namespace {

const char* shape_for(ElementKind kind) {
    switch (kind) {
        case ElementKind::value: return "ellipse";
        case ElementKind::goal: return "house";
        case ElementKind::activity: return "box";
        case ElementKind::obstacle: return "doubleoctagon";  // explosion stand-in
        case ElementKind::assumption: return "note";
        case ElementKind::regulation: return "component";
        case ElementKind::resource: return "cylinder";
        case ElementKind::indicator: return "diamond";
        case ElementKind::stakeholder: return "plaintext";
    }
    return "box";
}

std::string dot_quote(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += '"';
    return out;
}

// DOT cluster names must stay bare identifiers with the cluster_ prefix.
std::string cluster_name(const std::string& fragment_name) {
    std::string out = "cluster_";
    for (char c : fragment_name)
        out += isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return out;
}

void write_node(std::ostream& out, const Element& el, int indent) {
    out << std::string(indent, ' ') << dot_quote(el.id) << " [label="
        << dot_quote(el.label.empty() ? el.id : el.label) << ", shape=" << shape_for(el.kind);
    if (el.is_tagged) out << ", style=filled, fillcolor=gray25, fontcolor=white";
    out << "];\n";
}

std::string edge_label(const Link& link) {
    std::string label = to_string(link.kind);
    if (link.strategy) label += std::string(" (") + to_string(*link.strategy) + ")";
    return label;
}

std::string format_coord(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

void write_body_dot(std::ostream& out, const std::string& title,
                    const std::vector<const Element*>& elements,
                    const std::vector<const Link*>& links) {
    out << "digraph " << dot_quote(title) << " {\n";
    out << "  rankdir=TB;\n";
    for (const auto* el : elements) write_node(out, *el, 2);
    for (const auto* link : links) {
        out << "  " << dot_quote(link->source) << " -> " << dot_quote(link->target)
            << " [label=" << dot_quote(edge_label(*link)) << "];\n";
    }
    out << "}\n";
}

std::string escape_markdown(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '#') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

Result<std::string> export_model_dot(const Model& model) {
    if (has_errors(validate_model(model)))
        return OpError{OpErrorCode::invalid_model,
                       "model '" + model.name + "' does not validate"};

    // Each node is declared exactly once; nodes belonging to a fragment are
    // declared inside the first containing cluster (by fragment name).
    std::map<std::string, std::string> owner;  // element id -> fragment name
    for (const auto& [name, fragment] : model.fragments) {
        for (const auto& id : fragment.elements)
            if (!owner.count(id)) owner.emplace(id, name);
    }

    std::ostringstream out;
    out << "digraph " << dot_quote(model.name) << " {\n";
    out << "  rankdir=TB;\n";
    for (const auto& [name, fragment] : model.fragments) {
        out << "  subgraph " << cluster_name(name) << " {\n";
        out << "    label=" << dot_quote("fragment " + name) << ";\n";
        out << "    style=dashed;\n";
        for (const auto& [id, el] : model.elements) {
            auto it = owner.find(id);
            if (it != owner.end() && it->second == name) write_node(out, el, 4);
        }
        out << "  }\n";
    }
    for (const auto& [id, el] : model.elements) {
        if (!owner.count(id)) write_node(out, el, 2);
    }
    for (const auto& [id, link] : model.links) {
        (void)id;
        out << "  " << dot_quote(link.source) << " -> " << dot_quote(link.target)
            << " [label=" << dot_quote(edge_label(link)) << "];\n";
    }
    out << "}\n";
    return out.str();
}

Result<std::string> export_catalogue_dot(const Catalogue& catalogue,
                                         const PlacementOptions& options) {
    auto placements = compute_placements(catalogue, options);
    if (!placements.ok()) return placements.error();
    constexpr double kScale = 5.0;

    std::ostringstream out;
    out << "digraph " << dot_quote(catalogue.name) << " {\n";
    out << "  layout=neato;\n";

    auto category_node = [&](const std::string& category) {
        Point anchor = category_anchor(catalogue, category);
        out << "  " << dot_quote("category:" + category) << " [label=" << dot_quote(category)
            << ", shape=circle, style=dotted, pos=\"" << format_coord(anchor.x * kScale) << ","
            << format_coord(anchor.y * kScale) << "!\"];\n";
    };
    for (const auto& category : catalogue.cycle) category_node(category);
    category_node(catalogue.center);

    std::vector<const PatternDoc*> docs;
    for (const auto& doc : catalogue.patterns) docs.push_back(&doc);
    std::sort(docs.begin(), docs.end(),
              [](const PatternDoc* a, const PatternDoc* b) { return a->name < b->name; });
    for (const auto* doc : docs) {
        const Point& pos = placements.value().at(doc->name);
        out << "  " << dot_quote(slugify(doc->name)) << " [label=" << dot_quote(doc->name)
            << ", shape=hexagon, pos=\"" << format_coord(pos.x * kScale) << ","
            << format_coord(pos.y * kScale) << "!\"];\n";
    }

    std::set<std::pair<std::string, std::string>> edges;
    for (const auto* doc : docs) {
        for (const auto& related_name : doc->related) {
            const PatternDoc* other = catalogue.find_pattern(related_name);
            if (!other) continue;
            std::pair<std::string, std::string> key{slugify(doc->name), slugify(other->name)};
            if (key.first > key.second) std::swap(key.first, key.second);
            edges.insert(key);
        }
    }
    for (const auto& [a, b] : edges) {
        out << "  " << dot_quote(a) << " -> " << dot_quote(b)
            << " [style=dashed, dir=none];\n";
    }
    out << "}\n";
    return out.str();
}

std::string export_archetype_dot(const PatternDoc& pattern) {
    std::vector<const Element*> elements;
    for (const auto& el : pattern.archetype.body_elements) elements.push_back(&el);
    std::sort(elements.begin(), elements.end(),
              [](const Element* a, const Element* b) { return a->id < b->id; });
    std::vector<const Link*> links;
    for (const auto& link : pattern.archetype.body_links) links.push_back(&link);
    std::sort(links.begin(), links.end(),
              [](const Link* a, const Link* b) { return a->id < b->id; });
    std::ostringstream out;
    write_body_dot(out, pattern.name + " (archetype)", elements, links);
    return out.str();
}

std::string export_pattern_markdown(const PatternDoc& pattern) {
    std::ostringstream out;
    out << "# " << escape_markdown(pattern.name) << "\n\n";

    out << "## Summary\n\n" << escape_markdown(pattern.summary) << "\n\n";

    out << "## Category\n\n" << escape_markdown(pattern.category_primary) << " (primary)";
    if (pattern.category_secondary)
        out << ", " << escape_markdown(*pattern.category_secondary) << " (secondary)";
    out << "\n\n";

    out << "## Dimensions\n\n";
    bool first = true;
    for (auto dim : pattern.dimensions) {
        if (!first) out << ", ";
        first = false;
        out << to_string(dim);
    }
    out << "\n\n";

    out << "## Applicability\n\n" << escape_markdown(pattern.applicability) << "\n\n";
    out << "## Content\n\n" << escape_markdown(pattern.content) << "\n\n";

    out << "## Archetype\n\n";
    if (!pattern.archetype.roles.empty()) {
        out << "Roles:\n\n";
        for (const auto& role : pattern.archetype.roles)
            out << "- `" << role.name << "` (" << to_string(role.kind) << ")\n";
        out << '\n';
    }
    out << "```dot\n" << export_archetype_dot(pattern) << "```\n\n";

    out << "## Example\n\n" << escape_markdown(pattern.example) << "\n\n";

    if (pattern.discussion)
        out << "## Discussion\n\n" << escape_markdown(*pattern.discussion) << "\n\n";

    if (!pattern.related.empty()) {
        out << "## Related Patterns\n\n";
        for (const auto& name : pattern.related) out << "- " << escape_markdown(name) << '\n';
        out << '\n';
    }
    return out.str();
}

}  // namespace susmod
