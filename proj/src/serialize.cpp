#include "susmod/serialize.hpp"

#include <algorithm>
#include <sstream>

namespace susmod {

namespace {

std::string dims_text(const std::set<Dimension>& dims) {
    std::string out = "[";
    bool first = true;
    for (auto d : dims) {  // std::set keyed by enum value = canonical order
        if (!first) out += ", ";
        first = false;
        out += to_string(d);
    }
    out += "]";
    return out;
}

void write_element(std::ostream& out, const Element& el, int indent) {
    out << std::string(indent, ' ') << to_string(el.kind) << ' ' << el.id;
    if (!el.dimensions.empty()) out << " dims " << dims_text(el.dimensions);
    if (!el.label.empty()) out << ' ' << quote(el.label);
    if (el.is_tagged) out << " is";
    if (!el.attrs.empty()) {
        out << " attrs {";
        for (const auto& [k, v] : el.attrs) out << ' ' << k << " = " << quote(v);
        out << " }";
    }
    out << '\n';
}

void write_link(std::ostream& out, const Link& link, int indent) {
    out << std::string(indent, ' ') << "link " << to_string(link.kind) << '(' << link.source
        << " -> " << link.target << ')';
    if (link.strategy) out << " strategy=" << to_string(*link.strategy);
    out << " as " << link.id << '\n';
}

template <typename T>
std::vector<const T*> sorted_by_kind_id(const std::map<std::string, T>& items) {
    std::vector<const T*> out;
    out.reserve(items.size());
    for (const auto& [id, item] : items) {
        (void)id;
        out.push_back(&item);
    }
    std::sort(out.begin(), out.end(), [](const T* a, const T* b) {
        if (a->kind != b->kind) return a->kind < b->kind;
        return a->id < b->id;
    });
    return out;
}

void write_id_set(std::ostream& out, const std::set<std::string>& ids) {
    out << '[';
    bool first = true;
    for (const auto& id : ids) {
        if (!first) out << ", ";
        first = false;
        out << id;
    }
    out << ']';
}

void write_fragment(std::ostream& out, const Fragment& fragment, int indent) {
    std::string pad(indent, ' ');
    out << pad << "fragment " << fragment.name << " {\n";
    if (fragment.anchor) out << pad << "  anchor " << *fragment.anchor << '\n';
    out << pad << "  elements ";
    write_id_set(out, fragment.elements);
    out << '\n';
    if (!fragment.links.empty()) {
        out << pad << "  links ";
        write_id_set(out, fragment.links);
        out << '\n';
    }
    out << pad << "}\n";
}

void write_archetype(std::ostream& out, const Archetype& archetype, int indent) {
    std::string pad(indent, ' ');
    out << pad << "archetype {\n";
    for (const auto& role : archetype.roles)
        out << pad << "  role " << role.name << " : " << to_string(role.kind) << '\n';
    out << pad << "  body {\n";
    std::vector<const Element*> elements;
    for (const auto& el : archetype.body_elements) elements.push_back(&el);
    std::sort(elements.begin(), elements.end(), [](const Element* a, const Element* b) {
        if (a->kind != b->kind) return a->kind < b->kind;
        return a->id < b->id;
    });
    for (const auto* el : elements) write_element(out, *el, indent + 4);
    std::vector<const Link*> links;
    for (const auto& link : archetype.body_links) links.push_back(&link);
    std::sort(links.begin(), links.end(), [](const Link* a, const Link* b) {
        if (a->kind != b->kind) return a->kind < b->kind;
        return a->id < b->id;
    });
    for (const auto* link : links) write_link(out, *link, indent + 4);
    out << pad << "  }\n";
    out << pad << "}\n";
}

void write_pattern_body(std::ostream& out, const PatternDoc& doc, int indent) {
    std::string pad(indent, ' ');
    for (const auto& [k, v] : doc.meta) out << pad << "meta " << k << " = " << quote(v) << '\n';
    out << pad << "summary " << quote(doc.summary) << '\n';
    out << pad << "category " << doc.category_primary;
    if (doc.category_secondary) out << " secondary " << *doc.category_secondary;
    out << '\n';
    out << pad << "dims " << dims_text(doc.dimensions) << '\n';
    out << pad << "applicability " << quote(doc.applicability) << '\n';
    out << pad << "content " << quote(doc.content) << '\n';
    write_archetype(out, doc.archetype, indent);
    out << pad << "example " << quote(doc.example) << '\n';
    if (doc.discussion) out << pad << "discussion " << quote(*doc.discussion) << '\n';
    if (!doc.related.empty()) {
        out << pad << "related [";
        bool first = true;
        for (const auto& name : doc.related) {
            if (!first) out << ", ";
            first = false;
            out << quote(name);
        }
        out << "]\n";
    }
}

}  // namespace

std::string quote(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c; break;
        }
    }
    out += '"';
    return out;
}

std::string serialize(const Model& model) {
    std::ostringstream out;
    out << "model " << quote(model.name) << " {\n";
    for (const auto& [k, v] : model.meta) out << "  meta " << k << " = " << quote(v) << '\n';
    for (const auto* el : sorted_by_kind_id(model.elements)) write_element(out, *el, 2);
    for (const auto* link : sorted_by_kind_id(model.links)) write_link(out, *link, 2);
    for (const auto& [name, fragment] : model.fragments) {
        (void)name;
        write_fragment(out, fragment, 2);
    }
    out << "}\n";
    return out.str();
}

std::string serialize(const PatternDoc& pattern) {
    std::ostringstream out;
    out << "pattern " << quote(pattern.name) << " {\n";
    write_pattern_body(out, pattern, 2);
    out << "}\n";
    return out.str();
}

std::string serialize(const Catalogue& catalogue) {
    std::ostringstream out;
    out << "catalogue " << quote(catalogue.name) << " {\n";
    out << "  cycle [";
    bool first = true;
    for (const auto& cat : catalogue.cycle) {
        if (!first) out << ", ";
        first = false;
        out << cat;
    }
    out << "]\n";
    out << "  center " << catalogue.center << '\n';
    std::vector<const PatternDoc*> patterns;
    for (const auto& doc : catalogue.patterns) patterns.push_back(&doc);
    std::sort(patterns.begin(), patterns.end(),
              [](const PatternDoc* a, const PatternDoc* b) { return a->name < b->name; });
    for (const auto* doc : patterns) {
        out << "  pattern " << quote(doc->name) << " {\n";
        write_pattern_body(out, *doc, 4);
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace susmod
