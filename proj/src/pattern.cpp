#include "susmod/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "susmod/validate.hpp"

namespace susmod {

namespace {

std::vector<const Element*> by_id(const std::vector<Element>& items) {
    std::vector<const Element*> out;
    for (const auto& item : items) out.push_back(&item);
    std::sort(out.begin(), out.end(),
              [](const Element* a, const Element* b) { return a->id < b->id; });
    return out;
}

std::vector<const Link*> by_id(const std::vector<Link>& items) {
    std::vector<const Link*> out;
    for (const auto& item : items) out.push_back(&item);
    std::sort(out.begin(), out.end(),
              [](const Link* a, const Link* b) { return a->id < b->id; });
    return out;
}

constexpr int kMaxIdAttempts = 1'000'000;

class FreshIdAllocator {
public:
    FreshIdAllocator(std::string prefix, const Model& model)
        : prefix_(std::move(prefix)), model_(model) {}

    Result<std::string> next(const std::set<std::string>& also_taken) {
        for (int attempt = 0; attempt < kMaxIdAttempts; ++attempt) {
            std::string id = prefix_ + "." + std::to_string(counter_++);
            if (!model_.has_id(id) && !also_taken.count(id)) return id;
        }
        return OpError{OpErrorCode::collision_exhausted,
                       "no free id with prefix '" + prefix_ + "' after 1000000 attempts"};
    }

private:
    std::string prefix_;
    const Model& model_;
    int counter_ = 1;
};

// Replaces every $role occurrence with the bound label.
std::string substitute_roles(const std::string& label,
                             const std::map<std::string, std::string>& role_labels) {
    std::string out;
    for (size_t i = 0; i < label.size();) {
        if (label[i] == '$' && i + 1 < label.size() &&
            (isalpha(static_cast<unsigned char>(label[i + 1])) || label[i + 1] == '_')) {
            size_t j = i + 1;
            while (j < label.size() &&
                   (isalnum(static_cast<unsigned char>(label[j])) || label[j] == '_'))
                ++j;
            std::string name = label.substr(i + 1, j - i - 1);
            auto it = role_labels.find(name);
            if (it != role_labels.end()) {
                out += it->second;
                i = j;
                continue;
            }
        }
        out += label[i++];
    }
    return out;
}

}  // namespace

bool operator==(const Archetype& a, const Archetype& b) {
    if (a.roles != b.roles) return false;
    auto ea = by_id(a.body_elements);
    auto eb = by_id(b.body_elements);
    if (ea.size() != eb.size()) return false;
    for (size_t i = 0; i < ea.size(); ++i)
        if (!(*ea[i] == *eb[i])) return false;
    auto la = by_id(a.body_links);
    auto lb = by_id(b.body_links);
    if (la.size() != lb.size()) return false;
    for (size_t i = 0; i < la.size(); ++i)
        if (!(*la[i] == *lb[i])) return false;
    return true;
}

bool operator==(const PatternDoc& a, const PatternDoc& b) {
    return a.name == b.name && a.summary == b.summary &&
           a.category_primary == b.category_primary &&
           a.category_secondary == b.category_secondary && a.dimensions == b.dimensions &&
           a.applicability == b.applicability && a.content == b.content &&
           a.archetype == b.archetype && a.example == b.example &&
           a.discussion == b.discussion && a.related == b.related && a.meta == b.meta;
}

std::string slugify(const std::string& name) {
    std::string out;
    bool pending_dash = false;
    for (char c : name) {
        if (isalnum(static_cast<unsigned char>(c))) {
            if (pending_dash && !out.empty()) out += '-';
            pending_dash = false;
            out += static_cast<char>(tolower(static_cast<unsigned char>(c)));
        } else {
            pending_dash = true;
        }
    }
    return out;
}

const BindingEntry* Binding::find(const std::string& role) const {
    for (const auto& entry : entries)
        if (entry.role == role) return &entry;
    return nullptr;
}

std::vector<RoleSpec> free_roles(const PatternDoc& pattern) { return pattern.archetype.roles; }

Result<Model> instantiate(const PatternDoc& pattern, const Binding& binding, const Model& target,
                          const std::optional<std::string>& anchor) {
    const Archetype& archetype = pattern.archetype;

    if (has_errors(validate_pattern(pattern)))
        return OpError{OpErrorCode::invalid_pattern,
                       "pattern '" + pattern.name + "' does not validate"};
    if (has_errors(validate_model(target)))
        return OpError{OpErrorCode::invalid_model, "target model does not validate"};

    std::map<std::string, const RoleSpec*> roles;
    for (const auto& role : archetype.roles) roles.emplace(role.name, &role);
    for (const auto& entry : binding.entries) {
        if (!roles.count(entry.role))
            return OpError{OpErrorCode::unknown_role,
                           "binding names unknown role '" + entry.role + "'"};
    }

    // role -> (target element id or empty) and role -> display label
    std::map<std::string, std::string> bound_existing;
    std::map<std::string, const FreshSpec*> bound_fresh;
    std::map<std::string, std::string> role_labels;
    for (const auto& [name, role] : roles) {
        const BindingEntry* entry = binding.find(name);
        if (!entry)
            return OpError{OpErrorCode::unbound_role, "role '" + name + "' is not bound"};
        if (entry->existing_id) {
            auto it = target.elements.find(*entry->existing_id);
            if (it == target.elements.end())
                return OpError{OpErrorCode::unknown_id,
                               "role '" + name + "' is bound to unknown element '" +
                                   *entry->existing_id + "'"};
            if (it->second.kind != role->kind)
                return OpError{OpErrorCode::kind_mismatch,
                               "role '" + name + "' expects a " + to_string(role->kind) +
                                   " but '" + *entry->existing_id + "' is a " +
                                   to_string(it->second.kind)};
            bound_existing[name] = *entry->existing_id;
            role_labels[name] =
                it->second.label.empty() ? it->second.id : it->second.label;
        } else if (entry->fresh) {
            if (entry->fresh->kind != role->kind)
                return OpError{OpErrorCode::kind_mismatch,
                               "role '" + name + "' expects a " + to_string(role->kind) +
                                   " but the fresh element is a " +
                                   to_string(entry->fresh->kind)};
            if (entry->fresh->dimensions.empty() && !dimensions_optional(entry->fresh->kind))
                return OpError{OpErrorCode::missing_dimensions,
                               "fresh element for role '" + name +
                                   "' must carry at least one dimension"};
            bound_fresh[name] = &*entry->fresh;
            role_labels[name] = entry->fresh->label;
        } else {
            return OpError{OpErrorCode::unbound_role,
                           "role '" + name + "' has neither an existing nor a fresh binding"};
        }
    }

    if (anchor && !target.elements.count(*anchor))
        return OpError{OpErrorCode::anchor_unknown, "anchor '" + *anchor + "' does not exist"};

    // Which role (if any) a body element stands for.
    auto placeholder_role = [&](const Element& el) -> const RoleSpec* {
        if (el.label.size() < 2 || el.label[0] != '$') return nullptr;
        auto it = roles.find(el.label.substr(1));
        return it == roles.end() ? nullptr : it->second;
    };

    Model out = target;
    FreshIdAllocator ids(slugify(pattern.name), target);
    std::set<std::string> taken;
    std::map<std::string, std::string> id_map;  // body id -> result id
    Fragment fragment;

    for (const auto& body_el : archetype.body_elements) {
        const RoleSpec* role = placeholder_role(body_el);
        if (role) {
            auto existing = bound_existing.find(role->name);
            if (existing != bound_existing.end()) {
                id_map[body_el.id] = existing->second;
                fragment.elements.insert(existing->second);
                continue;
            }
        }
        auto id = ids.next(taken);
        if (!id.ok()) return id.error();
        taken.insert(id.value());
        Element el;
        el.id = id.value();
        if (role) {
            const FreshSpec* fresh = bound_fresh.at(role->name);
            el.kind = fresh->kind;
            el.label = fresh->label;
            el.dimensions = fresh->dimensions;
            el.is_tagged = body_el.is_tagged;
            el.attrs = body_el.attrs;
        } else {
            el.kind = body_el.kind;
            el.label = substitute_roles(body_el.label, role_labels);
            el.dimensions = body_el.dimensions;
            el.is_tagged = body_el.is_tagged;
            el.attrs = body_el.attrs;
        }
        id_map[body_el.id] = el.id;
        fragment.elements.insert(el.id);
        out.elements.emplace(el.id, std::move(el));
    }

    for (const auto& body_link : archetype.body_links) {
        auto id = ids.next(taken);
        if (!id.ok()) return id.error();
        taken.insert(id.value());
        Link link;
        link.id = id.value();
        link.kind = body_link.kind;
        link.source = id_map.at(body_link.source);
        link.target = id_map.at(body_link.target);
        link.strategy = body_link.strategy;
        fragment.links.insert(link.id);
        out.links.emplace(link.id, std::move(link));
    }

    if (anchor && fragment.elements.count(*anchor))
        return OpError{OpErrorCode::anchor_in_fragment,
                       "anchor '" + *anchor + "' would lie inside the instantiated fragment"};

    std::string slug = slugify(pattern.name);
    std::string fragment_name = slug;
    for (int k = 2; out.fragments.count(fragment_name); ++k) {
        fragment_name = slug + "." + std::to_string(k);
        if (k > kMaxIdAttempts)
            return OpError{OpErrorCode::collision_exhausted,
                           "no free fragment name with prefix '" + slug + "'"};
    }
    fragment.name = fragment_name;
    fragment.anchor = anchor;
    out.fragments.emplace(fragment.name, std::move(fragment));

    // Degenerate bindings (two roles on one element creating a self-loop,
    // for instance) could invalidate the result; refuse instead.
    auto result_diags = validate_model(out);
    if (has_errors(result_diags)) {
        std::string first;
        for (const auto& d : result_diags) {
            if (d.severity == Severity::error) {
                first = format_diagnostic(d);
                break;
            }
        }
        return OpError{OpErrorCode::binding_conflict,
                       "instantiation would invalidate the model: " + first};
    }
    return out;
}

InstantiationDiff diff_instantiation(const Model& before, const Model& after,
                                     const PatternDoc& pattern) {
    (void)pattern;
    InstantiationDiff diff;
    for (const auto& [id, el] : after.elements) {
        (void)el;
        if (!before.elements.count(id)) diff.added_elements.push_back(id);
    }
    for (const auto& [id, link] : after.links) {
        (void)link;
        if (!before.links.count(id)) diff.added_links.push_back(id);
    }
    for (const auto& [name, fragment] : after.fragments) {
        (void)fragment;
        if (!before.fragments.count(name)) diff.added_fragments.push_back(name);
    }
    return diff;
}

std::string InstantiationDiff::to_text() const {
    auto list = [](const std::vector<std::string>& ids) {
        std::string out;
        for (size_t i = 0; i < ids.size(); ++i) {
            if (i) out += ", ";
            out += ids[i];
        }
        return out.empty() ? std::string("-") : out;
    };
    std::ostringstream out;
    out << "added elements (" << added_elements.size() << "): " << list(added_elements) << '\n';
    out << "added links (" << added_links.size() << "): " << list(added_links) << '\n';
    out << "added fragments (" << added_fragments.size() << "): " << list(added_fragments)
        << '\n';
    return out.str();
}

}  // namespace susmod
