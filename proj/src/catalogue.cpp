#include "susmod/catalogue.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace susmod {

namespace {

// Unit vector at `deg` degrees, exact on the four cardinal directions so that
// worked placement values come out without rounding noise.
Point unit_at(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0) r += 360.0;
    if (r == 0.0) return {1.0, 0.0};
    if (r == 90.0) return {0.0, 1.0};
    if (r == 180.0) return {-1.0, 0.0};
    if (r == 270.0) return {0.0, -1.0};
    double rad = r * std::numbers::pi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

std::optional<Point> anchor_of(const Catalogue& catalogue, const std::string& category) {
    if (category == catalogue.center) return Point{0.0, 0.0};
    auto it = std::find(catalogue.cycle.begin(), catalogue.cycle.end(), category);
    if (it == catalogue.cycle.end()) return std::nullopt;
    auto i = static_cast<double>(it - catalogue.cycle.begin());
    auto n = static_cast<double>(catalogue.cycle.size());
    return unit_at(90.0 - i * 360.0 / n);
}

std::vector<const PatternDoc*> patterns_by_name(const Catalogue& catalogue) {
    std::vector<const PatternDoc*> out;
    for (const auto& doc : catalogue.patterns) out.push_back(&doc);
    std::sort(out.begin(), out.end(),
              [](const PatternDoc* a, const PatternDoc* b) { return a->name < b->name; });
    return out;
}

}  // namespace

bool operator==(const Catalogue& a, const Catalogue& b) {
    if (a.name != b.name || a.cycle != b.cycle || a.center != b.center) return false;
    auto pa = patterns_by_name(a);
    auto pb = patterns_by_name(b);
    if (pa.size() != pb.size()) return false;
    for (size_t i = 0; i < pa.size(); ++i)
        if (!(*pa[i] == *pb[i])) return false;
    return true;
}

const PatternDoc* Catalogue::find_pattern(const std::string& name_or_slug) const {
    for (const auto& doc : patterns) {
        if (doc.name == name_or_slug || slugify(doc.name) == name_or_slug) return &doc;
    }
    return nullptr;
}

Point category_anchor(const Catalogue& catalogue, const std::string& category) {
    auto anchor = anchor_of(catalogue, category);
    return anchor.value_or(Point{0.0, 0.0});
}

Result<std::map<std::string, Point>> compute_placements(const Catalogue& catalogue,
                                                        const PlacementOptions& options) {
    std::map<std::string, Point> placements;
    struct Key {
        double x, y;
        bool operator<(const Key& o) const { return std::tie(x, y) < std::tie(o.x, o.y); }
    };
    std::map<Key, int> occupancy;
    for (const PatternDoc* doc : patterns_by_name(catalogue)) {
        auto primary = anchor_of(catalogue, doc->category_primary);
        if (!primary)
            return OpError{OpErrorCode::unknown_category,
                           "pattern '" + doc->name + "' references unknown category '" +
                               doc->category_primary + "'"};
        Point pos = *primary;
        if (doc->category_secondary) {
            auto secondary = anchor_of(catalogue, *doc->category_secondary);
            if (!secondary)
                return OpError{OpErrorCode::unknown_category,
                               "pattern '" + doc->name + "' references unknown category '" +
                                   *doc->category_secondary + "'"};
            pos = {options.primary_weight * primary->x + options.secondary_weight * secondary->x,
                   options.primary_weight * primary->y + options.secondary_weight * secondary->y};
        }
        int k = occupancy[Key{pos.x, pos.y}]++;
        if (k > 0) {
            double norm = std::sqrt(pos.x * pos.x + pos.y * pos.y);
            Point dir{1.0, 0.0};
            if (norm >= 1e-12) {
                dir = {pos.x / norm, pos.y / norm};
            } else if (!catalogue.cycle.empty()) {
                // degenerate at the origin: push along the anchor of the
                // alphabetically first cycle category, which keeps jitter
                // equivariant under cycle rotation
                auto lowest = *std::min_element(catalogue.cycle.begin(), catalogue.cycle.end());
                dir = *anchor_of(catalogue, lowest);
            }
            pos = {pos.x + options.jitter_step * k * dir.x,
                   pos.y + options.jitter_step * k * dir.y};
        }
        placements.emplace(doc->name, pos);
    }
    return placements;
}

Result<Point> placement(const PatternDoc& pattern, const Catalogue& catalogue,
                        const PlacementOptions& options) {
    auto placements = compute_placements(catalogue, options);
    if (!placements.ok()) return placements.error();
    auto it = placements.value().find(pattern.name);
    if (it != placements.value().end()) return it->second;
    // Not a member: compute the bare position without collision handling.
    auto primary = anchor_of(catalogue, pattern.category_primary);
    if (!primary)
        return OpError{OpErrorCode::unknown_category,
                       "pattern '" + pattern.name + "' references unknown category '" +
                           pattern.category_primary + "'"};
    if (!pattern.category_secondary) return *primary;
    auto secondary = anchor_of(catalogue, *pattern.category_secondary);
    if (!secondary)
        return OpError{OpErrorCode::unknown_category,
                       "pattern '" + pattern.name + "' references unknown category '" +
                           *pattern.category_secondary + "'"};
    return Point{options.primary_weight * primary->x + options.secondary_weight * secondary->x,
                 options.primary_weight * primary->y + options.secondary_weight * secondary->y};
}

Result<int> category_distance(const Catalogue& catalogue, const std::string& a,
                              const std::string& b) {
    auto position = [&](const std::string& cat) -> std::optional<size_t> {
        auto it = std::find(catalogue.cycle.begin(), catalogue.cycle.end(), cat);
        if (it == catalogue.cycle.end()) return std::nullopt;
        return static_cast<size_t>(it - catalogue.cycle.begin());
    };
    const bool a_center = a == catalogue.center;
    const bool b_center = b == catalogue.center;
    if (!a_center && !position(a))
        return OpError{OpErrorCode::unknown_category, "unknown category '" + a + "'"};
    if (!b_center && !position(b))
        return OpError{OpErrorCode::unknown_category, "unknown category '" + b + "'"};
    if (a == b) return 0;
    // the center touches every cycle category
    if (a_center || b_center) return 1;
    auto i = static_cast<int>(*position(a));
    auto j = static_cast<int>(*position(b));
    int n = static_cast<int>(catalogue.cycle.size());
    int around = std::min(std::abs(i - j), n - std::abs(i - j));
    // two hops through the center may beat the long way around
    return std::min(around, 2);
}

std::vector<Diagnostic> lint_related_distance(const Catalogue& catalogue) {
    std::vector<Diagnostic> diags;
    std::set<std::pair<std::string, std::string>> reported;  // undirected, by slug
    for (const PatternDoc* doc : patterns_by_name(catalogue)) {
        for (const auto& related_name : doc->related) {
            const PatternDoc* other = catalogue.find_pattern(related_name);
            if (!other) {
                diags.push_back({Severity::error, "C0",
                                 "pattern '" + doc->name + "' relates to unknown pattern '" +
                                     related_name + "'",
                                 doc->span});
                continue;
            }
            std::pair<std::string, std::string> key{slugify(doc->name), slugify(other->name)};
            if (key.first > key.second) std::swap(key.first, key.second);
            if (!reported.insert(key).second) continue;
            auto distance =
                category_distance(catalogue, doc->category_primary, other->category_primary);
            if (!distance.ok()) continue;  // unknown categories reported at parse
            if (distance.value() > 1) {
                diags.push_back({Severity::warning, "C1",
                                 "related patterns '" + doc->name + "' and '" + other->name +
                                     "' are " + std::to_string(distance.value()) +
                                     " categories apart",
                                 doc->span});
            }
        }
    }
    sort_diagnostics(diags);
    return diags;
}

Result<ChainReport> compose_chain(const Catalogue& catalogue,
                                  const std::vector<std::string>& pattern_names) {
    if (pattern_names.size() < 2)
        return OpError{OpErrorCode::chain_too_short, "a chain needs at least 2 pattern names"};
    std::vector<const PatternDoc*> docs;
    for (const auto& name : pattern_names) {
        const PatternDoc* doc = catalogue.find_pattern(name);
        if (!doc)
            return OpError{OpErrorCode::unknown_pattern,
                           "unknown pattern '" + name + "' in catalogue '" + catalogue.name +
                               "'"};
        docs.push_back(doc);
    }
    ChainReport report;
    for (const auto* doc : docs) report.names.push_back(slugify(doc->name));
    bool all_smooth = true;
    auto step = [&](const PatternDoc* a, const PatternDoc* b) {
        auto distance = category_distance(catalogue, a->category_primary, b->category_primary);
        int d = distance.ok() ? distance.value() : 99;
        return ChainStep{slugify(a->name), slugify(b->name), d, d <= 1};
    };
    for (size_t i = 0; i + 1 < docs.size(); ++i) {
        report.steps.push_back(step(docs[i], docs[i + 1]));
        all_smooth = all_smooth && report.steps.back().smooth;
    }
    ChainStep closing = step(docs.back(), docs.front());
    report.closed = closing.smooth;
    report.coherent = all_smooth && report.closed;
    return report;
}

std::string ChainReport::to_text() const {
    std::ostringstream out;
    for (const auto& step : steps) {
        out << step.from << " -> " << step.to << ": "
            << (step.smooth ? "smooth" : "jump") << " (distance " << step.distance << ")\n";
    }
    if (names.size() >= 2)
        out << "loop " << names.back() << " -> " << names.front() << ": "
            << (closed ? "closed" : "open") << '\n';
    out << "verdict: " << (coherent ? "coherent loop" : "not a coherent loop") << '\n';
    return out.str();
}

std::string ChainReport::to_json() const {
    nlohmann::json j;
    j["version"] = "1";
    j["chain"] = names;
    j["steps"] = nlohmann::json::array();
    for (const auto& step : steps) {
        j["steps"].push_back({{"from", step.from},
                              {"to", step.to},
                              {"distance", step.distance},
                              {"smooth", step.smooth}});
    }
    j["closed"] = closed;
    j["coherent"] = coherent;
    return j.dump(2) + "\n";
}

CatalogueStats catalogue_stats(const Catalogue& catalogue) {
    CatalogueStats stats;
    stats.catalogue = catalogue.name;
    stats.total = static_cast<int>(catalogue.patterns.size());
    for (const auto& cat : catalogue.cycle) stats.per_category[cat] = 0;
    stats.per_category[catalogue.center] = 0;
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& doc : catalogue.patterns) {
        stats.per_category[doc.category_primary]++;
        for (const auto& related_name : doc.related) {
            const PatternDoc* other = catalogue.find_pattern(related_name);
            if (!other) continue;
            std::pair<std::string, std::string> key{slugify(doc.name), slugify(other->name)};
            if (key.first > key.second) std::swap(key.first, key.second);
            edges.insert(key);
        }
    }
    stats.related_edges = static_cast<int>(edges.size());
    return stats;
}

std::string CatalogueStats::to_text() const {
    std::ostringstream out;
    out << "catalogue: " << catalogue << '\n';
    out << "patterns: " << total << '\n';
    for (const auto& [cat, count] : per_category)
        out << "category " << cat << ": " << count << '\n';
    out << "related edges: " << related_edges << '\n';
    return out.str();
}

std::string CatalogueStats::to_json() const {
    nlohmann::json j;
    j["version"] = "1";
    j["catalogue"] = catalogue;
    j["patterns"] = total;
    j["categories"] = nlohmann::json::object();
    for (const auto& [cat, count] : per_category) j["categories"][cat] = count;
    j["related_edges"] = related_edges;
    return j.dump(2) + "\n";
}

}  // namespace susmod
