#pragma once

#include <map>
#include <string>
#include <vector>

#include "susmod/pattern.hpp"

namespace susmod {

// Category structure of a catalogue: an ordered cycle of at least three
// categories plus one central category touching all of them.
struct Catalogue {
    std::string name;
    std::vector<std::string> cycle;
    std::string center;
    std::vector<PatternDoc> patterns;
    std::optional<SourceSpan> span;

    const PatternDoc* find_pattern(const std::string& name_or_slug) const;

    friend bool operator==(const Catalogue& a, const Catalogue& b);
};

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

struct PlacementOptions {
    double primary_weight = 0.7;
    double secondary_weight = 0.3;
    double jitter_step = 0.04;
};

// Anchor of cycle category i of n, at angle 90deg - i*360deg/n on the unit
// circle. Cardinal angles are exact. The center anchors at the origin.
Point category_anchor(const Catalogue& catalogue, const std::string& category);

// Placements for every pattern: convex pull between primary and secondary
// anchors, with deterministic radial separation of coincident positions
// (0.04*k for the k-th collider in pattern-name order).
Result<std::map<std::string, Point>> compute_placements(const Catalogue& catalogue,
                                                        const PlacementOptions& options = {});

Result<Point> placement(const PatternDoc& pattern, const Catalogue& catalogue,
                        const PlacementOptions& options = {});

// Hop distance between categories: 0 when equal, 1 when the center is an
// endpoint or the categories neighbour each other on the cycle, otherwise the
// shortest path around the cycle or through the center (whichever is shorter).
Result<int> category_distance(const Catalogue& catalogue, const std::string& a,
                              const std::string& b);

// C0 (error) for related names that do not resolve in the catalogue, C1
// (warning) for related pairs whose primary categories are more than one hop
// apart.
std::vector<Diagnostic> lint_related_distance(const Catalogue& catalogue);

struct ChainStep {
    std::string from;
    std::string to;
    int distance = 0;
    bool smooth = false;
};

struct ChainReport {
    std::vector<std::string> names;  // resolved pattern names
    std::vector<ChainStep> steps;    // consecutive pairs
    bool closed = false;             // last -> first is also smooth
    bool coherent = false;           // all steps smooth and closed

    std::string to_text() const;
    std::string to_json() const;
};

Result<ChainReport> compose_chain(const Catalogue& catalogue,
                                  const std::vector<std::string>& pattern_names);

struct CatalogueStats {
    std::string catalogue;
    int total = 0;
    std::map<std::string, int> per_category;  // by primary category
    int related_edges = 0;                    // unique undirected resolved pairs

    std::string to_text() const;
    std::string to_json() const;
};

CatalogueStats catalogue_stats(const Catalogue& catalogue);

}  // namespace susmod
