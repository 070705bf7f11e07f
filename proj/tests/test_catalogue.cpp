#include <doctest.h>

#include <cmath>
#include <random>

#include "susmod/catalogue.hpp"
#include "susmod/parse.hpp"

using namespace susmod;

namespace {

const std::string kCorpusDir = std::string(SUSMOD_SOURCE_DIR) + "/corpus";

PatternDoc stub_pattern(const std::string& name, const std::string& primary,
                        std::optional<std::string> secondary = std::nullopt,
                        std::vector<std::string> related = {}) {
    PatternDoc doc;
    doc.name = name;
    doc.summary = "s";
    doc.category_primary = primary;
    doc.category_secondary = std::move(secondary);
    doc.dimensions = {Dimension::social};
    doc.applicability = "a";
    doc.content = "c";
    doc.example = "e";
    doc.related = std::move(related);
    Element el;
    el.id = "x";
    el.kind = ElementKind::value;
    el.label = "$R";
    el.dimensions = {Dimension::social};
    doc.archetype.roles.push_back({"R", ElementKind::value, std::nullopt});
    doc.archetype.body_elements.push_back(el);
    return doc;
}

Catalogue four_cycle() {
    Catalogue catalogue;
    catalogue.name = "C4";
    catalogue.cycle = {"C0", "C1", "C2", "C3"};
    catalogue.center = "G";
    return catalogue;
}

}  // namespace

TEST_CASE("cycle anchors sit on the unit circle, cardinal ones exactly") {
    Catalogue catalogue = four_cycle();
    CHECK(category_anchor(catalogue, "C0") == Point{0.0, 1.0});
    CHECK(category_anchor(catalogue, "C1") == Point{1.0, 0.0});
    CHECK(category_anchor(catalogue, "C2") == Point{0.0, -1.0});
    CHECK(category_anchor(catalogue, "C3") == Point{-1.0, 0.0});
    CHECK(category_anchor(catalogue, "G") == Point{0.0, 0.0});
}

TEST_CASE("placement: primary only, primary+secondary, and center pull") {
    Catalogue catalogue = four_cycle();
    catalogue.patterns.push_back(stub_pattern("only", "C0"));
    catalogue.patterns.push_back(stub_pattern("mix", "C0", "C1"));
    catalogue.patterns.push_back(stub_pattern("pulled", "C1", "G"));

    auto only = placement(catalogue.patterns[0], catalogue);
    REQUIRE(only.ok());
    CHECK(only.value() == Point{0.0, 1.0});

    auto mix = placement(catalogue.patterns[1], catalogue);
    REQUIRE(mix.ok());
    CHECK(mix.value().x == 0.3);  // 0.7*0 + 0.3*1, exactly
    CHECK(mix.value().y == 0.7);

    auto pulled = placement(catalogue.patterns[2], catalogue);
    REQUIRE(pulled.ok());
    CHECK(pulled.value().x == 0.7);  // 0.7 * anchor(C1)
    CHECK(pulled.value().y == 0.0);
}

TEST_CASE("unknown categories are reported") {
    Catalogue catalogue = four_cycle();
    auto bad = placement(stub_pattern("bad", "Nope"), catalogue);
    REQUIRE(!bad.ok());
    CHECK(bad.error().code == OpErrorCode::unknown_category);
}

TEST_CASE("coincident placements separate by deterministic radial jitter") {
    Catalogue catalogue = four_cycle();
    catalogue.patterns.push_back(stub_pattern("bbb", "C1"));
    catalogue.patterns.push_back(stub_pattern("aaa", "C1"));
    catalogue.patterns.push_back(stub_pattern("ccc", "C1"));
    auto placements = compute_placements(catalogue);
    REQUIRE(placements.ok());
    // in name order: aaa keeps the anchor, bbb moves 0.04 out, ccc 0.08
    CHECK(placements.value().at("aaa") == Point{1.0, 0.0});
    CHECK(placements.value().at("bbb").x == doctest::Approx(1.04).epsilon(1e-12));
    CHECK(placements.value().at("ccc").x == doctest::Approx(1.08).epsilon(1e-12));
}

TEST_CASE("custom weights override the placement pull") {
    Catalogue catalogue = four_cycle();
    catalogue.patterns.push_back(stub_pattern("mix", "C0", "C1"));
    PlacementOptions options;
    options.primary_weight = 0.5;
    options.secondary_weight = 0.5;
    auto placed = placement(catalogue.patterns[0], catalogue, options);
    REQUIRE(placed.ok());
    CHECK(placed.value().x == 0.5);
    CHECK(placed.value().y == 0.5);
}

TEST_CASE("category distance: same, neighbours, wrap-around, center") {
    Catalogue catalogue;
    catalogue.name = "C5";
    catalogue.cycle = {"A", "B", "C", "D", "E"};
    catalogue.center = "G";
    auto d = [&](const std::string& a, const std::string& b) {
        auto distance = category_distance(catalogue, a, b);
        REQUIRE(distance.ok());
        return distance.value();
    };
    CHECK(d("A", "A") == 0);
    CHECK(d("A", "B") == 1);
    CHECK(d("A", "E") == 1);  // wrap-around
    CHECK(d("A", "C") == 2);
    CHECK(d("A", "D") == 2);
    CHECK(d("G", "G") == 0);
    CHECK(d("G", "C") == 1);
    CHECK(!category_distance(catalogue, "A", "Z").ok());
}

TEST_CASE("category distance is a metric over random cycles") {
    std::mt19937 rng(31);
    for (int round = 0; round < 50; ++round) {
        std::uniform_int_distribution<int> n_pick(3, 8);
        int n = n_pick(rng);
        Catalogue catalogue;
        catalogue.name = "M";
        for (int i = 0; i < n; ++i) catalogue.cycle.push_back("c" + std::to_string(i));
        catalogue.center = "hub";
        std::vector<std::string> cats = catalogue.cycle;
        cats.push_back(catalogue.center);
        auto d = [&](const std::string& a, const std::string& b) {
            return category_distance(catalogue, a, b).value();
        };
        for (const auto& a : cats) {
            CHECK(d(a, a) == 0);
            for (const auto& b : cats) {
                CHECK(d(a, b) == d(b, a));                      // symmetry
                if (a != b) CHECK(d(a, b) >= 1);                // separation
                for (const auto& c : cats)
                    CHECK(d(a, c) <= d(a, b) + d(b, c));        // triangle
            }
        }
    }
}

TEST_CASE("lint: corpus catalogues are clean; constructed jump warns once") {
    for (const char* path : {"/fairness/fairness.susc", "/circular/circular.susc"}) {
        auto parsed = parse_catalogue_file(kCorpusDir + path);
        REQUIRE(parsed.ok());
        auto diags = lint_related_distance(*parsed.value);
        for (const auto& d : diags) MESSAGE(format_diagnostic(d));
        CHECK(diags.empty());
    }

    Catalogue catalogue;
    catalogue.name = "C5";
    catalogue.cycle = {"A", "B", "C", "D", "E"};
    catalogue.center = "G";
    catalogue.patterns.push_back(stub_pattern("near", "A", std::nullopt, {"far"}));
    catalogue.patterns.push_back(stub_pattern("far", "C", std::nullopt, {"near"}));
    auto diags = lint_related_distance(catalogue);
    REQUIRE(diags.size() == 1);  // undirected pair reported once
    CHECK(diags[0].code == "C1");
    CHECK(diags[0].severity == Severity::warning);

    catalogue.patterns.push_back(stub_pattern("dangling", "A", std::nullopt, {"ghost"}));
    auto with_error = lint_related_distance(catalogue);
    REQUIRE(with_error.size() == 2);
    CHECK(with_error[0].code == "C0");
    CHECK(with_error[0].severity == Severity::error);
}

TEST_CASE("compose_chain: the long loop is coherent, a hop is a jump") {
    auto parsed = parse_catalogue_file(kCorpusDir + "/circular/circular.susc");
    REQUIRE(parsed.ok());
    auto loop = compose_chain(*parsed.value,
                              {"design-for-reuse", "green-procurement", "renovation-built",
                               "preventive-maintenance", "easy-dismantling"});
    REQUIRE(loop.ok());
    CHECK(loop.value().coherent);
    CHECK(loop.value().closed);
    CHECK(loop.value().to_text().find("coherent loop") != std::string::npos);

    auto hop = compose_chain(*parsed.value, {"design-for-reuse", "preventive-maintenance"});
    REQUIRE(hop.ok());
    CHECK(!hop.value().coherent);
    REQUIRE(hop.value().steps.size() == 1);
    CHECK(hop.value().steps[0].distance == 2);
    CHECK(!hop.value().steps[0].smooth);
    CHECK(hop.value().to_text().find("jump") != std::string::npos);

    auto unknown = compose_chain(*parsed.value, {"design-for-reuse", "nope"});
    REQUIRE(!unknown.ok());
    CHECK(unknown.error().code == OpErrorCode::unknown_pattern);

    auto short_chain = compose_chain(*parsed.value, {"design-for-reuse"});
    CHECK(!short_chain.ok());
}

TEST_CASE("a chain of two identical patterns is smooth and closed") {
    Catalogue catalogue = four_cycle();
    catalogue.patterns.push_back(stub_pattern("p", "C0"));
    auto report = compose_chain(catalogue, {"p", "p"});
    REQUIRE(report.ok());
    CHECK(report.value().coherent);
}

TEST_CASE("chain coherence agrees with lint over the same pairs") {
    std::mt19937 rng(37);
    for (int round = 0; round < 50; ++round) {
        std::uniform_int_distribution<int> n_pick(3, 6);
        int n = n_pick(rng);
        Catalogue catalogue;
        catalogue.name = "R";
        for (int i = 0; i < n; ++i) catalogue.cycle.push_back("c" + std::to_string(i));
        catalogue.center = "hub";
        std::uniform_int_distribution<int> count_pick(2, 5);
        int count = count_pick(rng);
        std::vector<std::string> names;
        std::uniform_int_distribution<int> cat_pick(0, n);  // n == center
        for (int i = 0; i < count; ++i) {
            std::string cat =
                cat_pick(rng) == n ? catalogue.center : catalogue.cycle[cat_pick(rng) % n];
            std::string name = "p" + std::to_string(i);
            catalogue.patterns.push_back(stub_pattern(name, cat));
            names.push_back(name);
        }
        auto report = compose_chain(catalogue, names);
        REQUIRE(report.ok());

        // mirror the chain pairs (including the closing one) as related links
        Catalogue mirrored = catalogue;
        mirrored.patterns.clear();
        for (int i = 0; i < count; ++i) {
            auto doc = catalogue.patterns[i];
            doc.related.push_back(names[(i + 1) % count]);
            mirrored.patterns.push_back(doc);
        }
        auto diags = lint_related_distance(mirrored);
        bool lint_clean = diags.empty();
        CHECK(report.value().coherent == lint_clean);
    }
}

TEST_CASE("catalogue stats count members, categories and related edges") {
    auto fairness = parse_catalogue_file(kCorpusDir + "/fairness/fairness.susc");
    REQUIRE(fairness.ok());
    auto stats = catalogue_stats(*fairness.value);
    CHECK(stats.total == 12);
    CHECK(stats.to_text().find("patterns: 12") != std::string::npos);
    CHECK(stats.per_category.at("Implementation") == 3);
    CHECK(stats.related_edges == 3);
    CHECK(stats.to_json().find("\"version\": \"1\"") != std::string::npos);

    auto circular = parse_catalogue_file(kCorpusDir + "/circular/circular.susc");
    REQUIRE(circular.ok());
    CHECK(catalogue_stats(*circular.value).total == 14);

    Catalogue empty = four_cycle();
    auto zeroes = catalogue_stats(empty);
    CHECK(zeroes.total == 0);
    CHECK(zeroes.related_edges == 0);
    for (const auto& [cat, count] : zeroes.per_category) {
        (void)cat;
        CHECK(count == 0);
    }
}

TEST_CASE("placements stay within the jitter-padded unit disc") {
    std::mt19937 rng(43);
    for (int round = 0; round < 50; ++round) {
        std::uniform_int_distribution<int> n_pick(3, 8);
        int n = n_pick(rng);
        Catalogue catalogue;
        catalogue.name = "disc";
        for (int i = 0; i < n; ++i) catalogue.cycle.push_back("c" + std::to_string(i));
        catalogue.center = "hub";
        std::uniform_int_distribution<int> count_pick(0, 12);
        int count = count_pick(rng);
        std::uniform_int_distribution<int> cat_pick(0, n);  // n == center
        auto pick = [&] {
            int c = cat_pick(rng);
            return c == n ? catalogue.center : catalogue.cycle[c];
        };
        for (int i = 0; i < count; ++i) {
            auto doc = stub_pattern("p" + std::to_string(i), pick());
            if (rng() % 2) doc.category_secondary = pick();
            catalogue.patterns.push_back(doc);
        }
        auto placements = compute_placements(catalogue);
        REQUIRE(placements.ok());
        const double bound = 1.0 + 0.04 * count;
        for (const auto& [name, p] : placements.value()) {
            (void)name;
            CHECK(std::sqrt(p.x * p.x + p.y * p.y) <= bound + 1e-12);
        }
    }
}

TEST_CASE("rotating the cycle rotates all placements by one step") {
    auto parsed = parse_catalogue_file(kCorpusDir + "/circular/circular.susc");
    REQUIRE(parsed.ok());
    Catalogue rotated = *parsed.value;
    std::rotate(rotated.cycle.begin(), rotated.cycle.begin() + 1, rotated.cycle.end());

    auto base = compute_placements(*parsed.value);
    auto moved = compute_placements(rotated);
    REQUIRE(base.ok());
    REQUIRE(moved.ok());
    const double angle = 2.0 * 3.14159265358979323846 / 5.0;  // 72 degrees
    for (const auto& [name, p] : base.value()) {
        const Point& q = moved.value().at(name);
        double rx = p.x * std::cos(angle) - p.y * std::sin(angle);
        double ry = p.x * std::sin(angle) + p.y * std::cos(angle);
        CHECK(std::abs(q.x - rx) < 1e-9);
        CHECK(std::abs(q.y - ry) < 1e-9);
    }
}
