#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support/oracles.hpp"
#include "susmod/model.hpp"

using namespace susmod;

namespace {

Element make(const std::string& id, ElementKind kind,
             std::set<Dimension> dims = {Dimension::social}) {
    Element el;
    el.id = id;
    el.kind = kind;
    el.dimensions = std::move(dims);
    return el;
}

Link make_link(const std::string& id, LinkKind kind, const std::string& src,
               const std::string& dst) {
    Link link;
    link.id = id;
    link.kind = kind;
    link.source = src;
    link.target = dst;
    return link;
}

}  // namespace

TEST_CASE("add_element inserts into an empty model") {
    Model empty;
    empty.name = "M";
    auto result = add_element(empty, make("EqualCare", ElementKind::value));
    REQUIRE(result.ok());
    CHECK(result.value().elements.size() == 1);
    CHECK(empty.elements.empty());  // input untouched
}

TEST_CASE("add_element rejects duplicate ids") {
    Model model;
    model = add_element(model, make("g1", ElementKind::goal)).value();
    auto result = add_element(model, make("g1", ElementKind::goal));
    REQUIRE(!result.ok());
    CHECK(result.error().code == OpErrorCode::duplicate_id);
}

TEST_CASE("add_element enforces the dimension rule per kind") {
    Model model;
    CHECK(!add_element(model, make("v", ElementKind::value, {})).ok());
    CHECK(!add_element(model, make("o", ElementKind::obstacle, {})).ok());
    CHECK(add_element(model, make("a", ElementKind::assumption, {})).ok());
    CHECK(add_element(model, make("s", ElementKind::stakeholder, {})).ok());
}

TEST_CASE("add_link accepts the worked obstruction and mitigation") {
    Model model;
    model = add_element(model, make("HospitalOverload", ElementKind::obstacle)).value();
    model = add_element(model, make("ProvideCare", ElementKind::activity)).value();
    model = add_element(model, make("MonitorSpread", ElementKind::activity)).value();

    auto obstructed =
        add_link(model, make_link("l1", LinkKind::obstructs, "HospitalOverload", "ProvideCare"));
    REQUIRE(obstructed.ok());

    Link mitigation =
        make_link("l2", LinkKind::mitigates, "MonitorSpread", "HospitalOverload");
    mitigation.strategy = MitigationStrategy::anticipation;
    auto mitigated = add_link(obstructed.value(), mitigation);
    REQUIRE(mitigated.ok());
    CHECK(mitigated.value().links.size() == 2);
}

TEST_CASE("add_link rejects forbidden endpoint kinds and misuse") {
    Model model;
    model = add_element(model, make("act", ElementKind::activity)).value();
    model = add_element(model, make("obs", ElementKind::obstacle)).value();
    model = add_element(model, make("goal", ElementKind::goal)).value();

    auto illegal = add_link(model, make_link("l1", LinkKind::refines, "act", "obs"));
    REQUIRE(!illegal.ok());
    CHECK(illegal.error().code == OpErrorCode::illegal_endpoint_kinds);

    auto dangling = add_link(model, make_link("l1", LinkKind::refines, "goal", "nowhere"));
    REQUIRE(!dangling.ok());
    CHECK(dangling.error().code == OpErrorCode::dangling_endpoint);

    Link stray = make_link("l1", LinkKind::contributes, "act", "goal");
    stray.strategy = MitigationStrategy::repair;
    auto rejected = add_link(model, stray);
    REQUIRE(!rejected.ok());
    CHECK(rejected.error().code == OpErrorCode::strategy_on_non_mitigation);
}

TEST_CASE("link ids may not collide with element ids") {
    Model model;
    model = add_element(model, make("a", ElementKind::goal)).value();
    model = add_element(model, make("b", ElementKind::goal)).value();
    auto result = add_link(model, make_link("a", LinkKind::refines, "a", "b"));
    REQUIRE(!result.ok());
    CHECK(result.error().code == OpErrorCode::duplicate_id);
}

TEST_CASE("undirected_components splits and joins as expected") {
    Model model;
    model = add_element(model, make("a", ElementKind::goal)).value();
    model = add_element(model, make("b", ElementKind::goal)).value();

    auto apart = undirected_components(model, {"a", "b"});
    REQUIRE(apart.ok());
    CHECK(apart.value().size() == 2);

    model = add_link(model, make_link("l1", LinkKind::refines, "a", "b")).value();
    auto joined = undirected_components(model, {"a", "b"});
    REQUIRE(joined.ok());
    CHECK(joined.value().size() == 1);

    auto unknown = undirected_components(model, {"a", "zz"});
    REQUIRE(!unknown.ok());
    CHECK(unknown.error().code == OpErrorCode::unknown_id);
}

TEST_CASE("kind-table closure: add_link agrees with the literal table") {
    for (auto link_kind : oracle::all_link_kinds()) {
        for (auto source_kind : oracle::all_element_kinds()) {
            for (auto target_kind : oracle::all_element_kinds()) {
                Model model;
                model = add_element(model, make("s", source_kind, {Dimension::social})).value();
                model = add_element(model, make("t", target_kind, {Dimension::social})).value();
                auto result = add_link(model, make_link("l", link_kind, "s", "t"));
                CHECK_MESSAGE(result.ok() == oracle::table_admits(link_kind, source_kind,
                                                                  target_kind),
                              to_string(link_kind) << " " << to_string(source_kind) << " -> "
                                                   << to_string(target_kind));
            }
        }
    }
}

TEST_CASE("frame property: insertions never disturb prior content") {
    std::mt19937 rng(7);
    for (int round = 0; round < 50; ++round) {
        Model model = oracle::random_model(rng, 8, /*legal_links_only=*/true);
        Model before = model;
        auto with_element = add_element(model, make("fresh_id", ElementKind::goal));
        REQUIRE(with_element.ok());
        for (const auto& [id, el] : before.elements)
            CHECK(with_element.value().elements.at(id) == el);
        for (const auto& [id, link] : before.links)
            CHECK(with_element.value().links.at(id) == link);
        CHECK(model == before);  // purity
    }
}

TEST_CASE("undirected_components output is a partition of the input") {
    std::mt19937 rng(11);
    for (int round = 0; round < 100; ++round) {
        Model model = oracle::random_model(rng, 10, /*legal_links_only=*/true);
        std::set<std::string> subset;
        for (const auto& [id, el] : model.elements) {
            (void)el;
            if (rng() % 2) subset.insert(id);
        }
        auto components = undirected_components(model, subset);
        REQUIRE(components.ok());
        std::set<std::string> covered;
        for (const auto& component : components.value()) {
            REQUIRE(!component.empty());
            for (const auto& id : component) {
                CHECK(subset.count(id));
                CHECK(!covered.count(id));  // disjoint
                covered.insert(id);
            }
        }
        CHECK(covered == subset);  // union is the subset
    }
}

TEST_CASE("components agree with the reachability oracle") {
    std::mt19937 rng(13);
    for (int round = 0; round < 100; ++round) {
        Model model = oracle::random_model(rng, 10, /*legal_links_only=*/true);
        std::set<std::string> subset;
        for (const auto& [id, el] : model.elements) {
            (void)el;
            subset.insert(id);
        }
        std::vector<std::string> nodes(subset.begin(), subset.end());
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& [id, link] : model.links) {
            (void)id;
            edges.push_back({link.source, link.target});
        }
        auto components = undirected_components(model, subset);
        REQUIRE(components.ok());
        CHECK(static_cast<int>(components.value().size()) ==
              oracle::component_count(nodes, edges));
    }
}
