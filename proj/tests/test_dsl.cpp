#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "susmod/parse.hpp"
#include "susmod/serialize.hpp"

using namespace susmod;

namespace {

const std::string kCorpusDir = std::string(SUSMOD_SOURCE_DIR) + "/corpus";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(static_cast<bool>(in), path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> corpus_files() {
    std::vector<std::string> files;
    for (auto& entry : std::filesystem::recursive_directory_iterator(kCorpusDir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        if (ext == ".susm" || ext == ".susp" || ext == ".susc")
            files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

// in-memory loader for `from` clauses
FileLoader memory_loader(std::map<std::string, std::string> files) {
    return [files = std::move(files)](const std::string& path) -> std::optional<std::string> {
        auto it = files.find(path);
        if (it == files.end()) return std::nullopt;
        return it->second;
    };
}

}  // namespace

TEST_CASE("empty model block parses and serializes canonically") {
    auto parsed = parse_model("model \"M\" { }");
    REQUIRE(parsed.ok());
    CHECK(parsed.value->name == "M");
    CHECK(parsed.value->elements.empty());
    CHECK(serialize(*parsed.value) == "model \"M\" {\n}\n");
}

TEST_CASE("element declaration with dimensions and label") {
    auto parsed = parse_model(
        "model \"care\" {\n"
        "  value EqualAccess dims [social] \"equal access to care\"\n"
        "}");
    REQUIRE(parsed.ok());
    REQUIRE(parsed.value->elements.size() == 1);
    const Element& el = parsed.value->elements.at("EqualAccess");
    CHECK(el.kind == ElementKind::value);
    CHECK(el.label == "equal access to care");
    CHECK(el.dimensions == std::set<Dimension>{Dimension::social});
    CHECK(el.span->line == 2);
}

TEST_CASE("dimension aliases normalize with a warning") {
    auto parsed = parse_model("model \"M\" { goal G dims [financial] }");
    REQUIRE(parsed.ok());
    CHECK(parsed.value->elements.at("G").dimensions ==
          std::set<Dimension>{Dimension::economic});
    REQUIRE(parsed.diagnostics.size() == 1);
    CHECK(parsed.diagnostics[0].severity == Severity::warning);
    CHECK(parsed.diagnostics[0].code == "DIM");

    auto individual = parse_model("model \"M\" { goal G dims [individual] }");
    REQUIRE(individual.ok());
    CHECK(individual.value->elements.at("G").dimensions ==
          std::set<Dimension>{Dimension::personal});
}

TEST_CASE("'temporal' is rejected naming the five canonical tags") {
    auto parsed = parse_model("model \"M\" { goal G dims [temporal] }");
    CHECK(!parsed.ok());
    REQUIRE(!parsed.diagnostics.empty());
    bool names_the_tags = false;
    for (const auto& d : parsed.diagnostics) {
        if (d.message.find("environmental") != std::string::npos &&
            d.message.find("technical") != std::string::npos)
            names_the_tags = true;
    }
    CHECK(names_the_tags);
}

TEST_CASE("missing mandatory dimensions is a parse error") {
    auto parsed = parse_model("model \"M\" { value V \"label\" }");
    CHECK(!parsed.ok());
}

TEST_CASE("duplicate ids are rejected with code V1 and a span") {
    auto parsed = parse_model(
        "model \"M\" {\n"
        "  goal g1 dims [social]\n"
        "  goal g1 dims [social]\n"
        "}");
    CHECK(!parsed.ok());
    REQUIRE(!parsed.diagnostics.empty());
    CHECK(parsed.diagnostics[0].code == "V1");
    CHECK(parsed.diagnostics[0].span->line == 3);
}

TEST_CASE("links parse with strategy and auto ids") {
    auto parsed = parse_model(
        "model \"M\" {\n"
        "  activity a dims [social]\n"
        "  obstacle o dims [social]\n"
        "  link mitigates(a -> o) strategy=anticipation\n"
        "}");
    REQUIRE(parsed.ok());
    REQUIRE(parsed.value->links.count("l1"));
    CHECK(parsed.value->links.at("l1").strategy == MitigationStrategy::anticipation);
}

TEST_CASE("strategy on a non-mitigation link is rejected at parse") {
    auto parsed = parse_model(
        "model \"M\" {\n"
        "  goal a dims [social]\n"
        "  goal b dims [social]\n"
        "  link refines(a -> b) strategy=repair\n"
        "}");
    CHECK(!parsed.ok());
}

TEST_CASE("dangling link endpoints are V1 errors at the link's span") {
    auto parsed = parse_model(
        "model \"M\" {\n"
        "  goal a dims [social]\n"
        "  link refines(a -> ghost)\n"
        "}");
    CHECK(!parsed.ok());
    REQUIRE(!parsed.diagnostics.empty());
    CHECK(parsed.diagnostics[0].code == "V1");
    CHECK(parsed.diagnostics[0].span->line == 3);
}

TEST_CASE("external fragment files are imported and grouped") {
    std::map<std::string, std::string> files;
    files["sub.susm"] =
        "model \"sub\" {\n"
        "  goal inner dims [social]\n"
        "  goal inner2 dims [social]\n"
        "  link refines(inner -> inner2) as s1\n"
        "}";
    auto parsed = parse_model(
        "model \"main\" {\n"
        "  goal outer dims [social]\n"
        "  fragment Sub at outer from \"sub.susm\"\n"
        "}",
        "<memory>", memory_loader(files));
    REQUIRE(parsed.ok());
    CHECK(parsed.value->elements.size() == 3);
    REQUIRE(parsed.value->fragments.count("Sub"));
    const Fragment& fragment = parsed.value->fragments.at("Sub");
    CHECK(fragment.anchor == "outer");
    CHECK(fragment.elements == std::set<std::string>{"inner", "inner2"});
    CHECK(fragment.links == std::set<std::string>{"s1"});
}

TEST_CASE("missing fragment file is an error") {
    auto parsed = parse_model("model \"m\" { fragment F from \"nope.susm\" }", "<memory>",
                              memory_loader({}));
    CHECK(!parsed.ok());
}

TEST_CASE("pattern file parses the full template") {
    auto text = slurp(kCorpusDir + "/fairness/violation-anticipation.susp");
    auto parsed = parse_pattern(text);
    REQUIRE(parsed.ok());
    const PatternDoc& doc = *parsed.value;
    CHECK(doc.name == "Violation Anticipation");
    CHECK(doc.category_primary == "Implementation");
    CHECK(doc.category_secondary == "Evolution");
    REQUIRE(doc.related.size() == 1);
    CHECK(doc.related[0] == "Rule Acceptance");
    CHECK(doc.archetype.roles.size() == 5);
    CHECK(doc.archetype.body_elements.size() == 7);
    CHECK(!doc.discussion.has_value());
}

TEST_CASE("pattern without a summary fails validation later, parses here") {
    auto parsed = parse_pattern(
        "pattern \"P\" {\n"
        "  category Adoption\n"
        "  dims [social]\n"
        "  applicability \"a\"\n"
        "  content \"c\"\n"
        "  archetype { role R : value body { value v dims [social] \"$R\" } }\n"
        "  example \"e\"\n"
        "}");
    REQUIRE(parsed.ok());
    CHECK(parsed.value->summary.empty());
}

TEST_CASE("pattern fields may come in any order; serialization restores it") {
    const char* shuffled =
        "pattern \"P\" {\n"
        "  example \"ex\"\n"
        "  content \"c\"\n"
        "  summary \"s\"\n"
        "  dims [social]\n"
        "  archetype {\n"
        "    role R : value\n"
        "    body {\n"
        "      value v dims [social] \"$R\"\n"
        "    }\n"
        "  }\n"
        "  applicability \"a\"\n"
        "  category Adoption\n"
        "}\n";
    auto parsed = parse_pattern(shuffled);
    REQUIRE(parsed.ok());
    std::string canonical = serialize(*parsed.value);
    CHECK(canonical.find("summary") < canonical.find("category"));
    CHECK(canonical.find("category") < canonical.find("dims"));
    CHECK(canonical.find("dims") < canonical.find("applicability"));
    CHECK(canonical.find("applicability") < canonical.find("content"));
    CHECK(canonical.find("content") < canonical.find("archetype"));
    CHECK(canonical.find("archetype") < canonical.find("example"));
    auto again = parse_pattern(canonical);
    REQUIRE(again.ok());
    CHECK(*again.value == *parsed.value);
}

TEST_CASE("catalogue files resolve members and reject duplicates") {
    auto fairness = parse_catalogue_file(kCorpusDir + "/fairness/fairness.susc");
    REQUIRE(fairness.ok());
    CHECK(fairness.value->cycle.size() == 4);
    CHECK(fairness.value->center == "Governance");
    CHECK(fairness.value->patterns.size() == 12);

    auto circular = parse_catalogue_file(kCorpusDir + "/circular/circular.susc");
    REQUIRE(circular.ok());
    CHECK(circular.value->cycle ==
          std::vector<std::string>{"Design", "Procurement", "Construction", "Usage",
                                   "Dismantling"});
    CHECK(circular.value->center == "Governance");
    CHECK(circular.value->patterns.size() == 14);

    auto duplicated = parse_catalogue(
        "catalogue \"C\" {\n"
        "  cycle [A, B, B]\n"
        "  center G\n"
        "}");
    CHECK(!duplicated.ok());
}

TEST_CASE("pattern with a category outside the catalogue is rejected") {
    auto parsed = parse_catalogue(
        "catalogue \"C\" {\n"
        "  cycle [A, B, D]\n"
        "  center G\n"
        "  pattern \"P\" {\n"
        "    summary \"s\"\n"
        "    category Z\n"
        "    dims [social]\n"
        "    applicability \"a\"\n"
        "    content \"c\"\n"
        "    archetype { role R : value body { value v dims [social] \"$R\" } }\n"
        "    example \"e\"\n"
        "  }\n"
        "}");
    CHECK(!parsed.ok());
}

TEST_CASE("binding files parse both binding forms") {
    auto parsed = parse_binding(
        "// comment\n"
        "A = existing:SomeId\n"
        "B = fresh:\"a label\" kind=activity dims=[social, technical]\n"
        "C = fresh:\"an indicator\" kind=indicator\n");
    REQUIRE(parsed.ok());
    REQUIRE(parsed.value->entries.size() == 3);
    CHECK(parsed.value->find("A")->existing_id == "SomeId");
    CHECK(parsed.value->find("B")->fresh->kind == ElementKind::activity);
    CHECK(parsed.value->find("C")->fresh->dimensions.empty());
    CHECK(parse_binding("X = fresh:\"v\" kind=value\n").ok() == false);  // dims required
}

TEST_CASE("round-trip: every corpus file is a parse/serialize fixed point") {
    for (const auto& path : corpus_files()) {
        auto ext = std::filesystem::path(path).extension().string();
        std::string text = slurp(path);
        if (ext == ".susm") {
            auto first = parse_model(text, path);
            REQUIRE_MESSAGE(first.ok(), path);
            std::string canonical = serialize(*first.value);
            auto second = parse_model(canonical, path);
            REQUIRE_MESSAGE(second.ok(), path);
            CHECK_MESSAGE(*second.value == *first.value, path);
            CHECK_MESSAGE(serialize(*second.value) == canonical, path);  // idempotent
        } else if (ext == ".susp") {
            auto first = parse_pattern(text, path);
            REQUIRE_MESSAGE(first.ok(), path);
            std::string canonical = serialize(*first.value);
            auto second = parse_pattern(canonical, path);
            REQUIRE_MESSAGE(second.ok(), path);
            CHECK_MESSAGE(*second.value == *first.value, path);
            CHECK_MESSAGE(serialize(*second.value) == canonical, path);
        } else {
            auto first = parse_catalogue_file(path);
            REQUIRE_MESSAGE(first.ok(), path);
            std::string canonical = serialize(*first.value);
            auto second = parse_catalogue(canonical, path);
            REQUIRE_MESSAGE(second.ok(), path);
            CHECK_MESSAGE(*second.value == *first.value, path);
            CHECK_MESSAGE(serialize(*second.value) == canonical, path);
        }
    }
}

TEST_CASE("mutation diagnostics point inside the mutated region") {
    std::string text = slurp(kCorpusDir + "/covid/covid.susm");

    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    std::string mutated;
    int mutated_line = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.find("obstacle HospitalOverload") != std::string::npos && mutated_line == 0) {
            line = "  obstacle HospitalOverload dims [?garbage?] \"x\"";
            mutated_line = line_no;
        }
        mutated += line + "\n";
    }
    REQUIRE(mutated_line > 0);
    auto parsed = parse_model(mutated, "covid.susm");
    CHECK(!parsed.ok());
    bool found = false;
    for (const auto& d : parsed.diagnostics) {
        if (d.severity != Severity::error) continue;
        REQUIRE(d.span.has_value());
        if (d.span->line == mutated_line) found = true;
    }
    CHECK(found);
}

TEST_CASE("pattern mutation diagnostics also land in the mutated region") {
    std::string text = slurp(kCorpusDir + "/fairness/violation-anticipation.susp");
    auto pos = text.find("category Implementation");
    REQUIRE(pos != std::string::npos);
    std::string mutated = text.substr(0, pos) + "category 42bad" + text.substr(pos + 23);
    int mutated_line = 1;
    for (size_t i = 0; i < pos; ++i)
        if (text[i] == '\n') ++mutated_line;
    auto parsed = parse_pattern(mutated, "violation-anticipation.susp");
    CHECK(!parsed.ok());
    bool found = false;
    for (const auto& d : parsed.diagnostics) {
        if (d.severity == Severity::error && d.span && d.span->line == mutated_line) found = true;
    }
    CHECK(found);
}

TEST_CASE("serializer escapes and the lexer decodes") {
    Model model;
    model.name = "quote \" and \\ and\nnewline";
    std::string canonical = serialize(model);
    auto parsed = parse_model(canonical);
    REQUIRE(parsed.ok());
    CHECK(parsed.value->name == model.name);
}

TEST_CASE("reserved words cannot name elements") {
    auto parsed = parse_model("model \"M\" { goal link dims [social] }");
    CHECK(!parsed.ok());
}

TEST_CASE("the parser survives truncations and byte flips of corpus input") {
    std::string text = slurp(kCorpusDir + "/covid/covid.susm");
    std::mt19937 rng(47);
    for (int round = 0; round < 60; ++round) {
        std::string mangled = text;
        if (round % 2 == 0) {
            mangled = mangled.substr(0, rng() % mangled.size());
        } else {
            for (int flips = 0; flips < 5; ++flips)
                mangled[rng() % mangled.size()] = static_cast<char>('!' + rng() % 90);
        }
        auto parsed = parse_model(mangled, "mangled.susm");
        // outcome may be either, but diagnostics must explain failures
        if (!parsed.ok()) CHECK(has_errors(parsed.diagnostics));
    }
}
