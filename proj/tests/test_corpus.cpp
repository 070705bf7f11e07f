#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/oracles.hpp"
#include "susmod/corpus.hpp"
#include "susmod/parse.hpp"

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

// Lexical count of element declarations, independent of the parser: lines
// whose first word is an element kind keyword.
int lexical_element_count(const std::string& text) {
    std::istringstream lines(text);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        std::istringstream words(line);
        std::string first;
        if (!(words >> first)) continue;
        if (element_kind_from(first)) ++count;
    }
    return count;
}

int lexical_link_count(const std::string& text) {
    std::istringstream lines(text);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        std::istringstream words(line);
        std::string first;
        if (!(words >> first)) continue;
        if (first == "link") ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("corpus_check passes on the shipped corpus") {
    auto report = corpus_check(kCorpusDir + "/manifest");
    for (const auto& line : report.lines)
        if (line.rfind("FAIL", 0) == 0) MESSAGE(line);
    CHECK(report.passed);
    CHECK(report.to_text().find("corpus check: PASS") != std::string::npos);
}

TEST_CASE("manifest loads with counts and named members") {
    auto manifest = load_manifest(kCorpusDir + "/manifest");
    REQUIRE(manifest.ok());
    CHECK(manifest.value().entries.size() == 29);
    const ManifestEntry& covid = manifest.value().entries.front();
    CHECK(covid.kind == ManifestKind::model);
    CHECK(covid.expected.at("elements") == 21);
    bool found_fairness = false;
    for (const auto& entry : manifest.value().entries) {
        if (entry.path == "fairness/fairness.susc") {
            found_fairness = true;
            CHECK(entry.expected.at("patterns") == 12);
            CHECK(entry.named.size() == 4);
        }
    }
    CHECK(found_fairness);
}

TEST_CASE("corpus_check fails when a count is off") {
    // copy the corpus manifest with one wrong count into a scratch dir
    std::string scratch = std::string(SUSMOD_SOURCE_DIR) + "/build/corpus_check_scratch";
    std::filesystem::create_directories(scratch);
    std::string manifest = slurp(kCorpusDir + "/manifest");
    auto pos = manifest.find("elements=21");
    REQUIRE(pos != std::string::npos);
    manifest.replace(pos, 11, "elements=99");
    {
        std::ofstream out(scratch + "/manifest");
        // entries are relative to the manifest dir, so point back at the corpus
        std::istringstream lines(manifest);
        std::string line;
        while (std::getline(lines, line)) {
            if (!line.empty() && line[0] != '#') {
                auto space = line.find(' ');
                REQUIRE(space != std::string::npos);
                line = line.substr(0, space + 1) + kCorpusDir + "/" + line.substr(space + 1);
                // second word is now an absolute path
            }
            out << line << "\n";
        }
    }
    auto report = corpus_check(scratch + "/manifest");
    CHECK(!report.passed);
    CHECK(report.to_text().find("corpus check: FAIL") != std::string::npos);
}

TEST_CASE("rebuilding the corpus model through checked ops matches the manifest") {
    std::string text = slurp(kCorpusDir + "/covid/covid.susm");
    auto parsed = parse_model(text);
    REQUIRE(parsed.ok());

    // replay every element and link through add_element/add_link
    Model rebuilt;
    rebuilt.name = parsed.value->name;
    for (const auto& [id, el] : parsed.value->elements) {
        (void)id;
        auto step = add_element(rebuilt, el);
        REQUIRE_MESSAGE(step.ok(), el.id);
        rebuilt = step.value();
    }
    for (const auto& [id, link] : parsed.value->links) {
        (void)id;
        auto step = add_link(rebuilt, link);
        REQUIRE_MESSAGE(step.ok(), link.id);
        rebuilt = step.value();
    }

    auto manifest = load_manifest(kCorpusDir + "/manifest");
    REQUIRE(manifest.ok());
    int declared = manifest.value().entries.front().expected.at("elements");
    CHECK(static_cast<int>(rebuilt.elements.size()) == declared);

    // and the independent lexical walk of the file agrees
    CHECK(lexical_element_count(text) == declared);
    CHECK(lexical_link_count(text) ==
          manifest.value().entries.front().expected.at("links"));
}

TEST_CASE("the ProtectiveMeasures fragment is one component by the oracle") {
    auto parsed = parse_model_file(kCorpusDir + "/covid/covid.susm");
    REQUIRE(parsed.ok());
    const Fragment& fragment = parsed.value->fragments.at("ProtectiveMeasures");

    std::vector<std::string> nodes(fragment.elements.begin(), fragment.elements.end());
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [id, link] : parsed.value->links) {
        (void)id;
        if (fragment.elements.count(link.source) && fragment.elements.count(link.target))
            edges.push_back({link.source, link.target});
    }
    CHECK(oracle::component_count(nodes, edges) == 1);

    auto components = undirected_components(*parsed.value, fragment.elements);
    REQUIRE(components.ok());
    CHECK(components.value().size() == 1);
}

TEST_CASE("stub patterns are marked and paper-named ones are not") {
    auto fairness = parse_catalogue_file(kCorpusDir + "/fairness/fairness.susc");
    REQUIRE(fairness.ok());
    int stubs = 0;
    for (const auto& doc : fairness.value->patterns) {
        auto provenance = doc.meta.find("provenance");
        REQUIRE(provenance != doc.meta.end());
        if (provenance->second == "reconstructed-stub") ++stubs;
    }
    CHECK(stubs == 8);
}
