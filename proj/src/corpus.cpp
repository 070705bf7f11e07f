#include "susmod/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "susmod/parse.hpp"
#include "susmod/validate.hpp"

namespace susmod {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string word;
    while (in >> word) out.push_back(word);
    return out;
}

}  // namespace

Result<CorpusManifest> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) return OpError{OpErrorCode::io_error, "cannot read manifest '" + path + "'"};
    CorpusManifest manifest;
    manifest.dir = fs::path(path).parent_path().string();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto words = split_ws(line);
        if (words.empty()) continue;
        if (words.size() < 3)
            return OpError{OpErrorCode::parse_error,
                           path + ":" + std::to_string(line_no) +
                               ": expected '<kind> <path> <provenance> [key=value ...]'"};
        ManifestEntry entry;
        if (words[0] == "model")
            entry.kind = ManifestKind::model;
        else if (words[0] == "pattern")
            entry.kind = ManifestKind::pattern;
        else if (words[0] == "catalogue")
            entry.kind = ManifestKind::catalogue;
        else
            return OpError{OpErrorCode::parse_error,
                           path + ":" + std::to_string(line_no) + ": unknown entry kind '" +
                               words[0] + "'"};
        entry.path = words[1];
        entry.provenance = words[2];
        if (entry.provenance != "paper-named" && entry.provenance != "reconstructed-stub")
            return OpError{OpErrorCode::parse_error,
                           path + ":" + std::to_string(line_no) + ": unknown provenance '" +
                               entry.provenance + "'"};
        for (size_t i = 3; i < words.size(); ++i) {
            auto eq = words[i].find('=');
            if (eq == std::string::npos)
                return OpError{OpErrorCode::parse_error,
                               path + ":" + std::to_string(line_no) + ": expected key=value, got '" +
                                   words[i] + "'"};
            std::string key = words[i].substr(0, eq);
            std::string value = words[i].substr(eq + 1);
            if (key == "named") {
                std::istringstream names(value);
                std::string name;
                while (std::getline(names, name, ','))
                    if (!name.empty()) entry.named.push_back(name);
            } else {
                try {
                    entry.expected[key] = std::stoi(value);
                } catch (const std::exception&) {
                    return OpError{OpErrorCode::parse_error,
                                   path + ":" + std::to_string(line_no) + ": '" + key +
                                       "' expects an integer"};
                }
            }
        }
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

std::string CorpusReport::to_text() const {
    std::string out;
    for (const auto& line : lines) out += line + "\n";
    out += passed ? "corpus check: PASS\n" : "corpus check: FAIL\n";
    return out;
}

CorpusReport corpus_check(const std::string& manifest_path) {
    CorpusReport report;
    auto add = [&](bool ok, const std::string& what) {
        report.lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
        report.passed = report.passed && ok;
    };

    auto manifest = load_manifest(manifest_path);
    if (!manifest.ok()) {
        add(false, manifest.error().message);
        return report;
    }

    for (const auto& entry : manifest.value().entries) {
        std::string full = (fs::path(manifest.value().dir) / entry.path).string();
        auto expect = [&](const std::string& key, int actual) {
            auto it = entry.expected.find(key);
            if (it == entry.expected.end()) return;
            add(actual == it->second, entry.path + ": " + key + " = " +
                                          std::to_string(actual) + " (expected " +
                                          std::to_string(it->second) + ")");
        };
        switch (entry.kind) {
            case ManifestKind::model: {
                auto parsed = parse_model_file(full);
                if (!parsed.ok()) {
                    add(false, entry.path + ": does not parse");
                    break;
                }
                auto diags = validate_model(*parsed.value);
                add(diags.empty(), entry.path + ": validates cleanly (" +
                                       std::to_string(diags.size()) + " diagnostics)");
                expect("elements", static_cast<int>(parsed.value->elements.size()));
                expect("links", static_cast<int>(parsed.value->links.size()));
                expect("fragments", static_cast<int>(parsed.value->fragments.size()));
                int anticipations = 0;
                for (const auto& [id, link] : parsed.value->links) {
                    (void)id;
                    if (link.kind == LinkKind::mitigates &&
                        link.strategy == MitigationStrategy::anticipation &&
                        parsed.value->elements.count(link.target) &&
                        parsed.value->elements.at(link.target).kind == ElementKind::obstacle)
                        ++anticipations;
                }
                expect("anticipation_mitigations", anticipations);
                break;
            }
            case ManifestKind::pattern: {
                auto parsed = parse_pattern_file(full);
                if (!parsed.ok()) {
                    add(false, entry.path + ": does not parse");
                    break;
                }
                auto diags = validate_pattern(*parsed.value);
                add(!has_errors(diags), entry.path + ": validates");
                expect("roles", static_cast<int>(parsed.value->archetype.roles.size()));
                auto meta = parsed.value->meta.find("provenance");
                add(meta != parsed.value->meta.end() && meta->second == entry.provenance,
                    entry.path + ": provenance marked '" + entry.provenance + "'");
                break;
            }
            case ManifestKind::catalogue: {
                auto parsed = parse_catalogue_file(full);
                if (!parsed.ok()) {
                    add(false, entry.path + ": does not parse");
                    break;
                }
                const Catalogue& catalogue = *parsed.value;
                bool members_valid = true;
                for (const auto& doc : catalogue.patterns)
                    members_valid = members_valid && !has_errors(validate_pattern(doc));
                add(members_valid, entry.path + ": all member patterns validate");
                expect("patterns", static_cast<int>(catalogue.patterns.size()));
                std::set<std::string> named(entry.named.begin(), entry.named.end());
                for (const auto& slug : entry.named) {
                    add(catalogue.find_pattern(slug) != nullptr,
                        entry.path + ": contains " + slug);
                }
                // every non-named member must be explicitly marked as a stub
                bool stubs_marked = true;
                for (const auto& doc : catalogue.patterns) {
                    if (named.count(slugify(doc.name))) continue;
                    auto meta = doc.meta.find("provenance");
                    if (meta == doc.meta.end() || meta->second != "reconstructed-stub")
                        stubs_marked = false;
                }
                add(stubs_marked, entry.path + ": non-named members marked reconstructed-stub");
                break;
            }
        }
    }
    return report;
}

}  // namespace susmod
