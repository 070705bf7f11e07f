#pragma once

#include <map>
#include <string>
#include <vector>

#include "susmod/result.hpp"

namespace susmod {

enum class ManifestKind { model, pattern, catalogue };

struct ManifestEntry {
    std::string path;  // relative to the manifest file
    ManifestKind kind = ManifestKind::model;
    std::string provenance;                    // paper-named | reconstructed-stub
    std::map<std::string, int> expected;       // elements=, links=, fragments=, patterns=, roles=
    std::vector<std::string> named;            // catalogue: member slugs that must exist
};

struct CorpusManifest {
    std::string dir;  // directory containing the manifest
    std::vector<ManifestEntry> entries;
};

Result<CorpusManifest> load_manifest(const std::string& path);

struct CorpusReport {
    bool passed = true;
    std::vector<std::string> lines;  // one line per check

    std::string to_text() const;
};

// Parses, validates and count-checks every manifest entry.
CorpusReport corpus_check(const std::string& manifest_path);

}  // namespace susmod
