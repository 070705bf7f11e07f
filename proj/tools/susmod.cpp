#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "susmod/corpus.hpp"
#include "susmod/export.hpp"
#include "susmod/parse.hpp"
#include "susmod/serialize.hpp"
#include "susmod/validate.hpp"

namespace fs = std::filesystem;
using namespace susmod;

namespace {

// exit codes: 0 clean, 1 warnings only, 2 errors, 3 I/O trouble
enum ExitCode { kClean = 0, kWarnings = 1, kErrors = 2, kIo = 3 };

int worst(int a, int b) { return std::max(a, b); }

bool use_color() {
    if (std::getenv("SUSMOD_NO_COLOR") || std::getenv("NO_COLOR")) return false;
    return isatty(2);
}

void print_diagnostics(const std::vector<Diagnostic>& diags) {
    const bool color = use_color();
    for (const auto& d : diags) {
        std::string line = format_diagnostic(d);
        if (color) {
            const char* tint = d.severity == Severity::error ? "\033[31m" : "\033[33m";
            std::cerr << tint << line << "\033[0m\n";
        } else {
            std::cerr << line << '\n';
        }
    }
}

int diagnostics_exit(const std::vector<Diagnostic>& diags, bool strict) {
    if (has_errors(diags)) return kErrors;
    if (has_warnings(diags)) return strict ? kErrors : kWarnings;
    return kClean;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

enum class FileKind { model, pattern, catalogue, unknown };

FileKind kind_of(const std::string& path) {
    auto ext = fs::path(path).extension().string();
    if (ext == ".susm") return FileKind::model;
    if (ext == ".susp") return FileKind::pattern;
    if (ext == ".susc") return FileKind::catalogue;
    return FileKind::unknown;
}

// Optional susmod.toml-style key/value configuration; flags win over keys.
struct Config {
    std::optional<bool> strict;
    std::optional<bool> no_color;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<std::pair<double, double>> weights;
};

std::optional<std::pair<double, double>> parse_weights(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) return std::nullopt;
    try {
        double a = std::stod(text.substr(0, comma));
        double b = std::stod(text.substr(comma + 1));
        return std::make_pair(a, b);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

Config load_config(const std::string& explicit_path) {
    Config config;
    std::string path = explicit_path;
    if (path.empty() && fs::exists("susmod.toml")) path = "susmod.toml";
    if (path.empty()) return config;
    auto text = read_file(path);
    if (!text) {
        std::cerr << "warning: cannot read config '" << path << "'\n";
        return config;
    }
    std::istringstream in(*text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto slashes = line.find("//");
        if (slashes != std::string::npos) line = line.substr(0, slashes);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            s = s.substr(a, b - a + 1);
            if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
                s = s.substr(1, s.size() - 2);
            return s;
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "strict") config.strict = value == "true";
        else if (key == "no_color") config.no_color = value == "true";
        else if (key == "out") config.out = value;
        else if (key == "format") config.format = value;
        else if (key == "weights") config.weights = parse_weights(value);
    }
    return config;
}

// ---- validate ----

int cmd_validate(const std::vector<std::string>& paths, bool strict) {
    int exit_code = kClean;
    for (const auto& path : paths) {
        auto text = read_file(path);
        if (!text) {
            std::cerr << path << ": cannot read file\n";
            exit_code = worst(exit_code, kIo);
            continue;
        }
        std::vector<Diagnostic> diags;
        switch (kind_of(path)) {
            case FileKind::model: {
                auto parsed = parse_model(*text, path);
                diags = parsed.diagnostics;
                if (parsed.ok()) {
                    auto more = validate_model(*parsed.value);
                    diags.insert(diags.end(), more.begin(), more.end());
                }
                break;
            }
            case FileKind::pattern: {
                auto parsed = parse_pattern(*text, path);
                diags = parsed.diagnostics;
                if (parsed.ok()) {
                    auto more = validate_pattern(*parsed.value);
                    diags.insert(diags.end(), more.begin(), more.end());
                }
                break;
            }
            case FileKind::catalogue: {
                auto parsed = parse_catalogue(*text, path, filesystem_loader());
                diags = parsed.diagnostics;
                if (parsed.ok()) {
                    for (const auto& doc : parsed.value->patterns) {
                        auto more = validate_pattern(doc);
                        diags.insert(diags.end(), more.begin(), more.end());
                    }
                }
                break;
            }
            case FileKind::unknown:
                std::cerr << path << ": unknown file type (expected .susm, .susp or .susc)\n";
                exit_code = worst(exit_code, kErrors);
                continue;
        }
        sort_diagnostics(diags);
        print_diagnostics(diags);
        exit_code = worst(exit_code, diagnostics_exit(diags, strict));
    }
    return exit_code;
}

// ---- instantiate ----

int cmd_instantiate(const std::string& pattern_path, const std::string& binding_path,
                    const std::string& model_path, const std::string& anchor,
                    std::string out_path) {
    for (const auto& path : {pattern_path, binding_path, model_path}) {
        if (!fs::exists(path)) {
            std::cerr << path << ": cannot read file\n";
            return kIo;
        }
    }
    auto pattern = parse_pattern_file(pattern_path);
    print_diagnostics(pattern.diagnostics);
    if (!pattern.ok()) return kErrors;
    auto binding = parse_binding_file(binding_path);
    print_diagnostics(binding.diagnostics);
    if (!binding.ok()) return kErrors;
    auto model = parse_model_file(model_path);
    print_diagnostics(model.diagnostics);
    if (!model.ok()) return kErrors;

    std::optional<std::string> anchor_id;
    if (!anchor.empty()) anchor_id = anchor;
    auto result = instantiate(*pattern.value, *binding.value, *model.value, anchor_id);
    if (!result.ok()) {
        std::cerr << "[" << to_string(result.error().code) << "] " << result.error().message
                  << '\n';
        return kErrors;
    }
    if (out_path.empty()) {
        fs::path p(model_path);
        out_path = (p.parent_path() / (p.stem().string() + ".instantiated.susm")).string();
    }
    if (!write_file(out_path, serialize(result.value()))) {
        std::cerr << out_path << ": cannot write file\n";
        return kIo;
    }
    std::cout << diff_instantiation(*model.value, result.value(), *pattern.value).to_text();
    std::cout << "wrote " << out_path << '\n';
    return kClean;
}

// ---- catalogue ----

int cmd_catalogue(const std::string& sub, const std::string& path,
                  const std::vector<std::string>& chain_names, bool use_json,
                  const PlacementOptions& options, bool strict) {
    if (!fs::exists(path)) {
        std::cerr << path << ": cannot read file\n";
        return kIo;
    }
    auto parsed = parse_catalogue_file(path);
    print_diagnostics(parsed.diagnostics);
    if (!parsed.ok()) return kErrors;
    const Catalogue& catalogue = *parsed.value;

    if (sub == "index") {
        auto placements = compute_placements(catalogue, options);
        if (!placements.ok()) {
            std::cerr << "[" << to_string(placements.error().code) << "] "
                      << placements.error().message << '\n';
            return kErrors;
        }
        std::cout << "catalogue: " << catalogue.name << '\n';
        std::cout << "cycle:";
        for (const auto& cat : catalogue.cycle) std::cout << ' ' << cat;
        std::cout << "\ncenter: " << catalogue.center << '\n';
        std::vector<const PatternDoc*> docs;
        for (const auto& doc : catalogue.patterns) docs.push_back(&doc);
        std::sort(docs.begin(), docs.end(),
                  [](const PatternDoc* a, const PatternDoc* b) { return a->name < b->name; });
        for (const auto* doc : docs) {
            const Point& pos = placements.value().at(doc->name);
            char buf[128];
            std::snprintf(buf, sizeof(buf), "(%.4f, %.4f)", pos.x, pos.y);
            std::cout << slugify(doc->name) << "  primary=" << doc->category_primary;
            if (doc->category_secondary) std::cout << " secondary=" << *doc->category_secondary;
            std::cout << "  pos=" << buf << '\n';
        }
        return diagnostics_exit(parsed.diagnostics, strict);
    }
    if (sub == "lint") {
        auto diags = lint_related_distance(catalogue);
        print_diagnostics(diags);
        return diagnostics_exit(diags, strict);
    }
    if (sub == "stats") {
        auto stats = catalogue_stats(catalogue);
        std::cout << (use_json ? stats.to_json() : stats.to_text());
        return diagnostics_exit(parsed.diagnostics, strict);
    }
    if (sub == "chain") {
        auto report = compose_chain(catalogue, chain_names);
        if (!report.ok()) {
            std::cerr << "[" << to_string(report.error().code) << "] " << report.error().message
                      << '\n';
            return kErrors;
        }
        std::cout << (use_json ? report.value().to_json() : report.value().to_text());
        return diagnostics_exit(parsed.diagnostics, strict);
    }
    std::cerr << "unknown catalogue subcommand '" << sub
              << "' (expected index, lint, stats or chain)\n";
    return kErrors;
}

// ---- render ----

int cmd_render(const std::string& path, std::string format, const std::string& out_dir,
               bool to_stdout, const PlacementOptions& options) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << path << ": cannot read file\n";
        return kIo;
    }
    FileKind kind = kind_of(path);
    if (kind == FileKind::unknown) {
        std::cerr << path << ": unknown file type (expected .susm, .susp or .susc)\n";
        return kErrors;
    }
    if (format.empty()) format = kind == FileKind::pattern ? "md" : "dot";
    if (format != "dot" && format != "md") {
        std::cerr << "unknown format '" << format << "' (expected dot or md)\n";
        return kErrors;
    }

    std::string rendered;
    switch (kind) {
        case FileKind::model: {
            if (format != "dot") {
                std::cerr << "models render to dot only\n";
                return kErrors;
            }
            auto parsed = parse_model(*text, path);
            print_diagnostics(parsed.diagnostics);
            if (!parsed.ok()) return kErrors;
            auto dot = export_model_dot(*parsed.value);
            if (!dot.ok()) {
                std::cerr << "[" << to_string(dot.error().code) << "] " << dot.error().message
                          << '\n';
                return kErrors;
            }
            rendered = dot.value();
            break;
        }
        case FileKind::pattern: {
            auto parsed = parse_pattern(*text, path);
            print_diagnostics(parsed.diagnostics);
            if (!parsed.ok()) return kErrors;
            rendered = format == "md" ? export_pattern_markdown(*parsed.value)
                                      : export_archetype_dot(*parsed.value);
            break;
        }
        case FileKind::catalogue: {
            if (format != "dot") {
                std::cerr << "catalogues render to dot only\n";
                return kErrors;
            }
            auto parsed = parse_catalogue(*text, path, filesystem_loader());
            print_diagnostics(parsed.diagnostics);
            if (!parsed.ok()) return kErrors;
            auto dot = export_catalogue_dot(*parsed.value, options);
            if (!dot.ok()) {
                std::cerr << "[" << to_string(dot.error().code) << "] " << dot.error().message
                          << '\n';
                return kErrors;
            }
            rendered = dot.value();
            break;
        }
        case FileKind::unknown:
            return kErrors;
    }

    if (to_stdout) {
        std::cout << rendered;
        return kClean;
    }
    fs::path in(path);
    fs::path out = out_dir.empty() ? in.parent_path() : fs::path(out_dir);
    if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out, ec);
    }
    std::string out_path = (out / (in.stem().string() + "." + format)).string();
    if (!write_file(out_path, rendered)) {
        std::cerr << out_path << ": cannot write file\n";
        return kIo;
    }
    std::cout << "wrote " << out_path << '\n';
    return kClean;
}

// ---- fmt ----

int cmd_fmt(const std::vector<std::string>& paths, bool check) {
    int exit_code = kClean;
    for (const auto& path : paths) {
        auto text = read_file(path);
        if (!text) {
            std::cerr << path << ": cannot read file\n";
            exit_code = worst(exit_code, kIo);
            continue;
        }
        std::string canonical;
        switch (kind_of(path)) {
            case FileKind::model: {
                auto parsed = parse_model(*text, path);
                if (!parsed.ok()) {
                    print_diagnostics(parsed.diagnostics);
                    exit_code = worst(exit_code, kErrors);
                    continue;
                }
                canonical = serialize(*parsed.value);
                break;
            }
            case FileKind::pattern: {
                auto parsed = parse_pattern(*text, path);
                if (!parsed.ok()) {
                    print_diagnostics(parsed.diagnostics);
                    exit_code = worst(exit_code, kErrors);
                    continue;
                }
                canonical = serialize(*parsed.value);
                break;
            }
            case FileKind::catalogue: {
                auto parsed = parse_catalogue(*text, path, filesystem_loader());
                if (!parsed.ok()) {
                    print_diagnostics(parsed.diagnostics);
                    exit_code = worst(exit_code, kErrors);
                    continue;
                }
                canonical = serialize(*parsed.value);
                break;
            }
            case FileKind::unknown:
                std::cerr << path << ": unknown file type (expected .susm, .susp or .susc)\n";
                exit_code = worst(exit_code, kErrors);
                continue;
        }
        if (canonical == *text) continue;
        if (check) {
            std::cout << "would reformat " << path << '\n';
            exit_code = worst(exit_code, kWarnings);
        } else {
            if (!write_file(path, canonical)) {
                std::cerr << path << ": cannot write file\n";
                exit_code = worst(exit_code, kIo);
            }
        }
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sustainability model, pattern and catalogue toolchain"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key/value config file (default: ./susmod.toml)");

    // validate
    auto* validate = app.add_subcommand("validate", "check well-formedness of DSL files");
    std::vector<std::string> validate_paths;
    bool strict = false;
    validate->add_option("paths", validate_paths, "files to validate")->required();
    validate->add_flag("--strict", strict, "treat warnings as errors");

    // instantiate
    auto* inst = app.add_subcommand("instantiate", "splice a bound pattern into a model");
    std::string inst_pattern, inst_binding, inst_model, inst_anchor, inst_out;
    inst->add_option("pattern", inst_pattern, "pattern file (.susp)")->required();
    inst->add_option("binding", inst_binding, "role binding file")->required();
    inst->add_option("model", inst_model, "target model file (.susm)")->required();
    inst->add_option("--anchor", inst_anchor, "anchor element id for the new fragment");
    inst->add_option("--out", inst_out, "output model path");

    // catalogue
    auto* cat = app.add_subcommand("catalogue", "catalogue index, lint, stats and chains");
    std::string cat_sub, cat_path, weights_text;
    std::vector<std::string> chain_names;
    bool use_json = false;
    cat->add_option("subcommand", cat_sub, "index | lint | stats | chain")->required();
    cat->add_option("path", cat_path, "catalogue file (.susc)")->required();
    cat->add_option("names", chain_names, "pattern names for 'chain'");
    cat->add_flag("--json", use_json, "emit the JSON document instead of text");
    cat->add_option("--weights", weights_text, "primary,secondary placement weights");
    cat->add_flag("--strict", strict, "treat warnings as errors");

    // render
    auto* render = app.add_subcommand("render", "export DOT or Markdown");
    std::string render_path, render_format, render_out;
    bool render_stdout = false;
    render->add_option("path", render_path, "input file")->required();
    render->add_option("--format", render_format, "dot | md");
    render->add_option("--out", render_out, "output directory");
    render->add_flag("--stdout", render_stdout, "print to stdout instead of writing a file");
    render->add_option("--weights", weights_text, "primary,secondary placement weights");

    // fmt
    auto* fmt = app.add_subcommand("fmt", "rewrite files in canonical form");
    std::vector<std::string> fmt_paths;
    bool fmt_check = false;
    fmt->add_option("paths", fmt_paths, "files to format")->required();
    fmt->add_flag("--check", fmt_check, "verify without rewriting; exit 1 when not canonical");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kErrors;
    }

    Config config = load_config(config_path);
    if (config.no_color.value_or(false)) setenv("SUSMOD_NO_COLOR", "1", 0);
    if (!strict && config.strict) strict = *config.strict;
    PlacementOptions options;
    if (config.weights) {
        options.primary_weight = config.weights->first;
        options.secondary_weight = config.weights->second;
    }
    if (!weights_text.empty()) {
        auto weights = parse_weights(weights_text);
        if (!weights) {
            std::cerr << "--weights expects '<primary>,<secondary>' (e.g. 0.7,0.3)\n";
            return kErrors;
        }
        options.primary_weight = weights->first;
        options.secondary_weight = weights->second;
    }

    if (validate->parsed()) return cmd_validate(validate_paths, strict);
    if (inst->parsed())
        return cmd_instantiate(inst_pattern, inst_binding, inst_model, inst_anchor, inst_out);
    if (cat->parsed())
        return cmd_catalogue(cat_sub, cat_path, chain_names, use_json, options, strict);
    if (render->parsed())
        return cmd_render(render_path, render_format.empty() ? config.format.value_or("")
                                                             : render_format,
                          render_out.empty() ? config.out.value_or("") : render_out,
                          render_stdout, options);
    if (fmt->parsed()) return cmd_fmt(fmt_paths, fmt_check);
    return kErrors;
}
