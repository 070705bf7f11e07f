#include "susmod/parse.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lexer.hpp"

namespace susmod {

namespace {

const std::set<std::string> kReservedWords = {
    "model",      "pattern",   "catalogue", "fragment",   "link",     "meta",
    "value",      "goal",      "activity",  "obstacle",   "assumption", "regulation",
    "resource",   "indicator", "stakeholder", "dims",     "is",       "at",
    "from",       "as",        "strategy",  "anchor",     "elements", "links",
    "role",       "body",      "archetype", "summary",    "category", "secondary",
    "applicability", "content", "example",  "discussion", "related",  "cycle",
    "center",     "attrs",     "existing",  "fresh",      "kind",
};

class Parser {
public:
    Parser(std::string_view text, const std::string& source, const FileLoader& loader,
           std::vector<Diagnostic>& diags, int include_depth = 0)
        : source_(source), loader_(loader), diags_(diags), include_depth_(include_depth) {
        tokens_ = lex(text, source, diags_);
    }

    // ---- token access ----

    const Token& peek(int ahead = 0) const {
        size_t idx = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[idx];
    }
    const Token& advance() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool at(TokenType type) const { return peek().type == type; }
    bool at_word(const char* word) const {
        return peek().type == TokenType::identifier && peek().text == word;
    }
    bool accept(TokenType type) {
        if (!at(type)) return false;
        advance();
        return true;
    }
    bool accept_word(const char* word) {
        if (!at_word(word)) return false;
        advance();
        return true;
    }

    void error(const std::string& message, const SourceSpan& span, const std::string& code = "SYN") {
        diags_.push_back({Severity::error, code, message, span});
    }
    void error_here(const std::string& message, const std::string& code = "SYN") {
        error(message, peek().span, code);
    }
    void warn(const std::string& message, const SourceSpan& span, const std::string& code) {
        diags_.push_back({Severity::warning, code, message, span});
    }

    bool expect(TokenType type, const char* what) {
        if (accept(type)) return true;
        error_here(std::string("expected ") + what);
        return false;
    }
    bool expect_word(const char* word) {
        if (accept_word(word)) return true;
        error_here(std::string("expected '") + word + "'");
        return false;
    }

    // Identifier that is not a reserved word.
    std::optional<Token> expect_name(const char* what) {
        if (!at(TokenType::identifier)) {
            error_here(std::string("expected ") + what);
            return std::nullopt;
        }
        Token t = advance();
        if (kReservedWords.count(t.text)) {
            error(std::string("'") + t.text + "' is a reserved word and cannot name a " + what,
                  t.span);
            return std::nullopt;
        }
        return t;
    }

    std::optional<Token> expect_string(const char* what) {
        if (!at(TokenType::string)) {
            error_here(std::string("expected quoted ") + what);
            return std::nullopt;
        }
        return advance();
    }

    // Skips to the next plausible declaration start after a syntax error.
    void synchronize() {
        while (!at(TokenType::end_of_file)) {
            const Token& t = peek();
            if (t.type == TokenType::rbrace) return;
            if (t.type == TokenType::identifier && kReservedWords.count(t.text)) return;
            advance();
        }
    }

    // ---- shared pieces ----

    std::set<Dimension> parse_dims_list() {
        std::set<Dimension> dims;
        if (!expect(TokenType::lbracket, "'['")) return dims;
        bool first = true;
        while (!at(TokenType::rbracket) && !at(TokenType::end_of_file)) {
            if (!first && !expect(TokenType::comma, "','")) break;
            first = false;
            if (!at(TokenType::identifier)) {
                error_here("expected dimension name");
                break;
            }
            Token t = advance();
            bool was_alias = false;
            auto dim = dimension_from(t.text, &was_alias);
            if (!dim) {
                error("unknown dimension '" + t.text +
                          "' (expected environmental, economic, social, personal or technical)",
                      t.span);
                continue;
            }
            if (was_alias)
                warn("dimension '" + t.text + "' normalized to '" + to_string(*dim) + "'", t.span,
                     "DIM");
            dims.insert(*dim);
        }
        expect(TokenType::rbracket, "']'");
        return dims;
    }

    std::vector<std::string> parse_id_list(const char* what) {
        std::vector<std::string> ids;
        if (!expect(TokenType::lbracket, "'['")) return ids;
        bool first = true;
        while (!at(TokenType::rbracket) && !at(TokenType::end_of_file)) {
            if (!first && !expect(TokenType::comma, "','")) break;
            first = false;
            auto name = expect_name(what);
            if (!name) break;
            ids.push_back(name->text);
        }
        expect(TokenType::rbracket, "']'");
        return ids;
    }

    std::map<std::string, std::string> parse_attrs_block() {
        std::map<std::string, std::string> attrs;
        expect(TokenType::lbrace, "'{'");
        while (!at(TokenType::rbrace) && !at(TokenType::end_of_file)) {
            auto key = expect_name("attribute key");
            if (!key) break;
            if (!expect(TokenType::equals, "'='")) break;
            auto value = expect_string("attribute value");
            if (!value) break;
            if (!attrs.emplace(key->text, value->text).second)
                error("duplicate attribute '" + key->text + "'", key->span);
        }
        expect(TokenType::rbrace, "'}'");
        return attrs;
    }

    // <kind> <id> [dims [...]] ["label"] [is] [attrs { ... }]
    std::optional<Element> parse_element_decl(ElementKind kind) {
        SourceSpan span = peek().span;
        advance();  // kind keyword
        Element el;
        el.kind = kind;
        el.span = span;
        auto id = expect_name("element id");
        if (!id) return std::nullopt;
        el.id = id->text;
        el.span = id->span;
        if (accept_word("dims")) el.dimensions = parse_dims_list();
        if (at(TokenType::string)) el.label = advance().text;
        if (accept_word("is")) el.is_tagged = true;
        if (accept_word("attrs")) el.attrs = parse_attrs_block();
        if (el.dimensions.empty() && !dimensions_optional(kind)) {
            error(std::string(to_string(kind)) + " '" + el.id +
                      "' must carry at least one dimension",
                  *el.span);
            return std::nullopt;
        }
        return el;
    }

    // link <kind>(<src> -> <dst>) [strategy=<s>] [as <id>]
    std::optional<Link> parse_link_decl() {
        SourceSpan span = peek().span;
        advance();  // 'link'
        Link link;
        link.span = span;
        if (!at(TokenType::identifier)) {
            error_here("expected link kind");
            return std::nullopt;
        }
        Token kind_tok = advance();
        auto kind = link_kind_from(kind_tok.text);
        if (!kind) {
            error("unknown link kind '" + kind_tok.text + "'", kind_tok.span);
            return std::nullopt;
        }
        link.kind = *kind;
        link.span = kind_tok.span;
        if (!expect(TokenType::lparen, "'('")) return std::nullopt;
        auto src = expect_name("source element id");
        if (!src) return std::nullopt;
        link.source = src->text;
        if (!expect(TokenType::arrow, "'->'")) return std::nullopt;
        auto dst = expect_name("target element id");
        if (!dst) return std::nullopt;
        link.target = dst->text;
        if (!expect(TokenType::rparen, "')'")) return std::nullopt;
        if (accept_word("strategy")) {
            if (!expect(TokenType::equals, "'='")) return std::nullopt;
            if (!at(TokenType::identifier)) {
                error_here("expected strategy name");
                return std::nullopt;
            }
            Token st = advance();
            auto strategy = strategy_from(st.text);
            if (!strategy) {
                error("unknown strategy '" + st.text +
                          "' (expected avoidance, anticipation, repair or degraded_mode)",
                      st.span);
                return std::nullopt;
            }
            link.strategy = *strategy;
            if (link.kind != LinkKind::mitigates) {
                error("strategy is only allowed on mitigates links", st.span);
                return std::nullopt;
            }
        }
        if (accept_word("as")) {
            auto id = expect_name("link id");
            if (!id) return std::nullopt;
            link.id = id->text;
        }
        return link;
    }

    // ---- model ----

    std::optional<Model> parse_model_block() {
        if (!expect_word("model")) return std::nullopt;
        auto name = expect_string("model name");
        if (!name) return std::nullopt;
        Model model;
        model.name = name->text;
        if (!expect(TokenType::lbrace, "'{'")) return std::nullopt;

        struct PendingLink {
            Link link;
            SourceSpan span;
        };
        std::vector<PendingLink> auto_id_links;
        std::vector<std::pair<Fragment, SourceSpan>> pending_fragments;

        while (!at(TokenType::rbrace) && !at(TokenType::end_of_file)) {
            const Token& t = peek();
            if (t.type != TokenType::identifier) {
                error_here("expected declaration");
                synchronize();
                continue;
            }
            if (auto kind = element_kind_from(t.text)) {
                auto el = parse_element_decl(*kind);
                if (!el) {
                    synchronize();
                    continue;
                }
                insert_element(model, *el);
                continue;
            }
            if (t.text == "link") {
                auto link = parse_link_decl();
                if (!link) {
                    synchronize();
                    continue;
                }
                if (link->id.empty())
                    auto_id_links.push_back({*link, *link->span});
                else
                    insert_link(model, *link);
                continue;
            }
            if (t.text == "meta") {
                advance();
                auto key = expect_name("meta key");
                if (!key || !expect(TokenType::equals, "'='")) {
                    synchronize();
                    continue;
                }
                auto value = expect_string("meta value");
                if (!value) {
                    synchronize();
                    continue;
                }
                if (!model.meta.emplace(key->text, value->text).second)
                    error("duplicate meta key '" + key->text + "'", key->span);
                continue;
            }
            if (t.text == "fragment") {
                parse_fragment_decl(model, pending_fragments);
                continue;
            }
            error_here("unexpected '" + t.text + "' in model body");
            advance();
            synchronize();
        }
        expect(TokenType::rbrace, "'}'");

        // Auto link ids are assigned after all explicit ids are known.
        int next_auto = 1;
        for (auto& pending : auto_id_links) {
            std::string id;
            do {
                id = "l" + std::to_string(next_auto++);
            } while (model.has_id(id));
            pending.link.id = id;
            insert_link(model, pending.link);
        }
        for (auto& [fragment, span] : pending_fragments) {
            if (model.fragments.count(fragment.name))
                error("duplicate fragment '" + fragment.name + "'", span);
            else
                model.fragments.emplace(fragment.name, fragment);
        }

        check_model_references(model);
        return model;
    }

    void insert_element(Model& model, const Element& el) {
        if (model.has_id(el.id)) {
            error("duplicate id '" + el.id + "'", el.span.value_or(SourceSpan{source_}), "V1");
            return;
        }
        model.elements.emplace(el.id, el);
    }

    void insert_link(Model& model, const Link& link) {
        if (model.has_id(link.id)) {
            error("duplicate id '" + link.id + "'", link.span.value_or(SourceSpan{source_}), "V1");
            return;
        }
        model.links.emplace(link.id, link);
    }

    // fragment <name> { [anchor <id>] [elements [...]] [links [...]] }
    // fragment <name> [at <anchor>] from "<path>"
    void parse_fragment_decl(Model& model,
                             std::vector<std::pair<Fragment, SourceSpan>>& pending) {
        SourceSpan span = peek().span;
        advance();  // 'fragment'
        auto name = expect_name("fragment name");
        if (!name) {
            synchronize();
            return;
        }
        Fragment fragment;
        fragment.name = name->text;
        fragment.span = name->span;
        if (at_word("at") || at_word("from")) {
            if (accept_word("at")) {
                auto anchor = expect_name("anchor element id");
                if (!anchor) {
                    synchronize();
                    return;
                }
                fragment.anchor = anchor->text;
            }
            if (!expect_word("from")) {
                synchronize();
                return;
            }
            auto path = expect_string("path");
            if (!path) {
                synchronize();
                return;
            }
            import_fragment_file(model, fragment, path->text, path->span);
            pending.push_back({fragment, name->span});
            return;
        }
        if (!expect(TokenType::lbrace, "'{'")) {
            synchronize();
            return;
        }
        while (!at(TokenType::rbrace) && !at(TokenType::end_of_file)) {
            if (accept_word("anchor")) {
                auto anchor = expect_name("anchor element id");
                if (!anchor) break;
                fragment.anchor = anchor->text;
            } else if (accept_word("elements")) {
                for (auto& id : parse_id_list("element id")) fragment.elements.insert(id);
            } else if (accept_word("links")) {
                for (auto& id : parse_id_list("link id")) fragment.links.insert(id);
            } else {
                error_here("expected 'anchor', 'elements' or 'links'");
                break;
            }
        }
        expect(TokenType::rbrace, "'}'");
        pending.push_back({fragment, name->span});
    }

    // Imports a secondary-diagram model file: its elements and links join the
    // parent model and form the fragment's membership.
    void import_fragment_file(Model& model, Fragment& fragment, const std::string& rel_path,
                              const SourceSpan& span) {
        if (include_depth_ >= 8) {
            error("fragment include nesting too deep at '" + rel_path + "'", span);
            return;
        }
        std::string resolved = rel_path;
        namespace fs = std::filesystem;
        if (source_ != "<memory>" && fs::path(rel_path).is_relative())
            resolved = (fs::path(source_).parent_path() / rel_path).lexically_normal().string();
        auto text = loader_(resolved);
        if (!text) {
            error("cannot read fragment file '" + resolved + "'", span);
            return;
        }
        std::vector<Diagnostic> sub_diags;
        Parser sub(*text, resolved, loader_, sub_diags, include_depth_ + 1);
        auto sub_model = sub.parse_model_block();
        for (auto& d : sub_diags) diags_.push_back(d);
        if (!sub_model || has_errors(sub_diags)) return;
        for (const auto& [id, el] : sub_model->elements) {
            insert_element(model, el);
            fragment.elements.insert(id);
        }
        for (const auto& [id, link] : sub_model->links) {
            insert_link(model, link);
            fragment.links.insert(id);
        }
    }

    // End-of-parse resolution checks (V1 territory, reported with spans).
    void check_model_references(Model& model) {
        for (const auto& [id, link] : model.links) {
            (void)id;
            for (const std::string* endpoint : {&link.source, &link.target}) {
                if (!model.elements.count(*endpoint))
                    error("link '" + link.id + "' references unknown element '" + *endpoint + "'",
                          link.span.value_or(SourceSpan{source_}), "V1");
            }
        }
        for (const auto& [name, fragment] : model.fragments) {
            (void)name;
            SourceSpan span = fragment.span.value_or(SourceSpan{source_});
            for (const auto& id : fragment.elements)
                if (!model.elements.count(id))
                    error("fragment '" + fragment.name + "' references unknown element '" + id +
                              "'",
                          span, "V1");
            for (const auto& id : fragment.links)
                if (!model.links.count(id))
                    error("fragment '" + fragment.name + "' references unknown link '" + id + "'",
                          span, "V1");
        }
    }

    // ---- pattern ----

    std::optional<PatternDoc> parse_pattern_block() {
        if (!expect_word("pattern")) return std::nullopt;
        auto name = expect_string("pattern name");
        if (!name) return std::nullopt;
        PatternDoc doc;
        doc.name = name->text;
        doc.span = name->span;
        if (!expect(TokenType::lbrace, "'{'")) return std::nullopt;

        std::set<std::string> seen;
        auto once = [&](const std::string& field, const SourceSpan& span) {
            if (!seen.insert(field).second) {
                error("duplicate field '" + field + "'", span);
                return false;
            }
            return true;
        };

        while (!at(TokenType::rbrace) && !at(TokenType::end_of_file)) {
            const Token& t = peek();
            if (t.type != TokenType::identifier) {
                error_here("expected pattern field");
                synchronize();
                continue;
            }
            SourceSpan field_span = t.span;
            if (accept_word("meta")) {
                auto key = expect_name("meta key");
                if (!key || !expect(TokenType::equals, "'='")) {
                    synchronize();
                    continue;
                }
                auto value = expect_string("meta value");
                if (!value) continue;
                if (!doc.meta.emplace(key->text, value->text).second)
                    error("duplicate meta key '" + key->text + "'", key->span);
            } else if (accept_word("summary")) {
                auto v = expect_string("summary text");
                if (v && once("summary", field_span)) doc.summary = v->text;
            } else if (accept_word("category")) {
                auto primary = expect_name("category name");
                if (primary && once("category", field_span)) doc.category_primary = primary->text;
                if (accept_word("secondary")) {
                    auto secondary = expect_name("category name");
                    if (secondary) doc.category_secondary = secondary->text;
                }
            } else if (accept_word("dims")) {
                if (once("dims", field_span)) doc.dimensions = parse_dims_list();
                else parse_dims_list();
            } else if (accept_word("applicability")) {
                auto v = expect_string("applicability text");
                if (v && once("applicability", field_span)) doc.applicability = v->text;
            } else if (accept_word("content")) {
                auto v = expect_string("content text");
                if (v && once("content", field_span)) doc.content = v->text;
            } else if (at_word("archetype")) {
                auto archetype = parse_archetype_block();
                if (archetype && once("archetype", field_span)) doc.archetype = *archetype;
            } else if (accept_word("example")) {
                auto v = expect_string("example text");
                if (v && once("example", field_span)) doc.example = v->text;
            } else if (accept_word("discussion")) {
                auto v = expect_string("discussion text");
                if (v && once("discussion", field_span)) doc.discussion = v->text;
            } else if (accept_word("related")) {
                if (!once("related", field_span)) {
                    synchronize();
                    continue;
                }
                if (!expect(TokenType::lbracket, "'['")) continue;
                bool first = true;
                while (!at(TokenType::rbracket) && !at(TokenType::end_of_file)) {
                    if (!first && !expect(TokenType::comma, "','")) break;
                    first = false;
                    auto v = expect_string("pattern name");
                    if (!v) break;
                    doc.related.push_back(v->text);
                }
                expect(TokenType::rbracket, "']'");
            } else {
                error_here("unexpected '" + t.text + "' in pattern body");
                advance();
                synchronize();
            }
        }
        expect(TokenType::rbrace, "'}'");
        check_archetype(doc);
        return doc;
    }

    std::optional<Archetype> parse_archetype_block() {
        advance();  // 'archetype'
        if (!expect(TokenType::lbrace, "'{'")) return std::nullopt;
        Archetype archetype;
        std::set<std::string> role_names;
        while (!at(TokenType::rbrace) && !at(TokenType::end_of_file)) {
            if (accept_word("role")) {
                auto name = expect_name("role name");
                if (!name || !expect(TokenType::colon, "':'")) {
                    synchronize();
                    continue;
                }
                if (!at(TokenType::identifier)) {
                    error_here("expected element kind");
                    continue;
                }
                Token kind_tok = advance();
                auto kind = element_kind_from(kind_tok.text);
                if (!kind) {
                    error("unknown element kind '" + kind_tok.text + "'", kind_tok.span);
                    continue;
                }
                if (!role_names.insert(name->text).second) {
                    error("duplicate role '" + name->text + "'", name->span);
                    continue;
                }
                archetype.roles.push_back({name->text, *kind, name->span});
                continue;
            }
            if (accept_word("body")) {
                parse_archetype_body(archetype);
                continue;
            }
            error_here("expected 'role' or 'body'");
            advance();
            synchronize();
        }
        expect(TokenType::rbrace, "'}'");
        return archetype;
    }

    void parse_archetype_body(Archetype& archetype) {
        if (!expect(TokenType::lbrace, "'{'")) return;
        std::set<std::string> ids;
        std::vector<Link> auto_id_links;
        while (!at(TokenType::rbrace) && !at(TokenType::end_of_file)) {
            const Token& t = peek();
            if (t.type != TokenType::identifier) {
                error_here("expected body declaration");
                synchronize();
                continue;
            }
            if (auto kind = element_kind_from(t.text)) {
                auto el = parse_element_decl(*kind);
                if (!el) {
                    synchronize();
                    continue;
                }
                if (!ids.insert(el->id).second) {
                    error("duplicate id '" + el->id + "'", *el->span, "V1");
                    continue;
                }
                archetype.body_elements.push_back(*el);
                continue;
            }
            if (t.text == "link") {
                auto link = parse_link_decl();
                if (!link) {
                    synchronize();
                    continue;
                }
                if (!link->id.empty() && !ids.insert(link->id).second) {
                    error("duplicate id '" + link->id + "'", *link->span, "V1");
                    continue;
                }
                if (link->id.empty())
                    auto_id_links.push_back(*link);
                else
                    archetype.body_links.push_back(*link);
                continue;
            }
            error_here("unexpected '" + t.text + "' in archetype body");
            advance();
            synchronize();
        }
        expect(TokenType::rbrace, "'}'");
        int next_auto = 1;
        for (auto& link : auto_id_links) {
            std::string id;
            do {
                id = "l" + std::to_string(next_auto++);
            } while (ids.count(id));
            ids.insert(id);
            link.id = id;
            archetype.body_links.push_back(link);
        }
    }

    // Role references in body labels must name declared roles, and a
    // placeholder element's kind must match the role's expected kind.
    void check_archetype(PatternDoc& doc) {
        std::map<std::string, ElementKind> role_kinds;
        for (const auto& role : doc.archetype.roles) role_kinds.emplace(role.name, role.kind);
        std::set<std::string> body_ids;
        for (const auto& el : doc.archetype.body_elements) {
            body_ids.insert(el.id);
            for (const auto& ref : role_references(el.label)) {
                auto it = role_kinds.find(ref);
                if (it == role_kinds.end()) {
                    error("label of '" + el.id + "' references undeclared role '" + ref + "'",
                          el.span.value_or(SourceSpan{source_}), "P2");
                } else if (el.label == "$" + ref && el.kind != it->second) {
                    error("placeholder '" + el.id + "' is a " + to_string(el.kind) +
                              " but role '" + ref + "' expects a " + to_string(it->second),
                          el.span.value_or(SourceSpan{source_}), "P2");
                }
            }
        }
        for (const auto& link : doc.archetype.body_links) {
            for (const std::string* endpoint : {&link.source, &link.target}) {
                if (!body_ids.count(*endpoint))
                    error("archetype link '" + link.id + "' references unknown element '" +
                              *endpoint + "'",
                          link.span.value_or(SourceSpan{source_}), "V1");
            }
        }
    }

    static std::vector<std::string> role_references(const std::string& label) {
        std::vector<std::string> refs;
        for (size_t i = 0; i < label.size(); ++i) {
            if (label[i] != '$') continue;
            size_t j = i + 1;
            if (j >= label.size() || !(isalpha(static_cast<unsigned char>(label[j])) ||
                                       label[j] == '_'))
                continue;
            size_t start = j;
            while (j < label.size() && (isalnum(static_cast<unsigned char>(label[j])) ||
                                        label[j] == '_'))
                ++j;
            refs.push_back(label.substr(start, j - start));
            i = j - 1;
        }
        return refs;
    }

    // ---- catalogue ----

    std::optional<Catalogue> parse_catalogue_block() {
        if (!expect_word("catalogue")) return std::nullopt;
        auto name = expect_string("catalogue name");
        if (!name) return std::nullopt;
        Catalogue catalogue;
        catalogue.name = name->text;
        catalogue.span = name->span;
        if (!expect(TokenType::lbrace, "'{'")) return std::nullopt;

        bool have_cycle = false;
        bool have_center = false;
        std::set<std::string> member_slugs;
        while (!at(TokenType::rbrace) && !at(TokenType::end_of_file)) {
            if (at_word("cycle")) {
                Token t = advance();
                if (have_cycle) error("duplicate 'cycle'", t.span);
                have_cycle = true;
                std::set<std::string> seen;
                for (auto& cat : parse_id_list("category name")) {
                    if (!seen.insert(cat).second)
                        error("duplicate category '" + cat + "'", t.span);
                    else
                        catalogue.cycle.push_back(cat);
                }
                continue;
            }
            if (at_word("center")) {
                Token t = advance();
                if (have_center) error("duplicate 'center'", t.span);
                have_center = true;
                auto center = expect_name("category name");
                if (center) catalogue.center = center->text;
                continue;
            }
            if (at_word("pattern")) {
                SourceSpan span = peek().span;
                std::optional<PatternDoc> doc;
                if (peek(1).type == TokenType::identifier && peek(1).text == "from") {
                    advance();  // 'pattern'
                    advance();  // 'from'
                    auto path = expect_string("path");
                    if (!path) {
                        synchronize();
                        continue;
                    }
                    doc = load_member_pattern(path->text, path->span);
                } else {
                    doc = parse_pattern_block();
                }
                if (!doc) continue;
                if (!member_slugs.insert(slugify(doc->name)).second) {
                    error("duplicate pattern '" + doc->name + "' in catalogue", span);
                    continue;
                }
                catalogue.patterns.push_back(std::move(*doc));
                continue;
            }
            error_here("expected 'cycle', 'center' or 'pattern'");
            advance();
            synchronize();
        }
        expect(TokenType::rbrace, "'}'");

        if (!have_cycle || catalogue.cycle.size() < 3)
            error("catalogue needs a cycle of at least 3 categories",
                  catalogue.span.value_or(SourceSpan{source_}));
        if (!have_center)
            error("catalogue needs a center category",
                  catalogue.span.value_or(SourceSpan{source_}));
        if (have_center && std::find(catalogue.cycle.begin(), catalogue.cycle.end(),
                                     catalogue.center) != catalogue.cycle.end())
            error("center category '" + catalogue.center + "' also appears in the cycle",
                  catalogue.span.value_or(SourceSpan{source_}));

        std::set<std::string> known(catalogue.cycle.begin(), catalogue.cycle.end());
        known.insert(catalogue.center);
        for (const auto& doc : catalogue.patterns) {
            if (!known.count(doc.category_primary))
                error("pattern '" + doc.name + "' references unknown category '" +
                          doc.category_primary + "'",
                      doc.span.value_or(SourceSpan{source_}));
            if (doc.category_secondary && !known.count(*doc.category_secondary))
                error("pattern '" + doc.name + "' references unknown category '" +
                          *doc.category_secondary + "'",
                      doc.span.value_or(SourceSpan{source_}));
        }
        return catalogue;
    }

    std::optional<PatternDoc> load_member_pattern(const std::string& rel_path,
                                                  const SourceSpan& span) {
        std::string resolved = rel_path;
        namespace fs = std::filesystem;
        if (source_ != "<memory>" && fs::path(rel_path).is_relative())
            resolved = (fs::path(source_).parent_path() / rel_path).lexically_normal().string();
        auto text = loader_(resolved);
        if (!text) {
            error("cannot read pattern file '" + resolved + "'", span);
            return std::nullopt;
        }
        std::vector<Diagnostic> sub_diags;
        Parser sub(*text, resolved, loader_, sub_diags, include_depth_ + 1);
        auto doc = sub.parse_pattern_block();
        for (auto& d : sub_diags) diags_.push_back(d);
        if (has_errors(sub_diags)) return std::nullopt;
        return doc;
    }

    // ---- binding ----

    std::optional<Binding> parse_binding_lines() {
        Binding binding;
        std::set<std::string> seen;
        while (!at(TokenType::end_of_file)) {
            auto role = expect_name("role name");
            if (!role) return std::nullopt;
            if (!seen.insert(role->text).second)
                error("role '" + role->text + "' bound twice", role->span);
            if (!expect(TokenType::equals, "'='")) return std::nullopt;
            BindingEntry entry;
            entry.role = role->text;
            if (accept_word("existing")) {
                if (!expect(TokenType::colon, "':'")) return std::nullopt;
                auto id = expect_name("element id");
                if (!id) return std::nullopt;
                entry.existing_id = id->text;
            } else if (accept_word("fresh")) {
                if (!expect(TokenType::colon, "':'")) return std::nullopt;
                auto label = expect_string("label");
                if (!label) return std::nullopt;
                FreshSpec fresh;
                fresh.label = label->text;
                if (!expect_word("kind") || !expect(TokenType::equals, "'='"))
                    return std::nullopt;
                if (!at(TokenType::identifier)) {
                    error_here("expected element kind");
                    return std::nullopt;
                }
                Token kind_tok = advance();
                auto kind = element_kind_from(kind_tok.text);
                if (!kind) {
                    error("unknown element kind '" + kind_tok.text + "'", kind_tok.span);
                    return std::nullopt;
                }
                fresh.kind = *kind;
                if (accept_word("dims")) {
                    if (!expect(TokenType::equals, "'='")) return std::nullopt;
                    fresh.dimensions = parse_dims_list();
                }
                if (fresh.dimensions.empty() && !dimensions_optional(fresh.kind)) {
                    error("fresh " + std::string(to_string(fresh.kind)) + " for role '" +
                              role->text + "' must carry at least one dimension",
                          kind_tok.span);
                    return std::nullopt;
                }
                entry.fresh = fresh;
            } else {
                error_here("expected 'existing:<id>' or 'fresh:\"<label>\" kind=<kind>'");
                return std::nullopt;
            }
            binding.entries.push_back(std::move(entry));
        }
        return binding;
    }

    void expect_end() {
        if (!at(TokenType::end_of_file)) error_here("trailing content after closing '}'");
    }

private:
    std::string source_;
    FileLoader loader_;
    std::vector<Diagnostic>& diags_;
    std::vector<Token> tokens_;
    size_t pos_ = 0;
    int include_depth_ = 0;
};

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

FileLoader filesystem_loader() {
    return [](const std::string& path) { return read_file(path); };
}

ParseOutcome<Model> parse_model(std::string_view text, const std::string& source,
                                const FileLoader& loader) {
    ParseOutcome<Model> out;
    Parser parser(text, source, loader, out.diagnostics);
    auto model = parser.parse_model_block();
    parser.expect_end();
    sort_diagnostics(out.diagnostics);
    if (model && !has_errors(out.diagnostics)) out.value = std::move(*model);
    return out;
}

ParseOutcome<PatternDoc> parse_pattern(std::string_view text, const std::string& source) {
    ParseOutcome<PatternDoc> out;
    Parser parser(text, source, filesystem_loader(), out.diagnostics);
    auto doc = parser.parse_pattern_block();
    parser.expect_end();
    sort_diagnostics(out.diagnostics);
    if (doc && !has_errors(out.diagnostics)) out.value = std::move(*doc);
    return out;
}

ParseOutcome<Catalogue> parse_catalogue(std::string_view text, const std::string& source,
                                        const FileLoader& loader) {
    ParseOutcome<Catalogue> out;
    Parser parser(text, source, loader, out.diagnostics);
    auto catalogue = parser.parse_catalogue_block();
    parser.expect_end();
    sort_diagnostics(out.diagnostics);
    if (catalogue && !has_errors(out.diagnostics)) out.value = std::move(*catalogue);
    return out;
}

ParseOutcome<Binding> parse_binding(std::string_view text, const std::string& source) {
    ParseOutcome<Binding> out;
    Parser parser(text, source, filesystem_loader(), out.diagnostics);
    auto binding = parser.parse_binding_lines();
    sort_diagnostics(out.diagnostics);
    if (binding && !has_errors(out.diagnostics)) out.value = std::move(*binding);
    return out;
}

namespace {

template <typename T, typename Fn>
ParseOutcome<T> parse_file_with(const std::string& path, const FileLoader& loader, Fn&& fn) {
    auto text = loader(path);
    if (!text) {
        ParseOutcome<T> out;
        out.diagnostics.push_back(
            {Severity::error, "IO", "cannot read '" + path + "'", std::nullopt});
        return out;
    }
    return fn(*text);
}

}  // namespace

ParseOutcome<Model> parse_model_file(const std::string& path, const FileLoader& loader) {
    return parse_file_with<Model>(path, loader, [&](const std::string& text) {
        return parse_model(text, path, loader);
    });
}

ParseOutcome<PatternDoc> parse_pattern_file(const std::string& path, const FileLoader& loader) {
    return parse_file_with<PatternDoc>(path, loader, [&](const std::string& text) {
        return parse_pattern(text, path);
    });
}

ParseOutcome<Catalogue> parse_catalogue_file(const std::string& path, const FileLoader& loader) {
    return parse_file_with<Catalogue>(path, loader, [&](const std::string& text) {
        return parse_catalogue(text, path, loader);
    });
}

ParseOutcome<Binding> parse_binding_file(const std::string& path, const FileLoader& loader) {
    return parse_file_with<Binding>(path, loader, [&](const std::string& text) {
        return parse_binding(text, path);
    });
}

}  // namespace susmod
