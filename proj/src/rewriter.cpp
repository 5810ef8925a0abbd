#include "ragkit/rewriter.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/text.hpp"

#include <regex>
#include <unordered_set>

namespace ragkit {

namespace {

std::string dedup_key(std::string_view s) {
    return collapse_whitespace(to_lower(s));
}

std::vector<std::string> dedup_and_cap(std::vector<std::string> candidates,
                                       std::size_t max_rewrites) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (auto& c : candidates) {
        std::string t = trim(c);
        if (t.empty()) continue;
        if (!seen.insert(dedup_key(t)).second) continue;
        out.push_back(std::move(t));
        if (out.size() == max_rewrites) break;
    }
    return out;
}

} // namespace

std::vector<std::string> parse_rewrites(std::string_view response, std::size_t max_rewrites) {
    if (max_rewrites == 0) max_rewrites = 1;
    static const std::regex numbered(R"(^\s*\d{1,3}\s*(\.|\)|、|．)\s*(.+)$)");
    static const std::regex bulleted(R"(^\s*(-|\*|•|·)\s+(.+)$)");

    auto lines = split_lines(response);

    std::vector<std::string> numbered_hits;
    std::vector<std::string> bullet_hits;
    for (const auto& line : lines) {
        std::smatch m;
        if (std::regex_match(line, m, numbered)) numbered_hits.push_back(m[2].str());
        else if (std::regex_match(line, m, bulleted)) bullet_hits.push_back(m[2].str());
    }
    if (!numbered_hits.empty()) return dedup_and_cap(std::move(numbered_hits), max_rewrites);
    if (!bullet_hits.empty()) return dedup_and_cap(std::move(bullet_hits), max_rewrites);

    // fall back to splitting on newlines and semicolons; a response without
    // either yields itself as the single candidate
    std::vector<std::string> pieces;
    std::string current;
    std::string_view text = response;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '\n' || text[i] == ';') {
            pieces.push_back(current);
            current.clear();
            ++i;
        } else if (text.substr(i, 3) == "\xEF\xBC\x9B") { // full-width semicolon
            pieces.push_back(current);
            current.clear();
            i += 3;
        } else {
            current.push_back(text[i]);
            ++i;
        }
    }
    pieces.push_back(current);
    return dedup_and_cap(std::move(pieces), max_rewrites);
}

Rewriter Rewriter::identity() {
    return Rewriter();
}

Rewriter::Rewriter(std::shared_ptr<ChatEndpoint> endpoint, PromptTemplate tmpl,
                   std::size_t max_rewrites, double temperature)
    : endpoint_(std::move(endpoint)), template_(std::move(tmpl)),
      max_rewrites_(max_rewrites == 0 ? 1 : max_rewrites), temperature_(temperature) {
    if (!endpoint_) throw Error(ErrorKind::config, "rewriter requires a chat endpoint");
}

RewriteSet Rewriter::rewrite(const std::string& q) const {
    if (trim(q).empty()) throw Error(ErrorKind::data, "query must be nonempty");

    RewriteSet set;
    set.original = q;
    if (!endpoint_) {
        set.rewrites = {q};
        return set;
    }

    std::string prompt = assemble_prompt(template_, q);
    std::string response;
    try {
        response = endpoint_->complete({ChatMessage{"user", prompt}}, temperature_);
    } catch (const Error& e) {
        Error annotated(e.kind(), std::string(e.what()) + " (query: " + q + ")", "rewrite");
        throw annotated;
    }

    set.raw_response = response;
    set.rewrites = parse_rewrites(response, max_rewrites_);
    if (set.rewrites.empty()) {
        set.rewrites = {q};
        set.used_fallback = true;
    }
    return set;
}

} // namespace ragkit
