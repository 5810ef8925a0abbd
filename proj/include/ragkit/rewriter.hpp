#pragma once

#include "ragkit/chat.hpp"
#include "ragkit/prompt_template.hpp"

#include <memory>
#include <string>
#include <vector>

namespace ragkit {

// The ordered rewritten-query set produced for one user query. Never empty:
// when the model response yields nothing usable the original query is used
// and used_fallback is set.
struct RewriteSet {
    std::string original;
    std::vector<std::string> rewrites;
    std::string raw_response; // audit trail
    bool used_fallback = false;
};

// Parses a model response into rewrites. Precedence: numbered lines, then
// bulleted lines, then semicolon/newline splitting, then the whole response
// as a single rewrite. Duplicates are dropped case- and whitespace-
// insensitively keeping the first occurrence; at most max_rewrites survive.
std::vector<std::string> parse_rewrites(std::string_view response, std::size_t max_rewrites);

class Rewriter {
  public:
    // Pass-through rewriter: Q* = [q]. Used offline and for ablations.
    static Rewriter identity();

    Rewriter(std::shared_ptr<ChatEndpoint> endpoint, PromptTemplate tmpl,
             std::size_t max_rewrites = 4, double temperature = 0.0);

    // Pre: q nonempty. Transport failures propagate carrying q so the caller
    // can apply its skip/abort policy.
    RewriteSet rewrite(const std::string& q) const;

    bool is_identity() const { return !endpoint_; }
    const PromptTemplate& prompt_template() const { return template_; }

  private:
    Rewriter() = default;

    std::shared_ptr<ChatEndpoint> endpoint_;
    PromptTemplate template_;
    std::size_t max_rewrites_ = 4;
    double temperature_ = 0.0;
};

} // namespace ragkit
