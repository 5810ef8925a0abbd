#pragma once

#include "ragkit/tokenizer.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ragkit {

// One node of a document title tree. The synthetic root has level 0 and an
// empty title; children's levels are strictly greater than the parent's, and
// sibling order is source order. token_count caches tokenizer(body) plus the
// token counts of all descendants.
struct DocNode {
    std::string title;
    int level = 0;
    std::string body;
    std::vector<DocNode> children;
    long token_count = 0;
};

struct TitleTree {
    std::string doc_id;
    DocNode root;
};

// Parses `#`-prefixed markdown headings into a title tree. Text before the
// first heading becomes the root body. Heading levels may skip (a level L+2
// under level L attaches as a direct child). Non-UTF-8 input raises a decode
// error naming the byte offset.
TitleTree build_title_tree(std::string_view markdown_doc, std::string doc_id,
                           const Tokenizer& tok = default_tokenizer());

// Heading-line helpers shared with the chunker and its tests.
bool parse_heading_line(std::string_view line, int& level, std::string& title);
std::string render_heading(int level, std::string_view title);

// Canonical whitespace form used by the reconstruction invariant: lines are
// right-trimmed, heading lines re-rendered, blank runs collapsed to one line,
// and blanks adjacent to headings dropped.
std::string normalize_markdown(std::string_view text);

// Depth-first (level, title) sequence, root excluded; test oracle hook.
std::vector<std::pair<int, std::string>> flatten_headings(const DocNode& root);

} // namespace ragkit
