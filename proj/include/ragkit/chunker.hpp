#pragma once

#include "ragkit/title_tree.hpp"
#include "ragkit/tokenizer.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ragkit {

struct HeadingRef {
    int level = 0;
    std::string title;

    bool operator==(const HeadingRef&) const = default;
};

// The unit of retrieval and of CPT samples: a contiguous markdown slice that
// re-emits its heading ancestry before the body. token_count covers body text
// only; heading lines never count against the budget.
struct Chunk {
    std::string chunk_id; // "{doc_id}#{seq}"
    std::string doc_id;
    std::size_t seq = 0;
    std::vector<HeadingRef> heading_path;
    std::string text;
    long token_count = 0;

    // How many leading heading lines of `text` repeat headings already
    // emitted by an earlier chunk of the same document. Not serialized;
    // enables exact reconstruction of the source document.
    std::size_t context_heading_count = 0;
};

// Depth-first split of a title tree under token budget `n`:
// whole sections merge greedily while their cumulative body length stays
// within budget; oversize sections are entered; oversize leaves are segmented
// on blank-line paragraphs (a single oversize paragraph becomes its own
// chunk). Budgets below 32 are configuration errors.
std::vector<Chunk> split_tree(const TitleTree& tree, long budget,
                              const Tokenizer& tok = default_tokenizer());

// Splices chunk texts back together, dropping repeated context headings.
// For any document, normalize_markdown of this equals normalize_markdown of
// the source.
std::string reconstruct_document(const std::vector<Chunk>& chunks);

void write_chunks_jsonl(const std::string& path, const std::vector<Chunk>& chunks);
std::vector<Chunk> read_chunks_jsonl(const std::string& path);

} // namespace ragkit
