#pragma once

#include "ragkit/chunker.hpp"
#include "ragkit/hashing.hpp"
#include "ragkit/text.hpp"
#include "ragkit/title_tree.hpp"
#include "ragkit/tokenizer.hpp"

#include <string>
#include <vector>

namespace ragkit::testing {

// ---------------------------------------------------------------------------
// random structured document generator (seeded, deterministic)

inline std::string random_word(SplitMix64& rng) {
    static const char* kWords[] = {"ledger",   "audit",    "equity",   "bond",    "provision",
                                   "disclosure", "issuer", "sponsor",  "filing",  "statement",
                                   "liability", "asset",   "revenue",  "measure", "report",
                                   "capital",  "market",   "control",  "policy",  "review"};
    return kWords[rng.next_below(sizeof(kWords) / sizeof(kWords[0]))];
}

inline std::string random_paragraph(SplitMix64& rng, std::size_t min_words = 4,
                                    std::size_t max_words = 40) {
    std::size_t n = min_words + rng.next_below(max_words - min_words + 1);
    std::vector<std::string> words;
    words.reserve(n);
    for (std::size_t i = 0; i < n; ++i) words.push_back(random_word(rng));
    return join(words, " ");
}

// Markdown document with nested headings (occasionally skipping levels),
// multi-paragraph bodies and an optional preamble before the first heading.
inline std::string random_document(std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::string> lines;

    if (rng.next_below(3) == 0) {
        lines.push_back(random_paragraph(rng));
        lines.emplace_back();
    }

    std::size_t sections = 2 + rng.next_below(6);
    int level = 1;
    std::size_t heading_no = 0;
    for (std::size_t s = 0; s < sections; ++s) {
        // wander up and down the hierarchy, sometimes skipping a level down
        std::uint64_t move = rng.next_below(4);
        if (move == 0 && level > 1) level -= static_cast<int>(1 + rng.next_below(static_cast<std::uint64_t>(level - 1)));
        else if (move >= 2 && level < 5) level += static_cast<int>(1 + rng.next_below(2));
        if (level < 1) level = 1;
        if (level > 6) level = 6;

        lines.push_back(std::string(static_cast<std::size_t>(level), '#') + " Heading " +
                        std::to_string(heading_no++) + " " + random_word(rng));
        std::size_t paragraphs = rng.next_below(4);
        for (std::size_t p = 0; p < paragraphs; ++p) {
            lines.push_back(random_paragraph(rng));
            lines.emplace_back();
        }
    }
    return join(lines, "\n") + "\n";
}

// ---------------------------------------------------------------------------
// independent chunker oracles; these re-derive facts from chunk text alone

// Line-scan of the source: every heading line in order. Independent of the
// tree builder's stack logic.
inline std::vector<std::pair<int, std::string>> scan_heading_lines(std::string_view doc) {
    std::vector<std::pair<int, std::string>> out;
    for (auto& line : split_lines(doc)) {
        int level = 0;
        std::string title;
        if (parse_heading_line(line, level, title)) out.emplace_back(level, title);
    }
    return out;
}

struct FirstUnit {
    bool starts_with_heading = false;
    long tokens = 0;
};

// Token weight of the first mergeable unit of a chunk: the leading section
// subtree when the content opens with a heading, else the leading paragraph.
inline FirstUnit first_unit(const Chunk& chunk) {
    auto lines = split_lines(chunk.text);
    std::vector<std::string> rest(lines.begin() + static_cast<std::ptrdiff_t>(std::min(
                                      chunk.heading_path.size(), lines.size())),
                                  lines.end());
    FirstUnit unit;
    if (rest.empty()) return unit;

    int level = 0;
    std::string title;
    if (parse_heading_line(rest.front(), level, title)) {
        unit.starts_with_heading = true;
        int top_level = level;
        std::string body;
        for (std::size_t i = 1; i < rest.size(); ++i) {
            int l = 0;
            std::string t;
            if (parse_heading_line(rest[i], l, t)) {
                if (l <= top_level) break;
                continue; // nested heading: body continues, heading itself is token-free
            }
            body += rest[i];
            body += "\n";
        }
        unit.tokens = count_tokens(body);
    } else {
        std::string para;
        for (const auto& line : rest) {
            if (is_blank_line(line)) break;
            para += line;
            para += "\n";
        }
        unit.tokens = count_tokens(para);
    }
    return unit;
}

inline bool has_heading_beyond_path(const Chunk& chunk) {
    auto lines = split_lines(chunk.text);
    for (std::size_t i = chunk.heading_path.size(); i < lines.size(); ++i) {
        int level = 0;
        std::string title;
        if (parse_heading_line(lines[i], level, title)) return true;
    }
    return false;
}

// Budget invariant: within budget, or a single natural paragraph.
inline bool budget_holds(const Chunk& chunk, long budget) {
    if (chunk.token_count <= budget) return true;
    auto lines = split_lines(chunk.text);
    for (std::size_t i = chunk.heading_path.size(); i < lines.size(); ++i) {
        int level = 0;
        std::string title;
        if (parse_heading_line(lines[i], level, title)) return false; // sections, not a paragraph
        if (is_blank_line(lines[i])) return false;                    // more than one paragraph
    }
    return true;
}

// Greedy maximality over adjacent same-path chunks: the next chunk's first
// unit must not have fit into the previous chunk. Pairs whose previous chunk
// carries no heading of its own are skipped (a paragraph-split tail followed
// by fresh sections restarts the merge legitimately).
inline bool greedy_maximality_holds(const std::vector<Chunk>& chunks, long budget) {
    for (std::size_t i = 1; i < chunks.size(); ++i) {
        const Chunk& prev = chunks[i - 1];
        const Chunk& next = chunks[i];
        if (prev.heading_path != next.heading_path) continue;
        FirstUnit unit = first_unit(next);
        if (unit.starts_with_heading && !has_heading_beyond_path(prev)) continue;
        if (prev.token_count + unit.tokens <= budget) return false;
    }
    return true;
}

inline bool reconstruction_holds(std::string_view original, const std::vector<Chunk>& chunks) {
    return normalize_markdown(reconstruct_document(chunks)) == normalize_markdown(original);
}

} // namespace ragkit::testing
