#include "ragkit/chunker.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/jsonl.hpp"
#include "ragkit/text.hpp"

#include <json.hpp>

#include <unordered_set>

namespace ragkit {

namespace {

constexpr long kMinBudget = 32;

// A unit at one sibling level: either a whole subtree or just the owner's
// direct body text (the preamble of a section we descended into).
struct Item {
    const DocNode* node = nullptr;
    bool body_only = false;
};

struct Splitter {
    const Tokenizer& tok;
    long budget;
    const std::string& doc_id;
    std::vector<Chunk> out;
    std::unordered_set<const DocNode*> emitted_headings;

    long weight(const Item& item) const {
        return item.body_only ? tok(item.node->body) : item.node->token_count;
    }

    static void render_subtree(const DocNode& node, std::vector<std::string>& lines) {
        lines.push_back(render_heading(node.level, node.title));
        if (!node.body.empty())
            for (auto& l : split_lines(node.body)) lines.push_back(l);
        for (const auto& child : node.children) render_subtree(child, lines);
    }

    void emit(const std::vector<const DocNode*>& path, std::vector<std::string> content_lines,
              long token_count) {
        Chunk chunk;
        chunk.doc_id = doc_id;
        chunk.token_count = token_count;

        std::vector<std::string> lines;
        lines.reserve(path.size() + content_lines.size());
        std::size_t context = 0;
        bool fresh_seen = false;
        for (const DocNode* p : path) {
            chunk.heading_path.push_back(HeadingRef{p->level, p->title});
            lines.push_back(render_heading(p->level, p->title));
            if (emitted_headings.insert(p).second) {
                fresh_seen = true;
            } else if (!fresh_seen) {
                ++context;
            }
        }
        chunk.context_heading_count = context;
        for (auto& l : content_lines) lines.push_back(std::move(l));
        chunk.text = join(lines, "\n");
        out.push_back(std::move(chunk));
    }

    // Oversize body: segment on natural paragraphs, packing greedily so each
    // chunk stays as close to the budget as possible without exceeding it. A
    // single paragraph over budget becomes exactly that paragraph.
    void split_paragraph_leaf(const std::string& body, const std::vector<const DocNode*>& path) {
        std::vector<std::string> paragraphs = split_paragraphs(body);
        std::vector<std::string> pack;
        long pack_tokens = 0;
        auto flush = [&]() {
            if (pack.empty()) return;
            emit(path, {join(pack, "\n\n")}, pack_tokens);
            pack.clear();
            pack_tokens = 0;
        };
        for (auto& para : paragraphs) {
            long t = tok(para);
            if (t > budget) {
                flush();
                emit(path, {para}, t);
                continue;
            }
            if (pack_tokens + t > budget) flush();
            pack.push_back(std::move(para));
            pack_tokens += t;
        }
        flush();
    }

    void process_level(const std::vector<Item>& items, std::vector<const DocNode*>& path) {
        std::size_t i = 0;
        while (i < items.size()) {
            const Item& first = items[i];
            long w = weight(first);
            if (w > budget) {
                if (first.body_only) {
                    split_paragraph_leaf(first.node->body, path);
                } else if (first.node->children.empty()) {
                    path.push_back(first.node);
                    split_paragraph_leaf(first.node->body, path);
                    path.pop_back();
                } else {
                    // descend: the section heading joins the context path and
                    // its preamble becomes the first unit of the next level
                    path.push_back(first.node);
                    std::vector<Item> nested;
                    if (!first.node->body.empty())
                        nested.push_back(Item{first.node, true});
                    for (const auto& child : first.node->children)
                        nested.push_back(Item{&child, false});
                    process_level(nested, path);
                    path.pop_back();
                }
                ++i;
                continue;
            }

            // merge consecutive siblings while the cumulative length fits
            std::size_t j = i;
            long total = 0;
            while (j < items.size() && total + weight(items[j]) <= budget) {
                total += weight(items[j]);
                ++j;
            }
            std::vector<std::string> content;
            for (std::size_t m = i; m < j; ++m) {
                if (items[m].body_only) {
                    for (auto& l : split_lines(items[m].node->body)) content.push_back(l);
                } else {
                    render_subtree(*items[m].node, content);
                }
            }
            emit(path, std::move(content), total);
            i = j;
        }
    }
};

} // namespace

std::vector<Chunk> split_tree(const TitleTree& tree, long budget, const Tokenizer& tok) {
    if (budget < kMinBudget)
        throw Error(ErrorKind::config, "token budget must be at least " +
                                           std::to_string(kMinBudget) + ", got " +
                                           std::to_string(budget));

    Splitter splitter{tok, budget, tree.doc_id, {}, {}};
    std::vector<Item> top;
    if (!tree.root.body.empty()) top.push_back(Item{&tree.root, true});
    for (const auto& child : tree.root.children) top.push_back(Item{&child, false});

    std::vector<const DocNode*> path; // root (level 0) carries no heading
    splitter.process_level(top, path);

    for (std::size_t s = 0; s < splitter.out.size(); ++s) {
        splitter.out[s].seq = s;
        splitter.out[s].chunk_id = tree.doc_id + "#" + std::to_string(s);
    }
    return splitter.out;
}

std::string reconstruct_document(const std::vector<Chunk>& chunks) {
    std::vector<std::string> lines;
    for (const auto& chunk : chunks) {
        auto chunk_lines = split_lines(chunk.text);
        if (!lines.empty()) lines.emplace_back(); // keep paragraph boundaries between chunks
        for (std::size_t i = chunk.context_heading_count; i < chunk_lines.size(); ++i)
            lines.push_back(chunk_lines[i]);
    }
    return join(lines, "\n");
}

void write_chunks_jsonl(const std::string& path, const std::vector<Chunk>& chunks) {
    JsonlWriter writer(path);
    for (const auto& chunk : chunks) {
        nlohmann::ordered_json j;
        j["chunk_id"] = chunk.chunk_id;
        j["doc_id"] = chunk.doc_id;
        j["seq"] = chunk.seq;
        auto path_json = nlohmann::ordered_json::array();
        for (const auto& h : chunk.heading_path)
            path_json.push_back(nlohmann::ordered_json::array({h.level, h.title}));
        j["heading_path"] = std::move(path_json);
        j["text"] = chunk.text;
        j["token_count"] = chunk.token_count;
        writer.write(j);
    }
}

std::vector<Chunk> read_chunks_jsonl(const std::string& path) {
    std::vector<Chunk> chunks;
    for_each_jsonl(path, [&](const nlohmann::json& j, std::size_t line_no) {
        Chunk chunk;
        try {
            chunk.chunk_id = j.at("chunk_id").get<std::string>();
            chunk.doc_id = j.at("doc_id").get<std::string>();
            chunk.seq = j.at("seq").get<std::size_t>();
            for (const auto& pair : j.at("heading_path"))
                chunk.heading_path.push_back(
                    HeadingRef{pair.at(0).get<int>(), pair.at(1).get<std::string>()});
            chunk.text = j.at("text").get<std::string>();
            chunk.token_count = j.at("token_count").get<long>();
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::data, path + ":" + std::to_string(line_no) +
                                             ": bad chunk record: " + e.what());
        }
        chunks.push_back(std::move(chunk));
    });
    return chunks;
}

} // namespace ragkit
