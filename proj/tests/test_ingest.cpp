#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

#include "ragkit/chunker.hpp"
#include "ragkit/errors.hpp"
#include "ragkit/exam_items.hpp"
#include "ragkit/text.hpp"
#include "ragkit/title_tree.hpp"
#include "ragkit/tokenizer.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ragkit;
namespace rt = ragkit::testing;

namespace {

std::string repeat_cjk(std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += "\xE6\xB5\x8B"; // 测
    return out;
}

std::string body_of_tokens(long n, const std::string& stem = "w") {
    std::vector<std::string> words;
    for (long i = 0; i < n; ++i) words.push_back(stem + std::to_string(i));
    return join(words, " ");
}

} // namespace

TEST_CASE("count_tokens: whitespace-plus-CJK rule") {
    CHECK(count_tokens("") == 0);
    CHECK(count_tokens("hello world") == 2);
    CHECK(count_tokens("  hello   world  ") == 2);
    CHECK(count_tokens("hello, world!") == 2); // punctuation rides along with its run
    CHECK(count_tokens(repeat_cjk(1000)) == 1000);
    CHECK(count_tokens("abc" + repeat_cjk(2) + "def") == 4); // run, cjk, cjk, run
    CHECK(count_tokens("one\ntwo\tthree") == 3);
}

TEST_CASE("count_tokens: monotone under concatenation") {
    SplitMix64 rng(101);
    for (int i = 0; i < 200; ++i) {
        std::string a = rt::random_paragraph(rng, 0, 12);
        std::string b = rt::random_paragraph(rng, 0, 12);
        long ab = count_tokens(a + b);
        CHECK(ab >= count_tokens(a));
        CHECK(ab >= count_tokens(b));
    }
}

TEST_CASE("split_at_token_limit: exact partition within limit") {
    SplitMix64 rng(202);
    for (int i = 0; i < 50; ++i) {
        std::string text = rt::random_paragraph(rng, 1, 120);
        long limit = 1 + static_cast<long>(rng.next_below(20));
        auto pieces = split_at_token_limit(text, limit);
        std::string glued;
        for (const auto& p : pieces) {
            CHECK(count_tokens(p) <= limit);
            glued += p;
        }
        CHECK(glued == text);
    }
}

TEST_CASE("build_title_tree: basic structure") {
    auto tree = build_title_tree("# A\n## B\n## C\n", "doc");
    REQUIRE(tree.root.children.size() == 1);
    const DocNode& a = tree.root.children[0];
    CHECK(a.title == "A");
    CHECK(a.level == 1);
    REQUIRE(a.children.size() == 2);
    CHECK(a.children[0].title == "B");
    CHECK(a.children[1].title == "C");
}

TEST_CASE("build_title_tree: preamble, level skips, token caching") {
    auto tree = build_title_tree("intro text here\n# A\nbody a\n### deep\nbody deep\n", "doc");
    CHECK(tree.root.body == "intro text here");
    REQUIRE(tree.root.children.size() == 1);
    const DocNode& a = tree.root.children[0];
    REQUIRE(a.children.size() == 1);
    CHECK(a.children[0].level == 3); // level skip attaches as a direct child
    CHECK(a.children[0].title == "deep");
    CHECK(a.token_count == count_tokens("body a") + count_tokens("body deep"));
    CHECK(tree.root.token_count == a.token_count + count_tokens("intro text here"));
}

TEST_CASE("build_title_tree: invariants on levels and order") {
    SplitMix64 rng(7);
    for (int i = 0; i < 20; ++i) {
        std::string doc = rt::random_document(rng.next());
        auto tree = build_title_tree(doc, "doc");
        std::function<void(const DocNode&)> walk = [&](const DocNode& node) {
            for (const auto& child : node.children) {
                CHECK(child.level > node.level);
                walk(child);
            }
        };
        walk(tree.root);
    }
}

TEST_CASE("build_title_tree: decode error carries byte offset") {
    std::string bad = "# ok\nbody\n";
    bad += static_cast<char>(0xFF);
    try {
        build_title_tree(bad, "doc");
        FAIL("expected decode error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::decode);
        CHECK(std::string(e.what()).find(std::to_string(bad.size() - 1)) != std::string::npos);
    }
}

TEST_CASE("build_title_tree: depth-first flatten reproduces heading order (50 random docs)") {
    // oracle: a plain line scan of the source, independent of the stack builder
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        std::string doc = rt::random_document(seed);
        auto tree = build_title_tree(doc, "doc");
        CHECK(flatten_headings(tree.root) == rt::scan_heading_lines(doc));
    }
}

TEST_CASE("split_tree: document within budget yields exactly one chunk") {
    auto tree = build_title_tree("# A\n" + body_of_tokens(10) + "\n## B\n" + body_of_tokens(5) + "\n",
                                 "doc");
    auto chunks = split_tree(tree, 100);
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].chunk_id == "doc#0");
    CHECK(chunks[0].token_count == 15);
    CHECK(chunks[0].heading_path.empty());
    CHECK(rt::reconstruction_holds("# A\n" + body_of_tokens(10) + "\n## B\n" + body_of_tokens(5) + "\n",
                                   chunks));
}

TEST_CASE("split_tree: budget below 32 is a configuration error") {
    auto tree = build_title_tree("# A\nbody\n", "doc");
    CHECK_THROWS_AS(split_tree(tree, 31), Error);
}

TEST_CASE("split_tree: sibling merge follows the greedy prefix rule") {
    // weights [30, 30, 50, 10] with budget 70 merge as {[30,30],[50,10]}
    std::string doc = "# S1\n" + body_of_tokens(30, "a") + "\n# S2\n" + body_of_tokens(30, "b") +
                      "\n# S3\n" + body_of_tokens(50, "c") + "\n# S4\n" + body_of_tokens(10, "d") +
                      "\n";
    auto tree = build_title_tree(doc, "doc");
    auto chunks = split_tree(tree, 70);
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].token_count == 60);
    CHECK(chunks[1].token_count == 60);
    CHECK(chunks[0].text.find("# S1") != std::string::npos);
    CHECK(chunks[0].text.find("# S2") != std::string::npos);
    CHECK(chunks[0].text.find("# S3") == std::string::npos);
    CHECK(chunks[1].text.find("# S3") != std::string::npos);
    CHECK(chunks[1].text.find("# S4") != std::string::npos);

    // exhaustive oracle over this fixture: no adjacent merge was left on the table
    CHECK(rt::greedy_maximality_holds(chunks, 70));
}

TEST_CASE("split_tree: descent repeats parent headings for every split") {
    std::string doc = "# Guide\n## Part\n### Alpha\n" + body_of_tokens(40, "a") + "\n### Beta\n" +
                      body_of_tokens(40, "b") + "\n";
    auto tree = build_title_tree(doc, "doc");
    auto chunks = split_tree(tree, 50);
    REQUIRE(chunks.size() == 2);
    for (const auto& chunk : chunks) {
        CHECK(starts_with(chunk.text, "# Guide\n## Part\n"));
        REQUIRE(chunk.heading_path.size() == 2);
        CHECK(chunk.heading_path[0].title == "Guide");
        CHECK(chunk.heading_path[1].title == "Part");
        CHECK(chunk.heading_path[0].level < chunk.heading_path[1].level);
    }
    CHECK(chunks[0].context_heading_count == 0); // first chunk owns the headings
    CHECK(chunks[1].context_heading_count == 2); // repeats both parents
    CHECK(rt::reconstruction_holds(doc, chunks));
}

TEST_CASE("split_tree: oversize leaf segments on natural paragraphs") {
    std::string doc = "# Long\n";
    for (int p = 0; p < 6; ++p) doc += body_of_tokens(20, "p" + std::to_string(p)) + "\n\n";
    auto tree = build_title_tree(doc, "doc");
    auto chunks = split_tree(tree, 50);
    REQUIRE(chunks.size() == 3); // 40 + 40 + 40
    for (const auto& chunk : chunks) {
        CHECK(chunk.token_count == 40);
        CHECK(chunk.heading_path.size() == 1);
        CHECK(starts_with(chunk.text, "# Long\n"));
    }
    CHECK(rt::reconstruction_holds(doc, chunks));
    CHECK(rt::greedy_maximality_holds(chunks, 50));
}

TEST_CASE("split_tree: a single paragraph over budget stays whole") {
    std::string doc = "# Big\n" + body_of_tokens(80) + "\n\n" + "tail paragraph here\n";
    auto tree = build_title_tree(doc, "doc");
    auto chunks = split_tree(tree, 40);
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].token_count == 80); // the oversize paragraph, alone
    CHECK(rt::budget_holds(chunks[0], 40));
    CHECK(rt::budget_holds(chunks[1], 40));
    CHECK(rt::reconstruction_holds(doc, chunks));
}

TEST_CASE("split_tree: invariant suite over random documents") {
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
        std::string doc = rt::random_document(seed);
        auto tree = build_title_tree(doc, "d" + std::to_string(seed));
        long budget = 32 + static_cast<long>(seed % 80);
        auto chunks = split_tree(tree, budget);

        REQUIRE(!chunks.empty());
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            CHECK(chunks[i].seq == i); // consecutive from 0 in source order
            CHECK(chunks[i].chunk_id == tree.doc_id + "#" + std::to_string(i));
            CHECK(rt::budget_holds(chunks[i], budget));
            for (std::size_t h = 1; h < chunks[i].heading_path.size(); ++h)
                CHECK(chunks[i].heading_path[h - 1].level < chunks[i].heading_path[h].level);
        }
        CHECK(rt::reconstruction_holds(doc, chunks));
        CHECK(rt::greedy_maximality_holds(chunks, budget));

        // determinism: byte-identical on a second run
        auto again = split_tree(build_title_tree(doc, tree.doc_id), budget);
        REQUIRE(again.size() == chunks.size());
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            CHECK(again[i].text == chunks[i].text);
            CHECK(again[i].token_count == chunks[i].token_count);
        }
    }
}

TEST_CASE("split_tree: headingless and empty documents") {
    auto flat = build_title_tree("just a paragraph\n\nand another one\n", "flat");
    auto chunks = split_tree(flat, 100);
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].heading_path.empty());
    CHECK(rt::reconstruction_holds("just a paragraph\n\nand another one\n", chunks));

    auto empty = build_title_tree("", "empty");
    CHECK(split_tree(empty, 100).empty());
}

TEST_CASE("chunk jsonl round trip") {
    std::string doc = rt::random_document(77);
    auto chunks = split_tree(build_title_tree(doc, "doc77"), 64);
    auto path = std::filesystem::temp_directory_path() / "ragkit_chunks_test.jsonl";
    write_chunks_jsonl(path.string(), chunks);
    auto loaded = read_chunks_jsonl(path.string());
    REQUIRE(loaded.size() == chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        CHECK(loaded[i].chunk_id == chunks[i].chunk_id);
        CHECK(loaded[i].text == chunks[i].text);
        CHECK(loaded[i].token_count == chunks[i].token_count);
        CHECK(loaded[i].heading_path == chunks[i].heading_path);
    }
    std::filesystem::remove(path);
}

// ---------------------------------------------------------------------------
// exam items

TEST_CASE("parse_exam_items: inline single-line item") {
    auto result = parse_exam_items("1. What is X? A) p B) q Answer: A", "default");
    REQUIRE(result.items.size() == 1);
    const ExamItem& item = result.items[0];
    CHECK(item.stem == "What is X?");
    REQUIRE(item.options.size() == 2);
    CHECK(item.options.at("A") == "p");
    CHECK(item.options.at("B") == "q");
    CHECK(item.answer_labels == std::set<std::string>{"A"});
    CHECK(result.warnings.empty());
}

TEST_CASE("parse_exam_items: empty input") {
    auto result = parse_exam_items("", "default");
    CHECK(result.items.empty());
    CHECK(result.warnings.empty());
}

TEST_CASE("parse_exam_items: well-formed plus truncated item") {
    std::string raw = "1. Pick one. A) yes B) no Answer: B Explanation: because\n"
                      "2. Truncated question with no answer marker A) x B) y\n";
    auto result = parse_exam_items(raw, "default");
    REQUIRE(result.items.size() == 1);
    CHECK(result.items[0].answer_labels == std::set<std::string>{"B"});
    CHECK(result.items[0].explanation == "because");
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].line_begin == 2);
    CHECK(result.warnings[0].line_end == 2);
}

TEST_CASE("parse_exam_items: multi-select and free answer") {
    std::string raw = "1. Select all. A) a B) b C) c Answer: AC\n"
                      "2. Describe the filing duty.\nAnswer: submit within ten days\n";
    auto result = parse_exam_items(raw, "default");
    REQUIRE(result.items.size() == 2);
    CHECK(result.items[0].answer_labels == std::set<std::string>{"A", "C"});
    CHECK(result.items[1].options.empty());
    CHECK(result.items[1].answer_text == "submit within ten days");
}

TEST_CASE("parse_exam_items: answer naming a missing option is skipped") {
    auto result = parse_exam_items("1. Q? A) one B) two Answer: C", "default");
    CHECK(result.items.empty());
    REQUIRE(result.warnings.size() == 1);
}

TEST_CASE("parse_exam_items: unknown profile is a configuration error") {
    CHECK_THROWS_AS(parse_exam_items("1. x Answer: y", "nope"), Error);
}

TEST_CASE("parse_exam_items: zh profile markers") {
    auto result = parse_exam_items("1. 问题 A) 甲 B) 乙 答案: B 解析: 说明文字", "zh");
    REQUIRE(result.items.size() == 1);
    CHECK(result.items[0].answer_labels == std::set<std::string>{"B"});
    CHECK(result.items[0].explanation == "说明文字");
}

TEST_CASE("normalize_markdown: idempotent and whitespace-insensitive") {
    std::string doc = "# A  \n\n\nbody  line\n\n\n\n## B\nmore\n\n";
    std::string once = normalize_markdown(doc);
    CHECK(normalize_markdown(once) == once);
    CHECK(once.find("\n\n\n") == std::string::npos);
}
