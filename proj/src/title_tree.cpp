#include "ragkit/title_tree.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/text.hpp"

#include <cctype>

namespace ragkit {

bool parse_heading_line(std::string_view line, int& level, std::string& title) {
    std::size_t hashes = 0;
    while (hashes < line.size() && line[hashes] == '#') ++hashes;
    if (hashes == 0 || hashes > 6) return false;
    if (hashes < line.size() && line[hashes] != ' ' && line[hashes] != '\t') return false;

    std::string_view rest = line.substr(hashes);
    std::string t = trim(rest);
    // optional ATX closing hashes: "## Foo ##"
    std::size_t end = t.size();
    while (end > 0 && t[end - 1] == '#') --end;
    if (end < t.size()) {
        if (end == 0 || std::isspace(static_cast<unsigned char>(t[end - 1])))
            t = trim(std::string_view(t).substr(0, end));
    }
    level = static_cast<int>(hashes);
    title = std::move(t);
    return true;
}

std::string render_heading(int level, std::string_view title) {
    std::string out(static_cast<std::size_t>(level), '#');
    if (!title.empty()) {
        out.push_back(' ');
        out.append(title);
    }
    return out;
}

namespace {

// Trim surrounding blank lines, collapse interior blank runs, right-trim.
std::string normalize_body(const std::vector<std::string>& lines) {
    std::vector<std::string> out;
    for (const auto& raw : lines) {
        std::string line = rtrim(raw);
        if (line.empty()) {
            if (out.empty() || out.back().empty()) continue;
            out.emplace_back();
        } else {
            out.push_back(std::move(line));
        }
    }
    while (!out.empty() && out.back().empty()) out.pop_back();
    return join(out, "\n");
}

long compute_token_counts(DocNode& node, const Tokenizer& tok) {
    long total = tok(node.body);
    for (auto& child : node.children) total += compute_token_counts(child, tok);
    node.token_count = total;
    return total;
}

} // namespace

TitleTree build_title_tree(std::string_view markdown_doc, std::string doc_id, const Tokenizer& tok) {
    std::size_t bad = 0;
    if (!validate_utf8(markdown_doc, &bad))
        throw Error(ErrorKind::decode,
                    "document '" + doc_id + "' is not valid UTF-8 at byte offset " + std::to_string(bad));

    TitleTree tree;
    tree.doc_id = std::move(doc_id);
    tree.root = DocNode{};

    // Stack of open nodes; bodies are collected per node and normalized once
    // the node closes.
    struct Open {
        DocNode node;
        std::vector<std::string> body_lines;
    };
    std::vector<Open> stack;
    stack.push_back(Open{DocNode{}, {}});

    // Body lines only accumulate while a node is top of stack, i.e. before its
    // first subheading; children attach in source order as they close.
    auto close_top = [&stack]() {
        Open top = std::move(stack.back());
        stack.pop_back();
        top.node.body = normalize_body(top.body_lines);
        stack.back().node.children.push_back(std::move(top.node));
    };

    for (auto& line : split_lines(markdown_doc)) {
        int level = 0;
        std::string title;
        if (parse_heading_line(line, level, title)) {
            while (stack.back().node.level >= level) close_top();
            Open open;
            open.node.level = level;
            open.node.title = std::move(title);
            stack.push_back(std::move(open));
        } else {
            stack.back().body_lines.push_back(line);
        }
    }
    while (stack.size() > 1) close_top();

    stack.back().node.body = normalize_body(stack.back().body_lines);
    tree.root = std::move(stack.back().node);
    compute_token_counts(tree.root, tok);
    return tree;
}

std::string normalize_markdown(std::string_view text) {
    std::vector<std::string> out;
    bool last_was_heading = false;
    for (auto& raw : split_lines(text)) {
        std::string line = rtrim(raw);
        int level = 0;
        std::string title;
        if (parse_heading_line(line, level, title)) {
            while (!out.empty() && out.back().empty()) out.pop_back();
            out.push_back(render_heading(level, title));
            last_was_heading = true;
        } else if (line.empty()) {
            if (out.empty() || out.back().empty() || last_was_heading) continue;
            out.emplace_back();
        } else {
            out.push_back(std::move(line));
            last_was_heading = false;
        }
    }
    while (!out.empty() && out.back().empty()) out.pop_back();
    return join(out, "\n");
}

namespace {

void flatten(const DocNode& node, std::vector<std::pair<int, std::string>>& out) {
    for (const auto& child : node.children) {
        out.emplace_back(child.level, child.title);
        flatten(child, out);
    }
}

} // namespace

std::vector<std::pair<int, std::string>> flatten_headings(const DocNode& root) {
    std::vector<std::pair<int, std::string>> out;
    flatten(root, out);
    return out;
}

} // namespace ragkit
