#include "ragkit/tokenizer.hpp"

#include "ragkit/text.hpp"

#include <cctype>

namespace ragkit {

namespace {

bool is_space_cp(char32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
           cp == 0x3000; // ideographic space
}

// Byte offsets at which a token ends; used for budget-respecting hard splits.
void scan_tokens(std::string_view text, long* count, std::vector<std::size_t>* ends) {
    long n = 0;
    bool in_run = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t at = pos;
        char32_t cp = decode_utf8(text, pos);
        if (is_space_cp(cp)) {
            if (in_run && ends) ends->push_back(at);
            in_run = false;
        } else if (is_cjk(cp)) {
            if (in_run && ends) ends->push_back(at);
            in_run = false;
            ++n;
            if (ends) ends->push_back(pos);
        } else {
            if (!in_run) ++n;
            in_run = true;
        }
    }
    if (in_run && ends) ends->push_back(text.size());
    if (count) *count = n;
}

} // namespace

long count_tokens(std::string_view text) {
    long n = 0;
    scan_tokens(text, &n, nullptr);
    return n;
}

const Tokenizer& default_tokenizer() {
    static const Tokenizer tok = [](std::string_view s) { return count_tokens(s); };
    return tok;
}

std::vector<std::string> split_at_token_limit(std::string_view text, long max_tokens,
                                              const Tokenizer& tok) {
    if (max_tokens < 1) max_tokens = 1;
    std::vector<std::size_t> ends;
    scan_tokens(text, nullptr, &ends);
    if (ends.empty()) return text.empty() ? std::vector<std::string>{} : std::vector<std::string>{std::string(text)};

    std::vector<std::string> pieces;
    std::size_t start = 0;
    long in_piece = 0;
    for (std::size_t t = 0; t < ends.size(); ++t) {
        ++in_piece;
        bool last = t + 1 == ends.size();
        if (in_piece == max_tokens || last) {
            std::size_t cut = last ? text.size() : ends[t];
            std::string piece(text.substr(start, cut - start));
            // shrink for tokenizers that count this piece differently
            while (tok(piece) > max_tokens && t > 0 && ends[t - 1] > start) {
                --t;
                cut = ends[t];
                piece = std::string(text.substr(start, cut - start));
                last = false;
            }
            pieces.push_back(std::move(piece));
            start = cut;
            in_piece = 0;
            if (last && cut == text.size()) break;
        }
    }
    if (start < text.size()) pieces.emplace_back(text.substr(start));
    return pieces;
}

} // namespace ragkit
