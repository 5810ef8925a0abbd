#include "ragkit/text.hpp"

#include <algorithm>
#include <cctype>

namespace ragkit {

namespace {

int sequence_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if ((lead & 0xE0) == 0xC0) return 2;
    if ((lead & 0xF0) == 0xE0) return 3;
    if ((lead & 0xF8) == 0xF0) return 4;
    return 0;
}

} // namespace

bool validate_utf8(std::string_view text, std::size_t* bad_offset) {
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char lead = static_cast<unsigned char>(text[i]);
        int len = sequence_length(lead);
        if (len == 0) {
            if (bad_offset) *bad_offset = i;
            return false;
        }
        if (i + static_cast<std::size_t>(len) > text.size()) {
            if (bad_offset) *bad_offset = i;
            return false;
        }
        char32_t cp = 0;
        switch (len) {
        case 1:
            cp = lead;
            break;
        case 2:
            cp = lead & 0x1F;
            break;
        case 3:
            cp = lead & 0x0F;
            break;
        default:
            cp = lead & 0x07;
            break;
        }
        for (int k = 1; k < len; ++k) {
            unsigned char cont = static_cast<unsigned char>(text[i + static_cast<std::size_t>(k)]);
            if ((cont & 0xC0) != 0x80) {
                if (bad_offset) *bad_offset = i + static_cast<std::size_t>(k);
                return false;
            }
            cp = (cp << 6) | (cont & 0x3F);
        }
        bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                        (len == 4 && cp < 0x10000);
        if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            if (bad_offset) *bad_offset = i;
            return false;
        }
        i += static_cast<std::size_t>(len);
    }
    return true;
}

char32_t decode_utf8(std::string_view text, std::size_t& pos) {
    unsigned char lead = static_cast<unsigned char>(text[pos]);
    int len = sequence_length(lead);
    if (len == 0 || pos + static_cast<std::size_t>(len) > text.size()) {
        ++pos;
        return 0xFFFD;
    }
    char32_t cp = 0;
    switch (len) {
    case 1:
        ++pos;
        return lead;
    case 2:
        cp = lead & 0x1F;
        break;
    case 3:
        cp = lead & 0x0F;
        break;
    default:
        cp = lead & 0x07;
        break;
    }
    for (int k = 1; k < len; ++k) {
        unsigned char cont = static_cast<unsigned char>(text[pos + static_cast<std::size_t>(k)]);
        if ((cont & 0xC0) != 0x80) {
            ++pos;
            return 0xFFFD;
        }
        cp = (cp << 6) | (cont & 0x3F);
    }
    pos += static_cast<std::size_t>(len);
    return cp;
}

bool is_cjk(char32_t cp) {
    return (cp >= 0x4E00 && cp <= 0x9FFF) ||   // CJK unified ideographs
           (cp >= 0x3400 && cp <= 0x4DBF) ||   // extension A
           (cp >= 0xF900 && cp <= 0xFAFF) ||   // compatibility ideographs
           (cp >= 0x20000 && cp <= 0x2A6DF) || // extension B
           (cp >= 0x3040 && cp <= 0x30FF) ||   // hiragana + katakana
           (cp >= 0xAC00 && cp <= 0xD7AF);     // hangul syllables
}

bool is_blank_line(std::string_view line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string rtrim(std::string_view s) {
    std::size_t e = s.size();
    while (e > 0 && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(0, e));
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = true; // leading spaces dropped
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(c);
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string_view line = text.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines.emplace_back(line);
            start = i + 1;
        }
    }
    // "a\nb\n" has two lines, not three
    if (!lines.empty() && lines.back().empty() && !text.empty() && text.back() == '\n')
        lines.pop_back();
    return lines;
}

std::vector<std::string> split_on_any(std::string_view text, std::string_view ascii_delims) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (ascii_delims.find(c) != std::string_view::npos) {
            out.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    out.push_back(current);
    return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

std::vector<std::string> split_paragraphs(std::string_view text) {
    std::vector<std::string> blocks;
    std::vector<std::string> current;
    for (auto& line : split_lines(text)) {
        if (is_blank_line(line)) {
            if (!current.empty()) {
                blocks.push_back(join(current, "\n"));
                current.clear();
            }
        } else {
            current.push_back(line);
        }
    }
    if (!current.empty()) blocks.push_back(join(current, "\n"));
    return blocks;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out.append(sep);
        out.append(parts[i]);
    }
    return out;
}

} // namespace ragkit
