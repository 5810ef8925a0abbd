#include "ragkit/minitoml.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ragkit::toml {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw Error(ErrorKind::config, "toml parse error at line " + std::to_string(line) + ": " + what);
}

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t line = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char advance() {
        char c = text[pos++];
        if (c == '\n') ++line;
        return c;
    }
    void skip_ws_inline() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos;
    }
    void skip_ws_and_comments() {
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '#') {
                while (!eof() && peek() != '\n') ++pos;
            } else {
                break;
            }
        }
    }
};

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_bare_key(Cursor& cur) {
    std::string key;
    while (!cur.eof() && is_bare_key_char(cur.peek())) key.push_back(cur.advance());
    if (key.empty()) fail(cur.line, "expected key");
    return key;
}

std::string parse_basic_string(Cursor& cur, bool multiline) {
    std::string out;
    if (multiline && !cur.eof() && cur.peek() == '\n') cur.advance(); // trim first newline
    while (true) {
        if (cur.eof()) fail(cur.line, "unterminated string");
        char c = cur.advance();
        if (c == '"') {
            if (!multiline) return out;
            if (cur.pos + 1 <= cur.text.size() && cur.text.substr(cur.pos, 2) == "\"\"") {
                cur.pos += 2;
                return out;
            }
            out.push_back('"');
            continue;
        }
        if (c == '\\') {
            if (cur.eof()) fail(cur.line, "dangling escape");
            char e = cur.advance();
            switch (e) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case 'r': out.push_back('\r'); break;
            case '"': out.push_back('"'); break;
            case '\\': out.push_back('\\'); break;
            case 'u': {
                if (cur.pos + 4 > cur.text.size()) fail(cur.line, "short \\u escape");
                unsigned cp = 0;
                for (int i = 0; i < 4; ++i) {
                    char h = cur.advance();
                    cp <<= 4;
                    if (h >= '0' && h <= '9') cp |= static_cast<unsigned>(h - '0');
                    else if (h >= 'a' && h <= 'f') cp |= static_cast<unsigned>(h - 'a' + 10);
                    else if (h >= 'A' && h <= 'F') cp |= static_cast<unsigned>(h - 'A' + 10);
                    else fail(cur.line, "bad \\u escape");
                }
                // encode as UTF-8
                if (cp < 0x80) {
                    out.push_back(static_cast<char>(cp));
                } else if (cp < 0x800) {
                    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
                    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                } else {
                    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
                    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                }
                break;
            }
            case '\n':
                if (!multiline) fail(cur.line, "line-ending backslash outside multiline string");
                while (!cur.eof() && (cur.peek() == ' ' || cur.peek() == '\t' || cur.peek() == '\n' ||
                                      cur.peek() == '\r'))
                    cur.advance();
                break;
            default:
                fail(cur.line, std::string("unknown escape \\") + e);
            }
            continue;
        }
        if (c == '\n' && !multiline) fail(cur.line, "newline in single-line string");
        out.push_back(c);
    }
}

std::string parse_literal_string(Cursor& cur, bool multiline) {
    std::string out;
    if (multiline && !cur.eof() && cur.peek() == '\n') cur.advance();
    while (true) {
        if (cur.eof()) fail(cur.line, "unterminated literal string");
        char c = cur.advance();
        if (c == '\'') {
            if (!multiline) return out;
            if (cur.text.substr(cur.pos, 2) == "''") {
                cur.pos += 2;
                return out;
            }
            out.push_back('\'');
            continue;
        }
        if (c == '\n' && !multiline) fail(cur.line, "newline in single-line string");
        out.push_back(c);
    }
}

Value parse_value(Cursor& cur);

Value parse_array(Cursor& cur) {
    Value::Array items;
    while (true) {
        cur.skip_ws_and_comments();
        if (cur.eof()) fail(cur.line, "unterminated array");
        if (cur.peek() == ']') {
            cur.advance();
            return Value(std::move(items));
        }
        items.push_back(parse_value(cur));
        cur.skip_ws_and_comments();
        if (!cur.eof() && cur.peek() == ',') cur.advance();
        else if (!cur.eof() && cur.peek() == ']') {
            cur.advance();
            return Value(std::move(items));
        } else if (cur.eof()) {
            fail(cur.line, "unterminated array");
        }
    }
}

Value parse_scalar_word(Cursor& cur) {
    std::size_t start = cur.pos;
    while (!cur.eof()) {
        char c = cur.peek();
        if (c == '\n' || c == '#' || c == ',' || c == ']' || c == ' ' || c == '\t' || c == '\r') break;
        cur.advance();
    }
    std::string word(cur.text.substr(start, cur.pos - start));
    if (word == "true") return Value(true);
    if (word == "false") return Value(false);
    if (word.empty()) fail(cur.line, "expected value");

    std::string digits = word;
    digits.erase(std::remove(digits.begin(), digits.end(), '_'), digits.end());
    bool looks_float = digits.find('.') != std::string::npos ||
                       digits.find('e') != std::string::npos ||
                       digits.find('E') != std::string::npos;
    if (looks_float) {
        try {
            std::size_t used = 0;
            double d = std::stod(digits, &used);
            if (used == digits.size()) return Value(d);
        } catch (...) {
        }
        fail(cur.line, "cannot parse float: " + word);
    }
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec == std::errc() && p == digits.data() + digits.size()) return Value(v);
    fail(cur.line, "cannot parse value: " + word);
}

Value parse_value(Cursor& cur) {
    cur.skip_ws_inline();
    if (cur.eof()) fail(cur.line, "expected value");
    char c = cur.peek();
    if (c == '"') {
        if (cur.text.substr(cur.pos, 3) == "\"\"\"") {
            cur.pos += 3;
            return Value(parse_basic_string(cur, true));
        }
        cur.advance();
        return Value(parse_basic_string(cur, false));
    }
    if (c == '\'') {
        if (cur.text.substr(cur.pos, 3) == "'''") {
            cur.pos += 3;
            return Value(parse_literal_string(cur, true));
        }
        cur.advance();
        return Value(parse_literal_string(cur, false));
    }
    if (c == '[') {
        cur.advance();
        return parse_array(cur);
    }
    return parse_scalar_word(cur);
}

std::vector<std::string> parse_table_path(Cursor& cur) {
    std::vector<std::string> path;
    while (true) {
        cur.skip_ws_inline();
        path.push_back(parse_bare_key(cur));
        cur.skip_ws_inline();
        if (!cur.eof() && cur.peek() == '.') {
            cur.advance();
            continue;
        }
        break;
    }
    return path;
}

} // namespace

const std::string& Value::as_string() const {
    if (!is_string()) throw Error(ErrorKind::config, "toml value is not a string");
    return std::get<std::string>(data_);
}

std::int64_t Value::as_int() const {
    if (!is_int()) throw Error(ErrorKind::config, "toml value is not an integer");
    return std::get<std::int64_t>(data_);
}

double Value::as_float() const {
    if (is_int()) return static_cast<double>(std::get<std::int64_t>(data_));
    if (!is_float()) throw Error(ErrorKind::config, "toml value is not a number");
    return std::get<double>(data_);
}

bool Value::as_bool() const {
    if (!is_bool()) throw Error(ErrorKind::config, "toml value is not a boolean");
    return std::get<bool>(data_);
}

const Value::Array& Value::as_array() const {
    if (!is_array()) throw Error(ErrorKind::config, "toml value is not an array");
    return std::get<Array>(data_);
}

const Value::Table& Value::as_table() const {
    if (!is_table()) throw Error(ErrorKind::config, "toml value is not a table");
    return std::get<Table>(data_);
}

Value::Table& Value::table() {
    if (!is_table()) throw Error(ErrorKind::config, "toml value is not a table");
    return std::get<Table>(data_);
}

Value::Array& Value::array() {
    if (!is_array()) throw Error(ErrorKind::config, "toml value is not an array");
    return std::get<Array>(data_);
}

const Value* Value::find(const std::string& key) const {
    if (!is_table()) return nullptr;
    auto& t = std::get<Table>(data_);
    auto it = t.find(key);
    return it == t.end() ? nullptr : &it->second;
}

std::string Value::get_string(const std::string& key, const std::string& fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw Error(ErrorKind::config, "key '" + key + "' must be a string");
    return v->as_string();
}

std::int64_t Value::get_int(const std::string& key, std::int64_t fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (!v->is_int()) throw Error(ErrorKind::config, "key '" + key + "' must be an integer");
    return v->as_int();
}

double Value::get_float(const std::string& key, double fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (!v->is_int() && !v->is_float())
        throw Error(ErrorKind::config, "key '" + key + "' must be a number");
    return v->as_float();
}

bool Value::get_bool(const std::string& key, bool fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (!v->is_bool()) throw Error(ErrorKind::config, "key '" + key + "' must be a boolean");
    return v->as_bool();
}

Value parse(std::string_view text) {
    Value root;
    Cursor cur{text};
    Value* current = &root;

    while (true) {
        cur.skip_ws_and_comments();
        if (cur.eof()) break;
        char c = cur.peek();
        if (c == '[') {
            cur.advance();
            bool array_table = !cur.eof() && cur.peek() == '[';
            if (array_table) cur.advance();
            auto path = parse_table_path(cur);
            cur.skip_ws_inline();
            if (cur.eof() || cur.advance() != ']') fail(cur.line, "expected ']'");
            if (array_table) {
                if (cur.eof() || cur.advance() != ']') fail(cur.line, "expected ']]'");
            }

            Value* node = &root;
            for (std::size_t i = 0; i < path.size(); ++i) {
                bool leaf = i + 1 == path.size();
                auto& table = node->table();
                auto it = table.find(path[i]);
                if (it == table.end()) {
                    Value fresh = (leaf && array_table) ? Value(Value::Array{}) : Value(Value::Table{});
                    it = table.emplace(path[i], std::move(fresh)).first;
                }
                node = &it->second;
                if (leaf && array_table && !node->is_array())
                    fail(cur.line, "'" + path[i] + "' is not an array of tables");
                if (!leaf && !node->is_table())
                    fail(cur.line, "'" + path[i] + "' is not a table");
            }
            if (array_table) {
                auto& arr = node->array();
                arr.emplace_back(Value(Value::Table{}));
                current = &arr.back();
            } else {
                if (!node->is_table()) fail(cur.line, "'" + path.back() + "' is not a table");
                current = node;
            }
            continue;
        }

        std::string key = parse_bare_key(cur);
        cur.skip_ws_inline();
        if (cur.eof() || cur.advance() != '=') fail(cur.line, "expected '=' after key '" + key + "'");
        Value v = parse_value(cur);
        auto& table = current->table();
        if (table.count(key)) fail(cur.line, "duplicate key '" + key + "'");
        table.emplace(std::move(key), std::move(v));
    }
    return root;
}

Value parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::config, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

namespace {

void collect_paths(const Value& v, const std::string& prefix, std::vector<std::string>& out) {
    if (v.is_table()) {
        for (auto& [k, child] : v.as_table()) {
            std::string path = prefix.empty() ? k : prefix + "." + k;
            if (child.is_table() || (child.is_array() && !child.as_array().empty() &&
                                     child.as_array().front().is_table())) {
                collect_paths(child, path, out);
            } else {
                out.push_back(path);
            }
        }
    } else if (v.is_array()) {
        for (auto& item : v.as_array()) collect_paths(item, prefix, out);
    }
}

} // namespace

std::vector<std::string> key_paths(const Value& root) {
    std::vector<std::string> out;
    collect_paths(root, "", out);
    return out;
}

} // namespace ragkit::toml
