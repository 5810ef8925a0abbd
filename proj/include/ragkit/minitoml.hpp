#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ragkit::toml {

// Minimal TOML reader covering what the config and template files use:
// comments, bare keys, [tables], [[arrays of tables]], basic / multiline /
// literal strings, integers, floats, booleans and flat arrays.
class Value {
  public:
    using Array = std::vector<Value>;
    using Table = std::map<std::string, Value>;

    Value() : data_(Table{}) {}
    explicit Value(std::string s) : data_(std::move(s)) {}
    explicit Value(std::int64_t i) : data_(i) {}
    explicit Value(double d) : data_(d) {}
    explicit Value(bool b) : data_(b) {}
    explicit Value(Array a) : data_(std::move(a)) {}
    explicit Value(Table t) : data_(std::move(t)) {}

    bool is_string() const { return std::holds_alternative<std::string>(data_); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
    bool is_float() const { return std::holds_alternative<double>(data_); }
    bool is_bool() const { return std::holds_alternative<bool>(data_); }
    bool is_array() const { return std::holds_alternative<Array>(data_); }
    bool is_table() const { return std::holds_alternative<Table>(data_); }

    const std::string& as_string() const;
    std::int64_t as_int() const;
    double as_float() const; // ints promote
    bool as_bool() const;
    const Array& as_array() const;
    const Table& as_table() const;
    Table& table();
    Array& array();

    // nullptr when absent (table lookups only)
    const Value* find(const std::string& key) const;

    // typed getters with defaults; throw config errors on type mismatch
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_float(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

  private:
    std::variant<std::string, std::int64_t, double, bool, Array, Table> data_;
};

Value parse(std::string_view text);
Value parse_file(const std::string& path);

// All dotted key paths present in a parsed document ("embedder.provider",
// "demonstrations.input", ...); array-of-table elements share one path.
std::vector<std::string> key_paths(const Value& root);

} // namespace ragkit::toml
