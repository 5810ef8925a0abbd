#pragma once

#include "ragkit/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <string>

namespace ragkit {

class JsonlWriter {
  public:
    explicit JsonlWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw Error(ErrorKind::io, "cannot open for writing: " + path);
    }

    void write(const nlohmann::ordered_json& j) {
        out_ << j.dump() << '\n';
        if (!out_) throw Error(ErrorKind::io, "write failed: " + path_);
    }

    void close() {
        out_.close();
        if (!out_) throw Error(ErrorKind::io, "close failed: " + path_);
    }

  private:
    std::string path_;
    std::ofstream out_;
};

inline void for_each_jsonl(const std::string& path,
                           const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw Error(ErrorKind::data, path + ":" + std::to_string(line_no) + ": invalid JSON");
        fn(j, line_no);
    }
}

} // namespace ragkit
