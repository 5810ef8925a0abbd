#pragma once

#include "ragkit/fusion.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ragkit {

// One provider role: the embedder plus the rewriter, reader and annotator
// chat endpoints. provider is "mock" or "http"; API keys come from the
// environment only, never from the file.
struct ProviderConfig {
    std::string provider = "mock";
    std::string model;
    std::string base_url;
    std::string api_key;            // env only
    std::size_t dim = 64;           // embedder only; mock dimension / expected http dim
    std::string mock_behavior;      // reader/annotator mocks: "echo" | "extract"
};

struct RunConfig {
    std::size_t k = 4;
    std::size_t k_inner = 0; // 0 = follow k
    FusionRule fusion = FusionRule::max_score;
    std::size_t parallelism = 4;
    std::uint64_t seed = 7;
    std::size_t max_rewrites = 4;
    double temperature = 0.0;
    std::string cache_dir;
    std::string index_path;
    std::string chunks_path;

    ProviderConfig embedder;
    ProviderConfig rewriter;
    ProviderConfig reader;
    ProviderConfig annotator;

    std::string rewrite_template;
    std::string annotate_template;
    std::string reader_template;    // TOML file with an `instruction` key
    std::string reader_instruction; // inline override; empty = template or built-in default

    int http_retries = 2;
    int http_backoff_ms = 100;
    int http_timeout_s = 30;
    double rate_limit_per_s = 0.0;

    std::string source_path; // where this config was loaded from
};

using EnvLookup = std::function<const char*(const char*)>;

// Loads the TOML file, then applies RAGKIT_* environment overrides (their
// key mapping is documented in the README). Unknown file keys are errors
// naming each key; referenced paths must exist at load time.
RunConfig load_config(const std::string& path, const EnvLookup& env = nullptr);

// A config with defaults only, for commands that can run without a file.
RunConfig default_config(const EnvLookup& env = nullptr);

// Fully resolved configuration with secrets redacted; echoed into run
// manifests and reports.
nlohmann::ordered_json config_snapshot(const RunConfig& config);

} // namespace ragkit
