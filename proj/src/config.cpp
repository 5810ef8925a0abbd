#include "ragkit/config.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/minitoml.hpp"
#include "ragkit/text.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <set>

namespace ragkit {

namespace {

const std::set<std::string> kKnownKeys = {
    "k", "k_inner", "fusion", "parallelism", "seed", "max_rewrites", "temperature",
    "cache_dir", "index", "chunks",
    "embedder.provider", "embedder.model", "embedder.base_url", "embedder.dim",
    "rewriter.provider", "rewriter.model", "rewriter.base_url",
    "reader.provider", "reader.model", "reader.base_url", "reader.mock_behavior",
    "annotator.provider", "annotator.model", "annotator.base_url", "annotator.mock_behavior",
    "templates.rewrite", "templates.annotate", "templates.reader", "reader_instruction",
    "http.retries", "http.backoff_ms", "http.timeout_s", "http.rate_limit_per_s",
};

const char* env_or_null(const EnvLookup& env, const char* name) {
    if (env) return env(name);
    return std::getenv(name);
}

std::string env_string(const EnvLookup& env, const char* name, std::string current) {
    const char* v = env_or_null(env, name);
    return v ? std::string(v) : current;
}

std::size_t env_size(const EnvLookup& env, const char* name, std::size_t current) {
    const char* v = env_or_null(env, name);
    if (!v) return current;
    std::string s = trim(v);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw Error(ErrorKind::config, std::string("environment variable ") + name +
                                           " must be a non-negative integer, got '" + v + "'");
    return static_cast<std::size_t>(std::stoull(s));
}

double env_double(const EnvLookup& env, const char* name, double current) {
    const char* v = env_or_null(env, name);
    if (!v) return current;
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != std::string(v).size()) throw std::invalid_argument("trailing");
        return d;
    } catch (...) {
        throw Error(ErrorKind::config,
                    std::string("environment variable ") + name + " must be a number");
    }
}

void provider_from_toml(const toml::Value& root, const char* section, ProviderConfig& out) {
    const toml::Value* t = root.find(section);
    if (!t) return;
    out.provider = t->get_string("provider", out.provider);
    out.model = t->get_string("model", out.model);
    out.base_url = t->get_string("base_url", out.base_url);
    out.dim = static_cast<std::size_t>(t->get_int("dim", static_cast<std::int64_t>(out.dim)));
    out.mock_behavior = t->get_string("mock_behavior", out.mock_behavior);
}

void provider_from_env(const EnvLookup& env, const std::string& prefix, ProviderConfig& out) {
    out.provider = env_string(env, (prefix + "_PROVIDER").c_str(), out.provider);
    out.model = env_string(env, (prefix + "_MODEL").c_str(), out.model);
    out.base_url = env_string(env, (prefix + "_BASE_URL").c_str(), out.base_url);
    out.dim = env_size(env, (prefix + "_DIM").c_str(), out.dim);
    out.mock_behavior = env_string(env, (prefix + "_MOCK_BEHAVIOR").c_str(), out.mock_behavior);
    // secrets are environment-only so config files stay committable
    const char* key = env_or_null(env, (prefix + "_API_KEY").c_str());
    if (!key) key = env_or_null(env, "RAGKIT_API_KEY");
    if (key) out.api_key = key;
}

void check_path(const std::string& path, const std::string& key) {
    if (path.empty()) return;
    if (!std::filesystem::exists(path))
        throw Error(ErrorKind::config, "config key '" + key + "' references a missing path: " + path);
}

RunConfig apply_env(RunConfig config, const EnvLookup& env) {
    config.k = env_size(env, "RAGKIT_K", config.k);
    config.k_inner = env_size(env, "RAGKIT_K_INNER", config.k_inner);
    std::string fusion = env_string(env, "RAGKIT_FUSION", "");
    if (!fusion.empty()) config.fusion = fusion_rule_from_string(fusion);
    config.parallelism = env_size(env, "RAGKIT_PARALLELISM", config.parallelism);
    config.seed = env_size(env, "RAGKIT_SEED", config.seed);
    config.max_rewrites = env_size(env, "RAGKIT_MAX_REWRITES", config.max_rewrites);
    config.temperature = env_double(env, "RAGKIT_TEMPERATURE", config.temperature);
    config.cache_dir = env_string(env, "RAGKIT_CACHE_DIR", config.cache_dir);
    config.index_path = env_string(env, "RAGKIT_INDEX", config.index_path);
    config.chunks_path = env_string(env, "RAGKIT_CHUNKS", config.chunks_path);
    config.rewrite_template = env_string(env, "RAGKIT_TEMPLATES_REWRITE", config.rewrite_template);
    config.annotate_template =
        env_string(env, "RAGKIT_TEMPLATES_ANNOTATE", config.annotate_template);
    config.reader_template = env_string(env, "RAGKIT_TEMPLATES_READER", config.reader_template);
    config.reader_instruction =
        env_string(env, "RAGKIT_READER_INSTRUCTION", config.reader_instruction);
    provider_from_env(env, "RAGKIT_EMBEDDER", config.embedder);
    provider_from_env(env, "RAGKIT_REWRITER", config.rewriter);
    provider_from_env(env, "RAGKIT_READER", config.reader);
    provider_from_env(env, "RAGKIT_ANNOTATOR", config.annotator);
    config.http_retries =
        static_cast<int>(env_size(env, "RAGKIT_HTTP_RETRIES", static_cast<std::size_t>(config.http_retries)));
    config.http_backoff_ms = static_cast<int>(
        env_size(env, "RAGKIT_HTTP_BACKOFF_MS", static_cast<std::size_t>(config.http_backoff_ms)));
    config.http_timeout_s = static_cast<int>(
        env_size(env, "RAGKIT_HTTP_TIMEOUT_S", static_cast<std::size_t>(config.http_timeout_s)));
    config.rate_limit_per_s = env_double(env, "RAGKIT_HTTP_RATE_LIMIT_PER_S", config.rate_limit_per_s);
    return config;
}

void validate(const RunConfig& config) {
    if (config.k == 0) throw Error(ErrorKind::config, "k must be at least 1");
    if (config.parallelism == 0) throw Error(ErrorKind::config, "parallelism must be at least 1");
    if (config.max_rewrites == 0)
        throw Error(ErrorKind::config, "max_rewrites must be at least 1");
    check_path(config.index_path, "index");
    check_path(config.chunks_path, "chunks");
    check_path(config.rewrite_template, "templates.rewrite");
    check_path(config.annotate_template, "templates.annotate");
    check_path(config.reader_template, "templates.reader");
    for (const auto* p : {&config.embedder, &config.rewriter, &config.reader, &config.annotator})
        if (p->provider != "mock" && p->provider != "http")
            throw Error(ErrorKind::config,
                        "provider must be 'mock' or 'http', got '" + p->provider + "'");
}

} // namespace

RunConfig default_config(const EnvLookup& env) {
    RunConfig config = apply_env(RunConfig{}, env);
    validate(config);
    return config;
}

RunConfig load_config(const std::string& path, const EnvLookup& env) {
    toml::Value root = toml::parse_file(path);

    std::vector<std::string> unknown;
    for (const auto& key : toml::key_paths(root))
        if (!kKnownKeys.count(key)) unknown.push_back(key);
    if (!unknown.empty()) {
        std::sort(unknown.begin(), unknown.end());
        throw Error(ErrorKind::config,
                    "unknown config key" + std::string(unknown.size() > 1 ? "s" : "") + ": " +
                        join(unknown, ", "));
    }

    RunConfig config;
    config.source_path = path;
    config.k = static_cast<std::size_t>(root.get_int("k", static_cast<std::int64_t>(config.k)));
    config.k_inner =
        static_cast<std::size_t>(root.get_int("k_inner", static_cast<std::int64_t>(config.k_inner)));
    config.fusion = fusion_rule_from_string(root.get_string("fusion", to_string(config.fusion)));
    config.parallelism = static_cast<std::size_t>(
        root.get_int("parallelism", static_cast<std::int64_t>(config.parallelism)));
    config.seed =
        static_cast<std::uint64_t>(root.get_int("seed", static_cast<std::int64_t>(config.seed)));
    config.max_rewrites = static_cast<std::size_t>(
        root.get_int("max_rewrites", static_cast<std::int64_t>(config.max_rewrites)));
    config.temperature = root.get_float("temperature", config.temperature);
    config.cache_dir = root.get_string("cache_dir", config.cache_dir);
    config.index_path = root.get_string("index", config.index_path);
    config.chunks_path = root.get_string("chunks", config.chunks_path);
    config.reader_instruction = root.get_string("reader_instruction", config.reader_instruction);

    provider_from_toml(root, "embedder", config.embedder);
    provider_from_toml(root, "rewriter", config.rewriter);
    provider_from_toml(root, "reader", config.reader);
    provider_from_toml(root, "annotator", config.annotator);

    if (const toml::Value* templates = root.find("templates")) {
        config.rewrite_template = templates->get_string("rewrite", config.rewrite_template);
        config.annotate_template = templates->get_string("annotate", config.annotate_template);
        config.reader_template = templates->get_string("reader", config.reader_template);
    }
    if (const toml::Value* http = root.find("http")) {
        config.http_retries = static_cast<int>(http->get_int("retries", config.http_retries));
        config.http_backoff_ms =
            static_cast<int>(http->get_int("backoff_ms", config.http_backoff_ms));
        config.http_timeout_s =
            static_cast<int>(http->get_int("timeout_s", config.http_timeout_s));
        config.rate_limit_per_s = http->get_float("rate_limit_per_s", config.rate_limit_per_s);
    }

    config = apply_env(config, env);
    validate(config);
    return config;
}

namespace {

nlohmann::ordered_json provider_snapshot(const ProviderConfig& p, bool embedder) {
    nlohmann::ordered_json j;
    j["provider"] = p.provider;
    if (!p.model.empty()) j["model"] = p.model;
    if (!p.base_url.empty()) j["base_url"] = p.base_url;
    if (embedder) j["dim"] = p.dim;
    if (!p.mock_behavior.empty()) j["mock_behavior"] = p.mock_behavior;
    j["api_key"] = p.api_key.empty() ? "" : "***";
    return j;
}

} // namespace

nlohmann::ordered_json config_snapshot(const RunConfig& config) {
    nlohmann::ordered_json j;
    j["k"] = config.k;
    j["k_inner"] = config.k_inner;
    j["fusion"] = to_string(config.fusion);
    j["parallelism"] = config.parallelism;
    j["seed"] = config.seed;
    j["max_rewrites"] = config.max_rewrites;
    j["temperature"] = config.temperature;
    j["cache_dir"] = config.cache_dir;
    j["index"] = config.index_path;
    j["chunks"] = config.chunks_path;
    j["embedder"] = provider_snapshot(config.embedder, true);
    j["rewriter"] = provider_snapshot(config.rewriter, false);
    j["reader"] = provider_snapshot(config.reader, false);
    j["annotator"] = provider_snapshot(config.annotator, false);
    j["templates"] = {{"rewrite", config.rewrite_template},
                      {"annotate", config.annotate_template},
                      {"reader", config.reader_template}};
    j["reader_instruction"] = config.reader_instruction;
    j["http"] = {{"retries", config.http_retries},
                 {"backoff_ms", config.http_backoff_ms},
                 {"timeout_s", config.http_timeout_s},
                 {"rate_limit_per_s", config.rate_limit_per_s}};
    return j;
}

} // namespace ragkit
