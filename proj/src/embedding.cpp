#include "ragkit/embedding.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/hashing.hpp"
#include "ragkit/text.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <thread>

namespace ragkit {

double EmbeddingVector::norm() const {
    double s = 0.0;
    for (float v : values) s += static_cast<double>(v) * static_cast<double>(v);
    return std::sqrt(s);
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim())
        throw Error(ErrorKind::integrity, "dimension mismatch: " + std::to_string(a.dim()) +
                                              " vs " + std::to_string(b.dim()));
    double dot = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        dot += static_cast<double>(a.values[i]) * static_cast<double>(b.values[i]);
    double na = a.norm();
    double nb = b.norm();
    if (na == 0.0 || nb == 0.0)
        throw Error(ErrorKind::integrity, "cosine similarity of a zero vector is undefined");
    return std::clamp(dot / (na * nb), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// mock provider

MockEmbeddingProvider::MockEmbeddingProvider(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
    if (dim_ == 0) throw Error(ErrorKind::config, "mock embedding dimension must be positive");
}

std::string MockEmbeddingProvider::tag() const {
    return "mock-3gram/d" + std::to_string(dim_) + "/s" + hex64(seed_);
}

EmbeddingVector MockEmbeddingProvider::embed_one(const std::string& text) const {
    std::vector<double> acc(dim_, 0.0);
    auto add_gram = [&](std::string_view gram) {
        SplitMix64 rng(fnv1a64(gram, seed_ ^ 0x9E3779B97F4A7C15ULL));
        for (std::size_t i = 0; i < dim_; ++i) acc[i] += rng.next_signed_unit();
    };
    if (text.size() < 3) {
        add_gram(text);
    } else {
        for (std::size_t i = 0; i + 3 <= text.size(); ++i)
            add_gram(std::string_view(text).substr(i, 3));
    }
    double norm = 0.0;
    for (double v : acc) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        // all-gram cancellation is astronomically unlikely; keep determinism anyway
        acc[0] = 1.0;
        norm = 1.0;
    }
    EmbeddingVector vec;
    vec.values.reserve(dim_);
    for (double v : acc) vec.values.push_back(static_cast<float>(v / norm));
    return vec;
}

std::vector<EmbeddingVector> MockEmbeddingProvider::embed_raw(const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed_one(t));
    return out;
}

// ---------------------------------------------------------------------------
// http provider

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpEmbeddingConfig config,
                                             std::shared_ptr<RateLimiter> limiter)
    : config_(std::move(config)), limiter_(std::move(limiter)) {
    if (config_.base_url.empty())
        throw Error(ErrorKind::config, "embedding provider base_url is required");
    seen_dim_ = config_.expect_dim;
}

std::string HttpEmbeddingProvider::tag() const {
    return config_.model.empty() ? "http-embeddings" : config_.model;
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed_raw(const std::vector<std::string>& texts) {
    if (limiter_) limiter_->acquire();

    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_s, 0);
    client.set_read_timeout(config_.timeout_s, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty())
        headers.emplace("Authorization", "Bearer " + config_.api_key);

    nlohmann::json body;
    body["model"] = config_.model;
    body["input"] = texts;

    auto res = client.Post(config_.path, headers, body.dump(), "application/json");
    if (!res)
        throw Error(ErrorKind::transport,
                    "embedding request to " + config_.base_url + " failed: " +
                        httplib::to_string(res.error()));
    if (res->status == 429 || res->status >= 500)
        throw Error(ErrorKind::transport,
                    "embedding endpoint returned HTTP " + std::to_string(res->status));
    if (res->status != 200)
        throw Error(ErrorKind::provider,
                    "embedding endpoint returned HTTP " + std::to_string(res->status) + ": " +
                        res->body.substr(0, 200));

    nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("data") || !parsed["data"].is_array())
        throw Error(ErrorKind::provider, "embedding endpoint returned malformed JSON");

    struct Indexed {
        std::size_t index;
        EmbeddingVector vec;
    };
    std::vector<Indexed> rows;
    rows.reserve(parsed["data"].size());
    std::size_t fallback_index = 0;
    for (const auto& entry : parsed["data"]) {
        Indexed row;
        row.index = entry.contains("index") ? entry["index"].get<std::size_t>() : fallback_index;
        ++fallback_index;
        if (!entry.contains("embedding") || !entry["embedding"].is_array())
            throw Error(ErrorKind::provider, "embedding endpoint response lacks 'embedding'");
        row.vec.values.reserve(entry["embedding"].size());
        for (const auto& v : entry["embedding"]) row.vec.values.push_back(v.get<float>());
        rows.push_back(std::move(row));
    }
    if (rows.size() != texts.size())
        throw Error(ErrorKind::provider,
                    "embedding endpoint returned " + std::to_string(rows.size()) +
                        " vectors for " + std::to_string(texts.size()) + " inputs");
    std::sort(rows.begin(), rows.end(),
              [](const Indexed& a, const Indexed& b) { return a.index < b.index; });

    std::vector<EmbeddingVector> out;
    out.reserve(rows.size());
    {
        std::lock_guard lock(dim_mutex_);
        for (auto& row : rows) {
            if (seen_dim_ == 0) seen_dim_ = row.vec.dim();
            if (row.vec.dim() != seen_dim_)
                throw Error(ErrorKind::integrity,
                            "provider returned dimension " + std::to_string(row.vec.dim()) +
                                ", expected " + std::to_string(seen_dim_));
            out.push_back(std::move(row.vec));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// caching front end

Embedder::Embedder(std::shared_ptr<EmbeddingProvider> provider, EmbedOptions options)
    : provider_(std::move(provider)), options_(std::move(options)) {
    if (!provider_) throw Error(ErrorKind::config, "embedder requires a provider");
    if (options_.batch_size == 0) options_.batch_size = 1;
    if (!options_.cache_dir.empty())
        std::filesystem::create_directories(std::filesystem::path(options_.cache_dir) / "emb");
}

std::string Embedder::cache_key(const std::string& text) const {
    std::uint64_t h = fnv1a64(provider_->tag());
    h = fnv1a64(std::string_view("\0", 1), h);
    h = fnv1a64(text, h);
    return hex64(h);
}

bool Embedder::cache_lookup(const std::string& key, EmbeddingVector& out) {
    {
        std::lock_guard lock(mutex_);
        auto it = memory_cache_.find(key);
        if (it != memory_cache_.end()) {
            out = it->second;
            return true;
        }
    }
    if (options_.cache_dir.empty()) return false;
    auto path = std::filesystem::path(options_.cache_dir) / "emb" / (key + ".vec");
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    in.seekg(0, std::ios::end);
    auto bytes = static_cast<std::size_t>(in.tellg());
    in.seekg(0);
    if (bytes == 0 || bytes % sizeof(float) != 0) return false;
    out.values.resize(bytes / sizeof(float));
    in.read(reinterpret_cast<char*>(out.values.data()), static_cast<std::streamsize>(bytes));
    if (!in) return false;
    std::lock_guard lock(mutex_);
    memory_cache_[key] = out;
    return true;
}

void Embedder::cache_store(const std::string& key, const EmbeddingVector& vec) {
    {
        std::lock_guard lock(mutex_);
        memory_cache_[key] = vec;
    }
    if (options_.cache_dir.empty()) return;
    auto path = std::filesystem::path(options_.cache_dir) / "emb" / (key + ".vec");
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(vec.values.data()),
              static_cast<std::streamsize>(vec.values.size() * sizeof(float)));
}

std::vector<EmbeddingVector> Embedder::call_with_retries(const std::vector<std::string>& texts) {
    int attempts = 0;
    int backoff = options_.backoff_ms;
    while (true) {
        ++attempts;
        try {
            auto result = provider_->embed_raw(texts);
            std::lock_guard lock(mutex_);
            ++stats_.provider_calls;
            stats_.last_attempts = attempts;
            return result;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::transport || attempts > options_.retries) {
                if (e.kind() == ErrorKind::transport)
                    throw TransportError(std::string(e.what()) + " (after " +
                                             std::to_string(attempts) + " attempts)",
                                         attempts);
                throw;
            }
            if (backoff > 0) std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
            backoff *= 2;
        }
    }
}

std::vector<EmbeddingVector> Embedder::embed_batch(const std::vector<std::string>& texts) {
    if (texts.empty()) throw Error(ErrorKind::data, "embed_batch requires at least one text");
    for (std::size_t i = 0; i < texts.size(); ++i)
        if (trim(texts[i]).empty())
            throw Error(ErrorKind::data,
                        "embed_batch input " + std::to_string(i) + " is empty after trimming");

    std::vector<EmbeddingVector> out(texts.size());
    std::vector<std::size_t> miss_indices;
    std::unordered_map<std::string, std::size_t> first_occurrence; // dedupe within the batch

    for (std::size_t i = 0; i < texts.size(); ++i) {
        std::string key = cache_key(texts[i]);
        if (cache_lookup(key, out[i])) {
            std::lock_guard lock(mutex_);
            ++stats_.cache_hits;
            continue;
        }
        auto [it, inserted] = first_occurrence.emplace(key, i);
        if (inserted) miss_indices.push_back(i);
    }

    if (!miss_indices.empty()) {
        std::vector<std::vector<std::size_t>> batches;
        for (std::size_t off = 0; off < miss_indices.size(); off += options_.batch_size) {
            std::size_t end = std::min(off + options_.batch_size, miss_indices.size());
            batches.emplace_back(miss_indices.begin() + static_cast<std::ptrdiff_t>(off),
                                 miss_indices.begin() + static_cast<std::ptrdiff_t>(end));
        }
        auto results = parallel_map(
            batches,
            [&](const std::vector<std::size_t>& batch) {
                std::vector<std::string> inputs;
                inputs.reserve(batch.size());
                for (std::size_t idx : batch) inputs.push_back(texts[idx]);
                return call_with_retries(inputs);
            },
            options_.parallelism);

        std::size_t expected_dim = 0;
        for (std::size_t b = 0; b < batches.size(); ++b) {
            if (results[b].size() != batches[b].size())
                throw Error(ErrorKind::integrity, "provider returned a short batch");
            for (std::size_t k = 0; k < batches[b].size(); ++k) {
                std::size_t idx = batches[b][k];
                if (expected_dim == 0) expected_dim = results[b][k].dim();
                if (results[b][k].dim() != expected_dim)
                    throw Error(ErrorKind::integrity,
                                "provider returned mixed dimensions in one batch");
                out[idx] = std::move(results[b][k]);
                cache_store(cache_key(texts[idx]), out[idx]);
            }
        }
    }

    // texts repeated within the batch resolve to the first occurrence's vector
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (!out[i].values.empty()) continue;
        auto it = first_occurrence.find(cache_key(texts[i]));
        if (it != first_occurrence.end()) out[i] = out[it->second];
    }

    {
        std::lock_guard lock(mutex_);
        stats_.texts_embedded += texts.size();
    }
    return out;
}

EmbeddingVector Embedder::embed_one(const std::string& text) {
    return embed_batch({text}).front();
}

EmbedStats Embedder::stats() const {
    std::lock_guard lock(mutex_);
    return stats_;
}

} // namespace ragkit
