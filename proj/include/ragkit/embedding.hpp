#pragma once

#include "ragkit/parallel.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace ragkit {

struct EmbeddingVector {
    std::vector<float> values;

    std::size_t dim() const { return values.size(); }
    double norm() const;
};

// Throws an integrity error on dimension mismatch; result is in [-1, 1].
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;

    // Identifies provider and model; recorded in indexes and cache keys.
    virtual std::string tag() const = 0;

    // One vector per input, same order. No caching, no retries.
    virtual std::vector<EmbeddingVector> embed_raw(const std::vector<std::string>& texts) = 0;
};

// Deterministic offline provider: the bag of byte 3-grams of the text is
// projected through a fixed seeded random matrix and normalized, so texts
// sharing more 3-grams land closer in cosine space.
class MockEmbeddingProvider : public EmbeddingProvider {
  public:
    explicit MockEmbeddingProvider(std::size_t dim = 64, std::uint64_t seed = 0x5EED);

    std::string tag() const override;
    std::vector<EmbeddingVector> embed_raw(const std::vector<std::string>& texts) override;

    EmbeddingVector embed_one(const std::string& text) const;

  private:
    std::size_t dim_;
    std::uint64_t seed_;
};

struct HttpEmbeddingConfig {
    std::string base_url;               // e.g. "http://localhost:8089"
    std::string path = "/v1/embeddings";
    std::string model;
    std::string api_key;                // sent as a bearer token when nonempty
    int timeout_s = 30;
    std::size_t expect_dim = 0;         // 0 = adopt the first response's dimension
};

// POSTs {model, input: [...]} and reads {data: [{embedding: [...]}, ...]},
// the de-facto embeddings endpoint convention.
class HttpEmbeddingProvider : public EmbeddingProvider {
  public:
    explicit HttpEmbeddingProvider(HttpEmbeddingConfig config,
                                   std::shared_ptr<RateLimiter> limiter = nullptr);

    std::string tag() const override;
    std::vector<EmbeddingVector> embed_raw(const std::vector<std::string>& texts) override;

  private:
    HttpEmbeddingConfig config_;
    std::shared_ptr<RateLimiter> limiter_;
    std::size_t seen_dim_ = 0;
    std::mutex dim_mutex_;
};

struct EmbedOptions {
    int retries = 2;          // additional attempts after the first
    int backoff_ms = 100;     // doubled per retry
    std::size_t parallelism = 2;
    std::size_t batch_size = 32;
    std::string cache_dir;    // empty = in-memory cache only
};

struct EmbedStats {
    std::size_t provider_calls = 0;
    std::size_t texts_embedded = 0;
    std::size_t cache_hits = 0;
    int last_attempts = 0; // attempts used by the most recent provider call
};

// Caching, retrying front end over any provider. Results are cached keyed by
// (provider tag, content hash); embedding the same text twice issues at most
// one provider call.
class Embedder {
  public:
    Embedder(std::shared_ptr<EmbeddingProvider> provider, EmbedOptions options = {});

    // Pre: texts nonempty, each nonempty after trimming.
    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts);
    EmbeddingVector embed_one(const std::string& text);

    EmbedStats stats() const;
    std::string provider_tag() const { return provider_->tag(); }

  private:
    std::vector<EmbeddingVector> call_with_retries(const std::vector<std::string>& texts);
    std::string cache_key(const std::string& text) const;
    bool cache_lookup(const std::string& key, EmbeddingVector& out);
    void cache_store(const std::string& key, const EmbeddingVector& vec);

    std::shared_ptr<EmbeddingProvider> provider_;
    EmbedOptions options_;
    std::unordered_map<std::string, EmbeddingVector> memory_cache_;
    mutable std::mutex mutex_;
    EmbedStats stats_;
};

} // namespace ragkit
