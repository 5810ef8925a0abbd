#pragma once

#include "ragkit/embedding.hpp"

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace ragkit {

// A chunk reference with a similarity score. source_rewrite records which
// rewritten query retrieved it (0-based); plain searches use 0.
struct ScoredDoc {
    std::string chunk_id;
    double score = 0.0;
    std::size_t source_rewrite = 0;
};

// Exact-search vector store: entries are scanned in full and ranked by cosine
// similarity. Immutable once built; concurrent searches are safe.
class VectorIndex {
  public:
    struct Entry {
        std::string chunk_id;
        EmbeddingVector vec;
    };

    VectorIndex() = default;
    VectorIndex(std::size_t dim, std::string provider_tag, std::uint64_t created_at);

    // Rejects duplicate ids, dimension mismatches and zero-norm vectors.
    void add(std::string chunk_id, EmbeddingVector vec);

    // min(k, size()) results by cosine similarity descending, ties broken by
    // ascending chunk_id. Pre: k >= 1 and query.dim == dim().
    std::vector<ScoredDoc> search(const EmbeddingVector& query, std::size_t k) const;

    std::size_t size() const { return entries_.size(); }
    std::size_t dim() const { return dim_; }
    const std::string& provider_tag() const { return provider_tag_; }
    std::uint64_t created_at() const { return created_at_; }
    const std::vector<Entry>& entries() const { return entries_; }

    bool operator==(const VectorIndex& other) const;

  private:
    std::size_t dim_ = 0;
    std::string provider_tag_;
    std::uint64_t created_at_ = 0;
    std::vector<Entry> entries_;
    std::unordered_set<std::string> ids_;
};

// Binary format: magic, version, dim, provider tag, created_at, entry count,
// (id length, id, little-endian float32 values) records, trailing CRC-32.
// load(save(x)) reproduces x bit-exactly.
void save_index(const VectorIndex& index, const std::string& path);
VectorIndex load_index(const std::string& path);

// Wall clock unless SOURCE_DATE_EPOCH is set, which pins index timestamps for
// reproducible builds.
std::uint64_t index_timestamp();

} // namespace ragkit
