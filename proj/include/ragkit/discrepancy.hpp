#pragma once

#include "ragkit/embedding.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ragkit {

// Query-document discrepancy: 1 - cosine(embed(query), embed(doc)), clamped
// to [0, 1]. Higher similarity means lower discrepancy; symmetric under any
// provider.
double discrepancy(const std::string& query, const std::string& doc_text, Embedder& embedder);

struct DiscrepancyPair {
    std::string query;
    std::optional<std::string> rewrite; // absent = no after-rewrite measurement
    std::string doc_text;
};

std::vector<DiscrepancyPair> read_discrepancy_pairs(const std::string& path);

// Mean discrepancy before and after rewriting across a pair set; pairs
// without a rewrite reuse the original query on the "after" side.
struct DiscrepancyReport {
    double mean_before = 0.0;
    double mean_after = 0.0;
    std::size_t pair_count = 0;
};

DiscrepancyReport discrepancy_batch(const std::vector<DiscrepancyPair>& pairs, Embedder& embedder);

} // namespace ragkit
