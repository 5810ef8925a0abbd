#pragma once

#include "ragkit/vector_index.hpp"

#include <string>
#include <vector>

namespace ragkit {

// How per-rewrite result lists merge into one ranking. max_score is the
// default contract; sum_score (normalized by list count) and reciprocal_rank
// are experimental switches.
enum class FusionRule {
    max_score,
    sum_score,
    reciprocal_rank,
};

FusionRule fusion_rule_from_string(const std::string& name);
std::string to_string(FusionRule rule);

// Union of the per-rewrite lists, de-duplicated by chunk_id keeping the
// maximum score (smallest source_rewrite among ties), ranked by score
// descending with ascending chunk_id as the tiebreak, cut to the global
// top k. Idempotent, and the result for k is a prefix of the result for k+1.
std::vector<ScoredDoc> fuse(const std::vector<std::vector<ScoredDoc>>& per_rewrite_results,
                            std::size_t k);

std::vector<ScoredDoc> fuse_with_rule(const std::vector<std::vector<ScoredDoc>>& per_rewrite_results,
                                      std::size_t k, FusionRule rule);

} // namespace ragkit
