#include "ragkit/fusion.hpp"

#include "ragkit/errors.hpp"

#include <algorithm>
#include <unordered_map>

namespace ragkit {

FusionRule fusion_rule_from_string(const std::string& name) {
    if (name == "max") return FusionRule::max_score;
    if (name == "sum") return FusionRule::sum_score;
    if (name == "rrf") return FusionRule::reciprocal_rank;
    throw Error(ErrorKind::config, "unknown fusion rule '" + name + "' (expected max, sum or rrf)");
}

std::string to_string(FusionRule rule) {
    switch (rule) {
    case FusionRule::max_score: return "max";
    case FusionRule::sum_score: return "sum";
    case FusionRule::reciprocal_rank: return "rrf";
    }
    return "max";
}

namespace {

std::vector<ScoredDoc> rank_and_cut(std::unordered_map<std::string, ScoredDoc>& pool,
                                    std::size_t k) {
    std::vector<ScoredDoc> out;
    out.reserve(pool.size());
    for (auto& [_, doc] : pool) out.push_back(std::move(doc));
    std::sort(out.begin(), out.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.chunk_id < b.chunk_id;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

} // namespace

std::vector<ScoredDoc> fuse(const std::vector<std::vector<ScoredDoc>>& per_rewrite_results,
                            std::size_t k) {
    if (k == 0) throw Error(ErrorKind::data, "fuse requires k >= 1");
    std::unordered_map<std::string, ScoredDoc> best;
    for (const auto& list : per_rewrite_results) {
        for (const auto& doc : list) {
            auto it = best.find(doc.chunk_id);
            if (it == best.end()) {
                best.emplace(doc.chunk_id, doc);
            } else if (doc.score > it->second.score ||
                       (doc.score == it->second.score &&
                        doc.source_rewrite < it->second.source_rewrite)) {
                it->second = doc;
            }
        }
    }
    return rank_and_cut(best, k);
}

std::vector<ScoredDoc> fuse_with_rule(const std::vector<std::vector<ScoredDoc>>& per_rewrite_results,
                                      std::size_t k, FusionRule rule) {
    if (rule == FusionRule::max_score) return fuse(per_rewrite_results, k);
    if (k == 0) throw Error(ErrorKind::data, "fuse requires k >= 1");

    std::unordered_map<std::string, ScoredDoc> pool;
    std::size_t lists = std::max<std::size_t>(per_rewrite_results.size(), 1);
    for (const auto& list : per_rewrite_results) {
        for (std::size_t rank = 0; rank < list.size(); ++rank) {
            const auto& doc = list[rank];
            double contribution = rule == FusionRule::sum_score
                                      ? doc.score / static_cast<double>(lists)
                                      : 1.0 / (60.0 + static_cast<double>(rank) + 1.0);
            auto it = pool.find(doc.chunk_id);
            if (it == pool.end()) {
                ScoredDoc merged = doc;
                merged.score = contribution;
                pool.emplace(doc.chunk_id, std::move(merged));
            } else {
                it->second.score += contribution;
                it->second.source_rewrite = std::min(it->second.source_rewrite, doc.source_rewrite);
            }
        }
    }
    return rank_and_cut(pool, k);
}

} // namespace ragkit
