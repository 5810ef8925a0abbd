#include "ragkit/discrepancy.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/jsonl.hpp"
#include "ragkit/text.hpp"

#include <algorithm>

namespace ragkit {

double discrepancy(const std::string& query, const std::string& doc_text, Embedder& embedder) {
    if (trim(query).empty() || trim(doc_text).empty())
        throw Error(ErrorKind::data, "discrepancy requires nonempty query and document text");
    auto vectors = embedder.embed_batch({query, doc_text});
    double cos = cosine_similarity(vectors[0], vectors[1]);
    return std::clamp(1.0 - cos, 0.0, 1.0);
}

std::vector<DiscrepancyPair> read_discrepancy_pairs(const std::string& path) {
    std::vector<DiscrepancyPair> pairs;
    for_each_jsonl(path, [&](const nlohmann::json& j, std::size_t line_no) {
        if (!j.contains("query") || !j.contains("doc"))
            throw Error(ErrorKind::data,
                        path + ":" + std::to_string(line_no) + ": expected fields 'query' and 'doc'");
        DiscrepancyPair pair;
        pair.query = j["query"].get<std::string>();
        pair.doc_text = j["doc"].get<std::string>();
        if (j.contains("rewrite")) pair.rewrite = j["rewrite"].get<std::string>();
        pairs.push_back(std::move(pair));
    });
    return pairs;
}

DiscrepancyReport discrepancy_batch(const std::vector<DiscrepancyPair>& pairs, Embedder& embedder) {
    if (pairs.empty()) throw Error(ErrorKind::data, "discrepancy_batch requires at least one pair");
    DiscrepancyReport report;
    report.pair_count = pairs.size();
    for (const auto& pair : pairs) {
        report.mean_before += discrepancy(pair.query, pair.doc_text, embedder);
        report.mean_after +=
            discrepancy(pair.rewrite ? *pair.rewrite : pair.query, pair.doc_text, embedder);
    }
    report.mean_before /= static_cast<double>(pairs.size());
    report.mean_after /= static_cast<double>(pairs.size());
    return report;
}

} // namespace ragkit
