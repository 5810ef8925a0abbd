#pragma once

#include "ragkit/chat.hpp"
#include "ragkit/embedding.hpp"
#include "ragkit/fusion.hpp"
#include "ragkit/rewriter.hpp"
#include "ragkit/vector_index.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ragkit {

enum class AnswerMode {
    full,        // rewrite -> retrieve per rewrite -> fuse -> read
    no_rewrite,  // retrieve with the original query
    no_retrieval // the reader answers the bare question
};

AnswerMode answer_mode_from_string(const std::string& name);
std::string to_string(AnswerMode mode);

struct RagAnswer {
    std::string question;
    RewriteSet rewrites;
    std::vector<ScoredDoc> retrieved; // fused order; empty in no_retrieval mode
    std::string answer_text;
    std::string reader_prompt; // audit
    AnswerMode mode = AnswerMode::full;
};

struct PipelineOptions {
    std::size_t k = 4;
    std::size_t k_inner = 0; // 0 = same as k
    FusionRule fusion = FusionRule::max_score;
    std::string reader_instruction =
        "Answer the question using the documents below. If they do not contain "
        "the answer, say so briefly.";
    double reader_temperature = 0.0;
    std::size_t retrieval_parallelism = 2;
};

// Orchestrates rewrite, per-rewrite retrieval, fusion and answer generation.
// The chunk lookup maps chunk ids to their text for the reader prompt.
class RagPipeline {
  public:
    using ChunkLookup = std::function<std::optional<std::string>(const std::string&)>;

    RagPipeline(Rewriter rewriter, std::shared_ptr<Embedder> embedder, const VectorIndex* index,
                ChunkLookup chunk_lookup, std::shared_ptr<ChatEndpoint> reader,
                PipelineOptions options = {});

    RagAnswer answer(const std::string& question, AnswerMode mode) const;
    RagAnswer answer(const std::string& question, AnswerMode mode, std::size_t k_override) const;

    const PipelineOptions& options() const { return options_; }

  private:
    Rewriter rewriter_;
    std::shared_ptr<Embedder> embedder_;
    const VectorIndex* index_;
    ChunkLookup chunk_lookup_;
    std::shared_ptr<ChatEndpoint> reader_;
    PipelineOptions options_;
};

} // namespace ragkit
