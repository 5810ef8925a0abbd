#include "ragkit/pipeline.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/text.hpp"

namespace ragkit {

AnswerMode answer_mode_from_string(const std::string& name) {
    if (name == "full") return AnswerMode::full;
    if (name == "no_rewrite") return AnswerMode::no_rewrite;
    if (name == "no_retrieval") return AnswerMode::no_retrieval;
    throw Error(ErrorKind::usage,
                "unknown mode '" + name + "' (expected full, no_rewrite or no_retrieval)");
}

std::string to_string(AnswerMode mode) {
    switch (mode) {
    case AnswerMode::full: return "full";
    case AnswerMode::no_rewrite: return "no_rewrite";
    case AnswerMode::no_retrieval: return "no_retrieval";
    }
    return "full";
}

RagPipeline::RagPipeline(Rewriter rewriter, std::shared_ptr<Embedder> embedder,
                         const VectorIndex* index, ChunkLookup chunk_lookup,
                         std::shared_ptr<ChatEndpoint> reader, PipelineOptions options)
    : rewriter_(std::move(rewriter)), embedder_(std::move(embedder)), index_(index),
      chunk_lookup_(std::move(chunk_lookup)), reader_(std::move(reader)),
      options_(std::move(options)) {
    if (!reader_) throw Error(ErrorKind::config, "pipeline requires a reader endpoint");
    if (options_.k == 0) throw Error(ErrorKind::config, "k must be at least 1");
}

RagAnswer RagPipeline::answer(const std::string& question, AnswerMode mode) const {
    return answer(question, mode, options_.k);
}

namespace {

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (Error& e) {
        if (e.stage().empty()) e.set_stage(stage);
        throw;
    }
}

} // namespace

RagAnswer RagPipeline::answer(const std::string& question, AnswerMode mode,
                              std::size_t k_override) const {
    if (trim(question).empty()) throw Error(ErrorKind::data, "question must be nonempty");
    std::size_t k = k_override == 0 ? options_.k : k_override;

    RagAnswer result;
    result.question = question;
    result.mode = mode;
    result.rewrites.original = question;
    result.rewrites.rewrites = {question};

    if (mode != AnswerMode::no_retrieval) {
        if (index_ == nullptr)
            throw Error(ErrorKind::usage, "an index is required unless mode is no_retrieval");

        if (mode == AnswerMode::full)
            result.rewrites = run_stage("rewrite", [&] { return rewriter_.rewrite(question); });

        const auto& queries = result.rewrites.rewrites;
        std::size_t k_inner = options_.k_inner == 0 ? k : options_.k_inner;

        auto vectors = run_stage("embed", [&] { return embedder_->embed_batch(queries); });

        auto per_rewrite = run_stage("search", [&] {
            std::vector<std::size_t> order(queries.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            return parallel_map(
                order,
                [&](std::size_t i) {
                    auto docs = index_->search(vectors[i], k_inner);
                    for (auto& d : docs) d.source_rewrite = i;
                    return docs;
                },
                options_.retrieval_parallelism);
        });

        result.retrieved = fuse_with_rule(per_rewrite, k, options_.fusion);
    }

    // reader prompt is the concatenation q ∘ D, rendered documents-first
    std::string prompt = options_.reader_instruction;
    for (std::size_t i = 0; i < result.retrieved.size(); ++i) {
        auto text = chunk_lookup_ ? chunk_lookup_(result.retrieved[i].chunk_id) : std::nullopt;
        prompt += "\n\n[Document " + std::to_string(i + 1) + "]\n";
        prompt += text ? *text : "(" + result.retrieved[i].chunk_id + ": text unavailable)";
    }
    prompt += "\n\nQuestion: " + question;
    result.reader_prompt = prompt;

    result.answer_text = run_stage("read", [&] {
        return reader_->complete({ChatMessage{"user", prompt}}, options_.reader_temperature);
    });
    return result;
}

} // namespace ragkit
