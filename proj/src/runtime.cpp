#include "ragkit/runtime.hpp"

#include "ragkit/errors.hpp"

namespace ragkit {

namespace {

// Built-in zero-shot rewrite template used when no file is configured.
PromptTemplate builtin_rewrite_template() {
    PromptTemplate tmpl;
    tmpl.name = "builtin-rewrite";
    tmpl.instruction =
        "You rewrite user questions into retrieval queries for a professional "
        "document corpus. The documents use formal domain terminology, so replace "
        "informal phrasings with the terms the documents would use. Return a "
        "numbered list with one query per line.";
    tmpl.question_block = "Question: {question}\nRewrites:";
    tmpl.zero_shot = true;
    return tmpl;
}

PromptTemplate builtin_annotate_template() {
    PromptTemplate tmpl;
    tmpl.name = "builtin-annotate";
    tmpl.instruction =
        "You are given a question and its reference answer. First write a "
        "step-by-step analysis of how the answer is derived from the reference "
        "material. Then summarize which retrieval queries are important in that "
        "analysis. Respond with a line 'ANALYSIS:' followed by the steps, then a "
        "line 'REWRITES:' followed by a numbered list of queries.";
    tmpl.question_block = "{question}";
    tmpl.zero_shot = true;
    return tmpl;
}

} // namespace

Runtime::Runtime(RunConfig config) : config_(std::move(config)) {
    limiter_ = std::make_shared<RateLimiter>(config_.rate_limit_per_s);
}

std::shared_ptr<Embedder> Runtime::embedder() {
    if (embedder_) return embedder_;

    std::shared_ptr<EmbeddingProvider> provider;
    if (config_.embedder.provider == "mock") {
        provider = std::make_shared<MockEmbeddingProvider>(config_.embedder.dim, config_.seed);
    } else {
        HttpEmbeddingConfig http;
        http.base_url = config_.embedder.base_url;
        http.model = config_.embedder.model;
        http.api_key = config_.embedder.api_key;
        http.timeout_s = config_.http_timeout_s;
        http.expect_dim = config_.embedder.dim;
        provider = std::make_shared<HttpEmbeddingProvider>(std::move(http), limiter_);
    }

    EmbedOptions options;
    options.retries = config_.http_retries;
    options.backoff_ms = config_.http_backoff_ms;
    options.parallelism = config_.parallelism;
    options.cache_dir = config_.cache_dir;
    embedder_ = std::make_shared<Embedder>(std::move(provider), std::move(options));
    return embedder_;
}

std::shared_ptr<ChatEndpoint> Runtime::chat_endpoint(const ProviderConfig& provider,
                                                     const char* role) {
    if (provider.provider == "mock")
        return make_mock_chat(provider.mock_behavior.empty() ? "echo" : provider.mock_behavior);

    HttpChatConfig http;
    http.base_url = provider.base_url;
    http.model = provider.model;
    http.api_key = provider.api_key;
    http.timeout_s = config_.http_timeout_s;
    http.retries = config_.http_retries;
    http.backoff_ms = config_.http_backoff_ms;
    if (http.base_url.empty())
        throw Error(ErrorKind::config, std::string(role) + ".base_url is required for provider 'http'");
    return std::make_shared<HttpChatEndpoint>(std::move(http), limiter_);
}

Rewriter Runtime::rewriter() {
    if (config_.rewriter.provider == "mock") return Rewriter::identity();
    return Rewriter(chat_endpoint(config_.rewriter, "rewriter"), rewrite_template(),
                    config_.max_rewrites, config_.temperature);
}

std::shared_ptr<ChatEndpoint> Runtime::reader() {
    return chat_endpoint(config_.reader, "reader");
}

std::shared_ptr<ChatEndpoint> Runtime::annotator() {
    return chat_endpoint(config_.annotator, "annotator");
}

PromptTemplate Runtime::rewrite_template() {
    if (config_.rewrite_template.empty()) return builtin_rewrite_template();
    return load_prompt_template(config_.rewrite_template);
}

PromptTemplate Runtime::annotate_template() {
    if (config_.annotate_template.empty()) return builtin_annotate_template();
    return load_prompt_template(config_.annotate_template);
}

const VectorIndex& Runtime::index(const std::string& command) {
    if (!index_) {
        if (config_.index_path.empty())
            throw Error(ErrorKind::usage, "command '" + command +
                                              "' needs an index; set 'index' in the config or "
                                              "pass --index");
        index_ = load_index(config_.index_path);
    }
    return *index_;
}

const std::vector<Chunk>& Runtime::chunks(const std::string& command) {
    if (!chunks_) {
        if (config_.chunks_path.empty())
            throw Error(ErrorKind::usage, "command '" + command +
                                              "' needs chunk texts; set 'chunks' in the config or "
                                              "pass --chunks");
        chunks_ = read_chunks_jsonl(config_.chunks_path);
    }
    return *chunks_;
}

RagPipeline::ChunkLookup Runtime::chunk_lookup(const std::string& command) {
    if (!chunk_texts_) {
        chunk_texts_ = std::make_shared<std::unordered_map<std::string, std::string>>();
        for (const auto& chunk : chunks(command)) (*chunk_texts_)[chunk.chunk_id] = chunk.text;
    }
    auto texts = chunk_texts_;
    return [texts](const std::string& id) -> std::optional<std::string> {
        auto it = texts->find(id);
        if (it == texts->end()) return std::nullopt;
        return it->second;
    };
}

RagPipeline Runtime::pipeline(const std::string& command, AnswerMode mode) {
    PipelineOptions options;
    options.k = config_.k;
    options.k_inner = config_.k_inner;
    options.fusion = config_.fusion;
    if (!config_.reader_template.empty()) {
        toml::Value reader = toml::parse_file(config_.reader_template);
        std::string instruction = reader.get_string("instruction", "");
        if (instruction.empty())
            throw Error(ErrorKind::config,
                        "reader template " + config_.reader_template + " lacks 'instruction'");
        options.reader_instruction = instruction;
    }
    if (!config_.reader_instruction.empty()) options.reader_instruction = config_.reader_instruction;
    options.reader_temperature = config_.temperature;
    options.retrieval_parallelism = config_.parallelism;

    const VectorIndex* idx = nullptr;
    RagPipeline::ChunkLookup lookup;
    if (mode != AnswerMode::no_retrieval) {
        idx = &index(command);
        lookup = chunk_lookup(command);
    }
    return RagPipeline(rewriter(), embedder(), idx, std::move(lookup), reader(), options);
}

} // namespace ragkit
