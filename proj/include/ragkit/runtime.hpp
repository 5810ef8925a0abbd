#pragma once

#include "ragkit/chat.hpp"
#include "ragkit/chunker.hpp"
#include "ragkit/config.hpp"
#include "ragkit/embedding.hpp"
#include "ragkit/pipeline.hpp"
#include "ragkit/rewriter.hpp"
#include "ragkit/vector_index.hpp"

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>

namespace ragkit {

// Wires configured providers into working components. One rate limiter is
// shared by every provider client built from the same runtime.
class Runtime {
  public:
    explicit Runtime(RunConfig config);

    const RunConfig& config() const { return config_; }

    std::shared_ptr<Embedder> embedder();
    Rewriter rewriter();                 // identity when provider is "mock"
    std::shared_ptr<ChatEndpoint> reader();
    std::shared_ptr<ChatEndpoint> annotator();

    // Loaded lazily from config paths; throw usage errors naming the command
    // when unset.
    const VectorIndex& index(const std::string& command);
    const std::vector<Chunk>& chunks(const std::string& command);
    RagPipeline::ChunkLookup chunk_lookup(const std::string& command);

    RagPipeline pipeline(const std::string& command, AnswerMode mode);

    PromptTemplate rewrite_template();
    PromptTemplate annotate_template();

  private:
    std::shared_ptr<ChatEndpoint> chat_endpoint(const ProviderConfig& provider, const char* role);

    RunConfig config_;
    std::shared_ptr<RateLimiter> limiter_;
    std::shared_ptr<Embedder> embedder_;
    std::optional<VectorIndex> index_;
    std::optional<std::vector<Chunk>> chunks_;
    std::shared_ptr<std::unordered_map<std::string, std::string>> chunk_texts_;
};

} // namespace ragkit
