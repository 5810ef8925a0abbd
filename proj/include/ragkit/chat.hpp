#pragma once

#include "ragkit/parallel.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace ragkit {

struct ChatMessage {
    std::string role; // "system" | "user" | "assistant"
    std::string content;
};

class ChatEndpoint {
  public:
    virtual ~ChatEndpoint() = default;

    virtual std::string complete(const std::vector<ChatMessage>& messages, double temperature) = 0;
    virtual std::string model_tag() const = 0;
};

struct HttpChatConfig {
    std::string base_url;
    std::string path = "/v1/chat/completions";
    std::string model;
    std::string api_key;
    int timeout_s = 60;
    int retries = 2;      // additional attempts after the first
    int backoff_ms = 100; // doubled per retry
};

// POSTs {model, messages, temperature} and reads
// {choices: [{message: {content}}]}, the de-facto chat completions convention.
class HttpChatEndpoint : public ChatEndpoint {
  public:
    explicit HttpChatEndpoint(HttpChatConfig config, std::shared_ptr<RateLimiter> limiter = nullptr);

    std::string complete(const std::vector<ChatMessage>& messages, double temperature) override;
    std::string model_tag() const override { return config_.model; }

  private:
    std::string post_once(const std::vector<ChatMessage>& messages, double temperature);

    HttpChatConfig config_;
    std::shared_ptr<RateLimiter> limiter_;
};

// Test and offline endpoint driven by a plain function.
class FnChatEndpoint : public ChatEndpoint {
  public:
    using Fn = std::function<std::string(const std::vector<ChatMessage>&)>;

    FnChatEndpoint(std::string tag, Fn fn) : tag_(std::move(tag)), fn_(std::move(fn)) {}

    std::string complete(const std::vector<ChatMessage>& messages, double) override {
        return fn_(messages);
    }
    std::string model_tag() const override { return tag_; }

  private:
    std::string tag_;
    Fn fn_;
};

// Offline reader stand-ins:
//  "echo"    - returns the whole prompt (audit-friendly)
//  "extract" - collects `HINT <token> <payload>` lines from the prompt whose
//              token occurs in the question section, sorts the payloads and
//              joins them with spaces
std::shared_ptr<ChatEndpoint> make_mock_chat(const std::string& behavior);

} // namespace ragkit
