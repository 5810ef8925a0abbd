#include "ragkit/chat.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/text.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <thread>

namespace ragkit {

HttpChatEndpoint::HttpChatEndpoint(HttpChatConfig config, std::shared_ptr<RateLimiter> limiter)
    : config_(std::move(config)), limiter_(std::move(limiter)) {
    if (config_.base_url.empty())
        throw Error(ErrorKind::config, "chat endpoint base_url is required");
}

std::string HttpChatEndpoint::post_once(const std::vector<ChatMessage>& messages,
                                        double temperature) {
    if (limiter_) limiter_->acquire();

    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_s, 0);
    client.set_read_timeout(config_.timeout_s, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty())
        headers.emplace("Authorization", "Bearer " + config_.api_key);

    nlohmann::json body;
    body["model"] = config_.model;
    auto msgs = nlohmann::json::array();
    for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
    body["messages"] = std::move(msgs);
    body["temperature"] = temperature;

    auto res = client.Post(config_.path, headers, body.dump(), "application/json");
    if (!res)
        throw Error(ErrorKind::transport, "chat request to " + config_.base_url +
                                              " failed: " + httplib::to_string(res.error()));
    if (res->status == 429 || res->status >= 500)
        throw Error(ErrorKind::transport,
                    "chat endpoint returned HTTP " + std::to_string(res->status));
    if (res->status != 200)
        throw Error(ErrorKind::provider, "chat endpoint returned HTTP " +
                                             std::to_string(res->status) + ": " +
                                             res->body.substr(0, 200));

    nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty() ||
        !parsed["choices"][0].contains("message"))
        throw Error(ErrorKind::provider, "chat endpoint returned malformed JSON");
    return parsed["choices"][0]["message"].value("content", "");
}

std::string HttpChatEndpoint::complete(const std::vector<ChatMessage>& messages,
                                       double temperature) {
    int attempts = 0;
    int backoff = config_.backoff_ms;
    while (true) {
        ++attempts;
        try {
            return post_once(messages, temperature);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::transport || attempts > config_.retries)
                throw TransportError(std::string(e.what()) + " (after " +
                                         std::to_string(attempts) + " attempts)",
                                     attempts);
            if (backoff > 0) std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
            backoff *= 2;
        }
    }
}

namespace {

std::string last_user_content(const std::vector<ChatMessage>& messages) {
    for (auto it = messages.rbegin(); it != messages.rend(); ++it)
        if (it->role == "user") return it->content;
    return messages.empty() ? std::string{} : messages.back().content;
}

std::string extract_answer(const std::string& prompt) {
    // question section = text after the last "Question:" marker
    std::size_t qpos = prompt.rfind("Question:");
    std::string question = qpos == std::string::npos ? prompt : prompt.substr(qpos + 9);

    std::vector<std::string> payloads;
    for (const auto& line : split_lines(prompt)) {
        std::istringstream ss(line);
        std::string word, token, payload, extra;
        if (!(ss >> word) || word != "HINT") continue;
        if (!(ss >> token >> payload)) continue;
        if (ss >> extra) continue; // exactly three fields
        if (question.find(token) != std::string::npos) payloads.push_back(payload);
    }
    if (payloads.empty()) return "no relevant information found";
    std::sort(payloads.begin(), payloads.end());
    return join(payloads, " ");
}

} // namespace

std::shared_ptr<ChatEndpoint> make_mock_chat(const std::string& behavior) {
    if (behavior == "echo")
        return std::make_shared<FnChatEndpoint>(
            "mock-echo", [](const std::vector<ChatMessage>& m) { return last_user_content(m); });
    if (behavior == "extract")
        return std::make_shared<FnChatEndpoint>("mock-extract", [](const std::vector<ChatMessage>& m) {
            return extract_answer(last_user_content(m));
        });
    throw Error(ErrorKind::config, "unknown mock chat behavior '" + behavior + "'");
}

} // namespace ragkit
