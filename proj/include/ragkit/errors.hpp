#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ragkit {

// Error taxonomy shared by every module. The CLI maps kinds to exit codes:
// user-side problems (usage, config, data, decode, io) exit 1, provider-side
// problems (transport, provider, integrity) exit 2.
enum class ErrorKind {
    usage,
    config,
    data,
    decode,
    io,
    transport,
    provider,
    integrity,
    internal,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    Error(ErrorKind kind, std::string message, std::string stage)
        : std::runtime_error(std::move(message)), kind_(kind), stage_(std::move(stage)) {}

    ErrorKind kind() const { return kind_; }

    // Pipeline stage that raised the error ("rewrite", "embed", "search", "read"),
    // empty when raised outside the answer pipeline.
    const std::string& stage() const { return stage_; }
    void set_stage(std::string stage) { stage_ = std::move(stage); }

    int exit_code() const {
        switch (kind_) {
        case ErrorKind::transport:
        case ErrorKind::provider:
        case ErrorKind::integrity:
            return 2;
        default:
            return 1;
        }
    }

  private:
    ErrorKind kind_;
    std::string stage_;
};

// Transport failures carry how many attempts were made so callers can log or
// apply their own skip/abort policy.
class TransportError : public Error {
  public:
    TransportError(std::string message, int attempts)
        : Error(ErrorKind::transport, std::move(message)), attempts_(attempts) {}

    int attempts() const { return attempts_; }

  private:
    int attempts_ = 0;
};

} // namespace ragkit
