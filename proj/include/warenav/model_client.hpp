#pragma once

#include <condition_variable>
#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>

#include "warenav/protocol.hpp"

namespace warenav {

struct ModelEndpointConfig {
    std::string base_url = "https://openrouter.ai/api/v1";
    std::string model_id;
    std::string api_key_env = "OPENROUTER_API_KEY";
    double timeout_s = 60.0;
    int max_retries = 3;
    double temperature = 0.0;
    /// First retry waits this long; each further retry doubles it.
    double backoff_base_s = 1.0;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Missing key, or the endpoint answered 401/403.
class AuthError : public ModelError {
public:
    using ModelError::ModelError;
};

class RetriesExhausted : public ModelError {
public:
    using ModelError::ModelError;
};

class MalformedResponse : public ModelError {
public:
    using ModelError::ModelError;
};

/// Verbatim wire bodies; the key only travels in a header and never appears here.
struct ModelExchange {
    std::string request_body;
    std::string response_body;
    int attempts = 0;

    bool operator==(const ModelExchange&) const = default;
};

struct ModelReply {
    std::string text;
    ModelExchange exchange;
};

std::string build_request_body(const ModelEndpointConfig& config, const PromptBundle& bundle);
/// Assistant text of the first choice.
std::string extract_reply_text(std::string_view response_body);

/// Chat-completion client. Shareable across threads; at most `max_in_flight`
/// requests are outstanding at once.
class ModelClient {
public:
    explicit ModelClient(ModelEndpointConfig config, std::size_t max_in_flight = 4);

    ModelReply query(const PromptBundle& bundle);
    const ModelEndpointConfig& config() const { return config_; }

private:
    ModelEndpointConfig config_;
    std::size_t max_in_flight_;
    std::size_t in_flight_ = 0;
    std::mutex mutex_;
    std::condition_variable slot_free_;
};

std::string query_model(const ModelEndpointConfig& config, const PromptBundle& bundle);

}  // namespace warenav
