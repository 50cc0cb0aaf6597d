#include "warenav/model_client.hpp"

#include <fmt/format.h>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <nlohmann/json.hpp>
#include <thread>

#include "warenav/digest.hpp"

namespace warenav {

namespace {

struct Url {
    std::string origin;  // scheme://host[:port]
    std::string path;    // without trailing slash
};

Url split_url(const std::string& base) {
    const auto scheme_end = base.find("://");
    if (scheme_end == std::string::npos) throw std::invalid_argument(fmt::format("bad base_url '{}'", base));
    const auto slash = base.find('/', scheme_end + 3);
    Url url{base.substr(0, slash), slash == std::string::npos ? "" : base.substr(slash)};
    while (!url.path.empty() && url.path.back() == '/') url.path.pop_back();
    return url;
}

class SlotGuard {
public:
    SlotGuard(std::mutex& m, std::condition_variable& cv, std::size_t& count, std::size_t cap)
        : m_(m), cv_(cv), count_(count) {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return count_ < cap; });
        ++count_;
    }
    ~SlotGuard() {
        {
            std::lock_guard lock(m_);
            --count_;
        }
        cv_.notify_one();
    }
    SlotGuard(const SlotGuard&) = delete;
    SlotGuard& operator=(const SlotGuard&) = delete;

private:
    std::mutex& m_;
    std::condition_variable& cv_;
    std::size_t& count_;
};

}  // namespace

std::string build_request_body(const ModelEndpointConfig& config, const PromptBundle& bundle) {
    nlohmann::json content = nlohmann::json::array();
    content.push_back({{"type", "text"}, {"text", bundle.text}});
    for (const auto& image : bundle.images) {
        const auto png = encode_png(image.raster);
        content.push_back(
            {{"type", "image_url"}, {"image_url", {{"url", "data:image/png;base64," + base64_encode(png)}}}});
    }
    nlohmann::json body{{"model", config.model_id},
                        {"temperature", config.temperature},
                        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", content}}})}};
    return body.dump();
}

std::string extract_reply_text(std::string_view response_body) {
    const auto doc = nlohmann::json::parse(response_body, nullptr, false);
    if (doc.is_discarded()) throw MalformedResponse("endpoint response is not JSON");
    try {
        const auto& message = doc.at("choices").at(0).at("message");
        const auto& content = message.at("content");
        if (content.is_string()) return content.get<std::string>();
        if (content.is_array()) {
            std::string text;
            for (const auto& part : content)
                if (part.value("type", "") == "text") text += part.at("text").get<std::string>();
            return text;
        }
    } catch (const nlohmann::json::exception& e) {
        throw MalformedResponse(fmt::format("endpoint response lacks choices[0].message.content: {}", e.what()));
    }
    throw MalformedResponse("endpoint response content has an unexpected type");
}

ModelClient::ModelClient(ModelEndpointConfig config, std::size_t max_in_flight)
    : config_(std::move(config)), max_in_flight_(max_in_flight == 0 ? 1 : max_in_flight) {
    if (config_.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
    if (!(config_.timeout_s > 0)) throw std::invalid_argument("timeout_s must be > 0");
}

ModelReply ModelClient::query(const PromptBundle& bundle) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || !*key) throw AuthError(fmt::format("environment variable {} is not set", config_.api_key_env));

    const Url url = split_url(config_.base_url);
    ModelReply reply;
    reply.exchange.request_body = build_request_body(config_, bundle);

    httplib::Client client(url.origin);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::duration<double>(config_.timeout_s));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    const httplib::Headers headers{{"Authorization", std::string("Bearer ") + key}};

    std::string last_failure;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            const double wait = config_.backoff_base_s * std::pow(2.0, attempt - 1);
            spdlog::warn("model request failed ({}); retry {}/{} in {:.2f}s", last_failure, attempt,
                         config_.max_retries, wait);
            std::this_thread::sleep_for(std::chrono::duration<double>(wait));
        }
        reply.exchange.attempts = attempt + 1;
        httplib::Result res = [&] {
            SlotGuard slot(mutex_, slot_free_, in_flight_, max_in_flight_);
            return client.Post(url.path + "/chat/completions", headers, reply.exchange.request_body,
                               "application/json");
        }();
        if (!res) {
            last_failure = httplib::to_string(res.error());
            continue;
        }
        if (res->status == 401 || res->status == 403)
            throw AuthError(fmt::format("endpoint rejected credentials (HTTP {})", res->status));
        if (res->status >= 500 || res->status == 429) {
            last_failure = fmt::format("HTTP {}", res->status);
            continue;
        }
        reply.exchange.response_body = res->body;
        if (res->status != 200) {
            spdlog::error("model endpoint returned HTTP {}", res->status);
            throw ModelError(fmt::format("endpoint returned HTTP {}", res->status));
        }
        try {
            reply.text = extract_reply_text(res->body);
        } catch (const MalformedResponse& e) {
            spdlog::error("malformed model response: {}", e.what());
            throw;
        }
        return reply;
    }
    spdlog::error("model request gave up after {} attempts: {}", config_.max_retries + 1, last_failure);
    throw RetriesExhausted(
        fmt::format("no successful response after {} attempts (last: {})", config_.max_retries + 1, last_failure));
}

std::string query_model(const ModelEndpointConfig& config, const PromptBundle& bundle) {
    ModelClient client(config, 1);
    return client.query(bundle).text;
}

}  // namespace warenav
