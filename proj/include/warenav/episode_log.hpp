#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "warenav/model_client.hpp"
#include "warenav/protocol.hpp"
#include "warenav/sensors.hpp"

namespace warenav {

inline constexpr std::string_view kLogSchema = "warenav.episode/1";

struct StepRecord {
    int step = 0;
    AgentPose pose_before;
    Action action = Action::Stop;
    AgentPose pose_after;
    double distance_after = 0.0;
    bool collided = false;
    bool warning = false;
    bool entity_contact = false;
    ParseStatus parse_status = ParseStatus::Json;
    std::string prompt_hash;
    std::string raw_response;
    double latency_ms = 0.0;
    std::optional<ModelExchange> exchange;

    bool operator==(const StepRecord&) const = default;
};

struct EpisodeHeader {
    std::string schema{kLogSchema};
    std::string config_digest;
    std::string scene;
    std::string scene_digest;
    std::size_t pair_index = 0;
    Point start;
    Heading start_theta = Heading::East;
    Point target;
    int max_steps = 70;
    double delta = kDefaultSuccessDelta;
    int history_len = 10;
    PromptVariant variant = PromptVariant::Odometry;
    std::string policy;
    std::int64_t seed = 0;
    int agent_radius = kDefaultAgentRadius;
    SensorConfig sensors;
    double d_init = 0.0;
    bool aborted = false;
    std::string abort_reason;

    bool operator==(const EpisodeHeader&) const = default;
};

struct EpisodeLog {
    EpisodeHeader header;
    std::vector<StepRecord> steps;

    bool operator==(const EpisodeLog&) const = default;
};

class LogError : public std::runtime_error {
public:
    /// `last_valid_step` is -1 when no step line was readable.
    LogError(const std::string& message, int last_valid_step = -1)
        : std::runtime_error(message), last_valid_step_(last_valid_step) {}
    int last_valid_step() const { return last_valid_step_; }

private:
    int last_valid_step_;
};

/// SHA-256 over the header's configuration fields (everything except the
/// digest itself and the abort status).
std::string config_digest(const EpisodeHeader& header);

/// Header line followed by one line per step, each newline-terminated.
std::string encode_log(const EpisodeLog& log);
EpisodeLog decode_log(std::string_view text);

void write_log(const EpisodeLog& log, const std::string& path);
EpisodeLog read_log(const std::string& path);

}  // namespace warenav
