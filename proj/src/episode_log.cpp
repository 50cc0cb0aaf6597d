#include "warenav/episode_log.hpp"

#include <fmt/format.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "warenav/digest.hpp"

namespace warenav {

using nlohmann::json;

namespace {

json pose_json(const AgentPose& p) { return {{"x", p.x}, {"y", p.y}, {"theta", degrees(p.theta)}, {"radius", p.radius}}; }

AgentPose pose_from(const json& j) {
    const auto theta = heading_from_degrees(j.at("theta").get<int>());
    if (!theta) throw std::runtime_error("theta is not a cardinal heading");
    return {j.at("x").get<int>(), j.at("y").get<int>(), *theta, j.at("radius").get<int>()};
}

json point_json(Point p) { return json::array({p.x, p.y}); }
Point point_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

json sensors_json(const SensorConfig& s) {
    return {{"fov", s.fov},
            {"n_rays", s.n_rays},
            {"warning",
             {{"threshold_m", s.warning.threshold_m},
              {"roi_half_angle", s.warning.roi_half_angle},
              {"roi_range_limit", s.warning.roi_range_limit}}}};
}

SensorConfig sensors_from(const json& j) {
    SensorConfig s;
    s.fov = j.at("fov").get<double>();
    s.n_rays = j.at("n_rays").get<int>();
    const auto& w = j.at("warning");
    s.warning = {w.at("threshold_m").get<double>(), w.at("roi_half_angle").get<double>(),
                 w.at("roi_range_limit").get<double>()};
    return s;
}

json config_json(const EpisodeHeader& h) {
    return {{"scene", h.scene},
            {"scene_digest", h.scene_digest},
            {"pair_index", h.pair_index},
            {"start", point_json(h.start)},
            {"start_theta", degrees(h.start_theta)},
            {"target", point_json(h.target)},
            {"max_steps", h.max_steps},
            {"delta", h.delta},
            {"history_len", h.history_len},
            {"variant", to_string(h.variant)},
            {"policy", h.policy},
            {"seed", h.seed},
            {"agent_radius", h.agent_radius},
            {"sensors", sensors_json(h.sensors)},
            {"d_init", h.d_init}};
}

json header_json(const EpisodeHeader& h) {
    json j = config_json(h);
    j["schema"] = h.schema;
    j["config_digest"] = h.config_digest;
    j["aborted"] = h.aborted;
    j["abort_reason"] = h.abort_reason;
    return j;
}

EpisodeHeader header_from(const json& j) {
    EpisodeHeader h;
    h.schema = j.at("schema").get<std::string>();
    if (h.schema != kLogSchema)
        throw LogError(fmt::format("unsupported log schema '{}' (expected '{}')", h.schema, kLogSchema));
    h.config_digest = j.at("config_digest").get<std::string>();
    h.scene = j.at("scene").get<std::string>();
    h.scene_digest = j.at("scene_digest").get<std::string>();
    h.pair_index = j.at("pair_index").get<std::size_t>();
    h.start = point_from(j.at("start"));
    const auto theta = heading_from_degrees(j.at("start_theta").get<int>());
    if (!theta) throw std::runtime_error("start_theta is not a cardinal heading");
    h.start_theta = *theta;
    h.target = point_from(j.at("target"));
    h.max_steps = j.at("max_steps").get<int>();
    h.delta = j.at("delta").get<double>();
    h.history_len = j.at("history_len").get<int>();
    const auto variant = prompt_variant_from_string(j.at("variant").get<std::string>());
    if (!variant) throw std::runtime_error("unknown prompt variant");
    h.variant = *variant;
    h.policy = j.at("policy").get<std::string>();
    h.seed = j.at("seed").get<std::int64_t>();
    h.agent_radius = j.at("agent_radius").get<int>();
    h.sensors = sensors_from(j.at("sensors"));
    h.d_init = j.at("d_init").get<double>();
    h.aborted = j.at("aborted").get<bool>();
    h.abort_reason = j.at("abort_reason").get<std::string>();
    return h;
}

json step_json(const StepRecord& s) {
    json j{{"step", s.step},
           {"pose_before", pose_json(s.pose_before)},
           {"action", to_string(s.action)},
           {"pose_after", pose_json(s.pose_after)},
           {"distance_after", s.distance_after},
           {"collided", s.collided},
           {"warning", s.warning},
           {"entity_contact", s.entity_contact},
           {"parse_status", to_string(s.parse_status)},
           {"prompt_hash", s.prompt_hash},
           {"raw_response", s.raw_response},
           {"latency_ms", s.latency_ms}};
    if (s.exchange)
        j["exchange"] = {{"request_body", s.exchange->request_body},
                         {"response_body", s.exchange->response_body},
                         {"attempts", s.exchange->attempts}};
    return j;
}

StepRecord step_from(const json& j) {
    StepRecord s;
    s.step = j.at("step").get<int>();
    s.pose_before = pose_from(j.at("pose_before"));
    const auto action = action_from_string(j.at("action").get<std::string>());
    if (!action) throw std::runtime_error("unknown action");
    s.action = *action;
    s.pose_after = pose_from(j.at("pose_after"));
    s.distance_after = j.at("distance_after").get<double>();
    s.collided = j.at("collided").get<bool>();
    s.warning = j.at("warning").get<bool>();
    s.entity_contact = j.at("entity_contact").get<bool>();
    const auto status = parse_status_from_string(j.at("parse_status").get<std::string>());
    if (!status) throw std::runtime_error("unknown parse_status");
    s.parse_status = *status;
    s.prompt_hash = j.at("prompt_hash").get<std::string>();
    s.raw_response = j.at("raw_response").get<std::string>();
    s.latency_ms = j.at("latency_ms").get<double>();
    if (j.contains("exchange")) {
        const auto& e = j.at("exchange");
        s.exchange = ModelExchange{e.at("request_body").get<std::string>(), e.at("response_body").get<std::string>(),
                                   e.at("attempts").get<int>()};
    }
    return s;
}

}  // namespace

std::string config_digest(const EpisodeHeader& header) { return sha256_hex(config_json(header).dump()); }

std::string encode_log(const EpisodeLog& log) {
    std::string out = header_json(log.header).dump() + "\n";
    for (const auto& s : log.steps) out += step_json(s).dump() + "\n";
    return out;
}

EpisodeLog decode_log(std::string_view text) {
    EpisodeLog log;
    std::size_t pos = 0;
    int line_no = 0;
    bool have_header = false;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        const bool terminated = end != std::string_view::npos;
        if (!terminated) end = text.size();
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        const int last_valid = log.steps.empty() ? -1 : log.steps.back().step;
        const auto j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw LogError(fmt::format("line {} is truncated or not JSON; last valid step is {}", line_no,
                                       last_valid < 0 ? std::string("none") : std::to_string(last_valid)),
                           last_valid);
        }
        try {
            if (!have_header) {
                log.header = header_from(j);
                have_header = true;
                continue;
            }
            auto step = step_from(j);
            if (step.step != static_cast<int>(log.steps.size()))
                throw std::runtime_error(fmt::format("expected step {}, found {}", log.steps.size(), step.step));
            log.steps.push_back(std::move(step));
        } catch (const LogError&) {
            throw;
        } catch (const std::exception& e) {
            throw LogError(fmt::format("line {}: {}", line_no, e.what()), last_valid);
        }
    }
    if (!have_header) throw LogError("log has no header line");
    return log;
}

void write_log(const EpisodeLog& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
    out << encode_log(log);
}

EpisodeLog read_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LogError(fmt::format("cannot read '{}'", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_log(buf.str());
}

}  // namespace warenav
