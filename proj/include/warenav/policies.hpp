#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "warenav/model_client.hpp"
#include "warenav/protocol.hpp"
#include "warenav/sensors.hpp"

namespace warenav {

/// Everything a policy may look at when choosing the next action.
struct PolicyInput {
    const WorldState& state;
    const SceneConfig& scene;
    const Observation& observation;
    const PromptBundle& prompt;
    double delta;
    std::span<const Action> allowed;
};

struct PolicyResponse {
    std::string raw;
    double latency_ms = 0.0;
    std::optional<ModelExchange> exchange;
};

/// One instance drives one episode; instances may keep per-episode state.
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string name() const = 0;
    /// Whether prompts must carry rendered images.
    virtual bool needs_images() const { return false; }
    /// Raw reply text, to be run through parse_decision. May throw ModelError.
    virtual PolicyResponse respond(const PolicyInput& input) = 0;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

/// Raw reply a scripted policy emits for `action`: `{"action":"...","reasoning":"..."}`.
std::string scripted_reply(Action action, std::string_view reasoning);

/// A hit counts as blocking when it lies within the agent's width and one step ahead.
bool forward_blocked(const DepthProfile& depth, int agent_radius);

Action greedy_action(const WorldState& state, const DepthProfile& depth, double delta);
/// Replans on the motion lattice with entities at their current phases as blockers.
Action oracle_action(const WorldState& state, const SceneConfig& scene, double delta);

class GreedyPolicy final : public Policy {
public:
    std::string name() const override { return "greedy"; }
    PolicyResponse respond(const PolicyInput& input) override;
};

class OraclePolicy final : public Policy {
public:
    std::string name() const override { return "oracle"; }
    PolicyResponse respond(const PolicyInput& input) override;
};

/// Plays `actions` in order, then repeats `then` forever.
class ScriptedPolicy final : public Policy {
public:
    ScriptedPolicy(std::string name, std::vector<Action> actions, Action then);
    std::string name() const override { return name_; }
    PolicyResponse respond(const PolicyInput& input) override;

private:
    std::string name_;
    std::vector<Action> actions_;
    Action then_;
    std::size_t next_ = 0;
};

/// Emits the given raw strings verbatim, then repeats the last one.
class ReplayTextPolicy final : public Policy {
public:
    ReplayTextPolicy(std::string name, std::vector<std::string> replies);
    std::string name() const override { return name_; }
    PolicyResponse respond(const PolicyInput& input) override;

private:
    std::string name_;
    std::vector<std::string> replies_;
    std::size_t next_ = 0;
};

class ModelPolicy final : public Policy {
public:
    explicit ModelPolicy(std::shared_ptr<ModelClient> client) : client_(std::move(client)) {}
    std::string name() const override { return client_->config().model_id; }
    bool needs_images() const override { return true; }
    PolicyResponse respond(const PolicyInput& input) override;

private:
    std::shared_ptr<ModelClient> client_;
};

/// greedy, oracle, always-forward, always-stop.
std::unique_ptr<Policy> make_scripted_policy(std::string_view name);
std::vector<std::string> scripted_policy_names();

}  // namespace warenav
