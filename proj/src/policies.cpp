#include "warenav/policies.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <stdexcept>

#include "warenav/planning.hpp"

namespace warenav {

namespace {

double angular_difference(double a, double b) {
    const double d = std::fabs(std::fmod(a - b, 360.0));
    return std::min(d, 360.0 - d);
}

// Bearing in the heading convention: 0 = West, 90 = North, 180 = East, 270 = South.
double bearing_degrees(Point from, Point to) {
    const double deg = std::atan2(-(to.y - from.y), -(to.x - from.x)) * 180.0 / std::numbers::pi;
    return deg < 0 ? deg + 360.0 : deg;
}

Heading dominant_heading(Point from, Point to) {
    const int dx = to.x - from.x;
    const int dy = to.y - from.y;
    if (std::abs(dx) >= std::abs(dy)) return dx >= 0 ? Heading::East : Heading::West;
    return dy >= 0 ? Heading::South : Heading::North;
}

PolicyResponse scripted(Action action, std::string_view reasoning) { return {scripted_reply(action, reasoning), 0.0, {}}; }

}  // namespace

std::string scripted_reply(Action action, std::string_view reasoning) {
    return nlohmann::json{{"action", to_string(action)}, {"reasoning", reasoning}}.dump();
}

bool forward_blocked(const DepthProfile& depth, int agent_radius) {
    for (const auto& ray : depth.rays) {
        if (ray.kind == HitKind::None) continue;
        const double a = ray.angle * std::numbers::pi / 180.0;
        const double lateral = std::fabs(ray.distance * std::sin(a));
        const double ahead = ray.distance * std::cos(a);
        if (lateral < agent_radius && ahead < kStepPx + agent_radius) return true;
    }
    return false;
}

Action greedy_action(const WorldState& state, const DepthProfile& depth, double delta) {
    const auto& pose = state.pose;
    if (distance_to_target(pose, state.target) <= delta) return Action::Stop;
    if (pose.theta == dominant_heading(pose.position(), state.target) && !forward_blocked(depth, pose.radius))
        return Action::Forward;
    const double bearing = bearing_degrees(pose.position(), state.target);
    const double right = angular_difference(degrees(apply_turn(pose, TurnDirection::Right).theta), bearing);
    const double left = angular_difference(degrees(apply_turn(pose, TurnDirection::Left).theta), bearing);
    return left < right ? Action::TurnLeft : Action::TurnRight;
}

Action oracle_action(const WorldState& state, const SceneConfig& scene, double delta) {
    const auto& pose = state.pose;
    const Vec2 target = to_vec(state.target);
    if (distance_to_target(pose, state.target) <= delta) return Action::Stop;
    const MotionLattice lattice(scene, pose.position(), pose.radius, scene.entity_discs(state.entity_phases));
    const auto plan = plan_actions(lattice, pose, target, delta);
    if (!plan) return Action::TurnRight;
    return plan->empty() ? Action::Stop : plan->front();
}

PolicyResponse GreedyPolicy::respond(const PolicyInput& input) {
    return scripted(greedy_action(input.state, input.observation.depth, input.delta), "greedy");
}

PolicyResponse OraclePolicy::respond(const PolicyInput& input) {
    return scripted(oracle_action(input.state, input.scene, input.delta), "oracle");
}

ScriptedPolicy::ScriptedPolicy(std::string name, std::vector<Action> actions, Action then)
    : name_(std::move(name)), actions_(std::move(actions)), then_(then) {}

PolicyResponse ScriptedPolicy::respond(const PolicyInput&) {
    const Action a = next_ < actions_.size() ? actions_[next_] : then_;
    ++next_;
    return scripted(a, "scripted");
}

ReplayTextPolicy::ReplayTextPolicy(std::string name, std::vector<std::string> replies)
    : name_(std::move(name)), replies_(std::move(replies)) {
    if (replies_.empty()) throw std::invalid_argument("ReplayTextPolicy needs at least one reply");
}

PolicyResponse ReplayTextPolicy::respond(const PolicyInput&) {
    const auto& raw = replies_[std::min(next_, replies_.size() - 1)];
    ++next_;
    return {raw, 0.0, {}};
}

PolicyResponse ModelPolicy::respond(const PolicyInput& input) {
    const auto t0 = std::chrono::steady_clock::now();
    ModelReply reply = client_->query(input.prompt);
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - t0;
    return {std::move(reply.text), elapsed.count(), std::move(reply.exchange)};
}

std::unique_ptr<Policy> make_scripted_policy(std::string_view name) {
    if (name == "greedy") return std::make_unique<GreedyPolicy>();
    if (name == "oracle") return std::make_unique<OraclePolicy>();
    if (name == "always-forward")
        return std::make_unique<ScriptedPolicy>("always-forward", std::vector<Action>{}, Action::Forward);
    if (name == "always-stop")
        return std::make_unique<ScriptedPolicy>("always-stop", std::vector<Action>{}, Action::Stop);
    throw std::invalid_argument(fmt::format("unknown scripted policy '{}'", name));
}

std::vector<std::string> scripted_policy_names() { return {"greedy", "oracle", "always-forward", "always-stop"}; }

}  // namespace warenav
