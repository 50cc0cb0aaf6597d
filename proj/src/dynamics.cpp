#include "warenav/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace warenav {

std::string_view to_string(Action a) {
    switch (a) {
        case Action::Forward: return "forward";
        case Action::TurnLeft: return "turn_left";
        case Action::TurnRight: return "turn_right";
        case Action::Stop: return "stop";
    }
    return "?";
}

std::string_view display_name(Action a) {
    switch (a) {
        case Action::Forward: return "forward";
        case Action::TurnLeft: return "turn left";
        case Action::TurnRight: return "turn right";
        case Action::Stop: return "stop";
    }
    return "?";
}

std::optional<Action> action_from_string(std::string_view token) {
    if (token == "forward") return Action::Forward;
    if (token == "turn_left" || token == "turn left") return Action::TurnLeft;
    if (token == "turn_right" || token == "turn right") return Action::TurnRight;
    if (token == "stop") return Action::Stop;
    return std::nullopt;
}

WorldState initial_state(const SceneConfig& scene, std::size_t pair_index, int agent_radius) {
    if (pair_index >= scene.pairs.size()) throw std::out_of_range("pair index out of range");
    const auto& pair = scene.pairs[pair_index];
    WorldState s;
    s.pose = {pair.start.x, pair.start.y, pair.start_theta, agent_radius};
    s.entity_phases = scene.initial_phases();
    s.tick = 0;
    s.target = pair.target;
    return s;
}

AgentPose apply_turn(AgentPose pose, TurnDirection direction) {
    const int delta = direction == TurnDirection::Right ? 90 : 270;  // -90 mod 360
    pose.theta = *heading_from_degrees((degrees(pose.theta) + delta) % 360);
    return pose;
}

Point forward_target(const AgentPose& pose) {
    const Point d = heading_direction(pose.theta);
    return {pose.x + d.x * kStepPx, pose.y + d.y * kStepPx};
}

bool check_blocked(const AgentPose& pose, Point candidate, const SceneConfig& scene,
                   std::span<const double> entity_phases) {
    const auto discs = scene.entity_discs(entity_phases);
    return sweep_blocked(to_vec(pose.position()), to_vec(candidate), pose.radius, scene, discs);
}

double advance_entity(const DynamicEntity& entity, double phase) {
    const double length = entity.path_length();
    if (length <= 0.0) return 0.0;
    return std::fmod(phase + entity.speed, length);
}

double distance_to_target(const AgentPose& pose, Point target) {
    return distance(to_vec(pose.position()), to_vec(target));
}

bool entity_overlaps_agent(const AgentPose& pose, const SceneConfig& scene,
                           std::span<const double> entity_phases) {
    const Vec2 center = to_vec(pose.position());
    for (const auto& d : scene.entity_discs(entity_phases))
        if (distance(center, d.center) < d.radius + pose.radius) return true;
    return false;
}

StepOutcome step_world(const WorldState& state, Action action, const SceneConfig& scene) {
    if (action == Action::Stop) throw std::invalid_argument("stop is resolved by the episode runner");
    StepOutcome out;
    out.state = state;
    auto& pose = out.state.pose;
    switch (action) {
        case Action::TurnLeft: pose = apply_turn(pose, TurnDirection::Left); break;
        case Action::TurnRight: pose = apply_turn(pose, TurnDirection::Right); break;
        case Action::Forward: {
            out.attempted_forward = true;
            const Point next = forward_target(pose);
            if (check_blocked(pose, next, scene, state.entity_phases)) {
                out.collided = true;
            } else {
                pose.x = next.x;
                pose.y = next.y;
                out.moved = true;
            }
            break;
        }
        case Action::Stop: break;
    }
    for (std::size_t i = 0; i < scene.entities.size() && i < out.state.entity_phases.size(); ++i)
        out.state.entity_phases[i] = advance_entity(scene.entities[i], out.state.entity_phases[i]);
    out.state.tick += 1;
    out.entity_contact = entity_overlaps_agent(pose, scene, out.state.entity_phases);
    return out;
}

}  // namespace warenav
