#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "warenav/world.hpp"

namespace warenav {

struct AgentPose {
    int x = 0;
    int y = 0;
    Heading theta = Heading::East;
    int radius = kDefaultAgentRadius;

    Point position() const { return {x, y}; }
    bool operator==(const AgentPose&) const = default;
};

enum class Action { Forward, TurnLeft, TurnRight, Stop };
enum class TurnDirection { Left, Right };

inline constexpr Action kAllActions[] = {Action::Forward, Action::TurnLeft, Action::TurnRight,
                                         Action::Stop};

/// Wire token: forward, turn_left, turn_right, stop.
std::string_view to_string(Action a);
/// History-line spelling: forward, turn left, turn right, stop.
std::string_view display_name(Action a);
std::optional<Action> action_from_string(std::string_view token);

struct WorldState {
    AgentPose pose;
    std::vector<double> entity_phases;
    std::int64_t tick = 0;
    Point target;

    bool operator==(const WorldState&) const = default;
};

struct StepOutcome {
    WorldState state;
    bool collided = false;
    bool attempted_forward = false;
    bool moved = false;
    /// An entity ended the tick overlapping the agent. Never counted as a collision.
    bool entity_contact = false;
};

WorldState initial_state(const SceneConfig& scene, std::size_t pair_index,
                         int agent_radius = kDefaultAgentRadius);

AgentPose apply_turn(AgentPose pose, TurnDirection direction);
Point forward_target(const AgentPose& pose);

/// Swept-disc test for moving the agent from its current position to `candidate`.
bool check_blocked(const AgentPose& pose, Point candidate, const SceneConfig& scene,
                   std::span<const double> entity_phases);

/// Resolves one non-stop action, then advances every entity by one tick.
StepOutcome step_world(const WorldState& state, Action action, const SceneConfig& scene);

double advance_entity(const DynamicEntity& entity, double phase);

double distance_to_target(const AgentPose& pose, Point target);

bool entity_overlaps_agent(const AgentPose& pose, const SceneConfig& scene,
                           std::span<const double> entity_phases);

}  // namespace warenav
