#pragma once

#include <string>
#include <vector>

#include "warenav/world.hpp"

namespace warenav {

struct Violation {
    std::string subject;  // e.g. "pairs[2]" or "obstacles[0] (shelf-3)"
    std::string rule;     // stable kebab-case code, e.g. "target-in-obstacle"
    std::string message;

    bool operator==(const Violation&) const = default;
};

struct ValidationOptions {
    double delta = kDefaultSuccessDelta;
    int agent_radius = kDefaultAgentRadius;
};

/// Empty iff every type invariant holds and every pair's target can be reached
/// on the static scene (obstacles only) with the agent's step dynamics.
std::vector<Violation> validate_scene(const SceneConfig& scene, const ValidationOptions& options = {});

}  // namespace warenav
