#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "warenav/world.hpp"

namespace warenav {

/// Knobs for generate_scene. Ranges are enforced by check_params.
struct GeneratorParams {
    int width = 1024;                              // [256, 4096]
    int height = 512;                              // [256, 4096]
    double meters_per_pixel = kDefaultMetersPerPixel;
    int shelf_rows = 2;                            // [0, 4]
    int aisle_count = 3;                           // [0, 6] cross-aisles per shelf row
    double clutter_density = 0.15;                 // [0, 1] share of corridor slots filled
    int entity_count = 3;                          // [0, 8]
    int pair_count = 4;                            // [1, 12]
    int agent_radius = kDefaultAgentRadius;        // [1, 30]
    double delta = kDefaultSuccessDelta;
    int max_plan_steps = 50;                       // [4, 200] optimal actions per pair, turns included
    int max_attempts = 16;                         // [1, 1000]

    bool operator==(const GeneratorParams&) const = default;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument naming the first knob outside its range.
void check_params(const GeneratorParams& params);

/// Pure function of (seed, params). The result passes validate_scene, and every
/// pair also stays reachable within max_plan_steps with entities frozen at
/// their initial phases. Difficulty buckets are terciles of the optimal action
/// count over a candidate pool.
SceneConfig generate_scene(std::uint64_t seed, const GeneratorParams& params = {});

}  // namespace warenav
