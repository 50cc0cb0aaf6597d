#pragma once

#include <vector>

#include "warenav/raster.hpp"
#include "warenav/sensors.hpp"

namespace warenav {

struct EgoSpec {
    int width = 1024;
    int height = 1024;
    double fov = 90.0;
};

/// First-person column-raycast view. `column_depth[c]` is the radial hit
/// distance behind image column c (+inf on a miss).
struct EgoImage {
    Raster raster;
    std::vector<double> column_depth;
};

struct TopDownImage {
    Raster raster;
};

// World heights in px used for slab projection.
inline constexpr double kCameraHeightPx = 34.0;
inline constexpr double kTallHeightPx = 68.0;
inline constexpr double kLowHeightPx = 30.0;
inline constexpr double kEntityHeightPx = 56.0;

double focal_length_px(const EgoSpec& spec);
/// On-screen height of an object of `object_height` px at perpendicular distance `perp`.
double projected_height(double perp, double object_height, const EgoSpec& spec);

EgoImage render_ego(const WorldState& state, const SceneConfig& scene, const EgoSpec& spec = {});
TopDownImage render_topdown(const WorldState& state, const SceneConfig& scene);

namespace palette {
inline constexpr Rgb kCeiling{46, 52, 64};
inline constexpr Rgb kFloor{120, 116, 108};
inline constexpr Rgb kBoundary{170, 160, 140};
inline constexpr Rgb kTopDownFloor{235, 235, 228};
inline constexpr Rgb kAgent{220, 0, 0};
inline constexpr Rgb kTarget{0, 200, 0};
Rgb obstacle(const Obstacle& o);
Rgb entity(EntityKind kind);
}  // namespace palette

}  // namespace warenav
