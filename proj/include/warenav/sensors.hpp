#pragma once

#include <span>
#include <vector>

#include "warenav/dynamics.hpp"

namespace warenav {

enum class HitKind { None, Static, Entity, Boundary };
std::string_view to_string(HitKind k);

struct RayHit {
    double distance;  // +inf when kind == None
    HitKind kind = HitKind::None;
    int index = -1;  // obstacle or entity index, -1 otherwise
};

struct DepthRay {
    double angle = 0.0;  // degrees from heading, positive toward the agent's right
    double distance = 0.0;
    HitKind kind = HitKind::None;
    int index = -1;
};

struct DepthProfile {
    double fov_degrees = 0.0;
    std::vector<DepthRay> rays;  // strictly increasing angles, symmetric about 0
};

struct WarningConfig {
    double threshold_m = 1.0;
    double roi_half_angle = 15.0;    // degrees
    double roi_range_limit = 170.0;  // px; five steps

    bool operator==(const WarningConfig&) const = default;
};

struct SensorConfig {
    double fov = 90.0;
    int n_rays = 61;
    WarningConfig warning;

    bool operator==(const SensorConfig&) const = default;
};

/// Angle of ray i of n spread uniformly over fov, sampled at bin centres.
/// Computed so that ray n-1-i is the exact negation of ray i.
double ray_angle(double fov, int i, int n);
Vec2 ray_direction(Heading heading, double angle_deg);

/// Nearest intersection along a ray. Origins inside an entity disc report 0.
RayHit first_hit(Vec2 origin, Vec2 dir, const SceneConfig& scene, std::span<const Disc> entity_discs,
                 bool include_boundary = true);

/// `include_boundary` = false treats the map as unbounded (test fixtures only).
DepthProfile cast_depth(const WorldState& state, const SceneConfig& scene, double fov, int n_rays,
                        bool include_boundary = true);

/// True iff some hit inside the ROI cone and range limit is nearer than the threshold.
bool detect_warning(const DepthProfile& profile, const WarningConfig& config, double meters_per_pixel);

/// Depth plus warning for the agent's current view.
struct Observation {
    DepthProfile depth;
    bool warning = false;
};
Observation observe(const WorldState& state, const SceneConfig& scene, const SensorConfig& sensors);

}  // namespace warenav
