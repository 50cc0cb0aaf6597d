#include "warenav/sensors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace warenav {

std::string_view to_string(HitKind k) {
    switch (k) {
        case HitKind::None: return "none";
        case HitKind::Static: return "static";
        case HitKind::Entity: return "entity";
        case HitKind::Boundary: return "boundary";
    }
    return "?";
}

double ray_angle(double fov, int i, int n) {
    const double k = static_cast<double>(2 * i + 1 - n);
    return fov * k / (2.0 * n);
}

Vec2 ray_direction(Heading heading, double angle_deg) {
    const Point h = heading_direction(heading);
    const double rad = angle_deg * std::numbers::pi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    // Rotating toward the agent's right is clockwise on screen (y down).
    return {h.x * c - h.y * s, h.y * c + h.x * s};
}

RayHit first_hit(Vec2 origin, Vec2 dir, const SceneConfig& scene, std::span<const Disc> entity_discs,
                 bool include_boundary) {
    RayHit best{std::numeric_limits<double>::infinity(), HitKind::None, -1};
    for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
        if (auto t = ray_rect_entry(origin, dir, scene.obstacles[i].footprint); t && *t < best.distance)
            best = {*t, HitKind::Static, static_cast<int>(i)};
    }
    for (std::size_t i = 0; i < entity_discs.size(); ++i) {
        if (auto t = ray_disc_entry(origin, dir, entity_discs[i]); t && *t < best.distance)
            best = {*t, HitKind::Entity, static_cast<int>(i)};
    }
    if (include_boundary) {
        const double t = ray_box_exit(origin, dir, scene.map.width, scene.map.height);
        if (t < best.distance) best = {t, HitKind::Boundary, -1};
    }
    return best;
}

DepthProfile cast_depth(const WorldState& state, const SceneConfig& scene, double fov, int n_rays,
                        bool include_boundary) {
    if (n_rays < 1) throw std::invalid_argument("n_rays must be >= 1");
    if (!(fov > 0.0 && fov <= 180.0)) throw std::invalid_argument("fov must be in (0, 180]");
    const auto discs = scene.entity_discs(state.entity_phases);
    const Vec2 origin = to_vec(state.pose.position());
    DepthProfile profile;
    profile.fov_degrees = fov;
    profile.rays.reserve(static_cast<std::size_t>(n_rays));
    for (int i = 0; i < n_rays; ++i) {
        const double angle = ray_angle(fov, i, n_rays);
        const RayHit hit = first_hit(origin, ray_direction(state.pose.theta, angle), scene, discs, include_boundary);
        profile.rays.push_back({angle, hit.distance, hit.kind, hit.index});
    }
    return profile;
}

bool detect_warning(const DepthProfile& profile, const WarningConfig& config, double meters_per_pixel) {
    if (profile.rays.empty()) throw std::invalid_argument("depth profile is empty");
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& ray : profile.rays) {
        if (ray.kind == HitKind::None) continue;
        if (std::abs(ray.angle) > config.roi_half_angle) continue;
        if (ray.distance > config.roi_range_limit) continue;
        nearest = std::min(nearest, ray.distance);
    }
    return nearest * meters_per_pixel < config.threshold_m;
}

Observation observe(const WorldState& state, const SceneConfig& scene, const SensorConfig& sensors) {
    Observation obs;
    obs.depth = cast_depth(state, scene, sensors.fov, sensors.n_rays);
    obs.warning = detect_warning(obs.depth, sensors.warning, scene.map.meters_per_pixel);
    return obs;
}

}  // namespace warenav
