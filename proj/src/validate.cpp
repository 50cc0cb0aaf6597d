#include "warenav/validate.hpp"

#include <fmt/format.h>

#include <set>

#include "warenav/planning.hpp"

namespace warenav {

namespace {

bool inside_map(Point p, const MapSpec& map) {
    return p.x >= 0 && p.y >= 0 && p.x <= map.width && p.y <= map.height;
}

bool inside_any(Vec2 p, const SceneConfig& scene) {
    for (const auto& o : scene.obstacles)
        if (o.footprint.contains(p)) return true;
    return false;
}

}  // namespace

std::vector<Violation> validate_scene(const SceneConfig& scene, const ValidationOptions& options) {
    std::vector<Violation> out;
    auto report = [&](std::string subject, std::string rule, std::string message) {
        out.push_back({std::move(subject), std::move(rule), std::move(message)});
    };
    const auto& map = scene.map;

    if (map.width <= 0 || map.height <= 0)
        report("map", "map-dimensions", fmt::format("map must be positive, got {}x{}", map.width, map.height));
    if (!(map.meters_per_pixel > 0.0)) report("map", "map-scale", "meters_per_pixel must be positive");

    std::set<std::string> ids;
    auto check_id = [&](const std::string& subject, const std::string& id) {
        if (!ids.insert(id).second) report(subject, "duplicate-id", fmt::format("id '{}' is used twice", id));
    };

    for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
        const auto& o = scene.obstacles[i];
        const auto subject = fmt::format("obstacles[{}] ({})", i, o.id);
        check_id(subject, o.id);
        const auto& r = o.footprint;
        if (r.width() <= 0 || r.height() <= 0) report(subject, "obstacle-empty", "footprint has no area");
        if (r.x0 < 0 || r.y0 < 0 || r.x1 > map.width || r.y1 > map.height)
            report(subject, "obstacle-out-of-bounds", "footprint leaves the map");
    }

    for (std::size_t i = 0; i < scene.entities.size(); ++i) {
        const auto& e = scene.entities[i];
        const auto subject = fmt::format("entities[{}] ({})", i, e.id);
        check_id(subject, e.id);
        if (e.radius <= 0) report(subject, "entity-radius", "radius must be positive");
        if (!(e.speed >= 0.0)) report(subject, "entity-speed", "speed must be non-negative");
        if (e.waypoints.size() < 2) {
            report(subject, "entity-waypoint-count", "needs at least 2 waypoints");
            continue;
        }
        for (std::size_t k = 0; k < e.waypoints.size(); ++k) {
            const auto& p = e.waypoints[k];
            if (!inside_map(p, map))
                report(subject, "entity-waypoint-out-of-bounds",
                       fmt::format("waypoint {} ({}, {}) is outside the map", k, p.x, p.y));
            else if (inside_any(to_vec(p), scene))
                report(subject, "entity-waypoint-in-obstacle",
                       fmt::format("waypoint {} ({}, {}) lies inside an obstacle", k, p.x, p.y));
        }
        const double length = e.path_length();
        if (!(length > 0.0) || !(e.phase >= 0.0 && e.phase < length))
            report(subject, "entity-phase", fmt::format("phase {} is outside [0, {})", e.phase, length));
    }

    for (std::size_t i = 0; i < scene.pairs.size(); ++i) {
        const auto& p = scene.pairs[i];
        const auto subject = fmt::format("pairs[{}]", i);
        bool usable = true;
        if (!inside_map(p.start, map)) {
            report(subject, "start-out-of-bounds", "start lies outside the map");
            usable = false;
        } else if (inside_any(to_vec(p.start), scene)) {
            report(subject, "start-in-obstacle", "start lies inside an obstacle");
            usable = false;
        } else if (sweep_blocked(to_vec(p.start), to_vec(p.start), options.agent_radius, scene, {})) {
            report(subject, "start-clearance", "agent body at start overlaps an obstacle or the map edge");
            usable = false;
        }
        if (!inside_map(p.target, map)) {
            report(subject, "target-out-of-bounds", "target lies outside the map");
            usable = false;
        } else if (inside_any(to_vec(p.target), scene)) {
            report(subject, "target-in-obstacle", "target lies inside an obstacle");
            usable = false;
        }
        const double d = distance(to_vec(p.start), to_vec(p.target));
        if (!(d > options.delta))
            report(subject, "pair-too-close",
                   fmt::format("start-target distance {:.2f} must exceed delta {}", d, options.delta));
        if (usable) {
            const MotionLattice lattice(scene, p.start, options.agent_radius);
            if (!lattice_reachable(lattice, p.start, to_vec(p.target), options.delta))
                report(subject, "unreachable-pair", "no collision-free path reaches the target");
        }
    }
    return out;
}

}  // namespace warenav
