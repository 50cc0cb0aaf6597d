#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "warenav/geometry.hpp"

namespace warenav {

/// Forward step length in pixels; one step is one meter at the default scale.
inline constexpr int kStepPx = 34;
inline constexpr double kDefaultMetersPerPixel = 1.0 / 34.0;
inline constexpr int kDefaultAgentRadius = 10;
inline constexpr double kDefaultSuccessDelta = 20.0;

/// Agent heading in degrees. The numeric value is what the agent sees in its
/// prompt: 0 faces West, 90 North, 180 East, 270 South.
enum class Heading : int { West = 0, North = 90, East = 180, South = 270 };

std::optional<Heading> heading_from_degrees(int degrees);
inline int degrees(Heading h) { return static_cast<int>(h); }
/// Unit step direction in pixel coordinates.
Point heading_direction(Heading h);
std::string_view compass_name(Heading h);

struct MapSpec {
    int width = 1024;
    int height = 512;
    double meters_per_pixel = kDefaultMetersPerPixel;

    bool operator==(const MapSpec&) const = default;
};

enum class HeightClass { Low, Tall };
enum class ObstacleKind { Wall, Shelf, Container, Barrel, Misc };
enum class EntityKind { Worker, Forklift, Robot };
enum class Difficulty { Easy, Medium, Hard };

std::string_view to_string(HeightClass v);
std::string_view to_string(ObstacleKind v);
std::string_view to_string(EntityKind v);
std::string_view to_string(Difficulty v);
std::optional<HeightClass> height_class_from_string(std::string_view s);
std::optional<ObstacleKind> obstacle_kind_from_string(std::string_view s);
std::optional<EntityKind> entity_kind_from_string(std::string_view s);
std::optional<Difficulty> difficulty_from_string(std::string_view s);

struct Obstacle {
    std::string id;
    Rect footprint;
    HeightClass height_class = HeightClass::Tall;
    int color_id = 0;
    ObstacleKind kind = ObstacleKind::Shelf;

    bool operator==(const Obstacle&) const = default;
};

/// A moving disc that loops along a closed polyline (last waypoint joins the first).
struct DynamicEntity {
    std::string id;
    EntityKind kind = EntityKind::Worker;
    int radius = 12;
    std::vector<Point> waypoints;
    double speed = 0.0;  // px per tick
    double phase = 0.0;  // arc length along the loop at tick 0

    bool operator==(const DynamicEntity&) const = default;

    double path_length() const;
    Vec2 position_at(double phase) const;
    Disc disc_at(double phase) const { return {position_at(phase), static_cast<double>(radius)}; }
};

struct StartTargetPair {
    Point start;
    Heading start_theta = Heading::East;
    Point target;
    Difficulty difficulty = Difficulty::Easy;

    bool operator==(const StartTargetPair&) const = default;
};

struct SceneConfig {
    std::string name;
    MapSpec map;
    std::vector<Obstacle> obstacles;
    std::vector<DynamicEntity> entities;
    std::vector<StartTargetPair> pairs;
    std::optional<std::int64_t> seed;

    bool operator==(const SceneConfig&) const = default;

    std::vector<double> initial_phases() const;
    /// Entity discs at the given per-entity phases.
    std::vector<Disc> entity_discs(std::span<const double> phases) const;
};

/// Same scene with every entity frozen in place.
SceneConfig make_static(SceneConfig scene);

/// True when a disc swept from `from` to `to` touches any static footprint,
/// any of `discs`, or leaves the map. Touching at exactly the radius is free.
bool sweep_blocked(Vec2 from, Vec2 to, double radius, const SceneConfig& scene,
                   std::span<const Disc> discs);

}  // namespace warenav
