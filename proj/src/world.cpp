#include "warenav/world.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace warenav {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::pair<Enum, std::string_view>, N>& table,
                           std::string_view s) {
    for (const auto& [value, name] : table)
        if (name == s) return value;
    return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, std::string_view>, N>& table, Enum v) {
    for (const auto& [value, name] : table)
        if (value == v) return name;
    return "?";
}

constexpr std::array<std::pair<HeightClass, std::string_view>, 2> kHeightClasses{{
    {HeightClass::Low, "low"},
    {HeightClass::Tall, "tall"},
}};
constexpr std::array<std::pair<ObstacleKind, std::string_view>, 5> kObstacleKinds{{
    {ObstacleKind::Wall, "wall"},
    {ObstacleKind::Shelf, "shelf"},
    {ObstacleKind::Container, "container"},
    {ObstacleKind::Barrel, "barrel"},
    {ObstacleKind::Misc, "misc"},
}};
constexpr std::array<std::pair<EntityKind, std::string_view>, 3> kEntityKinds{{
    {EntityKind::Worker, "worker"},
    {EntityKind::Forklift, "forklift"},
    {EntityKind::Robot, "robot"},
}};
constexpr std::array<std::pair<Difficulty, std::string_view>, 3> kDifficulties{{
    {Difficulty::Easy, "easy"},
    {Difficulty::Medium, "medium"},
    {Difficulty::Hard, "hard"},
}};

}  // namespace

std::optional<Heading> heading_from_degrees(int deg) {
    switch (deg) {
        case 0: return Heading::West;
        case 90: return Heading::North;
        case 180: return Heading::East;
        case 270: return Heading::South;
        default: return std::nullopt;
    }
}

Point heading_direction(Heading h) {
    switch (h) {
        case Heading::West: return {-1, 0};
        case Heading::North: return {0, -1};
        case Heading::East: return {1, 0};
        case Heading::South: return {0, 1};
    }
    return {0, 0};
}

std::string_view compass_name(Heading h) {
    switch (h) {
        case Heading::West: return "West";
        case Heading::North: return "North";
        case Heading::East: return "East";
        case Heading::South: return "South";
    }
    return "?";
}

std::string_view to_string(HeightClass v) { return name_of(kHeightClasses, v); }
std::string_view to_string(ObstacleKind v) { return name_of(kObstacleKinds, v); }
std::string_view to_string(EntityKind v) { return name_of(kEntityKinds, v); }
std::string_view to_string(Difficulty v) { return name_of(kDifficulties, v); }

std::optional<HeightClass> height_class_from_string(std::string_view s) {
    return lookup(kHeightClasses, s);
}
std::optional<ObstacleKind> obstacle_kind_from_string(std::string_view s) {
    return lookup(kObstacleKinds, s);
}
std::optional<EntityKind> entity_kind_from_string(std::string_view s) {
    return lookup(kEntityKinds, s);
}
std::optional<Difficulty> difficulty_from_string(std::string_view s) {
    return lookup(kDifficulties, s);
}

double DynamicEntity::path_length() const {
    double total = 0.0;
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        const auto& a = waypoints[i];
        const auto& b = waypoints[(i + 1) % waypoints.size()];
        total += distance(to_vec(a), to_vec(b));
    }
    return total;
}

Vec2 DynamicEntity::position_at(double s) const {
    if (waypoints.empty()) return {};
    const double length = path_length();
    if (length <= 0.0) return to_vec(waypoints.front());
    s = std::fmod(s, length);
    if (s < 0.0) s += length;
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        const Vec2 a = to_vec(waypoints[i]);
        const Vec2 b = to_vec(waypoints[(i + 1) % waypoints.size()]);
        const double seg = distance(a, b);
        if (s < seg) {
            const double t = s / seg;
            return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
        }
        s -= seg;
    }
    return to_vec(waypoints.front());
}

std::vector<double> SceneConfig::initial_phases() const {
    std::vector<double> phases;
    phases.reserve(entities.size());
    for (const auto& e : entities) phases.push_back(e.phase);
    return phases;
}

std::vector<Disc> SceneConfig::entity_discs(std::span<const double> phases) const {
    std::vector<Disc> discs;
    discs.reserve(entities.size());
    for (std::size_t i = 0; i < entities.size(); ++i) {
        const double phase = i < phases.size() ? phases[i] : entities[i].phase;
        discs.push_back(entities[i].disc_at(phase));
    }
    return discs;
}

SceneConfig make_static(SceneConfig scene) {
    for (auto& e : scene.entities) e.speed = 0.0;
    return scene;
}

bool sweep_blocked(Vec2 from, Vec2 to, double radius, const SceneConfig& scene,
                   std::span<const Disc> discs) {
    const auto& map = scene.map;
    // The capsule stays inside the (convex) map iff both end discs do.
    for (const Vec2& p : {from, to}) {
        if (p.x - radius < 0.0 || p.y - radius < 0.0 || p.x + radius > map.width ||
            p.y + radius > map.height)
            return true;
    }
    for (const auto& o : scene.obstacles)
        if (segment_rect_distance(from, to, o.footprint) < radius) return true;
    for (const auto& d : discs)
        if (segment_point_distance(from, to, d.center) < radius + d.radius) return true;
    return false;
}

}  // namespace warenav
