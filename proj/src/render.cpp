#include "warenav/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace warenav {

namespace palette {

Rgb obstacle(const Obstacle& o) {
    static constexpr std::array<Rgb, 8> kStock{{{96, 110, 160},
                                                {62, 120, 178},
                                                {176, 96, 60},
                                                {140, 140, 70},
                                                {80, 140, 110},
                                                {150, 90, 140},
                                                {110, 80, 60},
                                                {90, 160, 170}}};
    if (o.kind == ObstacleKind::Wall) return {190, 182, 166};
    return kStock[static_cast<std::size_t>(o.color_id) % kStock.size()];
}

Rgb entity(EntityKind kind) {
    switch (kind) {
        case EntityKind::Worker: return {255, 140, 0};
        case EntityKind::Forklift: return {240, 200, 0};
        case EntityKind::Robot: return {0, 170, 200};
    }
    return {255, 0, 255};
}

}  // namespace palette

namespace {

Rgb shade(Rgb c, double perp) {
    const double f = std::clamp(1.0 - perp / 1400.0, 0.35, 1.0);
    auto s = [f](std::uint8_t v) { return static_cast<std::uint8_t>(std::lround(v * f)); };
    return {s(c.r), s(c.g), s(c.b)};
}

// Pixel rows whose centres fall in [top, bottom).
void fill_column(Raster& img, int x, double top, double bottom, Rgb c) {
    const int y0 = std::max(0, static_cast<int>(std::ceil(top - 0.5)));
    const int y1 = std::min(img.height(), static_cast<int>(std::ceil(bottom - 0.5)));
    for (int y = y0; y < y1; ++y) img.set(x, y, c);
}

void fill_disc(Raster& img, Vec2 c, double radius, Rgb color) {
    const int x0 = static_cast<int>(std::floor(c.x - radius));
    const int x1 = static_cast<int>(std::ceil(c.x + radius));
    const int y0 = static_cast<int>(std::floor(c.y - radius));
    const int y1 = static_cast<int>(std::ceil(c.y + radius));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            if (distance({x + 0.5, y + 0.5}, c) <= radius) img.set(x, y, color);
}

double cross(Vec2 a, Vec2 b, Vec2 p) { return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x); }

void fill_triangle(Raster& img, Vec2 a, Vec2 b, Vec2 c, Rgb color) {
    const int x0 = static_cast<int>(std::floor(std::min({a.x, b.x, c.x})));
    const int x1 = static_cast<int>(std::ceil(std::max({a.x, b.x, c.x})));
    const int y0 = static_cast<int>(std::floor(std::min({a.y, b.y, c.y})));
    const int y1 = static_cast<int>(std::ceil(std::max({a.y, b.y, c.y})));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const Vec2 p{x + 0.5, y + 0.5};
            const double d0 = cross(a, b, p);
            const double d1 = cross(b, c, p);
            const double d2 = cross(c, a, p);
            const bool neg = d0 < 0 || d1 < 0 || d2 < 0;
            const bool pos = d0 > 0 || d1 > 0 || d2 > 0;
            if (!(neg && pos)) img.set(x, y, color);
        }
    }
}

}  // namespace

double focal_length_px(const EgoSpec& spec) {
    return (spec.width / 2.0) / std::tan(spec.fov * std::numbers::pi / 360.0);
}

double projected_height(double perp, double object_height, const EgoSpec& spec) {
    return (focal_length_px(spec) * object_height) / perp;
}

EgoImage render_ego(const WorldState& state, const SceneConfig& scene, const EgoSpec& spec) {
    EgoImage out{Raster(spec.width, spec.height, palette::kCeiling), {}};
    out.column_depth.resize(static_cast<std::size_t>(spec.width));
    const double horizon = spec.height / 2.0;
    const double focal = focal_length_px(spec);
    const auto discs = scene.entity_discs(state.entity_phases);
    const Vec2 origin = to_vec(state.pose.position());

    for (int col = 0; col < spec.width; ++col) {
        const double angle = spec.fov * static_cast<double>(2 * col + 1 - spec.width) / (2.0 * spec.width);
        const RayHit hit = first_hit(origin, ray_direction(state.pose.theta, angle), scene, discs);
        out.column_depth[static_cast<std::size_t>(col)] = hit.distance;

        fill_column(out.raster, col, horizon, spec.height, palette::kFloor);
        if (hit.kind == HitKind::None) continue;
        const double perp = std::max(hit.distance * std::cos(angle * std::numbers::pi / 180.0), 1e-6);
        double object_height = kTallHeightPx;
        Rgb color = palette::kBoundary;
        if (hit.kind == HitKind::Static) {
            const auto& o = scene.obstacles[static_cast<std::size_t>(hit.index)];
            object_height = o.height_class == HeightClass::Tall ? kTallHeightPx : kLowHeightPx;
            color = palette::obstacle(o);
        } else if (hit.kind == HitKind::Entity) {
            object_height = kEntityHeightPx;
            color = palette::entity(scene.entities[static_cast<std::size_t>(hit.index)].kind);
        }
        const double bottom = horizon + focal * kCameraHeightPx / perp;
        const double top = bottom - projected_height(perp, object_height, spec);
        fill_column(out.raster, col, top, bottom, shade(color, perp));
    }
    return out;
}

TopDownImage render_topdown(const WorldState& state, const SceneConfig& scene) {
    TopDownImage out{Raster(scene.map.width, scene.map.height, palette::kTopDownFloor)};
    auto& img = out.raster;
    for (const auto& o : scene.obstacles)
        img.fill_rect(o.footprint.x0, o.footprint.y0, o.footprint.x1, o.footprint.y1, palette::obstacle(o));
    const auto discs = scene.entity_discs(state.entity_phases);
    for (std::size_t i = 0; i < discs.size(); ++i)
        fill_disc(img, discs[i].center, discs[i].radius, palette::entity(scene.entities[i].kind));
    fill_disc(img, to_vec(state.target), 7.0, palette::kTarget);

    const Point u = heading_direction(state.pose.theta);
    const Vec2 c = to_vec(state.pose.position());
    const Vec2 dir{static_cast<double>(u.x), static_cast<double>(u.y)};
    const Vec2 side{-dir.y, dir.x};
    const Vec2 apex{c.x + 14 * dir.x, c.y + 14 * dir.y};
    const Vec2 left{c.x - 8 * dir.x + 9 * side.x, c.y - 8 * dir.y + 9 * side.y};
    const Vec2 right{c.x - 8 * dir.x - 9 * side.x, c.y - 8 * dir.y - 9 * side.y};
    fill_triangle(img, apex, left, right, palette::kAgent);
    return out;
}

}  // namespace warenav
