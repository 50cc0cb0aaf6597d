#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "warenav/dynamics.hpp"
#include "warenav/generator.hpp"
#include "warenav/protocol.hpp"

namespace warenav::testing {

inline SceneConfig empty_scene(int width = 1024, int height = 512) {
    SceneConfig s;
    s.name = "fixture";
    s.map = {width, height, 1.0 / 34.0};
    return s;
}

inline Obstacle box(std::string id, int x0, int y0, int x1, int y1, ObstacleKind kind = ObstacleKind::Shelf) {
    Obstacle o;
    o.id = std::move(id);
    o.footprint = {x0, y0, x1, y1};
    o.kind = kind;
    return o;
}

inline WorldState state_at(const SceneConfig& scene, Point p, Heading h, Point target = {0, 0}) {
    WorldState s;
    s.pose = {p.x, p.y, h, kDefaultAgentRadius};
    s.entity_phases = scene.initial_phases();
    s.target = target;
    return s;
}

/// Scene with one pair, for episode fixtures.
inline SceneConfig with_pair(SceneConfig s, Point start, Heading h, Point target) {
    s.pairs.push_back({start, h, target, Difficulty::Easy});
    return s;
}

// Independent geometry used by oracles: plain clamping, no library calls.
inline double clamp_distance(double px, double py, const Rect& r) {
    const double cx = std::clamp(px, static_cast<double>(r.x0), static_cast<double>(r.x1));
    const double cy = std::clamp(py, static_cast<double>(r.y0), static_cast<double>(r.y1));
    return std::hypot(px - cx, py - cy);
}

inline bool inside_rect(double px, double py, const Rect& r) {
    return px >= r.x0 && px <= r.x1 && py >= r.y0 && py <= r.y1;
}

/// Free pixels: the agent disc centred there touches no footprint and stays inside the map.
inline std::vector<std::uint8_t> free_pixels(const SceneConfig& scene, int radius) {
    const int w = scene.map.width;
    const int h = scene.map.height;
    std::vector<std::uint8_t> free(static_cast<std::size_t>((w + 1) * (h + 1)), 0);
    for (int y = radius; y <= h - radius; ++y)
        for (int x = radius; x <= w - radius; ++x) {
            bool ok = true;
            for (const auto& o : scene.obstacles)
                if (clamp_distance(x, y, o.footprint) < radius) {
                    ok = false;
                    break;
                }
            free[static_cast<std::size_t>(y * (w + 1) + x)] = ok;
        }
    return free;
}

/// 4-connected pixel BFS through free space; true iff some free pixel within
/// `delta` of the target is reachable from `start`.
inline bool pixel_reachable(const SceneConfig& scene, const std::vector<std::uint8_t>& free, Point start,
                            Point target, double delta) {
    const int w = scene.map.width + 1;
    const int h = scene.map.height + 1;
    auto idx = [w](int x, int y) { return static_cast<std::size_t>(y * w + x); };
    if (!free[idx(start.x, start.y)]) return false;
    std::vector<std::uint8_t> seen(free.size(), 0);
    std::deque<Point> queue{start};
    seen[idx(start.x, start.y)] = 1;
    while (!queue.empty()) {
        const Point p = queue.front();
        queue.pop_front();
        if (std::hypot(p.x - target.x, p.y - target.y) <= delta) return true;
        const Point next[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
        for (const auto& q : next) {
            if (q.x < 0 || q.y < 0 || q.x >= w || q.y >= h) continue;
            if (!free[idx(q.x, q.y)] || seen[idx(q.x, q.y)]) continue;
            seen[idx(q.x, q.y)] = 1;
            queue.push_back(q);
        }
    }
    return false;
}

/// Random integer pose whose body clears every footprint and the map edge.
inline AgentPose random_free_pose(const SceneConfig& scene, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> xs(kDefaultAgentRadius, scene.map.width - kDefaultAgentRadius);
    std::uniform_int_distribution<int> ys(kDefaultAgentRadius, scene.map.height - kDefaultAgentRadius);
    std::uniform_int_distribution<int> hs(0, 3);
    for (;;) {
        const int x = xs(rng);
        const int y = ys(rng);
        bool ok = true;
        for (const auto& o : scene.obstacles)
            if (clamp_distance(x, y, o.footprint) < kDefaultAgentRadius) ok = false;
        if (ok) return {x, y, static_cast<Heading>(90 * hs(rng)), kDefaultAgentRadius};
    }
}

/// True if the closed segment a-b touches the closed rectangle: the bounding
/// boxes overlap and the corners do not all lie strictly on one side of the line.
inline bool segment_touches_rect(Vec2 a, Vec2 b, const Rect& r) {
    if (std::max(a.x, b.x) < r.x0 || std::min(a.x, b.x) > r.x1) return false;
    if (std::max(a.y, b.y) < r.y0 || std::min(a.y, b.y) > r.y1) return false;
    const double cx[4] = {double(r.x0), double(r.x1), double(r.x1), double(r.x0)};
    const double cy[4] = {double(r.y0), double(r.y0), double(r.y1), double(r.y1)};
    int pos = 0, neg = 0;
    for (int i = 0; i < 4; ++i) {
        const double cross = (b.x - a.x) * (cy[i] - a.y) - (b.y - a.y) * (cx[i] - a.x);
        pos += cross > 0;
        neg += cross < 0;
    }
    return pos < 4 && neg < 4;
}

inline bool segment_touches_disc(Vec2 a, Vec2 b, Vec2 c, double radius) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    const double t = len2 > 0 ? std::clamp(((c.x - a.x) * vx + (c.y - a.y) * vy) / len2, 0.0, 1.0) : 0.0;
    return std::hypot(a.x + t * vx - c.x, a.y + t * vy - c.y) <= radius;
}

/// Heading unit vector rotated toward the agent's right by `angle_deg`.
inline Vec2 oracle_direction(Heading h, double angle_deg) {
    const Point u = heading_direction(h);
    const double a = angle_deg * std::numbers::pi / 180.0;
    return {u.x * std::cos(a) - u.y * std::sin(a), u.y * std::cos(a) + u.x * std::sin(a)};
}

/// Marches from `origin` along unit `dir` in `step` px increments and returns
/// the start of the first increment that touches an obstacle or entity disc,
/// or the first sample outside the map. Testing each increment as a segment
/// catches corner slivers that point sampling would step over.
inline double march_ray(const SceneConfig& scene, const std::vector<Disc>& discs, Vec2 origin, Vec2 dir,
                        double step = 0.25) {
    for (double t = 0;; t += step) {
        const Vec2 a{origin.x + t * dir.x, origin.y + t * dir.y};
        if (a.x < 0 || a.y < 0 || a.x > scene.map.width || a.y > scene.map.height) return t;
        const Vec2 b{a.x + step * dir.x, a.y + step * dir.y};
        for (const auto& o : scene.obstacles)
            if (segment_touches_rect(a, b, o.footprint)) return t;
        for (const auto& d : discs)
            if (segment_touches_disc(a, b, d.center, d.radius)) return t;
    }
}

/// State and ten-line history behind tests/golden/prompt_default.txt.
inline WorldState prompt_fixture_state() {
    WorldState s;
    s.pose = {304, 200, Heading::East, kDefaultAgentRadius};
    s.target = {430, 200};
    return s;
}

inline HistoryWindow prompt_fixture_history() {
    HistoryWindow h(10);
    const Action cycle[] = {Action::Forward, Action::TurnLeft, Action::Forward, Action::TurnRight};
    for (int t = 0; t < 12; ++t)
        h.push({t, {100 + 34 * (t / 2), 200}, t % 2 ? Heading::North : Heading::East, cycle[t % 4],
                300.0 - 17.4 * t, {430, 200}});
    return h;
}

}  // namespace warenav::testing
