#pragma once

#include <compare>
#include <optional>

namespace warenav {

/// Integer pixel coordinate. +X points East (right), +Y points South (down).
struct Point {
    int x = 0;
    int y = 0;

    auto operator<=>(const Point&) const = default;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
};

inline Vec2 to_vec(Point p) { return {static_cast<double>(p.x), static_cast<double>(p.y)}; }

/// Closed axis-aligned rectangle [x0, x1] x [y0, y1] in pixels.
struct Rect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }

    bool operator==(const Rect&) const = default;
};

struct Disc {
    Vec2 center;
    double radius = 0.0;
};

double distance(Vec2 a, Vec2 b);

double point_rect_distance(Vec2 p, const Rect& r);
double rect_rect_distance(const Rect& a, const Rect& b);
double segment_point_distance(Vec2 a, Vec2 b, Vec2 p);

// Segment from a to b against a closed rectangle.
bool segment_intersects_rect(Vec2 a, Vec2 b, const Rect& r);
double segment_rect_distance(Vec2 a, Vec2 b, const Rect& r);

// Ray queries take a unit direction and return the smallest t >= 0 at which
// origin + t * dir lies in the closed shape, or nullopt on a miss.
std::optional<double> ray_rect_entry(Vec2 origin, Vec2 dir, const Rect& r);
std::optional<double> ray_disc_entry(Vec2 origin, Vec2 dir, const Disc& d);

// Distance from an interior origin to the boundary of [0, width] x [0, height].
double ray_box_exit(Vec2 origin, Vec2 dir, double width, double height);

}  // namespace warenav
