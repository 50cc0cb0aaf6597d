#include "warenav/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace warenav {

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double point_rect_distance(Vec2 p, const Rect& r) {
    const double dx = std::max({r.x0 - p.x, 0.0, p.x - r.x1});
    const double dy = std::max({r.y0 - p.y, 0.0, p.y - r.y1});
    return std::hypot(dx, dy);
}

double rect_rect_distance(const Rect& a, const Rect& b) {
    const int dx = std::max({a.x0 - b.x1, 0, b.x0 - a.x1});
    const int dy = std::max({a.y0 - b.y1, 0, b.y0 - a.y1});
    return std::hypot(static_cast<double>(dx), static_cast<double>(dy));
}

double segment_point_distance(Vec2 a, Vec2 b, Vec2 p) {
    const double vx = b.x - a.x;
    const double vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    if (len2 == 0.0) return distance(a, p);
    const double t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0);
    return distance({a.x + t * vx, a.y + t * vy}, p);
}

bool segment_intersects_rect(Vec2 a, Vec2 b, const Rect& r) {
    // Liang-Barsky clip of the parameter interval [0, 1].
    double t0 = 0.0;
    double t1 = 1.0;
    const double d[2] = {b.x - a.x, b.y - a.y};
    const double o[2] = {a.x, a.y};
    const double lo[2] = {static_cast<double>(r.x0), static_cast<double>(r.y0)};
    const double hi[2] = {static_cast<double>(r.x1), static_cast<double>(r.y1)};
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (o[axis] < lo[axis] || o[axis] > hi[axis]) return false;
            continue;
        }
        double ta = (lo[axis] - o[axis]) / d[axis];
        double tb = (hi[axis] - o[axis]) / d[axis];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

double segment_rect_distance(Vec2 a, Vec2 b, const Rect& r) {
    if (segment_intersects_rect(a, b, r)) return 0.0;
    double best = std::min(point_rect_distance(a, r), point_rect_distance(b, r));
    const std::array<Vec2, 4> corners{{{double(r.x0), double(r.y0)},
                                       {double(r.x1), double(r.y0)},
                                       {double(r.x0), double(r.y1)},
                                       {double(r.x1), double(r.y1)}}};
    for (const auto& c : corners) best = std::min(best, segment_point_distance(a, b, c));
    return best;
}

std::optional<double> ray_rect_entry(Vec2 origin, Vec2 dir, const Rect& r) {
    double tmin = 0.0;
    double tmax = std::numeric_limits<double>::infinity();
    const double d[2] = {dir.x, dir.y};
    const double o[2] = {origin.x, origin.y};
    const double lo[2] = {static_cast<double>(r.x0), static_cast<double>(r.y0)};
    const double hi[2] = {static_cast<double>(r.x1), static_cast<double>(r.y1)};
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (o[axis] < lo[axis] || o[axis] > hi[axis]) return std::nullopt;
            continue;
        }
        double ta = (lo[axis] - o[axis]) / d[axis];
        double tb = (hi[axis] - o[axis]) / d[axis];
        if (ta > tb) std::swap(ta, tb);
        tmin = std::max(tmin, ta);
        tmax = std::min(tmax, tb);
        if (tmin > tmax) return std::nullopt;
    }
    return tmin;
}

std::optional<double> ray_disc_entry(Vec2 origin, Vec2 dir, const Disc& disc) {
    const double ox = origin.x - disc.center.x;
    const double oy = origin.y - disc.center.y;
    const double c = ox * ox + oy * oy - disc.radius * disc.radius;
    if (c <= 0.0) return 0.0;
    const double b = ox * dir.x + oy * dir.y;
    if (b >= 0.0) return std::nullopt;
    const double a = dir.x * dir.x + dir.y * dir.y;
    const double disc2 = b * b - a * c;
    if (disc2 < 0.0) return std::nullopt;
    // Numerically stable smaller root of a t^2 + 2 b t + c = 0 with b < 0.
    return c / (-b + std::sqrt(disc2));
}

double ray_box_exit(Vec2 origin, Vec2 dir, double width, double height) {
    double t = std::numeric_limits<double>::infinity();
    if (dir.x > 0.0) t = std::min(t, (width - origin.x) / dir.x);
    if (dir.x < 0.0) t = std::min(t, (0.0 - origin.x) / dir.x);
    if (dir.y > 0.0) t = std::min(t, (height - origin.y) / dir.y);
    if (dir.y < 0.0) t = std::min(t, (0.0 - origin.y) / dir.y);
    return std::max(t, 0.0);
}

}  // namespace warenav
