#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "warenav/generator.hpp"
#include "warenav/render.hpp"
#include "warenav/sensors.hpp"

using namespace warenav;
using namespace warenav::testing;

namespace {

SceneConfig corridor_with_wall(int wall_x) {
    SceneConfig s = empty_scene();
    s.obstacles.push_back(box("wall", wall_x, 100, wall_x + 10, 400, ObstacleKind::Wall));
    return s;
}

DepthProfile profile_of(std::vector<std::pair<double, double>> angle_distance) {
    DepthProfile p;
    p.fov_degrees = 90;
    for (auto [a, d] : angle_distance) p.rays.push_back({a, d, HitKind::Static, 0});
    return p;
}

// Reflects the scene across the horizontal line y = axis_y.
SceneConfig mirror_y(const SceneConfig& s, int axis_y) {
    SceneConfig m = s;
    m.map.height = 2 * axis_y;
    for (auto& o : m.obstacles) {
        const Rect f = o.footprint;
        o.footprint = {f.x0, 2 * axis_y - f.y1, f.x1, 2 * axis_y - f.y0};
    }
    return m;
}

}  // namespace

TEST_CASE("cast_depth: perpendicular hit and unbounded fixture") {
    const SceneConfig s = corridor_with_wall(300);
    const WorldState st = state_at(s, {200, 250}, Heading::East);
    const DepthProfile p = cast_depth(st, s, 90, 61);
    REQUIRE(p.rays.size() == 61);
    CHECK(p.rays[30].angle == 0.0);
    CHECK(p.rays[30].distance == 100.0);
    CHECK(p.rays[30].kind == HitKind::Static);

    const SceneConfig open = empty_scene();
    const DepthProfile none = cast_depth(state_at(open, {200, 250}, Heading::East), open, 90, 31, false);
    for (const auto& r : none.rays) {
        CHECK(r.kind == HitKind::None);
        CHECK(std::isinf(r.distance));
    }
    CHECK_THROWS(cast_depth(st, s, 90, 0));
    CHECK_THROWS(cast_depth(st, s, 200, 5));
}

TEST_CASE("cast_depth: angles strictly increasing and symmetric") {
    const SceneConfig s = generate_scene(3);
    for (int n : {1, 2, 7, 61, 64}) {
        const DepthProfile p = cast_depth(initial_state(s, 0), s, 90, n);
        for (int i = 0; i + 1 < n; ++i) CHECK(p.rays[i].angle < p.rays[i + 1].angle);
        for (int i = 0; i < n; ++i) CHECK(p.rays[i].angle == -p.rays[n - 1 - i].angle);
        for (const auto& r : p.rays) CHECK(r.distance > 0);
    }
}

TEST_CASE("cast_depth: positive angles turn toward the agent's right") {
    // Facing North, the agent's right is East (+x).
    SceneConfig s = empty_scene();
    s.obstacles.push_back(box("east", 360, 100, 370, 400));
    const DepthProfile p = cast_depth(state_at(s, {300, 250}, Heading::North), s, 90, 3);
    CHECK(p.rays[2].angle > 0);
    CHECK(p.rays[2].kind == HitKind::Static);
    CHECK(p.rays[0].kind == HitKind::Boundary);
}

TEST_CASE("cast_depth: entity discs at current phase") {
    SceneConfig s = empty_scene();
    DynamicEntity e;
    e.id = "w";
    e.radius = 12;
    e.waypoints = {{400, 250}, {400, 450}};
    s.entities.push_back(e);
    WorldState st = state_at(s, {200, 250}, Heading::East);
    DepthProfile p = cast_depth(st, s, 90, 61);
    CHECK(p.rays[30].kind == HitKind::Entity);
    CHECK(p.rays[30].distance == doctest::Approx(188.0));
    st.entity_phases[0] = 100.0;  // moved out of the way
    p = cast_depth(st, s, 90, 61);
    CHECK(p.rays[30].kind == HitKind::Boundary);
}

TEST_CASE("cast_depth matches a 0.25 px marching oracle on random poses") {
    std::mt19937_64 rng(11);
    int worst_miss = 0;
    for (std::uint64_t seed : {21u, 22u}) {
        const SceneConfig s = generate_scene(seed);
        const auto discs = s.entity_discs(s.initial_phases());
        for (int k = 0; k < 20; ++k) {
            WorldState st;
            st.pose = random_free_pose(s, rng);
            st.entity_phases = s.initial_phases();
            const DepthProfile p = cast_depth(st, s, 90, 61);
            for (const auto& ray : p.rays) {
                const Vec2 origin{double(st.pose.x), double(st.pose.y)};
                const double t = march_ray(s, discs, origin, oracle_direction(st.pose.theta, ray.angle));
                if (std::fabs(t - ray.distance) > 0.5) ++worst_miss;
            }
        }
    }
    CHECK(worst_miss == 0);
}

TEST_CASE("detect_warning: threshold, ROI, range") {
    const WarningConfig cfg;
    const double mpp = 1.0 / 34.0;
    CHECK(detect_warning(profile_of({{0.0, 17.0}}), cfg, mpp));         // 0.5 m ahead
    CHECK_FALSE(detect_warning(profile_of({{0.0, 68.0}}), cfg, mpp));   // 2.0 m
    CHECK_FALSE(detect_warning(profile_of({{40.0, 17.0}}), cfg, mpp));  // outside the cone
    CHECK(detect_warning(profile_of({{-15.0, 17.0}}), cfg, mpp));       // cone edge is inclusive
    CHECK_FALSE(detect_warning(profile_of({{0.0, 34.0}}), cfg, mpp));   // exactly 1 m is not nearer

    const SceneConfig near = corridor_with_wall(217);  // 17 px = 0.5 m to the face
    CHECK(observe(state_at(near, {200, 250}, Heading::East), near, {}).warning);
    const SceneConfig far = corridor_with_wall(268);  // 68 px = 2 m
    CHECK_FALSE(observe(state_at(far, {200, 250}, Heading::East), far, {}).warning);
}

TEST_CASE("detect_warning is monotone in the threshold") {
    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 30; seed < 35; ++seed) {
        const SceneConfig s = generate_scene(seed);
        for (int k = 0; k < 10; ++k) {
            WorldState st;
            st.pose = random_free_pose(s, rng);
            st.entity_phases = s.initial_phases();
            const DepthProfile p = cast_depth(st, s, 90, 61);
            bool prev = false;
            for (double t = 0.1; t < 5.0; t += 0.1) {
                WarningConfig cfg;
                cfg.threshold_m = t;
                const bool now = detect_warning(p, cfg, s.map.meters_per_pixel);
                CHECK((!prev || now));
                prev = now;
            }
        }
    }
}

TEST_CASE("depth profile mirrors with the scene") {
    std::mt19937_64 rng(8);
    for (std::uint64_t seed : {40u, 41u, 42u}) {
        GeneratorParams gp;
        gp.entity_count = 0;
        const SceneConfig s = generate_scene(seed, gp);
        const SceneConfig m = mirror_y(s, s.map.height);
        for (int k = 0; k < 10; ++k) {
            const AgentPose p = random_free_pose(s, rng);
            if (p.theta != Heading::East && p.theta != Heading::West) continue;
            WorldState a = state_at(s, p.position(), p.theta);
            WorldState b = state_at(m, {p.x, 2 * s.map.height - p.y}, p.theta);
            const DepthProfile da = cast_depth(a, s, 90, 61, false);
            const DepthProfile db = cast_depth(b, m, 90, 61, false);
            for (int i = 0; i < 61; ++i) {
                CHECK(da.rays[i].distance == db.rays[60 - i].distance);
                CHECK(da.rays[i].kind == db.rays[60 - i].kind);
            }
        }
    }
}

TEST_CASE("adding an obstacle never lengthens a ray") {
    std::mt19937_64 rng(12);
    const SceneConfig s = generate_scene(50);
    std::uniform_int_distribution<int> xs(0, 1000);
    std::uniform_int_distribution<int> ys(0, 490);
    for (int k = 0; k < 30; ++k) {
        WorldState st;
        st.pose = random_free_pose(s, rng);
        st.entity_phases = s.initial_phases();
        SceneConfig more = s;
        const int x = xs(rng);
        const int y = ys(rng);
        more.obstacles.push_back(box("extra", x, y, x + 20, y + 20));
        const DepthProfile before = cast_depth(st, s, 90, 61);
        const DepthProfile after = cast_depth(st, more, 90, 61);
        for (int i = 0; i < 61; ++i) CHECK(after.rays[i].distance <= before.rays[i].distance);
    }
}

TEST_CASE("render_ego: slab heights halve when distance doubles") {
    const EgoSpec spec;
    CHECK(projected_height(100, kTallHeightPx, spec) == 2 * projected_height(200, kTallHeightPx, spec));
    double prev = std::numeric_limits<double>::infinity();
    for (double d = 5; d < 1500; d += 7.3) {
        const double h = projected_height(d, kTallHeightPx, spec);
        CHECK(h < prev);
        prev = h;
    }

    // Two identical walls straight ahead at 100 and 200 px: centre-column slab height ratio is 2.
    auto slab_rows = [&](int wall_x) {
        SceneConfig s = empty_scene(2000, 2000);
        s.obstacles.push_back(box("w", wall_x, 0, wall_x + 10, 2000, ObstacleKind::Wall));
        const EgoImage img = render_ego(state_at(s, {100, 1000}, Heading::East), s, spec);
        const Rgb wall = img.raster.at(spec.width / 2, spec.height / 2 - 1);
        int rows = 0;
        for (int y = 0; y < spec.height; ++y) rows += img.raster.at(spec.width / 2, y) == wall;
        return rows;
    };
    const int near = slab_rows(200);
    const int far = slab_rows(300);
    CHECK(std::abs(near - 2 * far) <= 1);
}

TEST_CASE("render_ego: empty interior is floor, ceiling and boundary only") {
    const SceneConfig s = empty_scene();
    const EgoImage img = render_ego(state_at(s, {512, 256}, Heading::North), s);
    CHECK(img.raster.width() == 1024);
    CHECK(img.raster.height() == 1024);
    for (int y = 0; y < img.raster.height(); y += 7) {
        for (int x = 0; x < img.raster.width(); x += 5) {
            const Rgb c = img.raster.at(x, y);
            const bool ok = c == palette::kCeiling || c == palette::kFloor ||
                            (c.r >= c.b && c.g >= c.b && c.r > 40);  // shaded boundary wall
            CHECK(ok);
        }
    }
}

TEST_CASE("render_ego column depths equal cast_depth with one ray per column") {
    const SceneConfig s = generate_scene(60);
    EgoSpec spec;
    spec.width = 256;
    spec.height = 64;
    const WorldState st = initial_state(s, 1);
    const EgoImage img = render_ego(st, s, spec);
    const DepthProfile p = cast_depth(st, s, spec.fov, spec.width);
    for (int c = 0; c < spec.width; ++c) CHECK(img.column_depth[static_cast<std::size_t>(c)] == p.rays[c].distance);
}

TEST_CASE("render_topdown: triangle apex follows heading") {
    const SceneConfig s = empty_scene();
    auto red_extent = [&](Heading h) {
        const TopDownImage img = render_topdown(state_at(s, {500, 250}, h, {900, 400}), s);
        int min_x = 10000, max_x = -1, min_y = 10000, max_y = -1;
        for (int y = 230; y < 270; ++y)
            for (int x = 480; x < 520; ++x)
                if (img.raster.at(x, y) == palette::kAgent) {
                    min_x = std::min(min_x, x);
                    max_x = std::max(max_x, x);
                    min_y = std::min(min_y, y);
                    max_y = std::max(max_y, y);
                }
        return std::array<int, 4>{min_x, max_x, min_y, max_y};
    };
    const auto east = red_extent(Heading::East);
    CHECK(east[1] - 500 > 500 - east[0]);  // reaches further right
    const auto south = red_extent(Heading::South);
    CHECK(south[3] - 250 > 250 - south[2]);  // reaches further down
    const TopDownImage img = render_topdown(state_at(s, {500, 250}, Heading::East, {900, 400}), s);
    CHECK(img.raster.at(900, 400) == palette::kTarget);
    CHECK(img.raster.width() == 1024);
    CHECK(img.raster.height() == 512);
    CHECK(render_topdown(state_at(s, {500, 250}, Heading::East), s).raster ==
          render_topdown(state_at(s, {500, 250}, Heading::East), s).raster);
}

TEST_CASE("corner slivers shorter than the march step are still hits") {
    SceneConfig s = empty_scene();
    s.obstacles.push_back(box("crate", 100, 100, 150, 150));
    // x + y = 200.02 crosses the corner region for about 0.03 px of its length.
    const Vec2 origin{50.0, 150.02};
    const Vec2 dir{1 / std::sqrt(2.0), -1 / std::sqrt(2.0)};
    const RayHit hit = first_hit(origin, dir, s, {});
    CHECK(hit.kind == HitKind::Static);
    CHECK(hit.distance == doctest::Approx(50 * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(std::fabs(march_ray(s, {}, origin, dir) - hit.distance) <= 0.25);

    // Plain point sampling at the same step walks straight past it.
    bool sampled = false;
    for (double t = 0; t < 200; t += 0.25)
        sampled = sampled || inside_rect(origin.x + t * dir.x, origin.y + t * dir.y, s.obstacles[0].footprint);
    CHECK_FALSE(sampled);
}
