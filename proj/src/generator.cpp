#include "warenav/generator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "warenav/dynamics.hpp"
#include "warenav/planning.hpp"
#include "warenav/validate.hpp"

namespace warenav {

namespace {

constexpr int kShelfDepth = 40;
constexpr int kAisleWidth = 72;
constexpr int kSlotPx = 64;
constexpr int kMinPairSeparation = 3 * kStepPx;

// std::uniform_int_distribution is implementation-defined; keep draws portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    int uniform(int lo, int hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % range;
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return lo + static_cast<int>(draw % range);
    }

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }

private:
    std::mt19937_64 engine_;
};

struct AttemptFailed {
    std::string reason;
};

struct Band {
    int y0;
    int y1;
};

struct Layout {
    SceneConfig scene;
    std::vector<Band> corridors;
};

void add_shelves(Layout& layout, const GeneratorParams& p, Rng& rng) {
    auto& scene = layout.scene;
    std::vector<Band> bands;
    for (int k = 0; k < p.shelf_rows; ++k) {
        const int yc = p.height * (k + 1) / (p.shelf_rows + 1) + rng.uniform(-8, 8);
        bands.push_back({yc - kShelfDepth / 2, yc + kShelfDepth / 2});
        const int left = 96 + rng.uniform(0, 24);
        const int right = p.width - 96 - rng.uniform(0, 24);
        const int segments = p.aisle_count + 1;
        const int seg_len = (right - left - p.aisle_count * kAisleWidth) / segments;
        if (seg_len < 24) throw AttemptFailed{"map too narrow for the requested aisles"};
        for (int s = 0; s < segments; ++s) {
            const int x0 = left + s * (seg_len + kAisleWidth);
            scene.obstacles.push_back({fmt::format("shelf-{}-{}", k, s),
                                       {x0, bands.back().y0, x0 + seg_len, bands.back().y1},
                                       HeightClass::Tall,
                                       rng.uniform(1, 6),
                                       ObstacleKind::Shelf});
        }
    }
    int top = 0;
    for (const auto& b : bands) {
        layout.corridors.push_back({top, b.y0});
        top = b.y1;
    }
    layout.corridors.push_back({top, p.height});
}

void add_partition_walls(Layout& layout, const GeneratorParams& p, Rng& rng) {
    if (p.shelf_rows == 0) return;
    const Band& first = layout.corridors.front();
    const Band& last = layout.corridors.back();
    if (rng.chance(0.5) && first.y1 - 60 >= 30) {
        const int x = rng.uniform(200, p.width - 200);
        layout.scene.obstacles.push_back(
            {"wall-top", {x, 0, x + 10, first.y1 - 60}, HeightClass::Tall, 0, ObstacleKind::Wall});
    }
    if (rng.chance(0.5) && p.height - (last.y0 + 60) >= 30) {
        const int x = rng.uniform(200, p.width - 200);
        layout.scene.obstacles.push_back({"wall-bottom",
                                          {x, last.y0 + 60, x + 10, p.height},
                                          HeightClass::Tall,
                                          0,
                                          ObstacleKind::Wall});
    }
}

// Corridor floor is tiled into slots that exactly span each corridor; a filled
// slot holds an item inset by 4-8 px, so fully cluttered floor leaves no gap an
// agent fits through.
void add_clutter(Layout& layout, const GeneratorParams& p, Rng& rng) {
    if (p.clutter_density <= 0.0) return;
    int counter = 0;
    const int cols = std::max(1, p.width / kSlotPx);
    for (const auto& band : layout.corridors) {
        const int height = band.y1 - band.y0;
        if (height < 24) continue;
        const int rows = std::max(1, height / kSlotPx);
        for (int r = 0; r < rows; ++r) {
            const int y0 = band.y0 + height * r / rows;
            const int y1 = band.y0 + height * (r + 1) / rows;
            for (int c = 0; c < cols; ++c) {
                if (!rng.chance(p.clutter_density)) continue;
                const int x0 = p.width * c / cols;
                const int x1 = p.width * (c + 1) / cols;
                const int inset = rng.uniform(4, 8);
                const int pick = rng.uniform(0, 2);
                const ObstacleKind kind =
                    pick == 0 ? ObstacleKind::Container : (pick == 1 ? ObstacleKind::Barrel : ObstacleKind::Misc);
                const HeightClass height_class = kind == ObstacleKind::Container ? HeightClass::Tall : HeightClass::Low;
                layout.scene.obstacles.push_back({fmt::format("{}-{}", to_string(kind), counter++),
                                                  {x0 + inset, y0 + inset, x1 - inset, y1 - inset},
                                                  height_class,
                                                  rng.uniform(1, 7),
                                                  kind});
            }
        }
    }
}

bool path_clear(const std::vector<Point>& waypoints, int radius, const SceneConfig& scene) {
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        const Vec2 a = to_vec(waypoints[i]);
        const Vec2 b = to_vec(waypoints[(i + 1) % waypoints.size()]);
        // Keep the whole loop, including the disc, inside the map and off every footprint.
        if (sweep_blocked(a, b, radius + 2, scene, {})) return false;
    }
    return true;
}

void add_entities(Layout& layout, const GeneratorParams& p, Rng& rng) {
    auto& scene = layout.scene;
    const std::vector<Obstacle> shelves = [&] {
        std::vector<Obstacle> out;
        for (const auto& o : scene.obstacles)
            if (o.kind == ObstacleKind::Shelf) out.push_back(o);
        return out;
    }();
    for (int k = 0; k < p.entity_count; ++k) {
        DynamicEntity e;
        switch (k % 3) {
            case 0: e.kind = EntityKind::Worker; e.radius = 12; e.speed = rng.uniform(8, 12); break;
            case 1: e.kind = EntityKind::Forklift; e.radius = 18; e.speed = rng.uniform(12, 18); break;
            default: e.kind = EntityKind::Robot; e.radius = 14; e.speed = rng.uniform(10, 14); break;
        }
        e.id = fmt::format("{}-{}", to_string(e.kind), k);
        bool placed = false;
        for (int tries = 0; tries < 80 && !placed; ++tries) {
            std::vector<Point> wps;
            if (!shelves.empty() && rng.chance(0.5)) {
                const auto& s = shelves[static_cast<std::size_t>(rng.uniform(0, int(shelves.size()) - 1))].footprint;
                const int c = e.radius + rng.uniform(12, 20);
                wps = {{s.x0 - c, s.y0 - c}, {s.x1 + c, s.y0 - c}, {s.x1 + c, s.y1 + c}, {s.x0 - c, s.y1 + c}};
            } else {
                const auto& band = layout.corridors[static_cast<std::size_t>(rng.uniform(0, int(layout.corridors.size()) - 1))];
                if (band.y1 - band.y0 < 2 * e.radius + 8) continue;
                const int y = rng.uniform(band.y0 + e.radius + 4, band.y1 - e.radius - 4);
                const int len = rng.uniform(160, std::max(160, p.width / 2));
                const int x0 = rng.uniform(e.radius + 4, std::max(e.radius + 4, p.width - len - e.radius - 4));
                if (rng.chance(0.5)) wps = {{x0, y}, {x0 + len, y}};
                else wps = {{x0 + len, y}, {x0, y}};
            }
            if (!path_clear(wps, e.radius, scene)) continue;
            e.waypoints = std::move(wps);
            e.phase = rng.uniform(0, static_cast<int>(e.path_length()) - 1);
            placed = true;
        }
        if (!placed) throw AttemptFailed{fmt::format("no free loop for entity {}", e.id)};
        scene.entities.push_back(std::move(e));
    }
}

struct Candidate {
    StartTargetPair pair;
    int cost = 0;
};

std::vector<int> reachable_nodes(const MotionLattice& lattice, int start) {
    std::vector<char> seen(static_cast<std::size_t>(lattice.node_count()), 0);
    std::vector<int> order{start};
    seen[static_cast<std::size_t>(start)] = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (Heading h : {Heading::West, Heading::North, Heading::East, Heading::South}) {
            if (auto m = lattice.step(order[i], h); m && !seen[static_cast<std::size_t>(*m)]) {
                seen[static_cast<std::size_t>(*m)] = 1;
                order.push_back(*m);
            }
        }
    }
    return order;
}

std::optional<Candidate> sample_candidate(const SceneConfig& scene, const GeneratorParams& p, Rng& rng) {
    const int r = p.agent_radius;
    const Point start{rng.uniform(r, p.width - r), rng.uniform(r, p.height - r)};
    const Heading theta = *heading_from_degrees(90 * rng.uniform(0, 3));
    const auto frozen = scene.entity_discs(scene.initial_phases());
    if (sweep_blocked(to_vec(start), to_vec(start), r, scene, frozen)) return std::nullopt;

    const MotionLattice lattice(scene, start, r, frozen);
    const auto nodes = reachable_nodes(lattice, *lattice.node_at(start));
    std::vector<int> far;
    for (int n : nodes)
        if (distance(to_vec(lattice.position(n)), to_vec(start)) >= kMinPairSeparation) far.push_back(n);
    if (far.empty()) return std::nullopt;

    const Point node = lattice.position(far[static_cast<std::size_t>(rng.uniform(0, int(far.size()) - 1))]);
    const Point target{node.x + rng.uniform(-6, 6), node.y + rng.uniform(-6, 6)};
    if (target.x < 0 || target.y < 0 || target.x > p.width || target.y > p.height) return std::nullopt;
    for (const auto& o : scene.obstacles)
        if (o.footprint.contains(to_vec(target))) return std::nullopt;
    if (!(distance(to_vec(start), to_vec(target)) > p.delta)) return std::nullopt;

    const AgentPose pose{start.x, start.y, theta, r};
    const auto cost = min_action_count(lattice, pose, to_vec(target), p.delta);
    if (!cost || *cost > p.max_plan_steps) return std::nullopt;
    return Candidate{{start, theta, target, Difficulty::Easy}, *cost};
}

void add_pairs(Layout& layout, const GeneratorParams& p, Rng& rng) {
    const std::size_t pool_size = static_cast<std::size_t>(6 * p.pair_count);
    std::vector<Candidate> pool;
    for (int tries = 0; tries < 100 * p.pair_count && pool.size() < pool_size; ++tries)
        if (auto c = sample_candidate(layout.scene, p, rng)) pool.push_back(*c);
    if (pool.size() < static_cast<std::size_t>(p.pair_count))
        throw AttemptFailed{"not enough reachable start-target pairs"};

    std::vector<int> costs;
    for (const auto& c : pool) costs.push_back(c.cost);
    std::sort(costs.begin(), costs.end());
    const int low = costs[costs.size() / 3];
    const int high = costs[2 * costs.size() / 3];
    for (auto& c : pool)
        c.pair.difficulty = c.cost < low ? Difficulty::Easy : (c.cost < high ? Difficulty::Medium : Difficulty::Hard);

    std::vector<char> used(pool.size(), 0);
    const Difficulty cycle[3] = {Difficulty::Easy, Difficulty::Medium, Difficulty::Hard};
    for (int k = 0; k < p.pair_count; ++k) {
        std::optional<std::size_t> pick;
        for (std::size_t i = 0; i < pool.size() && !pick; ++i)
            if (!used[i] && pool[i].pair.difficulty == cycle[k % 3]) pick = i;
        for (std::size_t i = 0; i < pool.size() && !pick; ++i)
            if (!used[i]) pick = i;
        used[*pick] = 1;
        layout.scene.pairs.push_back(pool[*pick].pair);
    }
}

}  // namespace

void check_params(const GeneratorParams& p) {
    auto range = [](bool ok, const char* name) {
        if (!ok) throw std::invalid_argument(fmt::format("generator parameter '{}' out of range", name));
    };
    range(p.width >= 256 && p.width <= 4096, "width");
    range(p.height >= 256 && p.height <= 4096, "height");
    range(p.meters_per_pixel > 0.0, "meters_per_pixel");
    range(p.shelf_rows >= 0 && p.shelf_rows <= 4, "shelf_rows");
    range(p.aisle_count >= 0 && p.aisle_count <= 6, "aisle_count");
    range(p.clutter_density >= 0.0 && p.clutter_density <= 1.0, "clutter_density");
    range(p.entity_count >= 0 && p.entity_count <= 8, "entity_count");
    range(p.pair_count >= 1 && p.pair_count <= 12, "pair_count");
    range(p.agent_radius >= 1 && p.agent_radius <= 30, "agent_radius");
    range(p.delta > 0.0, "delta");
    range(p.max_plan_steps >= 4 && p.max_plan_steps <= 200, "max_plan_steps");
    range(p.max_attempts >= 1 && p.max_attempts <= 1000, "max_attempts");
}

SceneConfig generate_scene(std::uint64_t seed, const GeneratorParams& params) {
    check_params(params);
    Rng rng(seed);
    std::string last_reason;
    for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
        Layout layout;
        layout.scene.name = fmt::format("warehouse-{}", seed);
        layout.scene.seed = static_cast<std::int64_t>(seed);
        layout.scene.map = {params.width, params.height, params.meters_per_pixel};
        try {
            add_shelves(layout, params, rng);
            add_partition_walls(layout, params, rng);
            add_clutter(layout, params, rng);
            add_entities(layout, params, rng);
            add_pairs(layout, params, rng);
        } catch (const AttemptFailed& f) {
            last_reason = f.reason;
            continue;
        }
        const auto violations =
            validate_scene(layout.scene, {params.delta, params.agent_radius});
        if (violations.empty()) return std::move(layout.scene);
        last_reason = fmt::format("{}: {}", violations.front().subject, violations.front().message);
    }
    throw GenerationError(fmt::format("scene generation failed after {} attempts (last: {})",
                                      params.max_attempts, last_reason));
}

}  // namespace warenav
