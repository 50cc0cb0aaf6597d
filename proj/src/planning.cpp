#include "warenav/planning.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <tuple>

namespace warenav {

namespace {

constexpr Heading kHeadings[4] = {Heading::West, Heading::North, Heading::East, Heading::South};

int heading_index(Heading h) { return degrees(h) / 90; }

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int ceil_div(int a, int b) { return -floor_div(-a, b); }

std::vector<char> goal_mask(const MotionLattice& lattice, Vec2 target, double delta) {
    std::vector<char> mask(static_cast<std::size_t>(lattice.node_count()), 0);
    for (int n : lattice.goal_nodes(target, delta)) mask[static_cast<std::size_t>(n)] = 1;
    return mask;
}

}  // namespace

MotionLattice::MotionLattice(const SceneConfig& scene, Point anchor, int agent_radius,
                             std::vector<Disc> blockers)
    : scene_(&scene), anchor_(anchor), radius_(agent_radius), blockers_(std::move(blockers)) {
    const int w = scene.map.width;
    const int h = scene.map.height;
    i_min_ = ceil_div(-anchor.x, kStepPx);
    j_min_ = ceil_div(-anchor.y, kStepPx);
    const int i_max = floor_div(w - anchor.x, kStepPx);
    const int j_max = floor_div(h - anchor.y, kStepPx);
    cols_ = std::max(0, i_max - i_min_ + 1);
    rows_ = std::max(0, j_max - j_min_ + 1);
    edge_cache_.assign(static_cast<std::size_t>(node_count()) * 4, -1);
}

std::optional<int> MotionLattice::node_at(Point p) const {
    const int dx = p.x - anchor_.x;
    const int dy = p.y - anchor_.y;
    if (dx % kStepPx != 0 || dy % kStepPx != 0) return std::nullopt;
    const int i = dx / kStepPx - i_min_;
    const int j = dy / kStepPx - j_min_;
    if (i < 0 || j < 0 || i >= cols_ || j >= rows_) return std::nullopt;
    return j * cols_ + i;
}

Point MotionLattice::position(int node) const {
    const int i = node % cols_ + i_min_;
    const int j = node / cols_ + j_min_;
    return {anchor_.x + i * kStepPx, anchor_.y + j * kStepPx};
}

std::optional<int> MotionLattice::step(int node, Heading h) const {
    const Point from = position(node);
    const Point d = heading_direction(h);
    const Point to{from.x + d.x * kStepPx, from.y + d.y * kStepPx};
    const auto next = node_at(to);
    if (!next) return std::nullopt;
    auto& cached = edge_cache_[static_cast<std::size_t>(node) * 4 + heading_index(h)];
    if (cached < 0) {
        cached = sweep_blocked(to_vec(from), to_vec(to), radius_, *scene_, blockers_) ? 0 : 1;
    }
    if (cached == 0) return std::nullopt;
    return next;
}

std::vector<int> MotionLattice::goal_nodes(Vec2 target, double delta) const {
    std::vector<int> out;
    for (int n = 0; n < node_count(); ++n)
        if (distance(to_vec(position(n)), target) <= delta) out.push_back(n);
    return out;
}

bool lattice_reachable(const MotionLattice& lattice, Point start, Vec2 target, double delta) {
    const auto start_node = lattice.node_at(start);
    if (!start_node) return false;
    const auto goals = goal_mask(lattice, target, delta);
    std::vector<char> seen(goals.size(), 0);
    std::deque<int> frontier{*start_node};
    seen[static_cast<std::size_t>(*start_node)] = 1;
    while (!frontier.empty()) {
        const int n = frontier.front();
        frontier.pop_front();
        if (goals[static_cast<std::size_t>(n)]) return true;
        for (Heading h : kHeadings) {
            if (auto m = lattice.step(n, h); m && !seen[static_cast<std::size_t>(*m)]) {
                seen[static_cast<std::size_t>(*m)] = 1;
                frontier.push_back(*m);
            }
        }
    }
    return false;
}

std::optional<int> min_action_count(const MotionLattice& lattice, const AgentPose& start, Vec2 target,
                                    double delta) {
    const auto start_node = lattice.node_at(start.position());
    if (!start_node) return std::nullopt;
    const auto goals = goal_mask(lattice, target, delta);
    std::vector<int> dist(goals.size() * 4, -1);
    const int s0 = *start_node * 4 + heading_index(start.theta);
    dist[static_cast<std::size_t>(s0)] = 0;
    std::deque<int> frontier{s0};
    while (!frontier.empty()) {
        const int s = frontier.front();
        frontier.pop_front();
        const int node = s / 4;
        const int h = s % 4;
        const int d = dist[static_cast<std::size_t>(s)];
        if (goals[static_cast<std::size_t>(node)]) return d;
        auto visit = [&](int next) {
            if (dist[static_cast<std::size_t>(next)] < 0) {
                dist[static_cast<std::size_t>(next)] = d + 1;
                frontier.push_back(next);
            }
        };
        if (auto m = lattice.step(node, kHeadings[h])) visit(*m * 4 + h);
        visit(node * 4 + (h + 1) % 4);
        visit(node * 4 + (h + 3) % 4);
    }
    return std::nullopt;
}

std::optional<std::vector<Action>> plan_actions(const MotionLattice& lattice, const AgentPose& start,
                                                Vec2 target, double delta) {
    const auto start_node = lattice.node_at(start.position());
    if (!start_node) return std::nullopt;
    const auto goals = goal_mask(lattice, target, delta);
    const std::size_t states = goals.size() * 4;

    // Each forward step changes the target distance by at most one step length,
    // so this bound is consistent.
    auto heuristic = [&](int node) {
        const double d = distance(to_vec(lattice.position(node)), target) - delta;
        return d <= 0.0 ? 0 : static_cast<int>(std::ceil(d / kStepPx));
    };

    std::vector<int> g(states, -1);
    std::vector<int> parent(states, -1);
    std::vector<Action> via(states, Action::Stop);
    std::vector<char> closed(states, 0);
    using Entry = std::tuple<int, std::uint64_t, int>;  // f, insertion order, state
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    std::uint64_t counter = 0;

    const int s0 = *start_node * 4 + heading_index(start.theta);
    g[static_cast<std::size_t>(s0)] = 0;
    open.emplace(heuristic(*start_node), counter++, s0);

    while (!open.empty()) {
        const auto [f, order, s] = open.top();
        open.pop();
        if (closed[static_cast<std::size_t>(s)]) continue;
        closed[static_cast<std::size_t>(s)] = 1;
        const int node = s / 4;
        const int h = s % 4;
        if (goals[static_cast<std::size_t>(node)]) {
            std::vector<Action> actions;
            for (int cur = s; cur != s0; cur = parent[static_cast<std::size_t>(cur)])
                actions.push_back(via[static_cast<std::size_t>(cur)]);
            std::reverse(actions.begin(), actions.end());
            return actions;
        }
        const int gs = g[static_cast<std::size_t>(s)];
        auto relax = [&](int next, Action a) {
            auto& gn = g[static_cast<std::size_t>(next)];
            if (closed[static_cast<std::size_t>(next)] || (gn >= 0 && gn <= gs + 1)) return;
            gn = gs + 1;
            parent[static_cast<std::size_t>(next)] = s;
            via[static_cast<std::size_t>(next)] = a;
            open.emplace(gn + heuristic(next / 4), counter++, next);
        };
        if (auto m = lattice.step(node, kHeadings[h])) relax(*m * 4 + h, Action::Forward);
        relax(node * 4 + (h + 1) % 4, Action::TurnRight);
        relax(node * 4 + (h + 3) % 4, Action::TurnLeft);
    }
    return std::nullopt;
}

}  // namespace warenav
