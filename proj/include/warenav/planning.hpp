#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "warenav/dynamics.hpp"

namespace warenav {

/// The set of positions the agent can occupy from `anchor`: anchor + 34 * (i, j),
/// restricted to the map. Edges are forward moves whose swept disc is free of
/// static footprints, the map border, and `blockers`.
class MotionLattice {
public:
    MotionLattice(const SceneConfig& scene, Point anchor, int agent_radius,
                  std::vector<Disc> blockers = {});

    int node_count() const { return cols_ * rows_; }
    std::optional<int> node_at(Point p) const;
    Point position(int node) const;

    /// Neighbour reached by one forward step in `h`, if the move is free.
    std::optional<int> step(int node, Heading h) const;
    /// Nodes within `delta` of `target`.
    std::vector<int> goal_nodes(Vec2 target, double delta) const;

private:
    const SceneConfig* scene_;
    Point anchor_;
    int radius_;
    std::vector<Disc> blockers_;
    int i_min_ = 0;
    int j_min_ = 0;
    int cols_ = 0;
    int rows_ = 0;
    mutable std::vector<std::int8_t> edge_cache_;
};

/// Position-only BFS: true iff some node within `delta` of the target is connected to `start`.
bool lattice_reachable(const MotionLattice& lattice, Point start, Vec2 target, double delta);

/// Fewest actions (forwards and 90-degree turns) that bring the agent within
/// `delta` of the target, excluding the terminal stop.
std::optional<int> min_action_count(const MotionLattice& lattice, const AgentPose& start, Vec2 target,
                                    double delta);

/// A* over (node, heading) with unit action costs; returns an optimal
/// forward/turn sequence (empty when already within delta).
std::optional<std::vector<Action>> plan_actions(const MotionLattice& lattice, const AgentPose& start,
                                                Vec2 target, double delta);

}  // namespace warenav
