#pragma once

#include <cstdint>
#include <vector>

#include "warenav/world.hpp"

namespace warenav {

/// Origin-aligned boolean grid over the map. Cell (c, r) covers the closed
/// rectangle [c*cell_px, (c+1)*cell_px] x [r*cell_px, (r+1)*cell_px],
/// clipped to the map.
class OccupancyGrid {
public:
    OccupancyGrid(int cols, int rows, int cell_px);

    int cols() const { return cols_; }
    int rows() const { return rows_; }
    int cell_px() const { return cell_px_; }

    bool blocked(int col, int row) const { return cells_[index(col, row)] != 0; }
    void set_blocked(int col, int row, bool value) { cells_[index(col, row)] = value ? 1 : 0; }
    std::size_t blocked_count() const;

    Rect cell_rect(int col, int row, const MapSpec& map) const;

private:
    std::size_t index(int col, int row) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(col);
    }

    int cols_;
    int rows_;
    int cell_px_;
    std::vector<std::uint8_t> cells_;
};

/// A cell is blocked iff it intersects a static footprint inflated by
/// `agent_radius` (Minkowski sum with a disc). Dynamic entities are ignored.
OccupancyGrid occupancy_grid(const SceneConfig& scene, int cell_px,
                             int agent_radius = kDefaultAgentRadius);

}  // namespace warenav
