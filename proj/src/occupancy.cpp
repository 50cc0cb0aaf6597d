#include "warenav/occupancy.hpp"

#include <algorithm>
#include <stdexcept>

namespace warenav {

OccupancyGrid::OccupancyGrid(int cols, int rows, int cell_px)
    : cols_(cols), rows_(rows), cell_px_(cell_px),
      cells_(static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows), 0) {}

std::size_t OccupancyGrid::blocked_count() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

Rect OccupancyGrid::cell_rect(int col, int row, const MapSpec& map) const {
    return {col * cell_px_, row * cell_px_, std::min((col + 1) * cell_px_, map.width),
            std::min((row + 1) * cell_px_, map.height)};
}

OccupancyGrid occupancy_grid(const SceneConfig& scene, int cell_px, int agent_radius) {
    if (cell_px < 1) throw std::invalid_argument("cell_px must be >= 1");
    const auto& map = scene.map;
    const int cols = (map.width + cell_px - 1) / cell_px;
    const int rows = (map.height + cell_px - 1) / cell_px;
    OccupancyGrid grid(cols, rows, cell_px);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const Rect cell = grid.cell_rect(c, r, map);
            for (const auto& o : scene.obstacles) {
                if (rect_rect_distance(cell, o.footprint) <= agent_radius) {
                    grid.set_blocked(c, r, true);
                    break;
                }
            }
        }
    }
    return grid;
}

}  // namespace warenav
