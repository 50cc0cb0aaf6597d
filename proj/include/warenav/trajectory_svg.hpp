#pragma once

#include <string>

#include "warenav/episode_log.hpp"

namespace warenav {

/// Top-down SVG of a replayed episode. Collisions are drawn as crosses
/// (class "collision"), warnings as hollow circles (class "warning").
std::string render_trajectory_svg(const EpisodeLog& log, const SceneConfig& scene);

}  // namespace warenav
