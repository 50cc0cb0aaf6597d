#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "warenav/world.hpp"

namespace warenav {

/// Raised by parse_scene. `key` is the dotted path of the offending field
/// (empty for syntax errors); line/column are 1-based and only set for
/// syntax errors.
class SceneError : public std::runtime_error {
public:
    SceneError(std::string key, const std::string& message, int line = 0, int column = 0);

    const std::string& key() const { return key_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    std::string key_;
    int line_;
    int column_;
};

/// Parses a scene-config document (JSON, schema in docs/scene_format.md).
/// Checks field-local ranges; cross-object rules are left to validate_scene.
SceneConfig parse_scene(std::string_view text);
SceneConfig load_scene(const std::string& path);

/// Canonical form: sorted keys, two-space indent, trailing newline.
std::string serialize_scene(const SceneConfig& scene);
void save_scene(const SceneConfig& scene, const std::string& path);

}  // namespace warenav
