#include "warenav/scene_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <initializer_list>
#include <nlohmann/json.hpp>
#include <sstream>

namespace warenav {

using nlohmann::json;

SceneError::SceneError(std::string key, const std::string& message, int line, int column)
    : std::runtime_error(key.empty() ? message : key + ": " + message),
      key_(std::move(key)),
      line_(line),
      column_(column) {}

namespace {

std::string child(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : fmt::format("{}.{}", path, key);
}

std::string index(const std::string& path, std::size_t i) { return fmt::format("{}[{}]", path, i); }

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw SceneError(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw SceneError(child(path, key), "unknown field");
    }
}

const json& field(const json& j, const std::string& path, std::string_view key) {
    auto it = j.find(std::string(key));
    if (it == j.end()) throw SceneError(child(path, key), "missing required field");
    return *it;
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SceneError(path, "expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < -1'000'000'000 || v > 1'000'000'000) throw SceneError(path, "integer out of range");
    return static_cast<int>(v);
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw SceneError(path, "expected a number");
    return j.get<double>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw SceneError(path, "expected a string");
    return j.get<std::string>();
}

Point as_point(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw SceneError(path, "expected a point [x, y]");
    return {as_int(j[0], index(path, 0)), as_int(j[1], index(path, 1))};
}

bool in_bounds(Point p, const MapSpec& map) {
    return p.x >= 0 && p.y >= 0 && p.x <= map.width && p.y <= map.height;
}

MapSpec parse_map(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"width", "height", "meters_per_pixel"});
    MapSpec map;
    if (j.contains("width")) map.width = as_int(j["width"], child(path, "width"));
    if (j.contains("height")) map.height = as_int(j["height"], child(path, "height"));
    if (j.contains("meters_per_pixel"))
        map.meters_per_pixel = as_number(j["meters_per_pixel"], child(path, "meters_per_pixel"));
    if (map.width <= 0) throw SceneError(child(path, "width"), "must be positive");
    if (map.height <= 0) throw SceneError(child(path, "height"), "must be positive");
    if (!(map.meters_per_pixel > 0.0))
        throw SceneError(child(path, "meters_per_pixel"), "must be positive");
    return map;
}

Obstacle parse_obstacle(const json& j, const std::string& path, const MapSpec& map) {
    require_object(j, path);
    reject_unknown(j, path, {"id", "kind", "x", "y", "w", "h", "height", "color"});
    Obstacle o;
    o.id = as_string(field(j, path, "id"), child(path, "id"));
    const auto kind = as_string(field(j, path, "kind"), child(path, "kind"));
    if (auto k = obstacle_kind_from_string(kind)) o.kind = *k;
    else throw SceneError(child(path, "kind"), fmt::format("unknown obstacle kind '{}'", kind));
    const int x = as_int(field(j, path, "x"), child(path, "x"));
    const int y = as_int(field(j, path, "y"), child(path, "y"));
    const int w = as_int(field(j, path, "w"), child(path, "w"));
    const int h = as_int(field(j, path, "h"), child(path, "h"));
    if (w <= 0) throw SceneError(child(path, "w"), "must be positive");
    if (h <= 0) throw SceneError(child(path, "h"), "must be positive");
    o.footprint = {x, y, x + w, y + h};
    if (x < 0 || y < 0 || x + w > map.width || y + h > map.height)
        throw SceneError(path, "footprint out of bounds");
    if (j.contains("height")) {
        const auto hc = as_string(j["height"], child(path, "height"));
        if (auto v = height_class_from_string(hc)) o.height_class = *v;
        else throw SceneError(child(path, "height"), fmt::format("unknown height class '{}'", hc));
    }
    if (j.contains("color")) {
        o.color_id = as_int(j["color"], child(path, "color"));
        if (o.color_id < 0 || o.color_id > 255) throw SceneError(child(path, "color"), "must be in [0, 255]");
    }
    return o;
}

DynamicEntity parse_entity(const json& j, const std::string& path, const MapSpec& map) {
    require_object(j, path);
    reject_unknown(j, path, {"id", "kind", "radius", "speed", "phase", "waypoints"});
    DynamicEntity e;
    e.id = as_string(field(j, path, "id"), child(path, "id"));
    const auto kind = as_string(field(j, path, "kind"), child(path, "kind"));
    if (auto k = entity_kind_from_string(kind)) e.kind = *k;
    else throw SceneError(child(path, "kind"), fmt::format("unknown entity kind '{}'", kind));
    e.radius = as_int(field(j, path, "radius"), child(path, "radius"));
    if (e.radius <= 0) throw SceneError(child(path, "radius"), "must be positive");
    e.speed = as_number(field(j, path, "speed"), child(path, "speed"));
    if (!(e.speed >= 0.0)) throw SceneError(child(path, "speed"), "must be non-negative");
    const auto wp_path = child(path, "waypoints");
    const auto& wps = field(j, path, "waypoints");
    if (!wps.is_array()) throw SceneError(wp_path, "expected a list of points");
    if (wps.size() < 2) throw SceneError(wp_path, "needs at least 2 waypoints");
    for (std::size_t i = 0; i < wps.size(); ++i) {
        const Point p = as_point(wps[i], index(wp_path, i));
        if (!in_bounds(p, map)) throw SceneError(index(wp_path, i), "waypoint out of bounds");
        e.waypoints.push_back(p);
    }
    if (j.contains("phase")) e.phase = as_number(j["phase"], child(path, "phase"));
    const double length = e.path_length();
    if (!(length > 0.0)) throw SceneError(wp_path, "loop has zero length");
    if (!(e.phase >= 0.0 && e.phase < length))
        throw SceneError(child(path, "phase"), fmt::format("must be in [0, {})", length));
    return e;
}

StartTargetPair parse_pair(const json& j, const std::string& path, const MapSpec& map) {
    require_object(j, path);
    reject_unknown(j, path, {"start", "start_theta", "target", "difficulty"});
    StartTargetPair p;
    p.start = as_point(field(j, path, "start"), child(path, "start"));
    if (!in_bounds(p.start, map)) throw SceneError(child(path, "start"), "start out of bounds");
    p.target = as_point(field(j, path, "target"), child(path, "target"));
    if (!in_bounds(p.target, map)) throw SceneError(child(path, "target"), "target out of bounds");
    const int theta = as_int(field(j, path, "start_theta"), child(path, "start_theta"));
    if (auto h = heading_from_degrees(theta)) p.start_theta = *h;
    else throw SceneError(child(path, "start_theta"), "must be one of 0, 90, 180, 270");
    if (j.contains("difficulty")) {
        const auto d = as_string(j["difficulty"], child(path, "difficulty"));
        if (auto v = difficulty_from_string(d)) p.difficulty = *v;
        else throw SceneError(child(path, "difficulty"), fmt::format("unknown difficulty '{}'", d));
    }
    return p;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
    int line = 1;
    int column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

json point_json(Point p) { return json::array({p.x, p.y}); }

}  // namespace

SceneConfig parse_scene(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // nlohmann reports the 1-based byte index of the offending character.
        const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw SceneError("", fmt::format("syntax error at line {}, column {}", line, column), line,
                         column);
    }
    require_object(doc, "");
    reject_unknown(doc, "", {"map", "obstacles", "entities", "pairs", "name", "seed"});

    SceneConfig scene;
    scene.name = as_string(field(doc, "", "name"), "name");
    if (doc.contains("map")) scene.map = parse_map(doc["map"], "map");
    if (doc.contains("seed") && !doc["seed"].is_null()) {
        if (!doc["seed"].is_number_integer()) throw SceneError("seed", "expected an integer");
        scene.seed = doc["seed"].get<std::int64_t>();
    }
    auto list = [&](std::string_view key, bool required) -> const json* {
        const std::string k(key);
        if (!doc.contains(k)) {
            if (required) throw SceneError(k, "missing required field");
            return nullptr;
        }
        if (!doc[k].is_array()) throw SceneError(k, "expected a list");
        return &doc[k];
    };
    if (const auto* obstacles = list("obstacles", false))
        for (std::size_t i = 0; i < obstacles->size(); ++i)
            scene.obstacles.push_back(parse_obstacle((*obstacles)[i], index("obstacles", i), scene.map));
    if (const auto* entities = list("entities", false))
        for (std::size_t i = 0; i < entities->size(); ++i)
            scene.entities.push_back(parse_entity((*entities)[i], index("entities", i), scene.map));
    const auto* pairs = list("pairs", true);
    for (std::size_t i = 0; i < pairs->size(); ++i)
        scene.pairs.push_back(parse_pair((*pairs)[i], index("pairs", i), scene.map));
    return scene;
}

SceneConfig load_scene(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(fmt::format("cannot open scene file '{}'", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene(buf.str());
}

std::string serialize_scene(const SceneConfig& scene) {
    json doc;
    doc["name"] = scene.name;
    doc["map"] = {{"width", scene.map.width},
                  {"height", scene.map.height},
                  {"meters_per_pixel", scene.map.meters_per_pixel}};
    if (scene.seed) doc["seed"] = *scene.seed;

    doc["obstacles"] = json::array();
    for (const auto& o : scene.obstacles) {
        doc["obstacles"].push_back({{"id", o.id},
                                    {"kind", to_string(o.kind)},
                                    {"x", o.footprint.x0},
                                    {"y", o.footprint.y0},
                                    {"w", o.footprint.width()},
                                    {"h", o.footprint.height()},
                                    {"height", to_string(o.height_class)},
                                    {"color", o.color_id}});
    }
    doc["entities"] = json::array();
    for (const auto& e : scene.entities) {
        json wps = json::array();
        for (const auto& p : e.waypoints) wps.push_back(point_json(p));
        doc["entities"].push_back({{"id", e.id},
                                   {"kind", to_string(e.kind)},
                                   {"radius", e.radius},
                                   {"speed", e.speed},
                                   {"phase", e.phase},
                                   {"waypoints", std::move(wps)}});
    }
    doc["pairs"] = json::array();
    for (const auto& p : scene.pairs) {
        doc["pairs"].push_back({{"start", point_json(p.start)},
                                {"start_theta", degrees(p.start_theta)},
                                {"target", point_json(p.target)},
                                {"difficulty", to_string(p.difficulty)}});
    }
    return doc.dump(2) + "\n";
}

void save_scene(const SceneConfig& scene, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write scene file '{}'", path));
    out << serialize_scene(scene);
}

}  // namespace warenav
