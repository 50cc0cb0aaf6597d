#include "warenav/trajectory_svg.hpp"

#include <fmt/format.h>

#include "warenav/render.hpp"

namespace warenav {

namespace {

std::string css(Rgb c) { return fmt::format("#{:02x}{:02x}{:02x}", c.r, c.g, c.b); }

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_trajectory_svg(const EpisodeLog& log, const SceneConfig& scene) {
    const auto& map = scene.map;
    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n", map.width,
        map.height);
    svg += fmt::format("<title>{} pair {} ({})</title>\n", xml_escape(log.header.scene), log.header.pair_index,
                       xml_escape(log.header.policy));
    svg += fmt::format("<rect class=\"floor\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", map.width,
                       map.height, css(palette::kTopDownFloor));

    for (const auto& o : scene.obstacles) {
        const auto& f = o.footprint;
        svg += fmt::format(
            "<rect class=\"obstacle\" id=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
            xml_escape(o.id), f.x0, f.y0, f.x1 - f.x0, f.y1 - f.y0, css(palette::obstacle(o)));
    }
    for (const auto& e : scene.entities) {
        std::string points;
        for (const auto& w : e.waypoints) points += fmt::format("{}{},{}", points.empty() ? "" : " ", w.x, w.y);
        svg += fmt::format(
            "<polygon class=\"entity-loop\" id=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{}\" "
            "stroke-dasharray=\"6 4\"/>\n",
            xml_escape(e.id), points, css(palette::entity(e.kind)));
    }

    std::string path = fmt::format("{},{}", log.header.start.x, log.header.start.y);
    for (const auto& s : log.steps)
        if (s.pose_after.position() != s.pose_before.position())
            path += fmt::format(" {},{}", s.pose_after.x, s.pose_after.y);
    svg += fmt::format("<polyline class=\"path\" points=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\"/>\n",
                       path);

    for (const auto& s : log.steps) {
        svg += fmt::format("<circle class=\"step\" cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"#1f4e9c\"/>\n", s.pose_after.x,
                           s.pose_after.y);
    }
    for (const auto& s : log.steps) {
        if (!s.collided) continue;
        const int x = s.pose_after.x;
        const int y = s.pose_after.y;
        svg += fmt::format(
            "<path class=\"collision\" d=\"M{} {} L{} {} M{} {} L{} {}\" stroke=\"#d00000\" stroke-width=\"2\"/>\n",
            x - 6, y - 6, x + 6, y + 6, x - 6, y + 6, x + 6, y - 6);
    }
    for (const auto& s : log.steps) {
        if (!s.warning) continue;
        svg += fmt::format(
            "<circle class=\"warning\" cx=\"{}\" cy=\"{}\" r=\"9\" fill=\"none\" stroke=\"#e08000\" "
            "stroke-width=\"1.5\"/>\n",
            s.pose_after.x, s.pose_after.y);
    }
    svg += fmt::format("<circle class=\"target\" cx=\"{}\" cy=\"{}\" r=\"7\" fill=\"{}\"/>\n", log.header.target.x,
                       log.header.target.y, css(palette::kTarget));
    svg += "</svg>\n";
    return svg;
}

}  // namespace warenav
