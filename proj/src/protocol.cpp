#include "warenav/protocol.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace warenav {

std::string format_history_entry(const HistoryEntry& e) {
    return fmt::format("Step {}: Position ({}, {}), θ = {}°, Action: {}, Distance to target: {}, Target ({}, {})",
                       e.step, e.position.x, e.position.y, degrees(e.theta), display_name(e.action),
                       std::lround(e.distance), e.target.x, e.target.y);
}

void HistoryWindow::push(HistoryEntry entry) {
    if (capacity_ == 0) return;
    if (entries_.size() == capacity_) entries_.pop_front();
    entries_.push_back(std::move(entry));
}

std::string_view to_string(PromptVariant v) {
    switch (v) {
        case PromptVariant::Odometry: return "odometry";
        case PromptVariant::OdometryTopDown: return "odometry+topdown";
        case PromptVariant::NoHistory: return "no-history";
    }
    return "?";
}

std::optional<PromptVariant> prompt_variant_from_string(std::string_view s) {
    for (auto v : {PromptVariant::Odometry, PromptVariant::OdometryTopDown, PromptVariant::NoHistory})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

std::string_view to_string(ParseStatus s) {
    switch (s) {
        case ParseStatus::Json: return "json";
        case ParseStatus::Fallback: return "fallback";
        case ParseStatus::Failed: return "failed";
    }
    return "?";
}

std::optional<ParseStatus> parse_status_from_string(std::string_view s) {
    for (auto v : {ParseStatus::Json, ParseStatus::Fallback, ParseStatus::Failed})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

namespace {

std::string join_actions(std::span<const Action> actions, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (i) out += sep;
        out += to_string(actions[i]);
    }
    return out;
}

std::string format_delta(double delta) {
    return delta == std::floor(delta) ? fmt::format("{}", static_cast<long long>(delta)) : fmt::format("{}", delta);
}

bool allowed(Action a, std::span<const Action> set) { return std::find(set.begin(), set.end(), a) != set.end(); }

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::optional<Action> normalize_action(std::string_view token) {
    std::string t = lowercase(token);
    const auto first = t.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return std::nullopt;
    t = t.substr(first, t.find_last_not_of(" \t\r\n") - first + 1);
    std::replace(t.begin(), t.end(), ' ', '_');
    std::replace(t.begin(), t.end(), '-', '_');
    return action_from_string(t);
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

PromptBundle build_prompt(const WorldState& state, const HistoryWindow& history, PromptVariant variant,
                          std::span<const Action> allowed_actions, const PromptContext& context) {
    const auto& pose = state.pose;
    const std::string delta = format_delta(context.delta);
    std::string t;
    t += "You are a warehouse navigation agent. At each step, you receive an egocentric camera view and a "
         "compact state description.\n";
    t += "Your task is to reach the target while avoiding all obstacles.\n\n";

    t += "COORDINATE SYSTEM\n";
    t += "- Map: +X = East (right), +Y = South (down), -X = West (left), -Y = North (up)\n";
    t += "- Headings: θ = 0° → West, 90° → North, 180° → East, 270° → South\n\n";

    if (variant == PromptVariant::OdometryTopDown) {
        t += "VISUAL INPUTS & MAPPING\n";
        t += "- Egocentric Camera Image: Used to detect near-field obstacles and immediate collision risks.\n";
        t += "- Top-Down Minimap Image: Provides the global layout. The robot is a RED TRIANGLE (tip is facing "
             "direction). The target is a GREEN DOT.\n";
        const MapSpec& map = context.scene ? context.scene->map : context.map;
        t += fmt::format("- System: cv2 Pixel Coordinates (resolution: {}x{}).\n\n", map.width, map.height);
    }

    t += "CURRENT STATE\n";
    t += fmt::format("- Position: ({}, {})\n", pose.x, pose.y);
    t += fmt::format("- Target: ({}, {})\n", state.target.x, state.target.y);
    t += fmt::format("- Distance to target: {} px\n", std::lround(distance_to_target(pose, state.target)));
    t += fmt::format("- Heading: {}°\n", degrees(pose.theta));
    t += fmt::format("- Allowed actions: {}\n\n", join_actions(allowed_actions, ", "));

    if (variant != PromptVariant::NoHistory) {
        t += "MOVEMENT HISTORY\n";
        if (history.empty()) t += "(no moves yet)\n";
        for (const auto& e : history.entries()) t += format_history_entry(e) + "\n";
        t += "\n";
    }

    t += fmt::format("ACTIONS & DYNAMICS (Step size Δ = {} px)\n", kStepPx);
    t += "| Action     | Condition / Input    | Effect / Result          |\n";
    t += "|------------|----------------------|--------------------------|\n";
    t += "| turn_right | -                    | θ ← (θ + 90°) mod 360°   |\n";
    t += "| turn_left  | -                    | θ ← (θ - 90°) mod 360°   |\n";
    t += fmt::format("| forward    | Heading 0° (West)    | x ← x - {}               |\n", kStepPx);
    t += fmt::format("| forward    | Heading 90° (North)  | y ← y - {}               |\n", kStepPx);
    t += fmt::format("| forward    | Heading 180° (East)  | x ← x + {}               |\n", kStepPx);
    t += fmt::format("| forward    | Heading 270° (South) | y ← y + {}               |\n", kStepPx);
    t += fmt::format("| stop       | Dist ≤ {} px         | Terminate episode        |\n\n", delta);

    t += "DECISION PRIORITY\n";
    t += "1. Check history. Review recent movements. Avoid repeating failed actions or getting stuck in loops.\n";
    t += "2. Avoid obstacles first. Use the egocentric view. Never choose an action that collides with walls, "
         "shelves, robots, or other objects.\n";
    t += "3. Reduce distance. Among safe actions, choose the one that moves closer to the target.\n";
    t += "4. Make progress. If distance hasn't decreased in recent history, consider a different approach.\n";
    t += fmt::format("5. Stop. When within {} px of the target, choose stop.\n\n", delta);

    t += "OUTPUT (JSON only)\n";
    t += "{\n";
    t += "  \"reasoning\": \"Brief logic based on history and obstacles\",\n";
    t += fmt::format("  \"action\": \"<{}>\"  (SELECT ONE)\n", join_actions(allowed_actions, "|"));
    t += "}\n";

    PromptBundle bundle{std::move(t), {}, variant};
    if (context.scene) {
        bundle.images.push_back({ImageKind::Ego, render_ego(state, *context.scene, context.ego).raster});
        if (variant == PromptVariant::OdometryTopDown)
            bundle.images.push_back({ImageKind::TopDown, render_topdown(state, *context.scene).raster});
    }
    return bundle;
}

AgentDecision parse_decision(std::string_view raw, Action default_action, std::span<const Action> allowed_actions) {
    if (!allowed(default_action, allowed_actions))
        throw std::invalid_argument("default action must be one of the allowed actions");
    AgentDecision decision;
    decision.raw = std::string(raw);

    const auto open = raw.find('{');
    const auto close = raw.rfind('}');
    if (open != std::string_view::npos && close != std::string_view::npos && open < close) {
        const auto doc = nlohmann::json::parse(raw.substr(open, close - open + 1), nullptr, false);
        if (doc.is_object() && doc.contains("action") && doc["action"].is_string()) {
            const auto action = normalize_action(doc["action"].get<std::string>());
            if (action && allowed(*action, allowed_actions)) {
                decision.action = *action;
                decision.status = ParseStatus::Json;
                if (doc.contains("reasoning") && doc["reasoning"].is_string())
                    decision.reasoning = doc["reasoning"].get<std::string>();
                return decision;
            }
        }
    }

    static constexpr std::pair<std::string_view, Action> kKeywords[] = {
        {"forward", Action::Forward},      {"turn left", Action::TurnLeft}, {"turn_left", Action::TurnLeft},
        {"turn right", Action::TurnRight}, {"turn_right", Action::TurnRight}, {"stop", Action::Stop},
    };
    const std::string text = lowercase(raw);
    std::optional<std::pair<std::size_t, Action>> last;
    for (const auto& [word, action] : kKeywords) {
        if (!allowed(action, allowed_actions)) continue;
        for (auto pos = text.find(word); pos != std::string::npos; pos = text.find(word, pos + 1)) {
            const bool left_ok = pos == 0 || !is_word_char(text[pos - 1]);
            const auto end = pos + word.size();
            const bool right_ok = end >= text.size() || !is_word_char(text[end]);
            if (left_ok && right_ok && (!last || pos >= last->first)) last = {pos, action};
        }
    }
    if (last) {
        decision.action = last->second;
        decision.status = ParseStatus::Fallback;
        return decision;
    }
    decision.action = default_action;
    decision.status = ParseStatus::Failed;
    return decision;
}

}  // namespace warenav
