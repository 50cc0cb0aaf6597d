#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "warenav/raster.hpp"
#include "warenav/render.hpp"

namespace warenav {

struct HistoryEntry {
    int step = 0;
    Point position;
    Heading theta = Heading::East;
    Action action = Action::Forward;
    double distance = 0.0;  // rounded only when formatted
    Point target;

    bool operator==(const HistoryEntry&) const = default;
};

/// `Step 5: Position (100, 200), θ = 90°, Action: turn left, Distance to target: 30, Target (130, 200)`
std::string format_history_entry(const HistoryEntry& entry);

/// Sliding window; pushing into a full window evicts the oldest entry.
class HistoryWindow {
public:
    explicit HistoryWindow(std::size_t capacity = 10) : capacity_(capacity) {}

    void push(HistoryEntry entry);
    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return entries_.empty(); }
    const std::deque<HistoryEntry>& entries() const { return entries_; }

private:
    std::size_t capacity_;
    std::deque<HistoryEntry> entries_;
};

enum class PromptVariant { Odometry, OdometryTopDown, NoHistory };
std::string_view to_string(PromptVariant v);
std::optional<PromptVariant> prompt_variant_from_string(std::string_view s);

enum class ImageKind { Ego, TopDown };

struct PromptImage {
    ImageKind kind;
    Raster raster;
};

struct PromptBundle {
    std::string text;
    std::vector<PromptImage> images;
    PromptVariant variant = PromptVariant::Odometry;
};

struct PromptContext {
    double delta = kDefaultSuccessDelta;
    MapSpec map;
    /// When set, the egocentric view (and the top-down map in that variant) is rendered and attached.
    const SceneConfig* scene = nullptr;
    EgoSpec ego;
};

PromptBundle build_prompt(const WorldState& state, const HistoryWindow& history, PromptVariant variant,
                          std::span<const Action> allowed_actions, const PromptContext& context);

enum class ParseStatus { Json, Fallback, Failed };
std::string_view to_string(ParseStatus s);
std::optional<ParseStatus> parse_status_from_string(std::string_view s);

struct AgentDecision {
    std::string reasoning;
    Action action = Action::TurnRight;
    std::string raw;
    ParseStatus status = ParseStatus::Failed;
};

/// Reads {"reasoning", "action"} from the outermost braces; failing that, takes
/// the last action keyword in the text; failing that, returns `default_action`.
AgentDecision parse_decision(std::string_view raw, Action default_action,
                             std::span<const Action> allowed_actions = kAllActions);

}  // namespace warenav
