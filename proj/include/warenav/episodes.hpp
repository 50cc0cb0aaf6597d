#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "warenav/episode_log.hpp"
#include "warenav/metrics.hpp"
#include "warenav/policies.hpp"
#include "warenav/render.hpp"

namespace warenav {

struct EpisodeConfig {
    SceneConfig scene;
    std::size_t pair_index = 0;
    int max_steps = 70;
    double delta = kDefaultSuccessDelta;
    int history_len = 10;
    PromptVariant variant = PromptVariant::Odometry;
    std::int64_t seed = 0;
    int agent_radius = kDefaultAgentRadius;
    SensorConfig sensors;
    EgoSpec ego;
    Action default_action = Action::TurnRight;
    std::vector<Action> allowed{std::begin(kAllActions), std::end(kAllActions)};

    /// Throws std::invalid_argument on a bad pair index, step cap, delta or history length.
    void check() const;
};

struct EpisodeOptions {
    /// Write the JSONL log here when set.
    std::optional<std::string> log_path;
    /// Write `{episode_id}_{step}_{ego|top}.ppm` frames here when set.
    std::optional<std::string> frames_dir;
    std::string episode_id = "episode";
};

struct EpisodeResult {
    RunRecord run;
    EpisodeLog log;
    std::string log_path;
    bool success = false;
    bool aborted = false;
    std::string abort_reason;
};

/// Counters straight from the logged steps, without re-execution.
RunRecord summarize_log(const EpisodeLog& log);

EpisodeResult run_episode(const EpisodeConfig& config, Policy& policy, const EpisodeOptions& options = {});

class ReplayDivergence : public std::runtime_error {
public:
    ReplayDivergence(int step, const std::string& what);
    int step() const { return step_; }

private:
    int step_;
};

/// Counters recomputed from a log; throws ReplayDivergence at the first step
/// whose logged outcome differs from re-execution, or std::invalid_argument
/// when the log was recorded against a different scene.
RunRecord replay(const EpisodeLog& log, const SceneConfig& scene);

struct PolicySpec {
    std::string name;
    PolicyFactory factory;
};

struct BenchConfig {
    std::vector<SceneConfig> scenes;
    std::vector<PolicySpec> policies;
    /// Per-episode settings; its scene and pair_index are overridden per cell.
    EpisodeConfig episode;
    int parallelism = 1;
    /// Episode logs are written here as `{scene}_p{pair}_{policy}.jsonl` when set.
    std::optional<std::string> log_dir;
    std::optional<std::string> frames_dir;
};

struct CellResult {
    std::string scene;
    std::size_t pair_index = 0;
    std::string policy;
    std::optional<RunRecord> run;  // absent when aborted
    std::string abort_reason;
    std::string log_path;
};

struct BenchResult {
    BenchReport report;
    std::vector<CellResult> cells;  // scene-major, then pair, then policy

    std::size_t aborted_count() const;
};

BenchResult run_bench(const BenchConfig& config);

}  // namespace warenav
