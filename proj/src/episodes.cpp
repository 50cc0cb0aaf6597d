#include "warenav/episodes.hpp"

#include <fmt/format.h>

#include <atomic>
#include <filesystem>
#include <thread>

#include "warenav/digest.hpp"
#include "warenav/scene_io.hpp"

namespace warenav {

namespace {

EpisodeHeader make_header(const EpisodeConfig& cfg, const std::string& policy, const WorldState& start) {
    const auto& pair = cfg.scene.pairs[cfg.pair_index];
    EpisodeHeader h;
    h.scene = cfg.scene.name;
    h.scene_digest = sha256_hex(serialize_scene(cfg.scene));
    h.pair_index = cfg.pair_index;
    h.start = pair.start;
    h.start_theta = pair.start_theta;
    h.target = pair.target;
    h.max_steps = cfg.max_steps;
    h.delta = cfg.delta;
    h.history_len = cfg.history_len;
    h.variant = cfg.variant;
    h.policy = policy;
    h.seed = cfg.seed;
    h.agent_radius = cfg.agent_radius;
    h.sensors = cfg.sensors;
    h.d_init = distance_to_target(start.pose, start.target);
    h.config_digest = config_digest(h);
    return h;
}

void save_frames(const EpisodeConfig& cfg, const WorldState& state, const std::string& dir, const std::string& id,
                 int step) {
    const std::filesystem::path base(dir);
    write_ppm(render_ego(state, cfg.scene, cfg.ego).raster, (base / fmt::format("{}_{}_ego.ppm", id, step)).string());
    write_ppm(render_topdown(state, cfg.scene).raster, (base / fmt::format("{}_{}_top.ppm", id, step)).string());
}

Termination termination_of(const EpisodeLog& log) {
    if (log.header.aborted) return Termination::Aborted;
    if (!log.steps.empty() && log.steps.back().action == Action::Stop) return Termination::StopAction;
    return Termination::StepCap;
}

}  // namespace

RunRecord summarize_log(const EpisodeLog& log) {
    RunRecord run;
    run.scene = log.header.scene;
    run.pair_index = log.header.pair_index;
    run.d_init = log.header.d_init;
    run.d_final = log.steps.empty() ? log.header.d_init : log.steps.back().distance_after;
    run.steps = static_cast<int>(log.steps.size());
    for (const auto& s : log.steps) {
        run.forwards += s.action == Action::Forward;
        run.collisions += s.collided;
        run.warnings += s.warning;
    }
    run.terminated_by = termination_of(log);
    run.check();
    return run;
}

namespace {

std::string sanitize(std::string s) {
    for (auto& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
    return s;
}

}  // namespace

void EpisodeConfig::check() const {
    if (pair_index >= scene.pairs.size())
        throw std::invalid_argument(fmt::format("pair index {} out of range ({} pairs)", pair_index, scene.pairs.size()));
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    if (!(delta > 0)) throw std::invalid_argument("delta must be > 0");
    if (history_len < 0) throw std::invalid_argument("history_len must be >= 0");
    if (allowed.empty()) throw std::invalid_argument("allowed action set is empty");
}

EpisodeResult run_episode(const EpisodeConfig& cfg, Policy& policy, const EpisodeOptions& options) {
    cfg.check();
    const auto& scene = cfg.scene;
    WorldState state = initial_state(scene, cfg.pair_index, cfg.agent_radius);
    Observation obs = observe(state, scene, cfg.sensors);
    HistoryWindow history(static_cast<std::size_t>(cfg.history_len));

    EpisodeResult result;
    auto& log = result.log;
    log.header = make_header(cfg, policy.name(), state);
    if (options.frames_dir) std::filesystem::create_directories(*options.frames_dir);

    const PromptContext context{cfg.delta, scene.map, policy.needs_images() ? &scene : nullptr, cfg.ego};
    for (int step = 0; step < cfg.max_steps; ++step) {
        const PromptBundle prompt = build_prompt(state, history, cfg.variant, cfg.allowed, context);
        if (options.frames_dir) save_frames(cfg, state, *options.frames_dir, options.episode_id, step);

        PolicyResponse response;
        try {
            response = policy.respond({state, scene, obs, prompt, cfg.delta, cfg.allowed});
        } catch (const ModelError& e) {
            log.header.aborted = true;
            log.header.abort_reason = fmt::format("step {}: {}", step, e.what());
            break;
        }
        const AgentDecision decision = parse_decision(response.raw, cfg.default_action, cfg.allowed);

        StepRecord rec;
        rec.step = step;
        rec.pose_before = state.pose;
        rec.action = decision.action;
        rec.parse_status = decision.status;
        rec.prompt_hash = sha256_hex(prompt.text);
        rec.raw_response = response.raw;
        rec.latency_ms = response.latency_ms;
        rec.exchange = std::move(response.exchange);

        if (decision.action == Action::Stop) {
            rec.pose_after = state.pose;
            rec.distance_after = distance_to_target(state.pose, state.target);
            rec.warning = obs.warning;
            log.steps.push_back(std::move(rec));
            break;
        }
        const StepOutcome outcome = step_world(state, decision.action, scene);
        state = outcome.state;
        obs = observe(state, scene, cfg.sensors);
        rec.pose_after = state.pose;
        rec.distance_after = distance_to_target(state.pose, state.target);
        rec.collided = outcome.collided;
        rec.entity_contact = outcome.entity_contact;
        rec.warning = obs.warning;
        history.push({step, state.pose.position(), state.pose.theta, decision.action, rec.distance_after, state.target});
        log.steps.push_back(std::move(rec));
    }

    result.run = summarize_log(log);
    result.aborted = log.header.aborted;
    result.abort_reason = log.header.abort_reason;
    result.success = !result.aborted && result.run.d_final <= cfg.delta;
    if (options.log_path) {
        write_log(log, *options.log_path);
        result.log_path = *options.log_path;
    }
    return result;
}

ReplayDivergence::ReplayDivergence(int step, const std::string& what)
    : std::runtime_error(fmt::format("replay diverged at step {}: {}", step, what)), step_(step) {}

RunRecord replay(const EpisodeLog& log, const SceneConfig& scene) {
    const auto& h = log.header;
    if (sha256_hex(serialize_scene(scene)) != h.scene_digest)
        throw std::invalid_argument(fmt::format("log was recorded against a different scene than '{}'", scene.name));
    if (config_digest(h) != h.config_digest) throw std::invalid_argument("log header does not match its config digest");
    if (h.pair_index >= scene.pairs.size()) throw std::invalid_argument("log pair index out of range");
    if (static_cast<int>(log.steps.size()) > h.max_steps)
        throw ReplayDivergence(h.max_steps, "log runs past the step cap");

    WorldState state = initial_state(scene, h.pair_index, h.agent_radius);
    Observation obs = observe(state, scene, h.sensors);
    for (std::size_t i = 0; i < log.steps.size(); ++i) {
        const auto& rec = log.steps[i];
        const int step = static_cast<int>(i);
        auto diverge = [&](std::string_view field) {
            throw ReplayDivergence(step, fmt::format("logged {} does not match re-execution", field));
        };
        if (rec.step != step) diverge("step index");
        if (rec.pose_before != state.pose) diverge("pose_before");

        bool collided = false;
        bool contact = false;
        if (rec.action == Action::Stop) {
            if (i + 1 != log.steps.size()) diverge("stop followed by further steps");
        } else {
            const StepOutcome outcome = step_world(state, rec.action, scene);
            state = outcome.state;
            obs = observe(state, scene, h.sensors);
            collided = outcome.collided;
            contact = outcome.entity_contact;
        }
        if (rec.pose_after != state.pose) diverge("pose_after");
        if (rec.distance_after != distance_to_target(state.pose, state.target)) diverge("distance_after");
        if (rec.collided != collided) diverge("collided");
        if (rec.entity_contact != contact) diverge("entity_contact");
        if (rec.warning != obs.warning) diverge("warning");
    }
    if (!h.aborted && static_cast<int>(log.steps.size()) < h.max_steps &&
        (log.steps.empty() || log.steps.back().action != Action::Stop))
        throw ReplayDivergence(static_cast<int>(log.steps.size()), "log ends before stop or the step cap");
    return summarize_log(log);
}

std::size_t BenchResult::aborted_count() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return !c.run; }));
}

BenchResult run_bench(const BenchConfig& config) {
    struct Job {
        std::size_t scene;
        std::size_t pair;
        std::size_t policy;
    };
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < config.scenes.size(); ++s)
        for (std::size_t p = 0; p < config.scenes[s].pairs.size(); ++p)
            for (std::size_t k = 0; k < config.policies.size(); ++k) jobs.push_back({s, p, k});

    if (config.log_dir) std::filesystem::create_directories(*config.log_dir);
    BenchResult result;
    result.cells.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const Job& job = jobs[i];
            const auto& spec = config.policies[job.policy];
            CellResult& cell = result.cells[i];
            cell.scene = config.scenes[job.scene].name;
            cell.pair_index = job.pair;
            cell.policy = spec.name;
            try {
                EpisodeConfig ep = config.episode;
                ep.scene = config.scenes[job.scene];
                ep.pair_index = job.pair;
                const std::string id = sanitize(fmt::format("{}_p{}_{}", cell.scene, job.pair, spec.name));
                EpisodeOptions options;
                options.episode_id = id;
                options.frames_dir = config.frames_dir;
                if (config.log_dir) options.log_path = (std::filesystem::path(*config.log_dir) / (id + ".jsonl")).string();
                auto policy = spec.factory();
                EpisodeResult r = run_episode(ep, *policy, options);
                cell.log_path = r.log_path;
                if (r.aborted)
                    cell.abort_reason = r.abort_reason;
                else
                    cell.run = r.run;
            } catch (const std::exception& e) {
                cell.abort_reason = e.what();
            }
        }
    };
    const auto n_threads = static_cast<std::size_t>(std::max(1, config.parallelism));
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < std::min(n_threads, jobs.size()); ++t) pool.emplace_back(worker);
    worker();
    pool.clear();

    std::vector<ModelRuns> per_policy(config.policies.size());
    for (std::size_t k = 0; k < config.policies.size(); ++k) per_policy[k].model = config.policies[k].name;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        auto& m = per_policy[jobs[i].policy];
        ++m.attempted;
        if (result.cells[i].run) m.runs.push_back(*result.cells[i].run);
    }
    result.report = aggregate_completed(per_policy, config.episode.delta);
    return result;
}

}  // namespace warenav
