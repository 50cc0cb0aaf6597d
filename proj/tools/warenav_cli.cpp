#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>

#include "warenav/episodes.hpp"
#include "warenav/generator.hpp"
#include "warenav/scene_io.hpp"
#include "warenav/trajectory_svg.hpp"
#include "warenav/validate.hpp"

namespace fs = std::filesystem;
using namespace warenav;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInvalidScene = 2, kAborted = 3, kDivergence = 4 };

struct ExitError : std::runtime_error {
    ExitError(int code, const std::string& msg) : std::runtime_error(msg), code(code) {}
    int code;
};

struct Options {
    // scenes and matrix
    std::vector<std::string> scenes;
    std::size_t pair = 0;
    std::string policy = "greedy";
    std::vector<std::string> policies{"greedy"};
    int generate = 0;
    std::int64_t seed = 0;
    int parallel = 1;
    std::string out = "runs";

    // episode settings
    int max_steps = 70;
    double delta = kDefaultSuccessDelta;
    int history_len = 10;
    int agent_radius = kDefaultAgentRadius;
    bool no_history = false;
    bool with_topdown = false;
    bool make_static = false;
    bool save_frames = false;
    SensorConfig sensors;

    // model endpoint
    ModelEndpointConfig endpoint;
    int max_in_flight = 4;

    // generator
    GeneratorParams gen;

    // report / render-traj / validate
    std::vector<std::string> logs;
    std::string log;
    std::string scene;
    std::string csv;
    std::string file_out;  // gen-scene / render-traj target
};

void add_episode_flags(CLI::App& cmd, Options& o) {
    cmd.add_option("--max-steps", o.max_steps, "Step cap per episode")->check(CLI::PositiveNumber);
    cmd.add_option("--delta", o.delta, "Success threshold in px")->check(CLI::PositiveNumber);
    cmd.add_option("--history-len", o.history_len, "History window length")->check(CLI::NonNegativeNumber);
    cmd.add_option("--agent-radius", o.agent_radius, "Agent disc radius in px")->check(CLI::PositiveNumber);
    cmd.add_flag("--no-history", o.no_history, "Omit the movement history from prompts");
    cmd.add_flag("--with-topdown", o.with_topdown, "Attach the top-down map to prompts");
    cmd.add_flag("--static", o.make_static, "Freeze every dynamic entity (speed 0)");
    cmd.add_flag("--save-frames", o.save_frames, "Write ego and top-down PPM frames per step");
    cmd.add_option("--fov", o.sensors.fov, "Depth sensor field of view in degrees");
    cmd.add_option("--rays", o.sensors.n_rays, "Depth rays per observation")->check(CLI::PositiveNumber);
    cmd.add_option("--warn-threshold", o.sensors.warning.threshold_m, "Warning distance in meters");
    cmd.add_option("--roi-half-angle", o.sensors.warning.roi_half_angle, "Warning ROI half-angle in degrees");
    cmd.add_option("--roi-range", o.sensors.warning.roi_range_limit, "Warning ROI range limit in px");
    cmd.add_option("--base-url", o.endpoint.base_url, "Chat-completion endpoint base URL");
    cmd.add_option("--api-key-env", o.endpoint.api_key_env, "Environment variable holding the API key");
    cmd.add_option("--timeout", o.endpoint.timeout_s, "Request timeout in seconds")->check(CLI::PositiveNumber);
    cmd.add_option("--retries", o.endpoint.max_retries, "Retries per request")->check(CLI::NonNegativeNumber);
    cmd.add_option("--temperature", o.endpoint.temperature, "Sampling temperature");
    cmd.add_option("--max-in-flight", o.max_in_flight, "Concurrent model requests")->check(CLI::PositiveNumber);
    cmd.add_option("--seed", o.seed, "Episode seed; also the first generated scene seed");
}

void add_generator_flags(CLI::App& cmd, Options& o) {
    cmd.add_option("--shelf-rows", o.gen.shelf_rows, "Shelf rows");
    cmd.add_option("--aisles", o.gen.aisle_count, "Cross-aisles per shelf row");
    cmd.add_option("--clutter", o.gen.clutter_density, "Clutter density in [0, 1]");
    cmd.add_option("--entities", o.gen.entity_count, "Dynamic entity count");
    cmd.add_option("--pairs", o.gen.pair_count, "Start-target pairs per scene");
}

EpisodeConfig episode_settings(const Options& o) {
    EpisodeConfig cfg;
    cfg.max_steps = o.max_steps;
    cfg.delta = o.delta;
    cfg.history_len = o.history_len;
    cfg.agent_radius = o.agent_radius;
    cfg.variant = o.no_history ? PromptVariant::NoHistory
                               : (o.with_topdown ? PromptVariant::OdometryTopDown : PromptVariant::Odometry);
    cfg.seed = o.seed;
    cfg.sensors = o.sensors;
    return cfg;
}

SceneConfig load_checked(const std::string& path, const Options& o) {
    SceneConfig scene;
    try {
        scene = load_scene(path);
    } catch (const SceneError& e) {
        throw ExitError(kInvalidScene, fmt::format("{}: {}", path, e.what()));
    } catch (const std::exception& e) {
        throw ExitError(kInvalidScene, fmt::format("{}: {}", path, e.what()));
    }
    const auto violations = validate_scene(scene, {o.delta, o.agent_radius});
    if (!violations.empty()) {
        std::string msg = fmt::format("{}: scene fails validation", path);
        for (const auto& v : violations) msg += fmt::format("\n  {} [{}] {}", v.subject, v.rule, v.message);
        throw ExitError(kInvalidScene, msg);
    }
    return o.make_static ? make_static(std::move(scene)) : scene;
}

std::vector<SceneConfig> collect_scenes(const Options& o) {
    std::vector<SceneConfig> scenes;
    for (const auto& path : o.scenes) scenes.push_back(load_checked(path, o));
    GeneratorParams params = o.gen;
    params.agent_radius = o.agent_radius;
    params.delta = o.delta;
    for (int i = 0; i < o.generate; ++i) {
        auto scene = generate_scene(static_cast<std::uint64_t>(o.seed + i), params);
        scenes.push_back(o.make_static ? make_static(std::move(scene)) : std::move(scene));
    }
    if (scenes.empty()) throw ExitError(kFailure, "no scenes given (use --scene or --generate)");
    return scenes;
}

PolicySpec policy_spec(const std::string& name, const Options& o,
                       std::map<std::string, std::shared_ptr<ModelClient>>& clients) {
    constexpr std::string_view kModelPrefix = "model:";
    if (name.rfind(kModelPrefix, 0) == 0) {
        ModelEndpointConfig endpoint = o.endpoint;
        endpoint.model_id = name.substr(kModelPrefix.size());
        auto& client = clients[endpoint.model_id];
        if (!client) client = std::make_shared<ModelClient>(endpoint, static_cast<std::size_t>(o.max_in_flight));
        return {endpoint.model_id, [client] { return std::make_unique<ModelPolicy>(client); }};
    }
    make_scripted_policy(name);  // rejects unknown names up front
    return {name, [name] { return make_scripted_policy(name); }};
}

std::string utc_now() {
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                    std::chrono::system_clock::now())));
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    out << text;
}

void write_run_meta(const fs::path& dir, const std::string& command, const std::string& started,
                    const std::vector<std::string>& argv) {
    nlohmann::json meta{{"command", command}, {"argv", argv}, {"started_utc", started}, {"finished_utc", utc_now()}};
    write_text(dir / "run_meta.json", meta.dump(2) + "\n");
}

std::string summary_line(const EpisodeResult& r, const std::string& policy) {
    const auto& run = r.run;
    return fmt::format(
        "scene={} pair={} policy={} T={} d_final={:.2f} D_init={:.2f} C={} F={} W={} success={} terminated_by={}",
        run.scene, run.pair_index, policy, run.steps, run.d_final, run.d_init, run.collisions, run.forwards,
        run.warnings, r.success, to_string(run.terminated_by));
}

int cmd_run(const Options& o, const std::vector<std::string>& argv) {
    const auto started = utc_now();
    if (o.scenes.size() != 1) throw ExitError(kFailure, "run takes exactly one --scene");
    EpisodeConfig cfg = episode_settings(o);
    cfg.scene = load_checked(o.scenes.front(), o);
    cfg.pair_index = o.pair;
    if (o.pair >= cfg.scene.pairs.size())
        throw ExitError(kFailure, fmt::format("--pair {} out of range ({} pairs)", o.pair, cfg.scene.pairs.size()));

    std::map<std::string, std::shared_ptr<ModelClient>> clients;
    const PolicySpec spec = policy_spec(o.policy, o, clients);
    auto policy = spec.factory();

    fs::create_directories(o.out);
    std::string id = fmt::format("{}_p{}_{}", cfg.scene.name, o.pair, spec.name);
    for (auto& c : id)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
    EpisodeOptions options;
    options.episode_id = id;
    options.log_path = (fs::path(o.out) / (id + ".jsonl")).string();
    if (o.save_frames) options.frames_dir = (fs::path(o.out) / "frames").string();

    const EpisodeResult result = run_episode(cfg, *policy, options);
    std::cout << summary_line(result, spec.name) << "\n";
    write_run_meta(o.out, "run", started, argv);
    if (result.aborted) {
        spdlog::error("episode aborted: {}", result.abort_reason);
        return kAborted;
    }
    return kOk;
}

int cmd_bench(const Options& o, const std::vector<std::string>& argv) {
    const auto started = utc_now();
    BenchConfig bench;
    bench.scenes = collect_scenes(o);
    std::map<std::string, std::shared_ptr<ModelClient>> clients;
    for (const auto& name : o.policies) bench.policies.push_back(policy_spec(name, o, clients));
    bench.episode = episode_settings(o);
    bench.parallelism = o.parallel;
    bench.log_dir = (fs::path(o.out) / "logs").string();
    if (o.save_frames) bench.frames_dir = (fs::path(o.out) / "frames").string();

    const BenchResult result = run_bench(bench);
    const std::string table = format_report_table(result.report);
    write_text(fs::path(o.out) / "report.txt", table);
    write_text(fs::path(o.out) / "report.csv", format_report_csv(result.report));
    write_run_meta(o.out, "bench", started, argv);
    std::cout << table;
    for (const auto& cell : result.cells)
        if (!cell.run)
            spdlog::error("aborted: {} pair {} {}: {}", cell.scene, cell.pair_index, cell.policy, cell.abort_reason);
    return result.aborted_count() > 0 ? kAborted : kOk;
}

int cmd_report(const Options& o) {
    std::vector<std::string> files;
    for (const auto& p : o.logs) {
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.path().extension() == ".jsonl") files.push_back(entry.path().string());
        } else {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ExitError(kFailure, "no episode logs found");

    std::vector<ModelRuns> models;
    std::optional<double> delta;
    std::size_t aborted = 0;
    for (const auto& f : files) {
        const EpisodeLog log = read_log(f);
        if (delta && *delta != log.header.delta)
            throw ExitError(kFailure, fmt::format("{}: delta {} differs from {}", f, log.header.delta, *delta));
        delta = log.header.delta;
        auto it = std::find_if(models.begin(), models.end(),
                               [&](const ModelRuns& m) { return m.model == log.header.policy; });
        if (it == models.end()) {
            models.push_back({log.header.policy, {}, 0});
            it = std::prev(models.end());
        }
        ++it->attempted;
        if (log.header.aborted) {
            ++aborted;
            continue;
        }
        it->runs.push_back(summarize_log(log));
    }
    const BenchReport report = aggregate_completed(models, *delta);
    std::cout << format_report_table(report);
    if (!o.csv.empty()) write_text(o.csv, format_report_csv(report));
    return aborted > 0 ? kAborted : kOk;
}

int cmd_render_traj(const Options& o) {
    SceneConfig scene;
    try {
        scene = load_scene(o.scene);
    } catch (const std::exception& e) {
        throw ExitError(kInvalidScene, fmt::format("{}: {}", o.scene, e.what()));
    }
    const EpisodeLog log = read_log(o.log);
    RunRecord run;
    try {
        run = replay(log, scene);
    } catch (const ReplayDivergence& e) {
        throw ExitError(kDivergence, e.what());
    } catch (const std::invalid_argument& e) {
        throw ExitError(kDivergence, e.what());
    }
    const std::string out = o.file_out.empty() ? fs::path(o.log).replace_extension(".svg").string() : o.file_out;
    write_text(out, render_trajectory_svg(log, scene));
    std::cout << fmt::format("{}: {} steps, {} collisions, {} warnings\n", out, run.steps, run.collisions, run.warnings);
    return kOk;
}

int cmd_gen_scene(const Options& o) {
    GeneratorParams params = o.gen;
    params.agent_radius = o.agent_radius;
    params.delta = o.delta;
    try {
        check_params(params);
    } catch (const std::invalid_argument& e) {
        throw ExitError(kFailure, e.what());
    }
    const SceneConfig scene = generate_scene(static_cast<std::uint64_t>(o.seed), params);
    if (o.file_out.empty() || o.file_out == "-")
        std::cout << serialize_scene(scene);
    else
        save_scene(scene, o.file_out);
    return kOk;
}

int cmd_validate(const Options& o) {
    int status = kOk;
    for (const auto& path : o.scenes) {
        SceneConfig scene;
        try {
            scene = load_scene(path);
        } catch (const std::exception& e) {
            std::cout << fmt::format("{}: {}\n", path, e.what());
            status = kInvalidScene;
            continue;
        }
        const auto violations = validate_scene(scene, {o.delta, o.agent_radius});
        if (violations.empty()) {
            std::cout << fmt::format("{}: ok\n", path);
            continue;
        }
        status = kInvalidScene;
        for (const auto& v : violations) std::cout << fmt::format("{}: {} [{}] {}\n", path, v.subject, v.rule, v.message);
    }
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Warehouse navigation simulator and agent evaluation harness", "warenav"};
    app.set_config("--config", "", "TOML/INI file with option defaults; flags take precedence");
    app.require_subcommand(1);
    Options o;

    auto* run = app.add_subcommand("run", "Run one episode");
    run->add_option("--scene", o.scenes, "Scene file")->required()->expected(1);
    run->add_option("--pair", o.pair, "Start-target pair index");
    run->add_option("--policy", o.policy, "greedy | oracle | always-forward | always-stop | model:<id>");
    run->add_option("--out", o.out, "Output directory")->capture_default_str();
    add_episode_flags(*run, o);

    auto* bench = app.add_subcommand("bench", "Run a scenes x pairs x policies matrix");
    bench->add_option("--scene", o.scenes, "Scene files");
    bench->add_option("--generate", o.generate, "Also generate N scenes with seeds seed..seed+N-1")
        ->check(CLI::NonNegativeNumber);
    bench->add_option("--policy", o.policies, "Policies to compare")->capture_default_str();
    bench->add_option("--parallel", o.parallel, "Concurrent episodes")->check(CLI::PositiveNumber);
    bench->add_option("--out", o.out, "Output directory")->capture_default_str();
    add_episode_flags(*bench, o);
    add_generator_flags(*bench, o);

    auto* report = app.add_subcommand("report", "Aggregate metrics from episode logs");
    report->add_option("logs", o.logs, "Log files or directories")->required();
    report->add_option("--csv", o.csv, "Also write the CSV report here");

    auto* traj = app.add_subcommand("render-traj", "Draw a logged trajectory as SVG");
    traj->add_option("--log", o.log, "Episode log")->required();
    traj->add_option("--scene", o.scene, "Scene the log was recorded on")->required();
    traj->add_option("--out", o.file_out, "SVG path (default: next to the log)");

    auto* gen = app.add_subcommand("gen-scene", "Generate a warehouse scene");
    gen->add_option("--seed", o.seed, "Generator seed");
    gen->add_option("--out", o.file_out, "Scene path (default: stdout)");
    gen->add_option("--agent-radius", o.agent_radius, "Agent radius used for clearance");
    add_generator_flags(*gen, o);

    auto* val = app.add_subcommand("validate", "Check scene files");
    val->add_option("scenes", o.scenes, "Scene files")->required();
    val->add_option("--delta", o.delta, "Success threshold in px");
    val->add_option("--agent-radius", o.agent_radius, "Agent radius in px");

    CLI11_PARSE(app, argc, argv);
    const std::vector<std::string> args(argv, argv + argc);
    try {
        if (*run) return cmd_run(o, args);
        if (*bench) return cmd_bench(o, args);
        if (*report) return cmd_report(o);
        if (*traj) return cmd_render_traj(o);
        if (*gen) return cmd_gen_scene(o);
        if (*val) return cmd_validate(o);
    } catch (const ExitError& e) {
        spdlog::error("{}", e.what());
        return e.code;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kFailure;
    }
    return kFailure;
}
