// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "warenav/episodes.hpp"
#include "warenav/sensors.hpp"
#include "warenav/validate.hpp"

using namespace warenav;
using namespace warenav::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void expect(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

struct Criterion {
    int id;
    std::string title;
    double budget_s;
    std::function<Outcome()> body;
};

// Scenes shared by criteria 6 and 7: seeds 1..20 at default generator settings.
const std::vector<SceneConfig>& bench_scenes() {
    static const std::vector<SceneConfig> scenes = [] {
        std::vector<SceneConfig> out;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) out.push_back(generate_scene(seed));
        return out;
    }();
    return scenes;
}

std::vector<RunRecord> run_all_pairs(const std::vector<SceneConfig>& scenes, const std::string& policy) {
    std::vector<RunRecord> runs;
    for (const auto& scene : scenes)
        for (std::size_t p = 0; p < scene.pairs.size(); ++p) {
            EpisodeConfig cfg;
            cfg.scene = scene;
            cfg.pair_index = p;
            auto agent = make_scripted_policy(policy);
            runs.push_back(run_episode(cfg, *agent).run);
        }
    return runs;
}

Outcome dynamics_exactness() {
    Outcome o;
    const AgentPose at{100, 200, Heading::West, kDefaultAgentRadius};
    auto facing = [&](Heading h) {
        AgentPose p = at;
        p.theta = h;
        return p;
    };
    o.expect(forward_target(facing(Heading::West)) == Point{66, 200}, "θ=0 forward is not x-34");
    o.expect(forward_target(facing(Heading::North)) == Point{100, 166}, "θ=90 forward is not y-34");
    o.expect(forward_target(facing(Heading::East)) == Point{134, 200}, "θ=180 forward is not x+34");
    o.expect(forward_target(facing(Heading::South)) == Point{100, 234}, "θ=270 forward is not y+34");
    o.expect(apply_turn(facing(Heading::West), TurnDirection::Right).theta == Heading::North, "0 + 90 != 90");
    o.expect(apply_turn(facing(Heading::South), TurnDirection::Right).theta == Heading::West, "270 + 90 != 0");
    o.expect(apply_turn(facing(Heading::North), TurnDirection::Left).theta == Heading::West, "90 - 90 != 0");
    o.expect(apply_turn(facing(Heading::West), TurnDirection::Left).theta == Heading::South, "0 - 90 != 270");
    o.detail = o.pass ? "8/8 exact" : o.detail;
    return o;
}

Outcome metric_oracles() {
    Outcome o;
    auto run = [](int t, double d, double big_d, int c, int f, int w, std::size_t pair) {
        RunRecord r;
        r.scene = "fixture";
        r.pair_index = pair;
        r.steps = t;
        r.d_final = d;
        r.d_init = big_d;
        r.collisions = c;
        r.forwards = f;
        r.warnings = w;
        return r;
    };
    // Hand values at δ = 20: SR 2/4, DR (0.7 + 0.95 + 0.6 - 0.2)/4, AS 113/4,
    // CR (0.25 + 0 + 1 + 0)/4, WR (0.1 + 0 + 1 + 0)/4.
    const std::vector<RunRecord> runs{run(70, 30, 100, 2, 8, 7, 0), run(12, 10, 200, 0, 0, 0, 1),
                                      run(30, 20, 50, 5, 5, 30, 2), run(1, 120, 100, 0, 1, 0, 3)};
    const std::vector<ModelRuns> models{{"fixture", runs, 0}};
    const ReportRow row = aggregate_report(models, 20).rows.front();
    o.expect(std::abs(row.sr - 0.5) < 1e-9, fmt::format("SR {}", row.sr));
    o.expect(std::abs(row.dr - 0.5125) < 1e-9, fmt::format("DR {}", row.dr));
    o.expect(std::abs(row.as - 28.25) < 1e-9, fmt::format("AS {}", row.as));
    o.expect(std::abs(row.cr - 0.3125) < 1e-9, fmt::format("CR {}", row.cr));
    o.expect(std::abs(row.wr - 0.275) < 1e-9, fmt::format("WR {}", row.wr));
    o.expect(compute_cr(std::vector{run(9, 5, 50, 0, 0, 3, 0)}) == 0.0, "F=0 term is not 0");
    o.expect(compute_wr(std::vector{run(9, 5, 50, 0, 0, 0, 0)}) == 0.0, "W=0 term is not 0");
    o.expect(compute_dr(std::vector{run(9, 50, 50, 0, 0, 0, 0)}) == 0.0, "d=D term is not 0");
    if (o.pass) o.detail = "fixture within 1e-9; F=0, W=0, d=D covered";
    return o;
}

Outcome collision_semantics() {
    Outcome o;
    SceneConfig s = with_pair(empty_scene(), {100, 200}, Heading::East, {600, 200});
    s.obstacles.push_back(box("shelf", 170, 100, 220, 300));
    EpisodeConfig cfg;
    cfg.scene = s;
    cfg.max_steps = 10;
    ScriptedPolicy push("push", {}, Action::Forward);
    const EpisodeResult r = run_episode(cfg, push);
    o.expect(r.log.steps[0].pose_after.x == 134 && !r.log.steps[0].collided, "first forward should move");
    for (std::size_t i = 1; i < r.log.steps.size(); ++i) {
        const auto& st = r.log.steps[i];
        o.expect(st.collided && st.pose_after == st.pose_before, fmt::format("step {} moved into the shelf", i));
    }
    o.expect(r.run.collisions == 9, fmt::format("C = {}, expected 9", r.run.collisions));
    const RunRecord back = replay(decode_log(encode_log(r.log)), s);
    o.expect(back.collisions == r.run.collisions, "replayed C differs");
    if (o.pass) o.detail = "C = 9 live and replayed; pose unchanged on every blocked forward";
    return o;
}

Outcome warning_detector() {
    Outcome o;
    auto corridor = [](int wall_x) {
        SceneConfig s = empty_scene();
        s.obstacles.push_back(box("n", 0, 220, 1024, 230, ObstacleKind::Wall));
        s.obstacles.push_back(box("s", 0, 270, 1024, 280, ObstacleKind::Wall));
        s.obstacles.push_back(box("end", wall_x, 230, wall_x + 10, 270, ObstacleKind::Wall));
        return s;
    };
    const SceneConfig near = corridor(217);  // face 17 px = 0.5 m ahead
    const SceneConfig far = corridor(268);   // 68 px = 2.0 m
    o.expect(observe(state_at(near, {200, 250}, Heading::East), near, {}).warning, "0.5 m did not warn");
    o.expect(!observe(state_at(far, {200, 250}, Heading::East), far, {}).warning, "2.0 m warned");

    std::mt19937_64 rng(404);
    int checked = 0;
    for (std::uint64_t seed = 200; seed < 220; ++seed) {
        const SceneConfig s = generate_scene(seed);
        for (int k = 0; k < 5; ++k) {
            WorldState st;
            st.pose = random_free_pose(s, rng);
            st.entity_phases = s.initial_phases();
            const DepthProfile p = cast_depth(st, s, 90, 61);
            bool prev = false;
            for (double t = 0.05; t <= 6.0; t += 0.05) {
                WarningConfig w;
                w.threshold_m = t;
                const bool now = detect_warning(p, w, s.map.meters_per_pixel);
                o.expect(!prev || now, fmt::format("scene {} pose {}: warning drops at {} m", seed, k, t));
                prev = now;
                ++checked;
            }
        }
    }
    if (o.pass) o.detail = fmt::format("0.5 m warns, 2.0 m does not; {} threshold checks monotone", checked);
    return o;
}

Outcome depth_correctness() {
    Outcome o;
    std::mt19937_64 rng(505);
    int rays = 0;
    int misses = 0;
    double worst = 0;
    for (std::uint64_t seed = 300; seed < 305; ++seed) {
        const SceneConfig s = generate_scene(seed);
        const auto discs = s.entity_discs(s.initial_phases());
        for (int k = 0; k < 40; ++k) {
            WorldState st;
            st.pose = random_free_pose(s, rng);
            st.entity_phases = s.initial_phases();
            const Vec2 origin{double(st.pose.x), double(st.pose.y)};
            for (const auto& ray : cast_depth(st, s, 90, 61).rays) {
                const double t = march_ray(s, discs, origin, oracle_direction(st.pose.theta, ray.angle));
                const double err = std::fabs(t - ray.distance);
                worst = std::max(worst, err);
                misses += err > 0.5;
                ++rays;
            }
        }
    }
    o.expect(misses == 0, fmt::format("{} of {} rays off by more than 0.5 px (worst {:.3f})", misses, rays, worst));
    if (o.pass) o.detail = fmt::format("{} rays over 200 poses, worst error {:.3f} px", rays, worst);
    return o;
}

Outcome oracle_static() {
    Outcome o;
    std::vector<SceneConfig> scenes;
    for (const auto& s : bench_scenes()) {
        scenes.push_back(make_static(s));
        o.expect(validate_scene(scenes.back()).empty(), scenes.back().name + " fails validation");
    }
    const auto runs = run_all_pairs(scenes, "oracle");
    const double sr = compute_sr(runs, kDefaultSuccessDelta);
    const double cr = compute_cr(runs);
    int worst = 0;
    for (const auto& r : runs) worst = std::max(worst, r.steps);
    o.expect(sr == 1.0, fmt::format("SR {:.2f}%", 100 * sr));
    o.expect(cr == 0.0, fmt::format("CR {:.2f}%", 100 * cr));
    o.expect(worst <= 70, fmt::format("an episode took {} steps", worst));
    o.detail = fmt::format("{} episodes: SR {:.2f}%, CR {:.2f}%, max T {}", runs.size(), 100 * sr, 100 * cr, worst) +
               (o.pass ? "" : "; " + o.detail);
    return o;
}

Outcome dynamic_degradation() {
    Outcome o;
    const auto oracle = run_all_pairs(bench_scenes(), "oracle");
    const auto greedy = run_all_pairs(bench_scenes(), "greedy");
    const double sr_oracle = compute_sr(oracle, kDefaultSuccessDelta);
    const double sr_greedy = compute_sr(greedy, kDefaultSuccessDelta);
    o.expect(sr_oracle >= 0.8, "oracle SR below 80%");
    o.expect(sr_greedy < sr_oracle, "greedy SR not below oracle SR");
    const std::string numbers = fmt::format("{} episodes each: oracle SR {:.2f}%, greedy SR {:.2f}%", oracle.size(),
                                            100 * sr_oracle, 100 * sr_greedy);
    o.detail = o.pass ? numbers : o.detail + "; " + numbers;
    return o;
}

Outcome determinism() {
    Outcome o;
    BenchConfig bc;
    GeneratorParams gp;
    gp.pair_count = 3;
    for (std::uint64_t seed = 600; seed < 604; ++seed) bc.scenes.push_back(generate_scene(seed, gp));
    for (const auto& name : scripted_policy_names())
        bc.policies.push_back({name, [name] { return make_scripted_policy(name); }});
    std::string reference;
    int runs = 0;
    for (int parallelism : {1, 8})
        for (int rep = 0; rep < 3; ++rep) {
            bc.parallelism = parallelism;
            const std::string csv = format_report_csv(run_bench(bc).report);
            if (reference.empty()) reference = csv;
            o.expect(csv == reference, fmt::format("CSV differs at parallelism {} repetition {}", parallelism, rep));
            ++runs;
        }
    if (o.pass)
        o.detail = fmt::format("{} benches of {} cells, identical CSV", runs, bc.scenes.size() * 3 * bc.policies.size());
    return o;
}

Outcome protocol_fidelity() {
    Outcome o;
    const auto state = prompt_fixture_state();
    const auto history = prompt_fixture_history();
    const std::string text = build_prompt(state, history, PromptVariant::Odometry, kAllActions, {}).text;
    o.expect(text.find("- Headings: θ = 0° → West, 90° → North, 180° → East, 270° → South") != std::string::npos,
             "compass line missing");
    o.expect(text.find("ACTIONS & DYNAMICS (Step size Δ = 34 px)") != std::string::npos, "dynamics table missing");
    for (const char* row : {"x ← x - 34", "y ← y - 34", "x ← x + 34", "y ← y + 34"})
        o.expect(text.find(row) != std::string::npos, fmt::format("table row '{}' missing", row));

    std::istringstream in(text.substr(text.find("MOVEMENT HISTORY\n") + 17));
    int lines = 0;
    for (std::string line; std::getline(in, line) && !line.empty();) {
        o.expect(line == format_history_entry(history.entries()[lines]), "history line format");
        ++lines;
    }
    o.expect(lines == 10, fmt::format("history block has {} lines", lines));
    o.expect(format_history_entry({5, {100, 200}, Heading::North, Action::TurnLeft, 30.0, {130, 200}}) ==
                 "Step 5: Position (100, 200), θ = 90°, Action: turn left, Distance to target: 30, Target (130, 200)",
             "reference history line differs");

    std::ifstream golden(std::string(WARENAV_GOLDEN_DIR) + "/prompt_default.txt", std::ios::binary);
    std::ostringstream g;
    g << golden.rdbuf();
    o.expect(g.str() == text, "prompt differs from tests/golden/prompt_default.txt");

    for (auto v : {PromptVariant::NoHistory})
        o.expect(build_prompt(state, history, v, kAllActions, {}).text.find("MOVEMENT HISTORY") == std::string::npos,
                 "no-history variant carries a history block");
    if (o.pass) o.detail = "golden prompt matches; 10-line history; no-history variant omits the block";
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "dynamics exactness", 1, dynamics_exactness},
        {2, "metric oracles", 1, metric_oracles},
        {3, "collision semantics", 1, collision_semantics},
        {4, "warning detector", 10, warning_detector},
        {5, "depth correctness", 30, depth_correctness},
        {6, "oracle end-to-end, static", 60, oracle_static},
        {7, "dynamic degradation", 120, dynamic_degradation},
        {8, "determinism", 120, determinism},
        {9, "protocol fidelity", 1, protocol_fidelity},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.body();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = fmt::format("exception: {}", e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            out.pass = false;
            out.detail += fmt::format("; over the {:.0f} s budget", c.budget_s);
        }
        failed += !out.pass;
        std::cout << fmt::format("criterion {}: {} ({:.2f} s) {}: {}\n", c.id, out.pass ? "PASS" : "FAIL", secs, c.title,
                                 out.detail)
                  << std::flush;
    }
    return failed == 0 ? 0 : 1;
}
