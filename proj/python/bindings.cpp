#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "warenav/episodes.hpp"
#include "warenav/generator.hpp"
#include "warenav/scene_io.hpp"
#include "warenav/trajectory_svg.hpp"
#include "warenav/validate.hpp"

namespace py = pybind11;
using namespace warenav;

namespace {

py::dict run_dict(const RunRecord& r) {
    py::dict d;
    d["scene"] = r.scene;
    d["pair_index"] = r.pair_index;
    d["steps"] = r.steps;
    d["d_final"] = r.d_final;
    d["d_init"] = r.d_init;
    d["collisions"] = r.collisions;
    d["forwards"] = r.forwards;
    d["warnings"] = r.warnings;
    d["terminated_by"] = std::string(to_string(r.terminated_by));
    return d;
}

RunRecord run_from_dict(const py::dict& d) {
    RunRecord r;
    r.scene = d.contains("scene") ? d["scene"].cast<std::string>() : "";
    r.pair_index = d.contains("pair_index") ? d["pair_index"].cast<std::size_t>() : 0;
    r.steps = d["steps"].cast<int>();
    r.d_final = d["d_final"].cast<double>();
    r.d_init = d["d_init"].cast<double>();
    r.collisions = d["collisions"].cast<int>();
    r.forwards = d["forwards"].cast<int>();
    r.warnings = d["warnings"].cast<int>();
    r.check();
    return r;
}

PromptVariant variant_of(const std::string& name) {
    const auto v = prompt_variant_from_string(name);
    if (!v) throw py::value_error("unknown prompt variant '" + name + "'");
    return *v;
}

EpisodeConfig episode_config(const SceneConfig& scene, std::size_t pair, int max_steps, double delta,
                             int history_len, const std::string& variant) {
    EpisodeConfig cfg;
    cfg.scene = scene;
    cfg.pair_index = pair;
    cfg.max_steps = max_steps;
    cfg.delta = delta;
    cfg.history_len = history_len;
    cfg.variant = variant_of(variant);
    return cfg;
}

// Python callables receive the prompt text and return the raw reply.
class CallbackPolicy final : public Policy {
public:
    CallbackPolicy(std::string name, std::function<std::string(const std::string&)> fn)
        : name_(std::move(name)), fn_(std::move(fn)) {}
    std::string name() const override { return name_; }
    PolicyResponse respond(const PolicyInput& input) override {
        py::gil_scoped_acquire gil;
        return {fn_(input.prompt.text), 0.0, std::nullopt};
    }

private:
    std::string name_;
    std::function<std::string(const std::string&)> fn_;
};

}  // namespace

PYBIND11_MODULE(_warenav, m) {
    m.doc() = "Warehouse navigation simulator and agent evaluation harness";

    py::register_exception<SceneError>(m, "SceneError", PyExc_ValueError);
    py::register_exception<MetricError>(m, "MetricError", PyExc_ValueError);
    py::register_exception<ReplayDivergence>(m, "ReplayDivergence", PyExc_RuntimeError);
    py::register_exception<LogError>(m, "LogError", PyExc_RuntimeError);

    py::class_<SceneConfig>(m, "Scene")
        .def_static("from_json", &parse_scene, py::arg("text"))
        .def_static("load", &load_scene, py::arg("path"))
        .def_static(
            "generate",
            [](std::uint64_t seed, int pairs, int entities, double clutter) {
                GeneratorParams p;
                p.pair_count = pairs;
                p.entity_count = entities;
                p.clutter_density = clutter;
                check_params(p);
                return generate_scene(seed, p);
            },
            py::arg("seed"), py::arg("pairs") = 4, py::arg("entities") = 3, py::arg("clutter") = 0.15)
        .def("to_json", &serialize_scene)
        .def("save", &save_scene, py::arg("path"))
        .def("static", [](const SceneConfig& s) { return make_static(s); })
        .def("validate",
             [](const SceneConfig& s) {
                 std::vector<std::tuple<std::string, std::string, std::string>> out;
                 for (const auto& v : validate_scene(s)) out.emplace_back(v.subject, v.rule, v.message);
                 return out;
             })
        .def_property_readonly("name", [](const SceneConfig& s) { return s.name; })
        .def_property_readonly("width", [](const SceneConfig& s) { return s.map.width; })
        .def_property_readonly("height", [](const SceneConfig& s) { return s.map.height; })
        .def_property_readonly("pair_count", [](const SceneConfig& s) { return s.pairs.size(); })
        .def("__repr__", [](const SceneConfig& s) {
            return "<Scene " + s.name + " " + std::to_string(s.map.width) + "x" + std::to_string(s.map.height) + ", " +
                   std::to_string(s.pairs.size()) + " pairs>";
        });

    m.def("scripted_policies", &scripted_policy_names);

    m.def(
        "run_episode",
        [](const SceneConfig& scene, std::size_t pair, const py::object& policy, int max_steps, double delta,
           int history_len, const std::string& variant, std::optional<std::string> log_path) {
            const EpisodeConfig cfg = episode_config(scene, pair, max_steps, delta, history_len, variant);
            std::unique_ptr<Policy> agent;
            if (py::isinstance<py::str>(policy))
                agent = make_scripted_policy(policy.cast<std::string>());
            else
                agent = std::make_unique<CallbackPolicy>(
                    py::hasattr(policy, "__name__") ? policy.attr("__name__").cast<std::string>() : "callback",
                    policy.cast<std::function<std::string(const std::string&)>>());
            EpisodeOptions opt;
            opt.log_path = std::move(log_path);
            EpisodeResult r;
            {
                py::gil_scoped_release release;
                r = run_episode(cfg, *agent, opt);
            }
            py::dict out = run_dict(r.run);
            out["success"] = r.success;
            out["aborted"] = r.aborted;
            out["actions"] = [&] {
                std::vector<std::string> a;
                for (const auto& s : r.log.steps) a.emplace_back(to_string(s.action));
                return a;
            }();
            return out;
        },
        py::arg("scene"), py::arg("pair") = 0, py::arg("policy") = "greedy", py::arg("max_steps") = 70,
        py::arg("delta") = kDefaultSuccessDelta, py::arg("history_len") = 10, py::arg("variant") = "odometry",
        py::arg("log_path") = py::none(),
        "Run one episode. `policy` is a scripted policy name or a callable mapping prompt text to a reply.");

    m.def(
        "replay",
        [](const std::string& log_path, const SceneConfig& scene) { return run_dict(replay(read_log(log_path), scene)); },
        py::arg("log_path"), py::arg("scene"));

    m.def(
        "metrics",
        [](const std::vector<py::dict>& runs, double delta) {
            std::vector<RunRecord> rs;
            for (const auto& d : runs) rs.push_back(run_from_dict(d));
            py::dict out;
            out["sr"] = compute_sr(rs, delta);
            out["dr"] = compute_dr(rs);
            out["as"] = compute_as(rs);
            out["cr"] = compute_cr(rs);
            out["wr"] = compute_wr(rs);
            return out;
        },
        py::arg("runs"), py::arg("delta") = kDefaultSuccessDelta);

    m.def(
        "bench",
        [](const std::vector<SceneConfig>& scenes, const std::vector<std::string>& policies, int parallelism,
           std::optional<std::string> log_dir) {
            BenchConfig bc;
            bc.scenes = scenes;
            for (const auto& name : policies) {
                make_scripted_policy(name);
                bc.policies.push_back({name, [name] { return make_scripted_policy(name); }});
            }
            bc.parallelism = parallelism;
            bc.log_dir = std::move(log_dir);
            BenchResult r;
            {
                py::gil_scoped_release release;
                r = run_bench(bc);
            }
            return py::make_tuple(format_report_csv(r.report), format_report_table(r.report), r.aborted_count());
        },
        py::arg("scenes"), py::arg("policies"), py::arg("parallelism") = 1, py::arg("log_dir") = py::none(),
        "Run scripted policies over every scene pair; returns (csv, table, aborted_count).");

    m.def(
        "initial_prompt",
        [](const SceneConfig& scene, std::size_t pair, const std::string& variant) {
            if (pair >= scene.pairs.size()) throw py::index_error("pair index out of range");
            PromptContext ctx;
            ctx.map = scene.map;
            return build_prompt(initial_state(scene, pair), HistoryWindow{}, variant_of(variant), kAllActions, ctx)
                .text;
        },
        py::arg("scene"), py::arg("pair") = 0, py::arg("variant") = "odometry");

    m.def(
        "parse_decision",
        [](const std::string& raw) {
            const AgentDecision d = parse_decision(raw, Action::TurnRight);
            return py::make_tuple(std::string(to_string(d.action)), std::string(to_string(d.status)), d.reasoning);
        },
        py::arg("raw"), "Returns (action, status, reasoning); unparseable replies fall back to turn_right.");

    m.def(
        "render_trajectory",
        [](const std::string& log_path, const SceneConfig& scene) {
            return render_trajectory_svg(read_log(log_path), scene);
        },
        py::arg("log_path"), py::arg("scene"));
}
