"""Python bindings for the warenav simulator and evaluation harness."""

from ._warenav import (
    LogError,
    MetricError,
    ReplayDivergence,
    Scene,
    SceneError,
    bench,
    initial_prompt,
    metrics,
    parse_decision,
    render_trajectory,
    replay,
    run_episode,
    scripted_policies,
)

__all__ = [
    "LogError",
    "MetricError",
    "ReplayDivergence",
    "Scene",
    "SceneError",
    "bench",
    "initial_prompt",
    "metrics",
    "parse_decision",
    "render_trajectory",
    "replay",
    "run_episode",
    "scripted_policies",
]
