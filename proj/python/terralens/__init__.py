"""Hammer-projection maps, study stimuli and analysis for immersive map studies."""

import json as _json

from . import _terralens
from ._terralens import (
    Error,
    GenerationExhausted,
    OutputError,
    ParseError,
    accuracy_score,
    embed,
    friedman,
    great_circle_distance,
    hammer_forward,
    hammer_inverse,
    mean_ci,
    morph,
    morph_svg,
    render_svg,
    rotate,
    tissot,
)

__all__ = [
    "Error", "GenerationExhausted", "OutputError", "ParseError",
    "accuracy_score", "analyze", "embed", "friedman", "generate", "golden",
    "great_circle_distance", "hammer_forward", "hammer_inverse", "mean_ci",
    "morph", "morph_svg", "render_svg", "rotate", "scene", "session", "tissot",
]


def scene(kind, rotation=(0.0, 0.0, 0.0)):
    return _json.loads(_terralens.scene_json(kind, tuple(rotation)))


def generate(family, difficulty, count=1, seed=0, coastlines=None):
    return _json.loads(_terralens.generate_json(family, difficulty, count, seed, coastlines))


def session(participant, seed=0):
    return _json.loads(_terralens.session_json(participant, seed))


def golden(rotations=((0, 0, 0), (30, -20, 10), (0, 90, 0), (-120, 45, -30))):
    return _json.loads(_terralens.golden_json([tuple(r) for r in rotations]))


def analyze(responses, logs=None):
    """Returns (summary dict, text table) for a responses CSV."""
    summary, table = _terralens.analyze_json(str(responses), None if logs is None else str(logs))
    return _json.loads(summary), table
