"""Constructive uniformization of quasiconformal trees."""

import json

from . import _core
from ._core import TreeunifError, dimension_upper_bound, hausdorff_L

__all__ = ["TreeunifError", "dimension_upper_bound", "generate_tree", "hausdorff_L", "run"]


def generate_tree(spec):
    """Tree JSON for a generator spec, as a dict."""
    return json.loads(_core.generate_tree(spec))


def run(generate="", input="", **kwargs):
    """Runs the pipeline. Reports, decomposition and skeleton come back parsed."""
    res = _core.run(generate=generate, input=input, **kwargs)
    for key in ("reports", "decomposition", "skeleton"):
        if res[key]:
            res[key] = json.loads(res[key])
    return res
