"""Kernel backend selection.

The compiled Cython extension `_core` is preferred; the numpy fallback
implements identical contracts.  Set HYPCENSUS_BACKEND=python to force
the fallback (used by the benchmark and the cross-backend tests).
"""

import os

from . import pyfallback

_forced = os.environ.get("HYPCENSUS_BACKEND", "").lower()

if _forced == "python":
    _impl = pyfallback
    BACKEND = "python"
else:
    try:
        from . import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        if _forced == "compiled":
            raise
        _impl = pyfallback
        BACKEND = "python"

DedupAmbiguity = pyfallback.DedupAmbiguity if _impl is pyfallback else _impl.DedupAmbiguity

ball_bfs = _impl.ball_bfs
eval_words = _impl.eval_words
necklaces = _impl.necklaces
orbit_histogram = _impl.orbit_histogram
free_ball_angles = _impl.free_ball_angles
axis_crossings = _impl.axis_crossings

__all__ = [
    "BACKEND", "DedupAmbiguity", "ball_bfs", "eval_words", "necklaces",
    "orbit_histogram", "free_ball_angles", "axis_crossings",
]
