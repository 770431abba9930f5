"""Hot kernels: compiled extension when built, pure Python otherwise.

Set ``FISENGINE_PURE=1`` in the environment to force the fallback.
"""
import os

from . import _pure

BACKEND = "pure"
if not os.environ.get("FISENGINE_PURE"):
    try:
        from . import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
else:
    _impl = _pure

bresenham = _impl.bresenham
moore_walk = _impl.moore_walk
longest_common_substring = _impl.longest_common_substring
douglas_peucker = _impl.douglas_peucker

NEIGHBOURS = _pure.NEIGHBOURS

__all__ = [
    "BACKEND",
    "NEIGHBOURS",
    "bresenham",
    "douglas_peucker",
    "longest_common_substring",
    "moore_walk",
]
