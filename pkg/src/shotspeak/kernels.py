"""Geometry kernel backend selection.

Prefers the compiled Cython extension; falls back to the numpy
implementation when the extension was not built, or when
``SHOTSPEAK_PURE_PYTHON`` is set in the environment. Both expose identical
functions, so callers import from this module only.
"""

from __future__ import annotations

import os

if os.environ.get("SHOTSPEAK_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not compiled on this install
        from . import _kernels_py as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND

count_in_triangle = _impl.count_in_triangle
count_on_segment = _impl.count_on_segment
count_within = _impl.count_within
min_distance = _impl.min_distance


def available_backends() -> dict[str, object]:
    """All importable kernel modules keyed by backend name (for tests/benchmarks)."""
    from . import _kernels_py

    backends: dict[str, object] = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        backends["compiled"] = _kernels
    except ImportError:
        pass
    return backends
