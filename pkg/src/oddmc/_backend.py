"""Kernel backend selection.

The compiled extension is preferred when it imports cleanly; otherwise
the pure-Python twin takes over.  ``ODDMC_BACKEND=python`` forces the
fallback (useful for benchmarking and debugging); ``ODDMC_BACKEND=cython``
makes a missing extension an error instead of a silent fallback.
"""

from __future__ import annotations

import os

_forced = os.environ.get("ODDMC_BACKEND", "").strip().lower()

if _forced == "python":
    from . import _kernels_py as _impl
elif _forced == "cython":
    from . import _kernels as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as _impl  # type: ignore[no-redef]

BACKEND_NAME: str = _impl.BACKEND_NAME

intersect = _impl.intersect
difference = _impl.difference
determinize = _impl.determinize
shortest_accepted = _impl.shortest_accepted
count_paths = _impl.count_paths
