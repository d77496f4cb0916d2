"""Kernel backend selection.

The hot inner loops (Dijkstra sweeps and the transportation simplex that
every curvature evaluation calls once per edge) live in the compiled
``_speedups`` extension with a pure-Python twin in ``_pykernels``. The
compiled backend is picked at import when available; set
``RICCIFLOW_KERNELS=python`` (or ``cython``) to force a choice. Both
backends expose the same functions and produce matching results; see
``benchmarks/bench_backends.py`` for the speed comparison.
"""

from __future__ import annotations

import os

from . import _pykernels

_FORCED = os.environ.get("RICCIFLOW_KERNELS", "").strip().lower()

if _FORCED == "python":
    _impl = _pykernels
elif _FORCED == "cython":
    from . import _speedups as _impl  # hard import error if forced but missing
else:
    try:
        from . import _speedups as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND

sssp = _impl.sssp
apsp = _impl.apsp
solve_transport = _impl.solve_transport
star_kappa_batch = _impl.star_kappa_batch
ollivier_kappa_batch = _impl.ollivier_kappa_batch


def get_backend(name: str):
    """Return a backend module by name ("python" or "cython")."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _speedups

        return _speedups
    raise ValueError(f"unknown kernel backend {name!r}")
