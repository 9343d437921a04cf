"""Backend selection for the oracle's hot loops.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
numpy versions in ``_kernels_py`` are used.  Setting the environment variable
``ROUNDCONE_PURE_PYTHON=1`` forces the fallback.  Both backends share the
calling convention below, so callers never see which one is active.
"""

import os
from types import ModuleType

import numpy as np

from . import _kernels_py

compiled: ModuleType | None
try:
    if os.environ.get("ROUNDCONE_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("compiled kernels disabled by ROUNDCONE_PURE_PYTHON")
    from . import _ckernels as compiled
except ImportError:
    compiled = None

python = _kernels_py
BACKEND = "cython" if compiled is not None else "python"
_active = compiled if compiled is not None else python


def _rows(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def projected_stats(D, B, axis_unit, backend=None):
    """Project each row of ``D`` onto the row space of orthonormal ``B``.

    Returns ``(dots, norms, perps)``: the component of the projection along the
    unit coefficient vector ``axis_unit``, its norm, and the norm of the part
    orthogonal to ``axis_unit``.  The projected angle is ``atan2(perps, dots)``.
    """
    D, B, axis_unit = _rows(D), _rows(B), _rows(axis_unit)
    m = D.shape[0]
    dots, norms, perps = np.empty(m), np.empty(m), np.empty(m)
    if B.shape[0] == 0:
        dots[:] = 0.0
        norms[:] = 0.0
        perps[:] = 0.0
        return dots, norms, perps
    (backend or _active).projected_stats(D, B, axis_unit, dots, norms, perps)
    return dots, norms, perps


def cone_margins(D, axis, cos_phi, backend=None):
    """Normalized slack ``(<d,v> - cos(phi)|d||v|) / (|d||v| + 1)`` per row."""
    D, axis = _rows(D), _rows(axis)
    out = np.empty(D.shape[0])
    (backend or _active).cone_margins(D, axis, float(cos_phi), out)
    return out


def cap_directions(G, vhat, cos_t, sin_t, backend=None):
    """Map Gaussian rows ``G`` to unit vectors at angle ``t`` from ``vhat``."""
    G, vhat = _rows(G), _rows(vhat)
    out = np.empty_like(G)
    (backend or _active).cap_directions(G, vhat, _rows(cos_t), _rows(sin_t), out)
    return out
