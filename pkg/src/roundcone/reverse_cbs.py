"""Inequality checks: reverse Cauchy-Schwarz bounds transported through a projection.

All margins are signed slacks divided by (product of the relevant norms + 1),
so tolerances mean the same thing at every scale.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import RegimeError
from .linalg import SubspaceBasis, angle_to_complement, as_vector, is_zero, project
from .projection import HALF_PI, projected_aperture

STRICT_MARGIN = 1e-12


@dataclass(frozen=True)
class CbsCheck:
    premise_holds: bool
    conclusion_holds: bool
    premise_margin: float
    conclusion_margin: float
    strict_applicable: bool | None = None
    strict_holds: bool | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _margin(x, y, cos_bound: float) -> float:
    xn, yn = float(np.linalg.norm(x)), float(np.linalg.norm(y))
    return (float(x @ y) - cos_bound * xn * yn) / (xn * yn + 1.0)


def check_projection_implication(
    u, v, V: SubspaceBasis, phi: float, tol: float = STRICT_MARGIN
) -> CbsCheck:
    """Evaluate ``<u,v> >= cos(phi)|u||v|  =>  <Pu,Pv> >= cos(phi1)|Pu||Pv|``.

    Defined for ``0 <= phi < psi``.  A flag "holds" means the margin is at least ``-tol``.
    """
    u = as_vector(u, V.ambient_dim)
    v = as_vector(v, V.ambient_dim)
    psi = angle_to_complement(v, V)
    if not 0.0 <= phi < psi:
        raise RegimeError(f"implication needs 0 <= phi < psi (phi={phi}, psi={psi})")
    phi1 = projected_aperture(phi, psi)
    pm = _margin(u, v, math.cos(phi))
    cm = _margin(project(V, u).parallel, project(V, v).parallel, math.cos(phi1))
    return CbsCheck(pm >= -tol, cm >= -tol, pm, cm)


def enhanced_cbs_condition(u1, v, V: SubspaceBasis, alpha: float) -> bool:
    """Sufficient condition on ``u1 = Pu`` alone for ``<u,v> < alpha |u||v|``.

    True iff ``|v2| < alpha |v1| / sqrt(1 - alpha^2)`` and
    ``<u1,v1> < sqrt((alpha^2|v|^2 - |v2|^2) / (|v|^2 - |v2|^2)) |u1||v1|``,
    both with normalized margin above ``1e-12``.  When true, every
    ``u = u1 + u2`` with ``u2`` orthogonal to ``V`` obeys the strict bound.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise RegimeError(f"alpha={alpha} must lie in (0, 1)")
    u1 = as_vector(u1, V.ambient_dim)
    v = as_vector(v, V.ambient_dim)
    if float(np.linalg.norm(project(V, u1).perpendicular)) > 1e-10 * max(1.0, float(np.linalg.norm(u1))):
        raise RegimeError("u1 is not in the subspace")
    v1, v2 = project(V, v)
    n, n1, n2 = (float(np.linalg.norm(x)) for x in (v, v1, v2))
    first = (alpha * n1 / math.sqrt(1.0 - alpha * alpha) - n2) / (n + 1.0)
    if not first > STRICT_MARGIN:
        return False
    cos_phi1 = math.sqrt(max(0.0, (alpha * alpha * n * n - n2 * n2) / (n * n - n2 * n2)))
    return _margin(u1, v1, cos_phi1) < -STRICT_MARGIN


def check_sign_lemma(u, v, V: SubspaceBasis, tol: float = STRICT_MARGIN) -> CbsCheck:
    """Evaluate ``<u,v> >= cos(psi)|u||v|  =>  <Pu,Pv> >= 0``.

    When ``Pu != O`` and ``0 < psi < pi/2`` the conclusion is strict, reported
    through ``strict_applicable``/``strict_holds``.
    """
    u = as_vector(u, V.ambient_dim)
    v = as_vector(v, V.ambient_dim)
    if V.is_full:
        raise RegimeError("sign lemma needs V to be a proper subspace")
    if is_zero(v):
        raise RegimeError("sign lemma needs a nonzero axis")
    psi = angle_to_complement(v, V)
    if not psi > 0.0:
        raise RegimeError("sign lemma needs psi > 0")
    pu, pv = project(V, u).parallel, project(V, v).parallel
    pm = _margin(u, v, math.cos(psi))
    cm = _margin(pu, pv, 0.0)
    applicable = (not is_zero(pu)) and 0.0 < psi < HALF_PI
    return CbsCheck(pm >= -tol, cm >= -tol, pm, cm, applicable, cm > STRICT_MARGIN)
