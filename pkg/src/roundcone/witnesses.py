"""Explicit vectors realizing the extreme configurations of projected cones.

Each constructor returns a :class:`Witness` whose angles are recomputed from
the constructed vector, never copied from the formula that motivated it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cone import RoundCone
from .errors import RegimeError, WitnessSearchError
from .linalg import (
    SubspaceBasis,
    angle_between,
    angle_to_complement,
    as_vector,
    is_zero,
    project,
)
from .projection import projected_aperture

BISECTION_STEPS = 80
MAX_DOUBLINGS = 60


@dataclass(frozen=True, eq=False)
class Witness:
    vector: np.ndarray
    certified_original_angle: float
    certified_projected_angle: float
    construction: str

    def to_dict(self) -> dict:
        return {
            "construction": self.construction,
            "vector": self.vector.tolist(),
            "certified_original_angle": self.certified_original_angle,
            "certified_projected_angle": self.certified_projected_angle,
        }


def _certify(u, v, V, construction) -> Witness:
    u = as_vector(u)
    pu = project(V, u).parallel
    if is_zero(u) or is_zero(pu):
        raise WitnessSearchError(f"{construction}: constructed vector has zero projection")
    pv = project(V, v).parallel
    return Witness(u, angle_between(u, v), angle_between(pu, pv), construction)


def _unit_orthogonal(rows: np.ndarray, avoid: np.ndarray | None, seed: int) -> np.ndarray:
    """Seeded unit vector in the row span of ``rows``, orthogonal to ``avoid``."""
    rng = np.random.default_rng(seed)
    a = None
    if avoid is not None and not is_zero(avoid):
        a = avoid / np.linalg.norm(avoid)
    for _ in range(64):
        z = rng.standard_normal(rows.shape[0]) @ rows
        if a is not None:
            z = z - (a @ z) * a
            z = z - (a @ z) * a
        zn = float(np.linalg.norm(z))
        if zn > 1e-8:
            return z / zn
    raise WitnessSearchError("no auxiliary unit vector available in the requested subspace")


def _decompose(v, V):
    v = as_vector(v, V.ambient_dim)
    d = project(V, v)
    return v, d.parallel, d.perpendicular


def _cone_slack(v: np.ndarray, cos_phi: float) -> Callable[[np.ndarray], float]:
    vn = float(np.linalg.norm(v))
    return lambda u: float(u @ v) - cos_phi * float(np.linalg.norm(u)) * vn


def equality_witness(v, V: SubspaceBasis, phi: float, seed: int = 0) -> Witness:
    """A cone member whose projection sits exactly on the projected cone's boundary.

    ``u = cos(phi1) v1 + |v1| sin(phi1) z + v2 / cos(phi1)`` with ``z`` a unit
    vector of ``V`` orthogonal to ``v1``; then ``angle(u, v) = phi`` and
    ``angle(Pu, Pv) = phi1``, so no larger cosine bound is possible.
    """
    v, v1, v2 = _decompose(v, V)
    if V.dim < 2:
        raise RegimeError("equality witness needs dim V >= 2")
    if is_zero(v):
        raise RegimeError("equality witness needs a nonzero axis")
    psi = angle_to_complement(v, V)
    if not 0.0 <= phi < psi:
        raise RegimeError(f"equality witness needs 0 <= phi < psi (phi={phi}, psi={psi})")
    phi1 = projected_aperture(phi, psi)
    z = _unit_orthogonal(V.basis, v1, seed)
    u = math.cos(phi1) * v1 + float(np.linalg.norm(v1)) * math.sin(phi1) * z
    if not is_zero(v2):
        c = math.cos(phi1)
        if c <= 1e-14:
            raise WitnessSearchError("cos(phi1) vanished in the valid regime")
        u = u + v2 / c
    return _certify(u, v, V, "equality")


def _last_positive(f, t_far: float) -> float:
    """Given ``f(0) > 0 >= f(t_far)``, bisect towards the sign change and return a
    parameter strictly between with ``f > 0``, preferring one away from the root."""
    lo, hi = t_far, 0.0
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    if hi == 0.0:
        raise WitnessSearchError("sign change too close to t = 0")
    return hi / 2.0 if f(hi / 2.0) > f(hi) else hi


def _antipodal_parameter(f) -> float:
    if not f(0.0) > 0:
        raise WitnessSearchError("f(0) is not positive; phi is too close to psi")
    t = -1.0
    if f(t) > 0:
        return t
    return _last_positive(f, t)


def antipodal_witness(v, V: SubspaceBasis, phi: float, seed: int = 0) -> Witness:
    """A cone member whose projection points exactly opposite to ``Pv``.

    Exists whenever ``phi > psi``.  Three parametrizations depending on which
    of ``v1 = Pv`` and ``v2 = v - Pv`` vanish: ``t v1 + v2``, ``t z + v2``
    (``z`` unit in ``V``) and ``t v1 + z`` (``z`` unit in the complement), with
    ``t < 0`` chosen so the cone inequality still holds.
    """
    v, v1, v2 = _decompose(v, V)
    if V.is_trivial or V.is_full:
        raise RegimeError("antipodal witness needs 1 <= dim V < ambient dimension")
    if is_zero(v):
        raise RegimeError("antipodal witness needs a nonzero axis")
    psi = angle_to_complement(v, V)
    if not psi < phi <= math.pi:
        raise RegimeError(f"antipodal witness needs psi < phi <= pi (phi={phi}, psi={psi})")
    slack = _cone_slack(v, math.cos(phi))

    if not is_zero(v1) and not is_zero(v2):
        make, tag = (lambda t: t * v1 + v2), "antipodal:v1,v2"
    elif is_zero(v1):
        z = _unit_orthogonal(V.basis, None, seed)
        make, tag = (lambda t: t * z + v2), "antipodal:v2_only"
    else:
        z = _unit_orthogonal(V.complement().basis, None, seed)
        make, tag = (lambda t: t * v1 + z), "antipodal:v1_only"
    t0 = _antipodal_parameter(lambda t: slack(make(t)))
    return _certify(make(t0), v, V, tag)


def border_witness(v, V: SubspaceBasis, epsilon: float, seed: int = 0) -> Witness:
    """A member of ``C(v, psi)`` whose projection has cosine ``epsilon`` with ``Pv``.

    ``u(t) = epsilon e + t w2 + z`` with ``e = v1/|v1|``, ``w2 = v2/|v1|`` and
    ``z`` in ``V``, orthogonal to ``e``, of norm ``sqrt(1 - epsilon^2)``.  The
    cone slack is increasing in ``t`` with limit ``epsilon``, so a doubling
    search from ``t = 1`` brackets its root.
    """
    v, v1, v2 = _decompose(v, V)
    epsilon = float(epsilon)
    if not 0.0 < epsilon <= 1.0:
        raise RegimeError("epsilon must lie in (0, 1]")
    if V.dim < 2:
        raise RegimeError("border witness needs dim V >= 2")
    if is_zero(v):
        raise RegimeError("border witness needs a nonzero axis")
    psi = angle_to_complement(v, V)
    if not psi > 0.0 or is_zero(v1):
        raise RegimeError("border witness needs psi > 0")
    n1 = float(np.linalg.norm(v1))
    e, w2 = v1 / n1, v2 / n1
    z = _unit_orthogonal(V.basis, v1, seed) * math.sqrt(max(0.0, 1.0 - epsilon * epsilon))
    slack = _cone_slack(v, math.cos(psi))

    def make(t):
        return epsilon * e + t * w2 + z

    def f(t):
        return slack(make(t))

    if f(0.0) > 0:
        lo, hi = None, 0.0
    else:
        lo, hi = 0.0, 1.0
        for _ in range(MAX_DOUBLINGS):
            if f(hi) > 0:
                break
            lo, hi = hi, 2.0 * hi
        else:
            raise WitnessSearchError("no t <= 2**60 makes the border witness a cone member")
    if lo is not None:
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            if f(mid) > 0:
                hi = mid
            else:
                lo = mid
    # step clear of the root so the witness is a member with visible slack
    t0 = hi + max(abs(hi), 1.0)
    return _certify(make(t0), v, V, "border")


def lift_to_cone(w, seed_u, cone: RoundCone, V: SubspaceBasis, tol: float = 1e-10) -> np.ndarray:
    """Preimage in ``cone`` of a point ``w`` of ``V``.

    ``seed_u`` is a cone member with nonzero projection; ``w`` must lie in the
    projected cone around ``P v`` whose half-aperture is the angle between
    ``P(seed_u - a)`` and ``P v``.  The preimage is ``a + w' + u2 |w'| / |u1|``
    where ``w' = w - P a`` and ``u1 + u2`` splits ``seed_u - a``.
    """
    n = V.ambient_dim
    w = as_vector(w, n)
    seed_u = as_vector(seed_u, n)
    if cone.dim != n:
        raise RegimeError("cone and subspace dimensions differ")
    if not cone.contains(seed_u, tol):
        raise RegimeError("seed vector is not a member of the cone")
    if not V.contains(w, tol):
        raise RegimeError("target point is not in the subspace")
    a = cone.apex
    pa = project(V, a).parallel
    u1, u2 = project(V, seed_u - a)
    if is_zero(u1):
        raise RegimeError("seed vector has zero projection")
    pv = project(V, cone.axis).parallel
    cos_theta = math.cos(angle_between(u1, pv))
    wr = w - pa
    wn, pvn = float(np.linalg.norm(wr)), float(np.linalg.norm(pv))
    if float(wr @ pv) - cos_theta * wn * pvn < -tol * (wn * pvn + 1.0):
        raise RegimeError("target point lies outside the cone certified by the seed")
    return a + wr + u2 * (wn / float(np.linalg.norm(u1)))
