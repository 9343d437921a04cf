"""Classification of the orthogonal projection of a round cone onto a subspace.

Write ``psi`` for the angle between the cone axis ``v`` and the orthogonal
complement of ``V``.  The image ``P[C(a, v, phi)]`` is decided by comparing
``phi`` with ``psi``:

=====================  ===================  ===============================
``phi``                ``psi``              image
=====================  ===================  ===============================
``0``                  ``0``                the point ``P a``
``psi``                in ``(0, pi/2)``     ``P a`` plus the open half-space
``psi``                ``>= pi/2``          closed cone, aperture ``phi1``
``< psi``              ``> 0``              closed cone, aperture ``phi1``
``> psi``                                   all of ``V``
=====================  ===================  ===============================

and the projected half-aperture satisfies ``sin(phi1) = sin(phi) / sin(psi)``
whenever ``psi`` is in ``(0, pi/2]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .cone import DEFAULT_TOL, Flavor, RoundCone
from .errors import DimensionError, RegimeError
from .linalg import SubspaceBasis, angle_to_complement, as_vector, project

HALF_PI = 0.5 * math.pi
# slack allowed on phi <= psi before projected_aperture reports a regime error
_REGIME_SLACK = 1e-12


class ProjectionTag(str, enum.Enum):
    SINGLE_POINT = "SinglePoint"
    FULL_SUBSPACE = "FullSubspace"
    CLOSED_CONE = "ClosedCone"
    APEX_PLUS_OPEN_CONE = "ApexPlusOpenCone"


@dataclass(frozen=True)
class ClassifierPolicy:
    """``angle_tol`` is the half-width of the band in which ``phi == psi`` is declared."""

    angle_tol: float = 1e-9

    def __post_init__(self):
        if self.angle_tol < 0:
            raise ValueError("angle_tol must be non-negative")


@dataclass(frozen=True, eq=False)
class ProjectionClass:
    tag: ProjectionTag
    projected_apex: np.ndarray
    projected_axis: np.ndarray | None
    projected_aperture: float | None
    boundary_margin: float
    psi: float
    subspace: SubspaceBasis

    def as_cone(self) -> RoundCone | None:
        """The image as a cone in ambient coordinates (``None`` for point/subspace)."""
        if self.projected_axis is None:
            return None
        flavor = (
            Flavor.APEX_OPEN
            if self.tag is ProjectionTag.APEX_PLUS_OPEN_CONE
            else Flavor.CLOSED
        )
        return RoundCone(self.projected_apex, self.projected_axis, self.projected_aperture, flavor)

    def contains(self, y, tol: float = 1e-9, closure: bool = False) -> bool:
        """Whether ``y`` belongs to the classified image.

        ``closure=True`` tests the closure instead (a tolerance band cannot see
        the missing boundary of an apex-plus-open-cone image).
        """
        y = as_vector(y, self.subspace.ambient_dim)
        d = y - self.projected_apex
        scale = float(np.linalg.norm(d)) + 1.0
        if float(np.linalg.norm(project(self.subspace, d).perpendicular)) > tol * scale:
            return False
        if self.tag is ProjectionTag.FULL_SUBSPACE:
            return True
        if self.tag is ProjectionTag.SINGLE_POINT:
            return float(np.linalg.norm(d)) <= tol * scale
        cone = self.as_cone()
        if closure:
            return cone.margin(y) >= -tol
        return cone.contains(y, tol)

    def to_dict(self) -> dict:
        return {
            "tag": self.tag.value,
            "projected_apex": self.projected_apex.tolist(),
            "projected_axis": None if self.projected_axis is None else self.projected_axis.tolist(),
            "projected_aperture": self.projected_aperture,
            "boundary_margin": self.boundary_margin,
            "psi": self.psi,
            "subspace_dim": self.subspace.dim,
        }


def _check_angle(name, x):
    x = float(x)
    if not 0.0 <= x <= math.pi:
        raise RegimeError(f"{name}={x} outside [0, pi]")
    return x


def projected_aperture(phi: float, psi: float) -> float:
    """Half-aperture of the projected cone.

    For ``psi`` in ``(0, pi/2]`` this is
    ``arccos(sqrt((cos^2 phi - cos^2 psi) / (1 - cos^2 psi)))``, evaluated in the
    equivalent form ``arcsin(sin(phi) / sin(psi))``; otherwise ``phi``.
    """
    phi, psi = _check_angle("phi", phi), _check_angle("psi", psi)
    if not 0.0 < psi <= HALF_PI:
        return phi
    if phi > psi + _REGIME_SLACK:
        raise RegimeError(f"phi={phi} exceeds psi={psi}: the image is the whole subspace")
    phi = min(phi, psi)
    # sin^2 psi - sin^2 phi factored to avoid cancellation when phi ~ psi
    gap = math.sin(psi - phi) * math.sin(psi + phi)
    return math.atan2(math.sin(phi), math.sqrt(max(gap, 0.0)))


def inverse_aperture(phi1: float, psi: float) -> float:
    """Widest half-aperture whose projection has half-aperture ``phi1``.

    ``arccos(sqrt(cos^2 psi + cos^2 phi1 - cos^2 psi cos^2 phi1))``, i.e.
    ``arcsin(sin(psi) sin(phi1))``.
    """
    phi1, psi = float(phi1), float(psi)
    if not 0.0 <= phi1 < HALF_PI:
        raise RegimeError(f"phi1={phi1} must lie in [0, pi/2)")
    if not 0.0 < psi <= HALF_PI:
        raise RegimeError(f"psi={psi} must lie in (0, pi/2]")
    return math.asin(math.sin(psi) * math.sin(phi1))


def _parts(cone: RoundCone, V: SubspaceBasis):
    if cone.dim != V.ambient_dim:
        raise DimensionError(f"cone in dimension {cone.dim}, subspace in {V.ambient_dim}")
    psi = angle_to_complement(cone.axis, V)
    pa = project(V, cone.apex).parallel
    pv = project(V, cone.axis).parallel
    return psi, pa, pv


def classify(
    cone: RoundCone, V: SubspaceBasis, policy: ClassifierPolicy = ClassifierPolicy()
) -> ProjectionClass:
    """Image of a closed round cone under orthogonal projection onto ``V``."""
    if cone.flavor is not Flavor.CLOSED:
        raise RegimeError("classify expects a closed cone; use project_open_cone")
    psi, pa, pv = _parts(cone, V)
    phi = cone.half_aperture
    margin = phi - psi
    tol = policy.angle_tol

    def result(tag, axis=None, aperture=None):
        return ProjectionClass(tag, pa, axis, aperture, margin, psi, V)

    if margin > tol:
        return result(ProjectionTag.FULL_SUBSPACE)
    if margin >= -tol:
        if psi <= tol:
            return result(ProjectionTag.SINGLE_POINT)
        if psi < HALF_PI - tol:
            return result(ProjectionTag.APEX_PLUS_OPEN_CONE, pv, HALF_PI)
        if psi <= HALF_PI:
            return result(ProjectionTag.CLOSED_CONE, pv, phi)
    return result(ProjectionTag.CLOSED_CONE, pv, projected_aperture(min(phi, psi), psi))


def project_open_cone(
    cone: RoundCone, V: SubspaceBasis, policy: ClassifierPolicy = ClassifierPolicy()
) -> ProjectionClass:
    """Image of an apex-open cone: apex plus open cone of aperture ``phi1``, or ``V``."""
    if cone.flavor is not Flavor.APEX_OPEN:
        raise RegimeError("project_open_cone expects an apex-open cone")
    psi, pa, pv = _parts(cone, V)
    phi = cone.half_aperture
    margin = phi - psi
    if margin > policy.angle_tol:
        return ProjectionClass(ProjectionTag.FULL_SUBSPACE, pa, None, None, margin, psi, V)
    # phi == psi == 0 falls in the else branch of projected_aperture and gives 0
    phi1 = projected_aperture(min(phi, psi), psi)
    return ProjectionClass(ProjectionTag.APEX_PLUS_OPEN_CONE, pa, pv, phi1, margin, psi, V)


def classify_affine(
    cone: RoundCone,
    V: SubspaceBasis,
    offset,
    policy: ClassifierPolicy = ClassifierPolicy(),
) -> ProjectionClass:
    """Projection onto the affine subspace ``V + {offset}``; ``offset`` must be orthogonal to ``V``."""
    d = as_vector(offset, V.ambient_dim)
    if float(np.linalg.norm(project(V, d).parallel)) > 1e-10 * float(np.linalg.norm(d)):
        raise RegimeError("affine offset is not orthogonal to the subspace")
    base = classify(cone, V, policy) if cone.flavor is Flavor.CLOSED else project_open_cone(cone, V, policy)
    return ProjectionClass(
        base.tag,
        base.projected_apex + d,
        base.projected_axis,
        base.projected_aperture,
        base.boundary_margin,
        base.psi,
        base.subspace,
    )


def orthant_max_aperture(n: int) -> float:
    """Widest half-aperture of a round cone inside an orthant of ``R^n``: ``arccos(sqrt((n-1)/n))``."""
    if int(n) != n or n < 2:
        raise RegimeError(f"orthant dimension must be an integer >= 2, got {n}")
    return math.asin(1.0 / math.sqrt(n))


def l2_threshold(alpha: float) -> float:
    """Smallest ``t`` such that ``int_0^1 u >= alpha |u|`` forces ``int_0^t u >= 0``."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise RegimeError(f"alpha={alpha} must lie in (0, 1)")
    return 1.0 - alpha * alpha
