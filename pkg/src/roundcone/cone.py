"""Round cones ``C(a, v, phi) = {u : <u-a, v> >= cos(phi) |u-a| |v|}`` and membership."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .linalg import as_vector

DEFAULT_TOL = 1e-10


class Flavor(str, enum.Enum):
    CLOSED = "closed"
    APEX_OPEN = "apex_open"  # apex plus interior, rest of the boundary excluded


@dataclass(frozen=True, eq=False)
class RoundCone:
    """Infinite one-sided solid round cone.

    The axis is kept exactly as given (membership is homogeneous in it); a
    zero axis is allowed and gives the whole space (closed) or just the apex
    (apex-open).
    """

    apex: np.ndarray
    axis: np.ndarray
    half_aperture: float
    flavor: Flavor = Flavor.CLOSED

    def __post_init__(self):
        axis = as_vector(self.axis)
        apex = as_vector(self.apex, axis.size)
        phi = float(self.half_aperture)
        if not 0.0 <= phi <= math.pi:
            raise ValueError(f"half aperture {phi} outside [0, pi]")
        object.__setattr__(self, "apex", apex)
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "half_aperture", phi)
        object.__setattr__(self, "flavor", Flavor(self.flavor))

    @classmethod
    def at_origin(cls, axis, half_aperture, flavor=Flavor.CLOSED) -> RoundCone:
        axis = as_vector(axis)
        return cls(np.zeros(axis.size), axis, half_aperture, flavor)

    @property
    def dim(self) -> int:
        return self.axis.size

    def margin(self, u) -> float:
        """Normalized slack of the defining inequality at ``u`` (>= 0 inside)."""
        d = as_vector(u, self.dim) - self.apex
        dn = float(np.linalg.norm(d))
        vn = float(np.linalg.norm(self.axis))
        return (float(d @ self.axis) - math.cos(self.half_aperture) * dn * vn) / (dn * vn + 1.0)

    def margins(self, U) -> np.ndarray:
        """Vectorized :meth:`margin` over the rows of ``U``."""
        U = np.asarray(U, dtype=np.float64) - self.apex
        return kernels.cone_margins(U, self.axis, math.cos(self.half_aperture))

    def contains(self, u, tol: float = DEFAULT_TOL) -> bool:
        return contains(self, u, tol)


def contains(cone: RoundCone, u, tol: float = DEFAULT_TOL) -> bool:
    """Membership test with normalized tolerance ``tol``.

    Closed cones accept margin ``>= -tol``.  Apex-open cones accept points
    within ``tol`` of the apex, or points whose margin exceeds ``+tol``.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    m = cone.margin(u)
    if cone.flavor is Flavor.CLOSED:
        return m >= -tol
    if float(np.linalg.norm(as_vector(u, cone.dim) - cone.apex)) <= tol:
        return True
    return m > tol


def translate(cone: RoundCone, shift) -> RoundCone:
    """The cone moved by ``shift`` (Minkowski sum with ``{shift}``)."""
    shift = as_vector(shift, cone.dim)
    return RoundCone(cone.apex + shift, cone.axis, cone.half_aperture, cone.flavor)
