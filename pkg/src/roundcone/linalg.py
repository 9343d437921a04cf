"""Dense vectors, orthonormal subspace bases, orthogonal projection and angles.

Vectors are plain 1-D ``float64`` numpy arrays.  A closed subspace ``V`` of
``R^n`` is a :class:`SubspaceBasis` holding an orthonormal basis as the rows
of a ``(k, n)`` array; ``k = 0`` is the zero subspace and ``k = n`` the whole
space.  Both degenerate cases are ordinary values.

Angles follow the convention that any angle involving the zero vector is
``pi``, so that the zero subspace and the zero axis need no special casing
downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionError

ZERO_RTOL = 1e-12
ORTHO_TOL = 1e-10
RANK_RTOL = 1e-12


def as_vector(u, dim: int | None = None) -> np.ndarray:
    """Return ``u`` as a read-only finite 1-D float array, checking ``dim``."""
    a = np.array(u, dtype=np.float64)
    if a.ndim != 1 or a.size == 0:
        raise DimensionError(f"expected a non-empty 1-D vector, got shape {a.shape}")
    if dim is not None and a.size != dim:
        raise DimensionError(f"expected dimension {dim}, got {a.size}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector has non-finite coordinates")
    a.flags.writeable = False
    return a


def zero_threshold(dim: int) -> float:
    return ZERO_RTOL * math.sqrt(dim)


def is_zero(u: np.ndarray) -> bool:
    """Numerical zero test: ``|u| <= 1e-12 * sqrt(dim)``."""
    return float(np.linalg.norm(u)) <= zero_threshold(u.size)


class Decomposition(NamedTuple):
    """``u = parallel + perpendicular`` with ``parallel`` in V and ``perpendicular`` in V-perp."""

    parallel: np.ndarray
    perpendicular: np.ndarray


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal basis (rows of ``basis``) of a subspace of ``R^ambient_dim``."""

    basis: np.ndarray
    ambient_dim: int

    def __post_init__(self):
        b = np.array(self.basis, dtype=np.float64).reshape(-1, self.ambient_dim)
        if self.ambient_dim < 1:
            raise DimensionError("ambient dimension must be positive")
        if b.shape[0] > self.ambient_dim:
            raise DimensionError("more basis vectors than the ambient dimension")
        if not np.all(np.isfinite(b)):
            raise ValueError("basis has non-finite entries")
        gram = b @ b.T
        if b.shape[0] and np.max(np.abs(gram - np.eye(b.shape[0]))) > ORTHO_TOL:
            raise ValueError("basis rows are not orthonormal")
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)

    @classmethod
    def _trusted(cls, basis: np.ndarray, n: int) -> SubspaceBasis:
        # skips the O(k^2 n) Gram check for bases orthonormal by construction
        obj = object.__new__(cls)
        basis = np.array(basis, dtype=np.float64).reshape(-1, n)
        basis.flags.writeable = False
        object.__setattr__(obj, "basis", basis)
        object.__setattr__(obj, "ambient_dim", n)
        return obj

    @classmethod
    def zero(cls, n: int) -> SubspaceBasis:
        return cls._trusted(np.zeros((0, n)), n)

    @classmethod
    def full(cls, n: int) -> SubspaceBasis:
        return cls._trusted(np.eye(n), n)

    @classmethod
    def coordinate(cls, indices: Sequence[int], n: int) -> SubspaceBasis:
        """Span of the (0-based) coordinate directions ``indices``."""
        idx = list(dict.fromkeys(int(i) for i in indices))
        if any(i < 0 or i >= n for i in idx):
            raise DimensionError(f"coordinate index out of range for dimension {n}")
        basis = np.zeros((len(idx), n))
        basis[np.arange(len(idx)), idx] = 1.0
        return cls._trusted(basis, n)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def is_trivial(self) -> bool:
        return self.dim == 0

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def coefficients(self, u) -> np.ndarray:
        """Coordinates of ``P u`` in this basis."""
        u = as_vector(u, self.ambient_dim)
        return self.basis @ u

    def project(self, u) -> Decomposition:
        return project(self, u)

    def complement(self) -> SubspaceBasis:
        """Orthonormal basis of the orthogonal complement."""
        n, k = self.ambient_dim, self.dim
        if k == 0:
            return SubspaceBasis.full(n)
        if k == n:
            return SubspaceBasis.zero(n)
        _, _, vt = np.linalg.svd(self.basis, full_matrices=True)
        return SubspaceBasis(vt[k:], n)

    def contains(self, u, tol: float = ORTHO_TOL) -> bool:
        u = as_vector(u, self.ambient_dim)
        return float(np.linalg.norm(project(self, u).perpendicular)) <= tol * max(
            1.0, float(np.linalg.norm(u))
        )


def orthonormalize(vectors, ambient_dim: int) -> SubspaceBasis:
    """Orthonormal basis of ``span(vectors)``.

    The rank is the number of singular values above ``1e-12`` times the largest
    input norm.  The basis itself comes from modified Gram-Schmidt with one
    re-orthogonalization pass, which keeps the input order (coordinate axes map
    to themselves); if Gram-Schmidt disagrees with the rank the leading left
    singular vectors are used instead.
    """
    rows = [as_vector(v) for v in vectors]
    for r in rows:
        if r.size != ambient_dim:
            raise DimensionError(
                f"spanning vector of dimension {r.size} in ambient dimension {ambient_dim}"
            )
    if not rows:
        return SubspaceBasis.zero(ambient_dim)
    A = np.vstack(rows)
    norms = np.linalg.norm(A, axis=1)
    top = float(norms.max())
    if top == 0.0:
        return SubspaceBasis.zero(ambient_dim)
    threshold = RANK_RTOL * top
    sv = np.linalg.svd(A, compute_uv=False)
    rank = int(np.sum(sv > threshold))

    basis: list[np.ndarray] = []
    for a in A:
        w = a.copy()
        for _ in range(2):
            for q in basis:
                w -= (q @ w) * q
        wn = float(np.linalg.norm(w))
        if wn > threshold:
            basis.append(w / wn)
        if len(basis) == rank:
            break
    Q = np.array(basis).reshape(-1, ambient_dim)
    if len(basis) != rank or (
        rank and np.max(np.abs(Q @ Q.T - np.eye(rank))) > ORTHO_TOL
    ):
        u, _, _ = np.linalg.svd(A.T, full_matrices=False)
        Q = u[:, :rank].T
    return SubspaceBasis(Q, ambient_dim)


def project(V: SubspaceBasis, u) -> Decomposition:
    u = as_vector(u, V.ambient_dim)
    if V.is_full:
        parallel = u.copy()
    elif V.is_trivial:
        parallel = np.zeros_like(u)
    else:
        parallel = V.basis.T @ (V.basis @ u)
    perpendicular = u - parallel
    parallel.flags.writeable = False
    perpendicular.flags.writeable = False
    return Decomposition(parallel, perpendicular)


def angle_between(u, v) -> float:
    """Angle in ``[0, pi]`` between ``u`` and ``v``; ``pi`` if either is zero.

    Uses ``2 atan2(|u/|u| - v/|v||, |u/|u| + v/|v||)``, which equals the arccos
    of the normalized inner product but stays accurate near 0 and ``pi``.
    """
    u = as_vector(u)
    v = as_vector(v, u.size)
    nu, nv = float(np.linalg.norm(u)), float(np.linalg.norm(v))
    thr = zero_threshold(u.size)
    if nu <= thr or nv <= thr:
        return math.pi
    a, b = u / nu, v / nv
    return 2.0 * math.atan2(float(np.linalg.norm(a - b)), float(np.linalg.norm(a + b)))


def _split_norms(u, V: SubspaceBasis) -> tuple[float, float, float]:
    u = as_vector(u, V.ambient_dim)
    d = project(V, u)
    return (
        float(np.linalg.norm(u)),
        float(np.linalg.norm(d.parallel)),
        float(np.linalg.norm(d.perpendicular)),
    )


def angle_to_subspace(u, V: SubspaceBasis) -> float:
    """``inf`` of ``angle_between(u, w)`` over ``w`` in ``V``."""
    nu, n1, n2 = _split_norms(u, V)
    if nu <= zero_threshold(V.ambient_dim) or V.is_trivial:
        return math.pi
    return math.atan2(n2, n1)


def angle_to_complement(u, V: SubspaceBasis) -> float:
    """``inf`` of ``angle_between(u, w)`` over ``w`` in the orthogonal complement of ``V``.

    For ``V`` the whole space the complement is ``{O}`` and the angle is ``pi``.
    """
    nu, n1, n2 = _split_norms(u, V)
    if nu <= zero_threshold(V.ambient_dim) or V.is_full:
        return math.pi
    return math.atan2(n1, n2)
