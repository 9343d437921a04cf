"""Sampling oracle: checks classified projections against brute force.

Samples are drawn in fixed-size chunks; chunk ``k`` uses the generator seeded
with ``SeedSequence(seed, spawn_key=(k,))``, so results do not depend on how
chunks are distributed over workers.  All reductions are counts, minima and
maxima, so serial and threaded runs give identical reports.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterator

import numpy as np

from . import kernels
from .cone import Flavor, RoundCone
from .errors import RegimeError
from .linalg import SubspaceBasis, as_vector, is_zero, project
from .projection import (
    ClassifierPolicy,
    ProjectionClass,
    ProjectionTag,
    classify,
    project_open_cone,
)
from .witnesses import (
    antipodal_witness,
    border_witness,
    equality_witness,
    lift_to_cone,
)

CHUNK = 8192
MEMBERSHIP_TOL = 1e-9
LIFT_TOL = 1e-9


class SampleMode(str, enum.Enum):
    BOUNDARY = "boundary"
    FILLED = "filled"


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    sample_count: int = 10_000
    mode: SampleMode = SampleMode.BOUNDARY

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be positive")
        object.__setattr__(self, "mode", SampleMode(self.mode))


@dataclass
class VerificationReport:
    instance: dict
    tag: str
    samples_tested: int
    violations: int
    worst_margin: float
    empirical_max_projected_angle: float
    predicted_aperture: float
    zero_projections: int = 0
    lift_attempts: int = 0
    lift_failures: int = 0
    backend: str = field(default=kernels.BACKEND)

    @property
    def ok(self) -> bool:
        return self.violations == 0 and self.lift_failures == 0

    def to_dict(self) -> dict:
        return asdict(self)


def _check_sampler(cone: RoundCone, cfg: SamplerConfig):
    if is_zero(cone.axis):
        raise RegimeError("cannot sample a cone with zero axis")
    if cfg.mode is SampleMode.BOUNDARY and cone.half_aperture > 0.5 * math.pi:
        raise RegimeError("boundary sampling needs half aperture <= pi/2; use filled mode")


def _chunk_rng(seed: int, k: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k,)))


def _chunk_directions(cone: RoundCone, cfg: SamplerConfig, k: int, m: int, backend=None):
    rng = _chunk_rng(cfg.seed, k)
    n = cone.dim
    vhat = cone.axis / np.linalg.norm(cone.axis)
    G = rng.standard_normal((m, n))
    if cfg.mode is SampleMode.BOUNDARY:
        t = np.full(m, cone.half_aperture)
    else:
        t = rng.uniform(0.0, cone.half_aperture, m)
    if n == 1:
        return np.tile(vhat, (m, 1))
    return kernels.cap_directions(G, vhat, np.cos(t), np.sin(t), backend)


def _chunks(total: int) -> list[tuple[int, int]]:
    return [(k, min(CHUNK, total - k * CHUNK)) for k in range((total + CHUNK - 1) // CHUNK)]


def sample_cone(cone: RoundCone, cfg: SamplerConfig) -> np.ndarray:
    """``cfg.sample_count`` members of ``cone`` as rows: apex plus a unit direction.

    Boundary mode puts every direction at angle exactly ``phi`` from the axis;
    filled mode draws the angle uniformly from ``[0, phi]``.
    """
    _check_sampler(cone, cfg)
    parts = [_chunk_directions(cone, cfg, k, m) for k, m in _chunks(cfg.sample_count)]
    return np.vstack(parts) + cone.apex


def iter_samples(cone: RoundCone, cfg: SamplerConfig) -> Iterator[np.ndarray]:
    """Chunked stream of the rows :func:`sample_cone` returns."""
    _check_sampler(cone, cfg)
    for k, m in _chunks(cfg.sample_count):
        yield _chunk_directions(cone, cfg, k, m) + cone.apex


def _class_of(cone, V, policy) -> ProjectionClass:
    if cone.flavor is Flavor.CLOSED:
        return classify(cone, V, policy)
    return project_open_cone(cone, V, policy)


def _predicted(cls: ProjectionClass) -> float:
    if cls.tag is ProjectionTag.FULL_SUBSPACE:
        return math.pi
    if cls.tag is ProjectionTag.SINGLE_POINT:
        return 0.0
    return float(cls.projected_aperture)


def _chunk_stats(cone, V, cls, cfg, axis_unit, pv_norm, k, m, backend=None):
    """Returns (violations, worst_margin, max_angle, zero_projections) for chunk k."""
    D = _chunk_directions(cone, cfg, k, m, backend)
    dots, norms, perps = kernels.projected_stats(D, V.basis, axis_unit, backend)
    zero = norms <= 1e-12 * math.sqrt(V.ambient_dim)
    dn = np.linalg.norm(D, axis=1)
    if cls.tag is ProjectionTag.FULL_SUBSPACE:
        margins = np.zeros(m)
    elif cls.tag is ProjectionTag.SINGLE_POINT:
        margins = -norms / (dn + 1.0)
    else:
        c = math.cos(cls.projected_aperture)
        # membership in the closure; the open part's missing boundary is invisible at any tolerance
        margins = (dots * pv_norm - c * norms * pv_norm) / (norms * pv_norm + 1.0)
    if pv_norm <= 1e-12 * math.sqrt(V.ambient_dim):
        angles = np.full(m, math.pi)
    else:
        angles = np.arctan2(perps, dots)
    nonzero = ~zero
    max_angle = float(angles[nonzero].max()) if nonzero.any() else -math.inf
    return (
        int(np.sum(margins < -MEMBERSHIP_TOL)),
        float(margins.min()),
        max_angle,
        int(zero.sum()),
    )


def _lift_seed(cone: RoundCone, V: SubspaceBasis, cls: ProjectionClass):
    """A cone member ``u`` and the half-aperture ``theta`` of ``C_V(Pv, theta)`` it certifies."""
    v = cone.axis
    tag = cls.tag
    if tag is ProjectionTag.FULL_SUBSPACE:
        if V.is_trivial:
            return None
        u = antipodal_witness(v, V, cone.half_aperture).vector
        return u, math.pi
    if V.dim < 2 or tag is ProjectionTag.SINGLE_POINT:
        return None
    if tag is ProjectionTag.APEX_PLUS_OPEN_CONE:
        u = border_witness(v, V, 0.01).vector
        return u, math.acos(0.01)
    phi, psi = cone.half_aperture, cls.psi
    if phi < psi:
        u = equality_witness(v, V, phi).vector
        return u, float(cls.projected_aperture)
    if V.is_full:
        return None
    # phi == psi == pi/2: v lies in V and any unit z in V orthogonal to v is a member
    z = V.basis[0] - (V.basis[0] @ v) / (v @ v) * v
    if is_zero(z):
        z = V.basis[1] - (V.basis[1] @ v) / (v @ v) * v
    return z, 0.5 * math.pi


def _lift_directions(pv: np.ndarray, V: SubspaceBasis, theta: float, witness_dir: np.ndarray):
    """Deterministic grid in ``C_V(pv, theta)``: ``+-pv`` where admissible, the witness
    direction, and for each basis vector the boundary directions towards it."""
    dirs = [witness_dir]
    if is_zero(pv):
        for b in V.basis:
            dirs.extend([b, -b])
        return dirs
    p = pv / np.linalg.norm(pv)
    dirs.append(p)
    if theta >= math.pi - 1e-12:
        dirs.append(-p)
    for b in V.basis:
        s = b - (b @ p) * p
        if is_zero(s):
            continue
        s = s / np.linalg.norm(s)
        for sign in (1.0, -1.0):
            dirs.append(math.cos(theta) * p + sign * math.sin(theta) * s)
    return dirs


def certify_reverse_inclusion(cone: RoundCone, V: SubspaceBasis, cls: ProjectionClass):
    """Lift a direction grid of the predicted image back into the cone.

    Returns ``(attempts, failures)``; ``(0, 0)`` when no constructive seed applies.
    """
    centred = RoundCone.at_origin(cone.axis, cone.half_aperture)
    seed = _lift_seed(centred, V, cls)
    if seed is None:
        return 0, 0
    u, theta = seed
    pv = project(V, cone.axis).parallel
    pu = project(V, u).parallel
    attempts = failures = 0
    for scale, w in enumerate(_lift_directions(pv, V, theta, pu), start=1):
        attempts += 1
        target = w * scale
        try:
            lifted = lift_to_cone(target, u, centred, V)
        except RegimeError:
            failures += 1
            continue
        reprojected = project(V, lifted).parallel
        ok = centred.margin(lifted) >= -LIFT_TOL and np.allclose(
            reprojected, target, rtol=0.0, atol=1e-9 * (1.0 + np.linalg.norm(target))
        )
        failures += 0 if ok else 1
    return attempts, failures


def empirical_projection_check(
    cone: RoundCone,
    V: SubspaceBasis,
    cfg: SamplerConfig = SamplerConfig(),
    policy: ClassifierPolicy = ClassifierPolicy(),
    workers: int = 1,
    lift: bool = True,
    backend=None,
) -> VerificationReport:
    """Project samples of ``cone`` and test them against its classified image."""
    cls = _class_of(cone, V, policy)
    _check_sampler(cone, cfg)
    pv = project(V, cone.axis).parallel
    pv_coef = V.basis @ cone.axis
    pv_norm = float(np.linalg.norm(pv_coef))
    axis_unit = pv_coef / pv_norm if pv_norm > 0 else np.zeros(V.dim)

    jobs = _chunks(cfg.sample_count)

    def run(job):
        return _chunk_stats(cone, V, cls, cfg, axis_unit, pv_norm, *job, backend=backend)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            stats = list(pool.map(run, jobs))
    else:
        stats = [run(job) for job in jobs]
    violations = sum(s[0] for s in stats)
    worst = min(s[1] for s in stats)
    max_angle = max(s[2] for s in stats)
    zeros = sum(s[3] for s in stats)
    if max_angle == -math.inf:
        max_angle = math.pi  # every projection vanished; angle with O is pi

    attempts = failures = 0
    if lift and cone.flavor is Flavor.CLOSED:
        attempts, failures = certify_reverse_inclusion(cone, V, cls)

    return VerificationReport(
        instance=describe_instance(cone, V),
        tag=cls.tag.value,
        samples_tested=cfg.sample_count,
        violations=violations,
        worst_margin=worst,
        empirical_max_projected_angle=max_angle,
        predicted_aperture=_predicted(cls),
        zero_projections=zeros,
        lift_attempts=attempts,
        lift_failures=failures,
        backend=_backend_name(backend),
    )


def _backend_name(backend) -> str:
    if backend is None:
        return kernels.BACKEND
    return "python" if backend is kernels.python else "cython"


def describe_instance(cone: RoundCone, V: SubspaceBasis) -> dict:
    return {
        "dimension": cone.dim,
        "apex": cone.apex.tolist(),
        "axis": cone.axis.tolist(),
        "half_aperture": cone.half_aperture,
        "flavor": cone.flavor.value,
        "subspace_dim": V.dim,
    }


def _l2_instance(alpha: float, grid_points: int):
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise RegimeError(f"alpha={alpha} must lie in (0, 1)")
    if grid_points < 10:
        raise RegimeError("grid needs at least 10 points")
    # the 1/N weight of the discrete L2 inner product rescales every norm
    # equally, so angles and orthogonal projections match the Euclidean ones
    v = np.ones(grid_points)
    return v, RoundCone.at_origin(v, math.acos(alpha))


def l2_discretized_experiment(
    alpha: float,
    grid_points: int = 1000,
    cfg: SamplerConfig | None = None,
    policy: ClassifierPolicy = ClassifierPolicy(),
) -> float:
    """Smallest grid ``t = k/N`` for which ``int u >= alpha |u|`` forces ``int_0^t u >= 0``.

    ``L2(0, 1)`` is modelled by ``R^N`` with step functions; ``V_t`` is spanned
    by the first ``k`` coordinates.  The implication holds exactly when the
    projected cone is not the whole of ``V_t``.  ``cfg`` is accepted for
    interface symmetry; the decision is made by classification alone.
    """
    _, cone = _l2_instance(alpha, grid_points)
    for k in range(1, grid_points + 1):
        V = SubspaceBasis.coordinate(range(k), grid_points)
        if classify(cone, V, policy).tag is not ProjectionTag.FULL_SUBSPACE:
            return k / grid_points
    return 1.0  # unreachable: V = H always gives a cone


@dataclass(frozen=True)
class L2Counterexample:
    t: float
    vector: np.ndarray
    premise_margin: float
    partial_integral: float

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "premise_margin": self.premise_margin,
            "partial_integral": self.partial_integral,
        }


def l2_counterexample(alpha: float, grid_points: int, t: float) -> L2Counterexample:
    """A step function with ``int u >= alpha |u|`` yet ``int_0^t u < 0`` (needs ``t < 1 - alpha^2``)."""
    v, cone = _l2_instance(alpha, grid_points)
    k = int(math.floor(t * grid_points + 1e-9))
    if not 1 <= k < grid_points:
        raise RegimeError("t must leave at least one grid cell on each side")
    V = SubspaceBasis.coordinate(range(k), grid_points)
    u = antipodal_witness(v, V, cone.half_aperture).vector
    h = 1.0 / grid_points
    integral = h * float(u.sum())
    norm = math.sqrt(h * float(u @ u))
    return L2Counterexample(
        t=k / grid_points,
        vector=u,
        premise_margin=integral - alpha * norm,
        partial_integral=h * float(u[:k].sum()),
    )

