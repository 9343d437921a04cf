"""Acceptance suite: nine end-to-end criteria with fixed tolerances and time budgets.

Each test prints a single ``PASS``/``FAIL`` line.  Run directly with
``python3 tests/test_acceptance.py`` for just the summary lines.
"""

import itertools
import math
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from roundcone import (
    ProjectionTag,
    RoundCone,
    SampleMode,
    SamplerConfig,
    SubspaceBasis,
    angle_to_complement,
    angle_to_subspace,
    antipodal_witness,
    border_witness,
    classify,
    contains,
    empirical_projection_check,
    enhanced_cbs_condition,
    equality_witness,
    inverse_aperture,
    l2_counterexample,
    l2_discretized_experiment,
    lift_to_cone,
    orthant_max_aperture,
    orthonormalize,
    project,
    projected_aperture,
)

PI = math.pi


def _subspace(rng, n, k):
    return orthonormalize(rng.standard_normal((k, n)), n)


@contextmanager
def criterion(number, title, budget, request=None):
    """Times the block, then prints one PASS/FAIL line and enforces the budget."""
    start = time.perf_counter()
    failure = None
    try:
        yield
    except AssertionError as exc:
        failure = exc
    elapsed = time.perf_counter() - start
    if failure is None and elapsed > budget:
        failure = AssertionError(f"took {elapsed:.2f}s, budget {budget}s")
    status = "PASS" if failure is None else "FAIL"
    line = f"[{status}] criterion {number}: {title} ({elapsed:.2f}s / {budget}s)"
    if failure is not None:
        line += f" -- {failure}"
    capman = request.config.pluginmanager.getplugin("capturemanager") if request else None
    if capman is not None:
        with capman.global_and_fixture_disabled():
            print("\n" + line, file=sys.stderr)
    else:
        print(line)
    if failure is not None:
        raise failure


def test_criterion_1_orthant(request):
    with criterion(1, "orthant aperture and coordinate-plane projections", 1.0, request):
        for n in range(2, 11):
            phi = orthant_max_aperture(n)
            assert abs(phi - math.acos(math.sqrt((n - 1) / n))) <= 1e-12, n
            cone = RoundCone.at_origin(np.ones(n), phi)
            for i, j in itertools.combinations(range(n), 2):
                c = classify(cone, SubspaceBasis.coordinate([i, j], n))
                assert c.tag is ProjectionTag.CLOSED_CONE, (n, i, j)
                assert abs(c.projected_aperture - PI / 4) <= 1e-10, (n, i, j)


def test_criterion_2_sharpness(request):
    rng = np.random.default_rng(2)
    with criterion(2, "projected aperture is attained and never exceeded", 60.0, request):
        for trial in range(50):
            n = 3 + trial % 6
            V = _subspace(rng, n, int(rng.integers(2, n)))
            v = rng.standard_normal(n)
            psi = angle_to_complement(v, V)
            phi = rng.uniform(0.05, 0.95) * psi
            predicted = projected_aperture(phi, psi)
            w = equality_witness(v, V, phi, seed=trial)
            assert abs(w.certified_original_angle - phi) <= 1e-8, trial
            assert abs(w.certified_projected_angle - predicted) <= 1e-8, trial
            cone = RoundCone(rng.standard_normal(n), v, phi)
            r = empirical_projection_check(cone, V, SamplerConfig(seed=trial, sample_count=100_000), lift=False)
            assert r.tag == "ClosedCone" and r.violations == 0, trial
            assert r.empirical_max_projected_angle <= predicted + 1e-9, trial
            if n <= 4:
                assert predicted - r.empirical_max_projected_angle <= 0.02, (trial, n)


def _row_instances(rng, row, count):
    """Random (cone, V) pairs that classify into the given table row."""
    out = []
    while len(out) < count:
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, n))
        V = _subspace(rng, n, k)
        W = V.complement()
        apex = rng.standard_normal(n)
        if row == "single_point":
            v = rng.standard_normal(W.dim) @ W.basis
            phi = 0.0
        elif row == "apex_open":
            if k < 2:
                continue
            v = rng.standard_normal(n)
            phi = angle_to_complement(v, V)
        elif row == "closed":
            v = rng.standard_normal(n)
            phi = rng.uniform(0, 1) * angle_to_complement(v, V)
        elif row == "half_space_or_wider":
            # v in V, so psi = pi/2; phi = pi/2 is the boundary, phi < pi/2 the interior
            v = rng.standard_normal(k) @ V.basis
            phi = PI / 2 if rng.uniform() < 0.5 else rng.uniform(0, PI / 2)
        else:
            v = rng.standard_normal(n)
            phi = rng.uniform(angle_to_complement(v, V) + 1e-3, PI)
        out.append((RoundCone(apex, v, phi), V))
    return out


EXPECTED_TAG = {
    "single_point": {"SinglePoint"},
    "apex_open": {"ApexPlusOpenCone"},
    "closed": {"ClosedCone"},
    "half_space_or_wider": {"ClosedCone"},
    "full": {"FullSubspace"},
}


def test_criterion_3_case_table_soundness(request):
    rng = np.random.default_rng(3)
    total = 0
    with criterion(3, "10^6 cone members land in the classified image", 120.0, request):
        for row in EXPECTED_TAG:
            for idx, (cone, V) in enumerate(_row_instances(rng, row, 50)):
                mode = SampleMode.FILLED if idx % 2 or cone.half_aperture > PI / 2 else SampleMode.BOUNDARY
                r = empirical_projection_check(cone, V, SamplerConfig(seed=idx, sample_count=4000, mode=mode), lift=False)
                assert r.tag in EXPECTED_TAG[row], (row, idx, r.tag)
                assert r.violations == 0, (row, idx, r.worst_margin)
                total += r.samples_tested
        assert total == 1_000_000


def test_criterion_4_border_case(request):
    with criterion(4, "boundary phi == psi: arccos(eps) attained, pi/2 never passed", 30.0, request):
        V = SubspaceBasis.coordinate([0, 1], 3)
        for v in [(1.0, 0.0, 1.0), (1.0, 2.0, 0.5), (0.3, -0.1, 2.0)]:
            psi = angle_to_complement(v, V)
            assert 0 < psi < PI / 2
            for eps in (0.9, 0.5, 0.1, 0.01):
                w = border_witness(v, V, eps)
                assert abs(w.certified_projected_angle - math.acos(eps)) <= 1e-8, (v, eps)
                assert contains(RoundCone.at_origin(v, psi), w.vector, tol=1e-12)
            r = empirical_projection_check(RoundCone.at_origin(v, psi), V, SamplerConfig(sample_count=100_000))
            assert r.tag == "ApexPlusOpenCone"
            assert r.violations == 0 and r.worst_margin >= -1e-9
            assert r.empirical_max_projected_angle <= PI / 2 + 1e-9


def test_criterion_5_full_subspace(request):
    rng = np.random.default_rng(5)
    with criterion(5, "antipodal witnesses and lifts realize the whole subspace", 10.0, request):
        for trial in range(20):
            n = int(rng.integers(3, 8))
            V = _subspace(rng, n, int(rng.integers(1, n)))
            v = rng.standard_normal(n)
            psi = angle_to_complement(v, V)
            phi = rng.uniform(psi + 1e-3, PI)
            cone = RoundCone.at_origin(v, phi)
            assert classify(cone, V).tag is ProjectionTag.FULL_SUBSPACE
            w = antipodal_witness(v, V, phi, seed=trial)
            assert abs(w.certified_projected_angle - PI) <= 1e-9, trial
            pv = project(V, v).parallel
            grid = [-pv, pv, *V.basis, *(-V.basis), *(rng.standard_normal((10, V.dim)) @ V.basis)]
            for scale, target in enumerate(grid, start=1):
                target = target * scale
                lifted = lift_to_cone(target, w.vector, cone, V)
                assert cone.margin(lifted) >= -1e-9, trial
                assert np.allclose(project(V, lifted).parallel, target, atol=1e-9 * (1 + np.linalg.norm(target)))


def test_criterion_6_l2(request):
    with criterion(6, "discretized L2 threshold 0.64 and counterexample at t = 0.60", 30.0, request):
        t = l2_discretized_experiment(0.6, 1000)
        assert abs(t - 0.64) <= 1e-3, t
        ce = l2_counterexample(0.6, 1000, 0.60)
        assert ce.premise_margin >= 0
        assert ce.partial_integral < 0


def test_criterion_7_inverse_roundtrip(request):
    with criterion(7, "aperture / inverse-aperture roundtrip on 2500 points", 1.0, request):
        worst = 0.0
        for psi in np.linspace(0.02, PI / 2, 50):
            for frac in np.linspace(0, 0.98, 50):
                phi = frac * psi
                back = inverse_aperture(projected_aperture(phi, psi), psi)
                worst = max(worst, abs(back - phi))
        assert worst <= 1e-10, worst


def test_criterion_8_enhanced_cbs(request):
    rng = np.random.default_rng(8)
    with criterion(8, "enhanced CBS condition: 10^4 x 10^2 extensions, no violation", 60.0, request):
        found = violations = 0
        while found < 10_000:
            n = int(rng.integers(2, 8))
            V = _subspace(rng, n, int(rng.integers(1, n)))
            W = V.complement()
            v = rng.standard_normal(n)
            alpha = rng.uniform(0.05, 0.95)
            u1 = project(V, rng.standard_normal(n)).parallel
            if not enhanced_cbs_condition(u1, v, V, alpha):
                continue
            found += 1
            U = u1 + (rng.standard_normal((100, W.dim)) * 10 ** rng.uniform(-3, 3, (100, 1))) @ W.basis
            lhs = U @ v
            rhs = alpha * np.linalg.norm(U, axis=1) * np.linalg.norm(v)
            violations += int(np.sum(lhs >= rhs))
        assert violations == 0, violations


def test_criterion_9_three_dimensional_formula(request):
    with criterion(9, "planar-projection formula agrees with the general one in R^3", 5.0, request):
        V = SubspaceBasis.coordinate([0, 1], 3)
        worst = 0.0
        for gamma in np.linspace(0.05, PI / 2 - 0.05, 10):
            v = np.array([math.cos(gamma), 0.0, math.sin(gamma)])
            to_plane = angle_to_subspace(v, V)
            for phi in np.linspace(0, PI / 2 - gamma - 1e-3, 10):
                s2 = math.sin(to_plane) ** 2
                planar = math.acos(math.sqrt((math.cos(phi) ** 2 - s2) / (1 - s2)))
                c = classify(RoundCone.at_origin(v, phi), V)
                assert c.tag is ProjectionTag.CLOSED_CONE
                worst = max(worst, abs(c.projected_aperture - planar))
        assert worst <= 1e-12, worst


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
