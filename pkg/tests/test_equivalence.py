import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import circular_distance, inner, phase_grid_oracle
from qlra.datagen import GenerationConstraints, generate, generate_batch
from qlra.engine import build_state, conjugate_basis
from qlra.equivalence import (
    EPS_EQUIV,
    IDENTITY_NAMES,
    MatchKind,
    phase_equivalent,
    proof_identity_suite,
    theorem_check,
    unitary_map,
)
from qlra.exceptions import NotTrigonometric, TheoremViolation
from qlra.probmodel import EPS_NUM, ContextData, TransitionMatrix

STEPS = 10_000
GRID_BOUND = math.pi / STEPS + 1e-9


def pair(p, q):
    return TransitionMatrix.from_parameter(p, "b|a"), TransitionMatrix.from_parameter(q, "a|b")


def test_unitary_hadamard():
    U = unitary_map(TransitionMatrix.from_parameter(0.5))
    np.testing.assert_allclose(U.m, np.array([[1, 1], [1, -1]]) / math.sqrt(2))
    assert U.deviation() < 1e-15


def test_unitary_maps_basis_vector():
    U = unitary_map(TransitionMatrix.from_parameter(0.7))
    np.testing.assert_allclose(U([math.sqrt(0.7), math.sqrt(0.3)]), [1.0, 0.0], atol=EPS_NUM)


@given(st.floats(1e-6, 1 - 1e-6))
def test_unitary_properties(p):
    P = TransitionMatrix.from_parameter(p)
    U = unitary_map(P)
    assert U.deviation() < EPS_NUM
    assert np.linalg.det(U.m) == pytest.approx(-1.0, abs=EPS_NUM)
    B = conjugate_basis(P)
    np.testing.assert_allclose(U(B.v1), [1, 0], atol=EPS_NUM)
    np.testing.assert_allclose(U(B.v2), [0, 1], atol=EPS_NUM)


def test_phase_equivalent_identity():
    s = build_state(ContextData.from_first(0.3, 0.6), TransitionMatrix.from_parameter(0.8))
    ok, gamma, kind, overlap = phase_equivalent(s, s)
    assert ok and kind is MatchKind.DIRECT
    assert gamma == pytest.approx(0.0, abs=1e-12) or gamma == pytest.approx(2 * math.pi, abs=1e-12)
    assert overlap == pytest.approx(1.0)


def test_phase_equivalent_pure_phase():
    s = build_state(ContextData.from_first(0.3, 0.6), TransitionMatrix.from_parameter(0.8))
    ok, gamma, kind, _ = phase_equivalent(s.amp, 1j * s.amp)
    assert ok and kind is MatchKind.DIRECT
    assert gamma == pytest.approx(math.pi / 2)


def test_phase_equivalent_orthogonal():
    ok, gamma, kind, overlap = phase_equivalent([1, 0], [0, 1])
    assert not ok and gamma is None and kind is MatchKind.NONE
    assert overlap == 0.0


def test_phase_equivalent_conjugate():
    u = np.array([0.6, 0.8 * np.exp(0.7j)])
    ok, gamma, kind, _ = phase_equivalent(u, np.exp(0.3j) * np.conj(u))
    assert ok and kind is MatchKind.CONJUGATE
    assert gamma == pytest.approx(2 * math.pi - 0.3)


def test_uniform_everything_equivalent():
    report = theorem_check(ContextData.from_first(0.5, 0.5), *pair(0.5, 0.5))
    assert report.matrices_symmetric and report.phase_equivalent
    assert max(report.identity_residuals.values()) < 1e-15


def test_symmetric_pairs_agree_with_grid_oracle():
    batch = generate_batch(3, 40, GenerationConstraints(p=0.7, p_ab=0.7))
    u, v, reports = [], [], []
    for i in range(len(batch)):
        inst = batch.instance(i)
        report = theorem_check(inst.context, inst.P_ba, inst.P_ab)
        assert report.phase_equivalent and report.match_kind is not MatchKind.NONE
        reports.append(report)
        u.append(unitary_map(inst.P_ba)(build_state(inst.context, inst.P_ba).amp))
        v.append(build_state(inst.context, inst.P_ab).amp)
    dist, gamma, kind = phase_grid_oracle(u, v, STEPS)
    assert np.all(dist <= GRID_BOUND)
    for i, report in enumerate(reports):
        ok, g, _, _ = phase_equivalent(u[i], v[i] if kind[i] == 0 else np.conj(v[i]))
        assert ok and circular_distance(g, gamma[i]) <= 2 * math.pi / STEPS


def test_asymmetric_pair_not_equivalent():
    C = ContextData((0.6, 0.4), (0.55, 0.45))
    report = theorem_check(C, *pair(0.3, 0.6))
    assert not report.matrices_symmetric
    assert not report.phase_equivalent
    assert report.overlap < 1 - EPS_EQUIV
    u = unitary_map(pair(0.3, 0.6)[0])(build_state(C, pair(0.3, 0.6)[0]).amp)
    v = build_state(C, pair(0.3, 0.6)[1]).amp
    dist, _, _ = phase_grid_oracle([u], [v], STEPS)
    assert dist[0] > 10 * GRID_BOUND
    assert report.overlap == pytest.approx(max(abs(inner(list(u), list(v))), abs(inner(list(u), list(np.conj(v))))))


def test_hyperbolic_side_propagates():
    with pytest.raises(NotTrigonometric):
        theorem_check(ContextData.from_first(0.9, 0.9), *pair(0.5, 0.5))


def test_cosine_coincidence_violates_only_if_direction():
    # pa uniform makes the cosine condition symmetric under p -> 1 - p, so
    # p = 0.3 and p_ab = 0.7 give conjugate-equivalent states
    a1, p, theta = 0.5, 0.3, 1.2
    b1 = a1 * p + (1 - a1) * (1 - p) + 2 * math.cos(theta) * math.sqrt(a1 * p * (1 - a1) * (1 - p))
    C = ContextData.from_first(a1, b1)
    report = theorem_check(C, *pair(p, 0.7), strict=False)
    assert not report.matrices_symmetric
    assert report.phase_equivalent and report.match_kind is MatchKind.CONJUGATE
    assert report.identity_residuals["symmetry_condition"] < 1e-15
    assert not report.theorem_holds
    with pytest.raises(TheoremViolation) as exc:
        theorem_check(C, *pair(p, 0.7))
    assert exc.value.report == report


def test_identity_suite_uniform():
    res = proof_identity_suite(ContextData.from_first(0.5, 0.5), *pair(0.5, 0.5))
    assert set(res) == set(IDENTITY_NAMES)
    assert max(res.values()) < 1e-15


def test_identity_suite_asymmetric_final_equality_fails():
    res = proof_identity_suite(ContextData((0.6, 0.4), (0.55, 0.45)), *pair(0.3, 0.6))
    assert res["symmetry_condition"] > EPS_NUM
    assert res["cos_match"] > EPS_NUM
    general = [k for k in IDENTITY_NAMES if k not in ("symmetry_condition", "cos_match")]
    assert max(res[k] for k in general) < EPS_NUM


def test_cos_match_claim():
    inst = generate(21, GenerationConstraints(symmetric=True))
    psi = build_state(inst.context, inst.P_ab).amp
    gamma = np.angle(psi)
    assert math.cos(gamma[1] - gamma[0]) == pytest.approx(math.cos(inst.theta_b1), abs=EPS_NUM)


@given(st.integers(0, 2**32))
def test_overlap_bounded(seed):
    inst = generate(seed)
    report = theorem_check(inst.context, inst.P_ba, inst.P_ab, strict=False)
    assert 0.0 <= report.overlap <= 1.0 + EPS_NUM
    assert report.phase_equivalent == (report.overlap >= 1 - EPS_EQUIV)
