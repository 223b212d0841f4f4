import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qlra.datagen import (
    EPS_GEN,
    CountTable,
    GenerationConstraints,
    empirical_pipeline,
    estimate_from_counts,
    generate,
    generate_batch,
    simulate_counts,
    spawn_seeds,
)
from qlra.equivalence import theorem_check
from qlra.exceptions import GenerationExhausted
from qlra.probmodel import EPS_NUM, interference_coefficients


def test_forced_zero_interference():
    inst = generate(5, GenerationConstraints(theta=math.pi / 2, p=0.5, pa=0.5))
    assert inst.context.pb == pytest.approx((0.5, 0.5), abs=1e-15)
    assert inst.theta_b1 == math.pi / 2


@given(st.integers(0, 2**64 - 1))
@settings(max_examples=50)
def test_instances_round_trip(seed):
    inst = generate(seed)
    prof = interference_coefficients(inst.context, inst.P_ba)
    assert prof.is_trigonometric
    assert prof.theta[0] == pytest.approx(inst.theta_b1, abs=1e-7)
    assert math.cos(prof.theta[0]) == pytest.approx(math.cos(inst.theta_b1), abs=EPS_NUM)
    assert interference_coefficients(inst.context, inst.P_ab).is_trigonometric
    assert min(inst.context.pb) >= EPS_GEN


def test_forced_symmetry_is_equivalent():
    inst = generate(8, GenerationConstraints(symmetric=True))
    assert inst.P_ba.p == inst.P_ab.p
    assert theorem_check(inst.context, inst.P_ba, inst.P_ab).phase_equivalent


def test_generation_is_deterministic():
    a = generate(123)
    b = generate(123)
    assert a.to_dict() == b.to_dict()
    b1 = generate_batch(9, 100)
    b2 = generate_batch(9, 100)
    np.testing.assert_array_equal(b1.pb, b2.pb)
    assert generate(124).to_dict() != a.to_dict()


def test_batch_respects_asymmetry():
    batch = generate_batch(1, 500, GenerationConstraints(min_asymmetry=0.01))
    assert len(batch) == 500
    assert np.all(np.abs(batch.P_ba[:, 0, 0] - batch.P_ab[:, 0, 0]) >= 0.01)


def test_empty_region_exhausts():
    # p = p_ab with a mandatory gap can never be satisfied
    c = GenerationConstraints(p=0.4, p_ab=0.4, min_asymmetry=0.1)
    with pytest.raises(GenerationExhausted):
        generate(0, c)


def test_constraints_reject_out_of_range():
    with pytest.raises(ValueError):
        GenerationConstraints(p=(0.0, 0.5))
    with pytest.raises(ValueError):
        GenerationConstraints(theta=(0.0, 4.0))


def test_spawn_seeds_are_stable():
    assert spawn_seeds(42, 3) == spawn_seeds(42, 3)
    assert len(set(spawn_seeds(42, 3))) == 3


def test_single_sample():
    table = simulate_counts(generate(2), 1, seed=0)
    assert sorted(table.a_counts.tolist()) == [0, 1]
    assert table.b_given_a.sum() == 1
    with pytest.raises(ValueError):
        simulate_counts(generate(2), 0, seed=0)


def test_uniform_frequencies_converge():
    inst = generate(1, GenerationConstraints(theta=math.pi / 2, p=0.5, p_ab=0.5, pa=0.5))
    table = simulate_counts(inst, 10**6, seed=17)
    # binomial standard error at N = 1e6 is 5e-4; 0.005 is a 10 sigma band
    for freq in (table.a_counts / 1e6, table.b_counts / 1e6, table.b_given_a[:, 0] / table.a_counts[0]):
        assert np.all(np.abs(freq - 0.5) < 0.005)


def test_count_table_consistency_checked():
    with pytest.raises(ValueError):
        CountTable(10, [5, 5], [[3, 2], [2, 2]], [5, 5], [[2, 3], [3, 2]])


def test_estimates_are_valid_and_close():
    inst = generate(4, GenerationConstraints(p=0.7, p_ab=0.6, pa=0.6, theta=1.0))
    table = simulate_counts(inst, 10**5, seed=3)
    C, P_ba, P_ab = estimate_from_counts(table)
    assert P_ba.is_doubly_stochastic and P_ab.is_doubly_stochastic
    assert P_ba.p == pytest.approx(0.7, abs=0.01)
    assert P_ab.p == pytest.approx(0.6, abs=0.01)
    assert C.pa[0] == pytest.approx(0.6, abs=0.01)


def test_estimate_floor_keeps_positivity():
    table = CountTable(4, [4, 0], [[4, 0], [0, 0]], [4, 0], [[4, 0], [0, 0]])
    C, P_ba, _ = estimate_from_counts(table)
    assert min(C.pa) > 0 and min(P_ba.entries.ravel()) > 0


def test_empirical_pipeline_residuals_shrink():
    inst = generate(4, GenerationConstraints(p=0.7, p_ab=0.7, pa=0.6, theta=1.2))
    small = empirical_pipeline(inst, simulate_counts(inst, 10**3, seed=1))
    large = empirical_pipeline(inst, simulate_counts(inst, 10**6, seed=1))
    assert not small.errors and not large.errors
    assert large.max_residual() < small.max_residual()
    assert large.max_residual() < 0.01
