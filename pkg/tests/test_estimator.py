import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from qlra.datagen import GenerationConstraints, generate, generate_batch, simulate_counts
from qlra.engine import build_state
from qlra.estimator import FrequencyEstimator, QuantumLikeRepresentation
from qlra.exceptions import NotStrictlyPositive, NotTrigonometric
from qlra.probmodel import EPS_NUM


def rows(batch, conditioning="b|a"):
    p = batch.P_ba[:, 0, 0] if conditioning == "b|a" else batch.P_ab[:, 0, 0]
    return np.column_stack([batch.pa[:, 0], batch.pb[:, 0], p])


def test_params_round_trip():
    est = QuantumLikeRepresentation(conditioning="a|b", on_hyperbolic="nan")
    assert est.get_params() == {"conditioning": "a|b", "on_hyperbolic": "nan", "tol": EPS_NUM}
    assert clone(est).get_params() == est.get_params()


@pytest.mark.parametrize("conditioning", ["b|a", "a|b"])
def test_transform_matches_single_instance_api(conditioning):
    batch = generate_batch(2, 50)
    X = rows(batch, conditioning)
    psi = QuantumLikeRepresentation(conditioning=conditioning).fit_transform(X)
    assert psi.shape == (50, 2)
    for i in (0, 17, 49):
        inst = batch.instance(i)
        P = inst.P_ba if conditioning == "b|a" else inst.P_ab
        np.testing.assert_allclose(psi[i], build_state(inst.context, P).amp, atol=1e-14)


def test_born_residuals_small():
    X = rows(generate_batch(4, 200))
    r = QuantumLikeRepresentation().fit(X).born_residuals(X)
    assert r.shape == (200, 4)
    assert r.max() < EPS_NUM


def test_hyperbolic_rows():
    X = np.array([[0.5, 0.5, 0.5], [0.9, 0.9, 0.5]])
    with pytest.raises(NotTrigonometric):
        QuantumLikeRepresentation().fit_transform(X)
    psi = QuantumLikeRepresentation(on_hyperbolic="nan").fit_transform(X)
    assert np.all(np.isfinite(psi[0])) and np.all(np.isnan(psi[1]))


def test_input_validation():
    est = QuantumLikeRepresentation()
    with pytest.raises(NotFittedError):
        est.transform([[0.5, 0.5, 0.5]])
    with pytest.raises(NotStrictlyPositive):
        est.fit([[0.0, 0.5, 0.5]])
    with pytest.raises(ValueError):
        est.fit([[0.5, 0.5]])
    with pytest.raises(ValueError):
        QuantumLikeRepresentation(on_hyperbolic="ignore").fit([[0.5, 0.5, 0.5]])


def test_in_pipeline():
    X = rows(generate_batch(6, 20))
    pipe = make_pipeline(QuantumLikeRepresentation(), FunctionTransformer(np.abs))
    out = pipe.fit_transform(X)
    np.testing.assert_allclose(out**2, np.column_stack([X[:, 1], 1 - X[:, 1]]), atol=1e-12)


def test_frequency_estimator():
    inst = generate(4, GenerationConstraints(p=0.7, p_ab=0.7, pa=0.6, theta=1.2))
    table = simulate_counts(inst, 10**5, seed=8)
    est = FrequencyEstimator().fit(table)
    assert est.n_samples_ == 10**5
    assert est.transition_ba_.p == pytest.approx(0.7, abs=0.01)
    s = est.state("a|b")
    assert s.rep.value == "a|b"
    assert est.interference_profile().is_trigonometric
    refit = FrequencyEstimator().fit(table.to_dict())
    assert refit.context_ == est.context_
    with pytest.raises(NotFittedError):
        FrequencyEstimator().state()
