"""Batch verification over generated instances.

Every function here runs the same array kernels as the single-instance API,
over whole :class:`~qlra.datagen.InstanceBatch` objects.
"""
from __future__ import annotations

import numpy as np

from .datagen import (
    GenerationConstraints,
    GeneratedInstance,
    estimate_arrays,
    doubly_stochastic,
    generate_batch,
    sample_counts,
)
from .engine import amplitudes, basis_matrix, born_arrays
from .equivalence import (
    EPS_EQUIV,
    EPS_SYM,
    IDENTITY_NAMES,
    classify_match,
    identity_arrays,
    overlap_arrays,
    representation_arrays,
    symmetric_arrays,
)
from .probmodel import EPS_NUM, interference_lambda, is_trigonometric, phases_from_lambda

_EYE = np.eye(2)


def _max(x) -> float:
    return float(np.max(x)) if np.size(x) else 0.0


def born_sweep(batch, tol: float = EPS_NUM) -> dict:
    """Born residuals, orthonormality and lambda antisymmetry over a batch."""
    rep = representation_arrays(batch.pa, batch.pb, batch.P_ba, batch.P_ab, tol)
    rt_ba, rc_ba = born_arrays(rep["psi_ba"], batch.P_ba, batch.pa, batch.pb)
    rt_ab, rc_ab = born_arrays(rep["psi_ab"], batch.P_ab, batch.pb, batch.pa)
    B_ba = basis_matrix(batch.P_ba)
    B_ab = basis_matrix(batch.P_ab)
    gram = np.maximum(
        np.abs(np.swapaxes(B_ba, -1, -2) @ B_ba - _EYE).max(axis=(-2, -1)),
        np.abs(np.swapaxes(B_ab, -1, -2) @ B_ab - _EYE).max(axis=(-2, -1)),
    )
    # the map is the b|a basis matrix; it must send each conjugate basis vector to e_j
    unitary = np.abs(np.swapaxes(B_ba, -1, -2) @ B_ba - _EYE).max(axis=(-2, -1))
    image = np.abs(B_ba @ B_ba - _EYE).max(axis=(-2, -1))
    norm = np.abs(np.linalg.norm(rep["psi_ba"], axis=-1) - 1.0)
    norm = np.maximum(norm, np.abs(np.linalg.norm(rep["psi_ab"], axis=-1) - 1.0))
    return {
        "n": len(batch),
        "all_trigonometric": bool(np.all(rep["trigonometric"])),
        "born_target_ba": _max(rt_ba),
        "born_conjugate_ba": _max(rc_ba),
        "born_target_ab": _max(rt_ab),
        "born_conjugate_ab": _max(rc_ab),
        "gram_deviation": _max(gram),
        "unitary_deviation": _max(unitary),
        "basis_image_deviation": _max(image),
        "norm_deviation": _max(norm),
        "lambda_sum_ba": _max(np.abs(rep["lam_ba"].sum(axis=-1))),
        "lambda_sum_ab": _max(np.abs(rep["lam_ab"].sum(axis=-1))),
    }


def theorem_arrays(batch, tol=EPS_NUM, equiv_tol=EPS_EQUIV, sym_tol=EPS_SYM) -> dict:
    rep = representation_arrays(batch.pa, batch.pb, batch.P_ba, batch.P_ab, tol)
    d, c, gd, gc = overlap_arrays(rep["mapped"], rep["psi_ab"])
    kind = classify_match(d, c, equiv_tol)
    symmetric = symmetric_arrays(batch.P_ba, batch.P_ab, sym_tol)
    equivalent = kind != 2
    overlap = np.where(kind == 0, d, np.where(kind == 1, c, np.maximum(d, c)))
    gamma = np.where(kind == 0, gd, np.where(kind == 1, gc, np.nan))
    return {
        "rep": rep,
        "direct": d,
        "conjugate": c,
        "kind": kind,
        "overlap": overlap,
        "gamma": gamma,
        "symmetric": symmetric,
        "equivalent": equivalent,
        "violation": equivalent != symmetric,
    }


def theorem_sweep(batch, **tols) -> dict:
    t = theorem_arrays(batch, **tols)
    kind = t["kind"]
    return {
        "n": len(batch),
        "symmetric": int(t["symmetric"].sum()),
        "equivalent": int(t["equivalent"].sum()),
        "direct": int((kind == 0).sum()),
        "conjugate": int((kind == 1).sum()),
        "none": int((kind == 2).sum()),
        "violations": int(t["violation"].sum()),
        "min_overlap": float(np.min(t["overlap"])),
        "median_overlap": float(np.median(t["overlap"])),
        "max_overlap": float(np.max(t["overlap"])),
    }


def identity_sweep(batch) -> dict:
    res = identity_arrays(batch.pa, batch.pb, batch.P_ba, batch.P_ab)
    return {name: _max(res[name]) for name in IDENTITY_NAMES}


def empirical_residuals(instance: GeneratedInstance, N: int, reps: int, rng, tol: float = EPS_NUM):
    """Max Born residual (against the true data) of ``reps`` count-estimated pipelines.

    Hyperbolic estimates come back as NaN.
    """
    C = instance.context
    a, ba, b, ab = sample_counts(
        rng, C.pa, C.pb, instance.P_ba.entries, instance.P_ab.entries, N, size=reps
    )
    pa, pb, p, q = estimate_arrays(a, ba, b, ab, N)
    P_ba = doubly_stochastic(p)
    P_ab = doubly_stochastic(q)
    true_pa = np.broadcast_to(np.array(C.pa), pa.shape)
    true_pb = np.broadcast_to(np.array(C.pb), pb.shape)
    out = np.zeros(reps)
    for cond, target, P, t_cond, t_target in (
        (pa, pb, P_ba, true_pa, true_pb),
        (pb, pa, P_ab, true_pb, true_pa),
    ):
        lam, _ = interference_lambda(cond, P, target)
        theta1, _ = phases_from_lambda(lam[..., 0], tol)
        psi = amplitudes(cond, P, theta1)
        r_t, r_c = born_arrays(psi, P, t_cond, t_target)
        r = np.maximum(r_t.max(axis=-1), r_c.max(axis=-1))
        r = np.where(is_trigonometric(lam, tol), r, np.nan)
        out = np.maximum(out, r)
    return out


def convergence_study(
    instance: GeneratedInstance,
    sizes=(10**3, 10**4, 10**5, 10**6),
    reps: int = 100,
    seed: int = 0,
) -> dict:
    """Mean Born residual per sample size and the log-log slope."""
    rng = np.random.Generator(np.random.PCG64(seed))
    means = []
    hyperbolic = []
    for N in sizes:
        r = empirical_residuals(instance, N, reps, rng)
        hyperbolic.append(int(np.isnan(r).sum()))
        means.append(float(np.nanmean(r)))
    slope, intercept = np.polyfit(np.log10(sizes), np.log10(means), 1)
    return {
        "sizes": list(sizes),
        "reps": reps,
        "mean_residual": means,
        "hyperbolic_estimates": hyperbolic,
        "slope": float(slope),
        "intercept": float(intercept),
    }


def verify(seed: int, trials: int, tol: float = EPS_NUM) -> dict:
    """Full property sweep: Born rule, symmetry-iff-equivalence both ways, proof identities.

    Three independent streams are spawned from ``seed`` (general,
    symmetric, asymmetric with ``|p - p_ab| >= 0.01``).
    """
    s_general, s_sym, s_asym = (
        int(c.generate_state(1, np.uint64)[0]) for c in np.random.SeedSequence(seed).spawn(3)
    )
    general = generate_batch(s_general, trials)
    sym = generate_batch(s_sym, trials, GenerationConstraints(symmetric=True))
    asym = generate_batch(s_asym, trials, GenerationConstraints(min_asymmetry=0.01))
    born = born_sweep(general, tol)
    positive = theorem_sweep(sym, tol=tol)
    negative = theorem_sweep(asym, tol=tol)
    identities = identity_sweep(sym)
    checks = {
        "born_rule": max(born[k] for k in born if k.startswith("born_")) < tol,
        "orthonormality": max(born["gram_deviation"], born["unitary_deviation"]) < tol,
        "lambda_antisymmetry": max(born["lambda_sum_ba"], born["lambda_sum_ab"]) < tol,
        "theorem_positive": positive["violations"] == 0,
        "theorem_negative": negative["violations"] == 0,
        "proof_identities": max(identities.values()) < tol,
    }
    return {
        "seed": seed,
        "trials": trials,
        "tol": tol,
        "born": born,
        "theorem_symmetric": positive,
        "theorem_asymmetric": negative,
        "identities_symmetric": identities,
        "checks": checks,
        "violations": positive["violations"] + negative["violations"],
    }
