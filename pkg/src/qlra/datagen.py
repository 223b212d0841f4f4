"""Random trigonometric contexts and finite-sample count simulation.

Instances are built forward: draw a transition parameter, the a-marginal and
a phase, then compute the b-marginal from the interference formula. Draws
that leave the open unit interval by less than ``EPS_GEN`` or whose a|b side
is hyperbolic are rejected.

Randomness comes from numpy's PCG64 bit generator (``RNG_ALGORITHM``) seeded
with the caller's 64-bit integer. Child seeds for parallel batches are
derived with ``numpy.random.SeedSequence(seed).spawn(n)``, taking the first
64-bit word of each child's state (:func:`spawn_seeds`).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import born_residuals, build_state
from .exceptions import GenerationExhausted
from .probmodel import (
    EPS_NUM,
    EPS_POS,
    ContextData,
    Orientation,
    TransitionMatrix,
    interference_forward,
    interference_lambda,
    is_trigonometric,
)

EPS_GEN = 1e-6
MAX_RESAMPLES = 10**6
RNG_ALGORITHM = "numpy.PCG64"


def _as_range(value, name):
    lo, hi = (value, value) if np.isscalar(value) else tuple(value)
    if lo > hi:
        raise ValueError(f"{name} range is empty: {value!r}")
    return float(lo), float(hi)


@dataclass(frozen=True)
class GenerationConstraints:
    """Sampling box for :func:`generate`.

    Each range is a ``(low, high)`` pair or a single number to pin the value.
    ``symmetric`` forces ``p_ab == p``; ``min_asymmetry`` rejects draws with
    ``|p - p_ab|`` below it.
    """

    theta: tuple = (0.0, np.pi)
    p: tuple = (0.01, 0.99)
    p_ab: tuple = (0.01, 0.99)
    pa: tuple = (0.01, 0.99)
    symmetric: bool = False
    min_asymmetry: float = 0.0

    def __post_init__(self):
        for name in ("p", "p_ab", "pa"):
            lo, hi = _as_range(getattr(self, name), name)
            if lo <= 0.0 or hi >= 1.0:
                raise ValueError(f"{name} range must lie inside (0, 1)")
            object.__setattr__(self, name, (lo, hi))
        lo, hi = _as_range(self.theta, "theta")
        if lo < 0.0 or hi > np.pi:
            raise ValueError("theta range must lie inside [0, pi]")
        object.__setattr__(self, "theta", (lo, hi))
        if self.symmetric and self.min_asymmetry > 0:
            raise ValueError("symmetric and min_asymmetry are incompatible")

    def to_dict(self) -> dict:
        return {
            "theta": list(self.theta),
            "p": list(self.p),
            "p_ab": list(self.p_ab),
            "pa": list(self.pa),
            "symmetric": self.symmetric,
            "min_asymmetry": self.min_asymmetry,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GenerationConstraints":
        return cls(**d)


@dataclass(frozen=True)
class GeneratedInstance:
    context: ContextData
    P_ba: TransitionMatrix
    P_ab: TransitionMatrix
    theta_b1: float
    lam: tuple
    seed: int
    algorithm: str = RNG_ALGORITHM

    def to_dict(self) -> dict:
        return {
            "pa": list(self.context.pa),
            "pb": list(self.context.pb),
            "p_ba": self.P_ba.tolist(),
            "p_ab": self.P_ab.tolist(),
            "truth": {"theta_b1": self.theta_b1, "lambda": list(self.lam)},
            "seed": self.seed,
            "rng": self.algorithm,
        }


@dataclass
class InstanceBatch:
    """Column-wise batch of generated instances (arrays over the first axis)."""

    pa: np.ndarray
    pb: np.ndarray
    P_ba: np.ndarray
    P_ab: np.ndarray
    theta_b1: np.ndarray
    seed: int
    draws: int = 0

    def __len__(self):
        return len(self.theta_b1)

    def instance(self, i: int) -> GeneratedInstance:
        C = ContextData(tuple(self.pa[i]), tuple(self.pb[i]))
        P_ba = TransitionMatrix.from_parameter(self.P_ba[i, 0, 0], Orientation.B_GIVEN_A)
        P_ab = TransitionMatrix.from_parameter(self.P_ab[i, 0, 0], Orientation.A_GIVEN_B)
        lam, _ = interference_lambda(self.pa[i], self.P_ba[i], self.pb[i])
        return GeneratedInstance(C, P_ba, P_ab, float(self.theta_b1[i]), tuple(lam.tolist()), self.seed)


def doubly_stochastic(p):
    """Stack parameters ``p`` (any shape) into ``[[p, 1-p], [1-p, p]]`` matrices."""
    p = np.asarray(p, dtype=float)
    return np.stack([np.stack([p, 1.0 - p], -1), np.stack([1.0 - p, p], -1)], -2)


def spawn_seeds(seed: int, n: int) -> list:
    return [int(c.generate_state(1, np.uint64)[0]) for c in np.random.SeedSequence(seed).spawn(n)]


def _draw(rng, c: GenerationConstraints, n: int):
    p = rng.uniform(*c.p, size=n)
    q = p.copy() if c.symmetric else rng.uniform(*c.p_ab, size=n)
    a1 = rng.uniform(*c.pa, size=n)
    theta = rng.uniform(*c.theta, size=n)
    pa = np.stack([a1, 1.0 - a1], -1)
    P_ba = doubly_stochastic(p)
    P_ab = doubly_stochastic(q)
    b1 = interference_forward(pa, P_ba, theta)
    pb = np.stack([b1, 1.0 - b1], -1)
    ok = (b1 >= EPS_GEN) & (b1 <= 1.0 - EPS_GEN)
    ok &= np.abs(p - q) >= c.min_asymmetry
    with np.errstate(invalid="ignore"):
        lam_ab, _ = interference_lambda(pb, P_ab, pa)
    ok &= is_trigonometric(lam_ab, 0.0)
    return ok, pa, pb, P_ba, P_ab, theta


def generate_batch(seed: int, n: int, constraints: GenerationConstraints | None = None) -> InstanceBatch:
    """Draw ``n`` accepted instances from one PCG64 stream.

    Deterministic given ``(seed, n, constraints)``. Raises
    :class:`GenerationExhausted` when ``MAX_RESAMPLES`` consecutive draws are
    all rejected.
    """
    c = constraints or GenerationConstraints()
    rng = np.random.Generator(np.random.PCG64(seed))
    parts = []
    have = 0
    draws = 0
    since_accept = 0
    chunk = max(64, int(1.5 * n))
    while have < n:
        ok, *cols = _draw(rng, c, chunk)
        draws += chunk
        k = int(ok.sum())
        if k:
            parts.append([col[ok] for col in cols])
            have += k
            since_accept = 0
        else:
            since_accept += chunk
            if since_accept >= MAX_RESAMPLES:
                raise GenerationExhausted(
                    f"no acceptable instance in {since_accept} draws; constraints {c.to_dict()}"
                )
        chunk = max(64, int(1.5 * (n - have) * draws / max(have, 1)))
    pa, pb, P_ba, P_ab, theta = (np.concatenate(col)[:n] for col in zip(*parts))
    return InstanceBatch(pa, pb, P_ba, P_ab, theta, seed, draws)


def generate(seed: int, constraints: GenerationConstraints | None = None) -> GeneratedInstance:
    """One instance drawn by rejection from the constraint box.

    Candidates are drawn in blocks of 256 and the first accepted one is
    returned, so the result depends only on ``(seed, constraints)``.
    """
    c = constraints or GenerationConstraints()
    rng = np.random.Generator(np.random.PCG64(seed))
    chunk = 256
    for start in range(0, MAX_RESAMPLES, chunk):
        ok, *cols = _draw(rng, c, chunk)
        hits = np.flatnonzero(ok)
        if hits.size:
            i = hits[:1]
            batch = InstanceBatch(*(col[i] for col in cols), seed, start + int(i[0]) + 1)
            return batch.instance(0)
    raise GenerationExhausted(f"no acceptable instance in {MAX_RESAMPLES} draws")


@dataclass(frozen=True)
class CountTable:
    """Outcome counts from two measurement runs of ``N`` trials each.

    In the a-first run ``a_counts[alpha]`` trials gave ``a = alpha`` and
    ``b_given_a[beta, alpha]`` of those were followed by ``b = beta``; the
    b-first run is the mirror image (``b_counts``, ``a_given_b``).
    """

    N: int
    a_counts: np.ndarray
    b_given_a: np.ndarray
    b_counts: np.ndarray
    a_given_b: np.ndarray

    def __post_init__(self):
        for name in ("a_counts", "b_given_a", "b_counts", "a_given_b"):
            arr = np.array(getattr(self, name), dtype=np.int64)
            if np.any(arr < 0):
                raise ValueError(f"{name} has negative counts")
            object.__setattr__(self, name, arr)
        if (
            self.a_counts.sum() != self.N
            or self.b_counts.sum() != self.N
            or np.any(self.b_given_a.sum(axis=0) != self.a_counts)
            or np.any(self.a_given_b.sum(axis=0) != self.b_counts)
        ):
            raise ValueError("inconsistent count table")

    def to_dict(self) -> dict:
        return {
            "N": int(self.N),
            "a_counts": self.a_counts.tolist(),
            "b_given_a": self.b_given_a.tolist(),
            "b_counts": self.b_counts.tolist(),
            "a_given_b": self.a_given_b.tolist(),
        }


def _conditional_counts(rng, first, P):
    """Second-outcome counts per first outcome; ``first`` shape ``(..., 2)``."""
    second_1 = rng.binomial(first, P[..., 0, :])
    return np.stack([second_1, first - second_1], -2)


def sample_counts(rng, pa, pb, P_ba, P_ab, N, size=None):
    """Vectorised count simulation; returns the four count arrays."""
    pa = np.asarray(pa)
    pb = np.asarray(pb)
    a1 = rng.binomial(N, pa[..., 0], size=size)
    a = np.stack([a1, N - a1], -1)
    b1 = rng.binomial(N, pb[..., 0], size=size)
    b = np.stack([b1, N - b1], -1)
    return a, _conditional_counts(rng, a, np.asarray(P_ba)), b, _conditional_counts(rng, b, np.asarray(P_ab))


def simulate_counts(instance: GeneratedInstance, N: int, seed: int) -> CountTable:
    """Simulate both measurement runs with ``N`` trials each.

    Binomial draws give the same distribution as drawing the ``N``
    outcomes one at a time.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    C = instance.context
    a, ba, b, ab = sample_counts(rng, C.pa, C.pb, instance.P_ba.entries, instance.P_ab.entries, N)
    return CountTable(N, a, ba, b, ab)


# twice EPS_POS so that the complement 1 - p also clears EPS_POS after rounding
ESTIMATE_FLOOR = 2 * EPS_POS


def _floor_pair(counts, N):
    p1 = np.clip(np.asarray(counts, dtype=float)[..., 0] / N, ESTIMATE_FLOOR, 1.0 - ESTIMATE_FLOOR)
    return np.stack([p1, 1.0 - p1], -1)


def _doubly_stochastic_mle(cond_counts, N):
    # Under [[p, 1-p], [1-p, p]] the likelihood is p^(n11 + n22) (1-p)^(n12 + n21).
    cond_counts = np.asarray(cond_counts)
    p = (cond_counts[..., 0, 0] + cond_counts[..., 1, 1]) / N
    return np.clip(p, ESTIMATE_FLOOR, 1.0 - ESTIMATE_FLOOR)


def estimate_arrays(a, ba, b, ab, N):
    """Vectorised maximum-likelihood estimates ``(pa, pb, p_ba, p_ab)``."""
    return _floor_pair(a, N), _floor_pair(b, N), _doubly_stochastic_mle(ba, N), _doubly_stochastic_mle(ab, N)


def estimate_from_counts(table: CountTable):
    """Frequencies floored at ``ESTIMATE_FLOOR``, and doubly stochastic MLE matrices."""
    pa, pb, p, q = estimate_arrays(
        table.a_counts, table.b_given_a, table.b_counts, table.a_given_b, table.N
    )
    C = ContextData(tuple(pa.tolist()), tuple(pb.tolist()))
    return (
        C,
        TransitionMatrix.from_parameter(float(p), Orientation.B_GIVEN_A),
        TransitionMatrix.from_parameter(float(q), Orientation.A_GIVEN_B),
    )


@dataclass
class EmpiricalReport:
    table: CountTable
    context: ContextData
    P_ba: TransitionMatrix
    P_ab: TransitionMatrix
    residuals: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    def max_residual(self) -> float:
        vals = [max(max(r[0]), max(r[1])) for r in self.residuals.values()]
        return max(vals) if vals else float("nan")


def empirical_pipeline(instance: GeneratedInstance, table: CountTable, tol: float = EPS_NUM) -> EmpiricalReport:
    """Estimate data from counts, rebuild both states, score them against the truth."""
    C, P_ba, P_ab = estimate_from_counts(table)
    report = EmpiricalReport(table, C, P_ba, P_ab)
    for P in (P_ba, P_ab):
        try:
            state = build_state(C, P, tol=tol)
        except Exception as exc:  # hyperbolic estimates at small N
            report.errors[P.orientation.value] = getattr(exc, "code", type(exc).__name__)
            continue
        report.residuals[P.orientation.value] = born_residuals(state, instance.context)
    return report
