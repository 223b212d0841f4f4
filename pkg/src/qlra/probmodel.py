"""Probabilistic data for a pair of dichotomous observables.

Holds the validated value types (transition matrices, context marginals,
interference profiles) and the interference-coefficient computation that
decides whether data admit a trigonometric (complex amplitude)
representation.

Index convention, for both orientations: ``entries[row, col]`` is
``P(row outcome | col outcome)``, so columns are indexed by the
conditioning observable and each column is a distribution.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DegenerateProduct,
    InvalidProbabilities,
    NotDoublyStochastic,
    NotStochastic,
    NotStrictlyPositive,
)

EPS_SUM = 1e-9
EPS_POS = 1e-12
EPS_NUM = 1e-10
TWO_PI = 2.0 * np.pi


class Orientation(str, enum.Enum):
    B_GIVEN_A = "b|a"
    A_GIVEN_B = "a|b"

    @property
    def mirrored(self) -> "Orientation":
        if self is Orientation.B_GIVEN_A:
            return Orientation.A_GIVEN_B
        return Orientation.B_GIVEN_A


class Classification(str, enum.Enum):
    TRIGONOMETRIC = "trigonometric"
    HYPERBOLIC = "hyperbolic"


def _as_orientation(value) -> Orientation:
    if isinstance(value, Orientation):
        return value
    try:
        return Orientation(value)
    except ValueError:
        return Orientation[str(value).upper()]


@dataclass(frozen=True)
class TransitionMatrix:
    """Validated 2x2 doubly stochastic matrix of conditional probabilities.

    Construct through :func:`validate_transition`; the constructor itself
    does not check anything.
    """

    entries: np.ndarray
    orientation: Orientation = Orientation.B_GIVEN_A

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "orientation", _as_orientation(self.orientation))

    @property
    def p(self) -> float:
        """The single parameter of the doubly stochastic form ``[[p, 1-p], [1-p, p]]``."""
        return float(self.entries[0, 0])

    @property
    def is_stochastic(self) -> bool:
        return bool(np.all(np.abs(self.entries.sum(axis=0) - 1.0) <= EPS_SUM))

    @property
    def is_doubly_stochastic(self) -> bool:
        return self.is_stochastic and bool(
            np.all(np.abs(self.entries.sum(axis=1) - 1.0) <= EPS_SUM)
        )

    @classmethod
    def from_parameter(cls, p: float, orientation=Orientation.B_GIVEN_A) -> "TransitionMatrix":
        return validate_transition([[p, 1.0 - p], [1.0 - p, p]], orientation)

    def tolist(self) -> list:
        return self.entries.tolist()


@dataclass(frozen=True)
class ContextData:
    """Marginals ``pa = (P(a=alpha1), P(a=alpha2))`` and ``pb`` likewise."""

    pa: tuple
    pb: tuple

    def __post_init__(self):
        pa = _check_pair(self.pa, "pa")
        pb = _check_pair(self.pb, "pb")
        object.__setattr__(self, "pa", pa)
        object.__setattr__(self, "pb", pb)

    @classmethod
    def from_first(cls, pa1: float, pb1: float) -> "ContextData":
        return cls((pa1, 1.0 - pa1), (pb1, 1.0 - pb1))

    def marginals(self, orientation) -> tuple:
        """Return ``(conditioning, target)`` marginals for a conditioning order."""
        if _as_orientation(orientation) is Orientation.B_GIVEN_A:
            return self.pa, self.pb
        return self.pb, self.pa


def _check_pair(values, name: str) -> tuple:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (2,) or not np.all(np.isfinite(arr)):
        raise InvalidProbabilities(f"{name} must be a pair of finite numbers, got {values!r}")
    if np.any(arr < EPS_POS):
        raise NotStrictlyPositive(f"{name} has an entry below {EPS_POS:g}: {arr.tolist()}")
    if abs(arr.sum() - 1.0) > EPS_SUM:
        raise InvalidProbabilities(f"{name} sums to {arr.sum()!r}, not 1")
    return (float(arr[0]), float(arr[1]))


@dataclass(frozen=True)
class InterferenceProfile:
    lam: tuple
    theta: tuple | None
    classification: Classification

    @property
    def is_trigonometric(self) -> bool:
        return self.classification is Classification.TRIGONOMETRIC


def validate_transition(raw, orientation=Orientation.B_GIVEN_A) -> TransitionMatrix:
    """Check that ``raw`` is a strictly positive doubly stochastic 2x2 matrix.

    Columns are checked first, so a matrix failing both tests reports
    ``NOT_STOCHASTIC``.
    """
    arr = np.asarray(raw, dtype=float)
    if arr.shape != (2, 2):
        raise InvalidProbabilities(f"transition matrix must be 2x2, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidProbabilities("transition matrix has non-finite entries")
    col = arr.sum(axis=0)
    if np.any(np.abs(col - 1.0) > EPS_SUM):
        raise NotStochastic(f"column sums {col.tolist()} differ from 1")
    row = arr.sum(axis=1)
    if np.any(np.abs(row - 1.0) > EPS_SUM):
        raise NotDoublyStochastic(f"row sums {row.tolist()} differ from 1")
    if np.any(arr < EPS_POS):
        raise NotStrictlyPositive(f"transition matrix has an entry below {EPS_POS:g}")
    return TransitionMatrix(arr, _as_orientation(orientation))


def classical_ftp(pa, P: TransitionMatrix) -> tuple:
    """Classical total probability ``sum_alpha pa[alpha] * P[beta, alpha]`` per beta."""
    weights = np.asarray(pa, dtype=float)[None, :] * P.entries
    out = weights.sum(axis=1)
    return (float(out[0]), float(out[1]))


def interference_lambda(cond, P, target):
    """Vectorised interference coefficients.

    ``cond`` and ``target`` have shape ``(..., 2)``, ``P`` has shape
    ``(..., 2, 2)`` with ``P[..., row, col] = P(row | col)``. Returns the
    coefficients with shape ``(..., 2)`` and the products under the square
    root (same shape), which callers use to guard degeneracy.
    """
    cond = np.asarray(cond, dtype=float)
    P = np.asarray(P, dtype=float)
    target = np.asarray(target, dtype=float)
    weights = cond[..., None, :] * P
    classical = weights.sum(axis=-1)
    product = weights[..., 0] * weights[..., 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = (target - classical) / (2.0 * np.sqrt(product))
    return lam, product


def phases_from_lambda(lam1, tol: float = EPS_NUM):
    """Canonical phase pair: ``theta1 = arccos(lam1)`` in [0, pi], ``theta2 = theta1 + pi``.

    Values of ``|lam1|`` up to ``1 + tol`` are clamped onto the unit
    interval; anything beyond comes back as NaN.
    """
    lam1 = np.asarray(lam1, dtype=float)
    inside = np.abs(lam1) <= 1.0 + tol
    theta1 = np.where(inside, np.arccos(np.clip(lam1, -1.0, 1.0)), np.nan)
    theta2 = np.mod(theta1 + np.pi, TWO_PI)
    return theta1, theta2


def is_trigonometric(lam, tol: float = EPS_NUM):
    return np.all(np.abs(np.asarray(lam)) <= 1.0 + tol, axis=-1)


def interference_coefficients(
    C: ContextData, P: TransitionMatrix, tol: float = EPS_NUM
) -> InterferenceProfile:
    """Interference coefficients of the context under ``P``'s conditioning order.

    For ``B_GIVEN_A`` the coefficients are indexed by b-outcomes and compare
    ``pb`` with the total-probability prediction from ``pa``; ``A_GIVEN_B``
    swaps the roles.
    """
    cond, target = C.marginals(P.orientation)
    lam, product = interference_lambda(cond, P.entries, target)
    if np.any(product < EPS_POS**2):
        raise DegenerateProduct(f"interference denominator vanishes (products {product.tolist()})")
    trig = bool(is_trigonometric(lam, tol))
    if trig:
        lam = np.clip(lam, -1.0, 1.0)
        theta1, theta2 = phases_from_lambda(lam[0], tol)
        theta = (float(theta1), float(theta2))
        cls = Classification.TRIGONOMETRIC
    else:
        theta = None
        cls = Classification.HYPERBOLIC
    return InterferenceProfile((float(lam[0]), float(lam[1])), theta, cls)


def interference_forward(cond, P, theta1):
    """Target probability of the first outcome implied by a phase.

    Inverse of :func:`interference_lambda` for the first outcome; works on
    arrays.
    """
    cond = np.asarray(cond, dtype=float)
    P = np.asarray(P, dtype=float)
    w = cond * P[..., 0, :]
    return w.sum(axis=-1) + 2.0 * np.cos(theta1) * np.sqrt(w[..., 0] * w[..., 1])
