"""Amplitude construction and Born-rule checks.

For conditioning order b|a the amplitude lives in a 2-d complex space whose
standard basis is the b-basis; the a-basis is built from square roots of the
transition matrix. The a|b order is the mirror image with the roles of the
observables swapped. All array kernels broadcast over leading axes so that
sweeps and single instances share one code path.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ExpansionMismatch, NotTrigonometric
from .probmodel import (
    EPS_NUM,
    TWO_PI,
    ContextData,
    Orientation,
    TransitionMatrix,
    _as_orientation,
    interference_coefficients,
)

_SIGNS = np.array([[1.0, 1.0], [1.0, -1.0]])


def basis_matrix(P):
    """Conjugate basis vectors as columns: ``[[sqrt P00, sqrt P01], [sqrt P10, -sqrt P11]]``."""
    return np.sqrt(np.asarray(P, dtype=float)) * _SIGNS


def amplitudes(cond, P, theta1):
    """Vectorised amplitude in the target-observable basis.

    ``psi[beta] = sqrt(cond[0] P[beta,0]) + exp(i theta_beta) sqrt(cond[1] P[beta,1])``
    with ``theta_2 = theta_1 + pi``, i.e. the second phase factor is the
    negated first one.
    """
    cond = np.asarray(cond, dtype=float)
    w = np.sqrt(cond[..., None, :] * np.asarray(P, dtype=float))
    phase = np.exp(1j * np.asarray(theta1, dtype=float))[..., None]
    return w[..., 0] + phase * _SIGNS[:, 1] * w[..., 1]


def wrap_angle(angle):
    """Map angles onto [0, 2*pi)."""
    out = np.mod(angle, TWO_PI)
    return np.where(out >= TWO_PI, 0.0, out)


@dataclass(frozen=True)
class Basis:
    v1: np.ndarray
    v2: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.column_stack([self.v1, self.v2])

    def gram(self) -> np.ndarray:
        m = self.matrix
        return m.T @ m


@dataclass(frozen=True)
class QLState:
    """Unit vector representing the data in one conditioning order.

    ``amp`` holds coordinates in the representation's standard basis.
    Two states describe the same quantum-like state when they differ by a
    global phase; see :func:`qlra.equivalence.phase_equivalent`.
    """

    amp: np.ndarray
    rep: Orientation
    context: ContextData | None = field(default=None, compare=False)
    transition: TransitionMatrix | None = field(default=None, compare=False)
    theta1: float | None = field(default=None, compare=False)

    def __post_init__(self):
        amp = np.array(self.amp, dtype=complex)
        if amp.shape != (2,) or not np.all(np.isfinite(amp)):
            raise ValueError("amplitude must be two finite complex numbers")
        amp.setflags(write=False)
        object.__setattr__(self, "amp", amp)
        object.__setattr__(self, "rep", _as_orientation(self.rep))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))

    def phases(self) -> np.ndarray:
        return wrap_angle(np.angle(self.amp))


def build_state(
    C: ContextData, P: TransitionMatrix, rep=None, tol: float = EPS_NUM
) -> QLState:
    """Run the representation algorithm for one conditioning order.

    ``rep`` defaults to the orientation of ``P`` and must agree with it.
    Raises :class:`NotTrigonometric` for hyperbolic data.
    """
    rep = P.orientation if rep is None else _as_orientation(rep)
    if rep is not P.orientation:
        raise ValueError(f"transition matrix is {P.orientation.value}, requested {rep.value}")
    profile = interference_coefficients(C, P, tol)
    if not profile.is_trigonometric:
        raise NotTrigonometric(
            f"|lambda| > 1 for {rep.value} conditioning (lambda = {profile.lam})"
        )
    cond, _ = C.marginals(rep)
    theta1 = profile.theta[0]
    amp = amplitudes(cond, P.entries, theta1)
    return QLState(amp, rep, C, P, theta1)


def conjugate_basis(P: TransitionMatrix) -> Basis:
    """Basis of the conditioning observable inside the target's space."""
    m = basis_matrix(P.entries)
    return Basis(m[:, 0].copy(), m[:, 1].copy())


def expand_in_conjugate_basis(s: QLState, tol: float = EPS_NUM):
    """Coordinates of ``s`` in the conjugate basis, checked against the closed form.

    The expected coefficients are ``sqrt(cond[0])`` and
    ``exp(i theta1) * sqrt(cond[1])``. Returns ``(coefficients, residual)``.
    """
    if s.transition is None or s.context is None or s.theta1 is None:
        raise ValueError("state lacks provenance; build it with build_state")
    m = basis_matrix(s.transition.entries)
    coeffs = m.T @ s.amp
    cond, _ = s.context.marginals(s.rep)
    expected = np.array([np.sqrt(cond[0]), np.exp(1j * s.theta1) * np.sqrt(cond[1])])
    residual = float(np.linalg.norm(m @ expected - s.amp))
    if residual > tol:
        raise ExpansionMismatch(f"conjugate-basis expansion off by {residual:.3e}")
    return (complex(coeffs[0]), complex(coeffs[1])), residual


def born_arrays(psi, P, cond, target):
    """Vectorised Born residuals for amplitudes ``psi`` (shape ``(..., 2)``)."""
    r_target = np.abs(np.abs(psi) ** 2 - np.asarray(target))
    proj = np.einsum("...ij,...i->...j", basis_matrix(P), psi)
    r_cond = np.abs(np.abs(proj) ** 2 - np.asarray(cond))
    return r_target, r_cond


def born_residuals(s: QLState, reference: ContextData | None = None):
    """Born-rule residuals ``(r_target, r_conjugate)`` of a state.

    ``r_target`` compares squared moduli in the standard basis with the
    target marginal; ``r_conjugate`` does the same for projections on the
    conjugate basis and the conditioning marginal. By default the state's
    own context is the reference; pass ``reference`` to score an estimated
    state against known probabilities.
    """
    ctx = s.context if reference is None else reference
    if ctx is None or s.transition is None:
        raise ValueError("state lacks provenance; pass a reference context")
    cond, target = ctx.marginals(s.rep)
    r_t, r_c = born_arrays(s.amp, s.transition.entries, cond, target)
    return (float(r_t[0]), float(r_t[1])), (float(r_c[0]), float(r_c[1]))
