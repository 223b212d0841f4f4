"""Unitary equivalence of the b|a and a|b representations.

The map sending the a-basis of the b|a space onto the standard basis of the
a|b space is applied to the b|a amplitude; the result is compared with the
a|b amplitude up to a global phase. Equivalence is expected exactly when the
two transition matrices are symmetric partners of each other.

Cosine matching leaves the sign of the relative phase free, so a match with
the componentwise conjugate of the a|b amplitude is accepted as well and
recorded as ``MatchKind.CONJUGATE``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .engine import QLState, amplitudes, basis_matrix, build_state, wrap_angle
from .exceptions import TheoremViolation
from .probmodel import (
    EPS_NUM,
    ContextData,
    Orientation,
    TransitionMatrix,
    interference_lambda,
    is_trigonometric,
    phases_from_lambda,
)

EPS_EQUIV = 1e-9
EPS_SYM = 1e-9


class MatchKind(str, enum.Enum):
    DIRECT = "direct"
    CONJUGATE = "conjugate"
    NONE = "none"


@dataclass(frozen=True)
class UnitaryMap:
    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def __call__(self, amp):
        return self.m @ np.asarray(amp)

    def apply(self, s: QLState) -> QLState:
        return QLState(self(s.amp), s.rep.mirrored)

    def deviation(self) -> float:
        """Largest entry of ``|m^T m - I|``."""
        return float(np.max(np.abs(self.m.T @ self.m - np.eye(2))))


@dataclass(frozen=True)
class EquivalenceReport:
    matrices_symmetric: bool
    phase_equivalent: bool
    matched_phase: float | None
    match_kind: MatchKind
    overlap: float
    direct_overlap: float
    conjugate_overlap: float
    identity_residuals: dict = field(default_factory=dict)

    @property
    def theorem_holds(self) -> bool:
        return self.phase_equivalent == self.matrices_symmetric

    def to_dict(self) -> dict:
        return {
            "matrices_symmetric": self.matrices_symmetric,
            "phase_equivalent": self.phase_equivalent,
            "matched_phase": self.matched_phase,
            "match_kind": self.match_kind.value,
            "overlap": self.overlap,
            "direct_overlap": self.direct_overlap,
            "conjugate_overlap": self.conjugate_overlap,
            "identity_residuals": dict(self.identity_residuals),
            "theorem_holds": self.theorem_holds,
        }


def unitary_map(P_ba: TransitionMatrix) -> UnitaryMap:
    """``[[sqrt p11, sqrt p12], [sqrt p21, -sqrt p22]]`` built from the b|a matrix."""
    return UnitaryMap(basis_matrix(P_ba.entries))


def overlap_arrays(u, v):
    """Direct and conjugate overlaps with their phases.

    ``gamma_direct`` satisfies ``v ~ exp(i gamma) u``; ``gamma_conj`` the
    same with ``conj(v)`` in place of ``v``.
    """
    u = np.asarray(u)
    v = np.asarray(v)
    inner = np.sum(np.conj(u) * v, axis=-1)
    inner_c = np.sum(np.conj(u) * np.conj(v), axis=-1)
    return np.abs(inner), np.abs(inner_c), wrap_angle(np.angle(inner)), wrap_angle(np.angle(inner_c))


def classify_match(direct, conj, tol: float = EPS_EQUIV):
    """Vectorised verdict: 0 = direct, 1 = conjugate, 2 = none.

    When both overlaps clear the threshold (relative phase near 0 or pi)
    the larger one wins; ties go to direct.
    """
    direct = np.asarray(direct)
    conj = np.asarray(conj)
    best = np.where(conj > direct, 1, 0)
    return np.where(np.maximum(direct, conj) >= 1.0 - tol, best, 2)


_KINDS = (MatchKind.DIRECT, MatchKind.CONJUGATE, MatchKind.NONE)


def phase_equivalent(s1, s2, tol: float = EPS_EQUIV):
    """Decide whether two unit vectors agree up to a global phase.

    Returns ``(equivalent, gamma, match_kind, overlap)`` where
    ``s2 ~ exp(i gamma) s1`` (or its conjugate). For ``NONE`` the reported
    overlap is the larger of the two and ``gamma`` is ``None``.
    """
    u = s1.amp if isinstance(s1, QLState) else np.asarray(s1, dtype=complex)
    v = s2.amp if isinstance(s2, QLState) else np.asarray(s2, dtype=complex)
    d, c, gd, gc = overlap_arrays(u, v)
    kind = _KINDS[int(classify_match(d, c, tol))]
    if kind is MatchKind.DIRECT:
        return True, float(gd), kind, float(d)
    if kind is MatchKind.CONJUGATE:
        return True, float(gc), kind, float(c)
    return False, None, kind, float(max(d, c))


def symmetric_arrays(P_ba, P_ab, tol: float = EPS_SYM):
    """``P_ba[beta, alpha] == P_ab[alpha, beta]`` for every pair, within ``tol``."""
    diff = np.asarray(P_ba) - np.swapaxes(np.asarray(P_ab), -1, -2)
    return np.max(np.abs(diff), axis=(-2, -1)) <= tol


def representation_arrays(pa, pb, P_ba, P_ab, tol: float = EPS_NUM):
    """Both amplitudes for batches of contexts.

    Returns a dict with the interference coefficients and phases of both
    orders, the two amplitudes, the mapped b|a amplitude and a
    ``trigonometric`` mask (entries outside the mask hold NaN).
    """
    lam_ba, _ = interference_lambda(pa, P_ba, pb)
    lam_ab, _ = interference_lambda(pb, P_ab, pa)
    trig = is_trigonometric(lam_ba, tol) & is_trigonometric(lam_ab, tol)
    theta_b1, _ = phases_from_lambda(lam_ba[..., 0], tol)
    theta_a1, _ = phases_from_lambda(lam_ab[..., 0], tol)
    psi_ba = amplitudes(pa, P_ba, theta_b1)
    psi_ab = amplitudes(pb, P_ab, theta_a1)
    mapped = np.einsum("...ij,...j->...i", basis_matrix(P_ba), psi_ba)
    return {
        "lam_ba": lam_ba,
        "lam_ab": lam_ab,
        "theta_b1": theta_b1,
        "theta_a1": theta_a1,
        "psi_ba": psi_ba,
        "psi_ab": psi_ab,
        "mapped": mapped,
        "trigonometric": trig,
    }


IDENTITY_NAMES = (
    "interference_a1",
    "cross_product_expansion",
    "cross_product_polar",
    "real_part",
    "real_part_doubly_stochastic",
    "cos_theta_b1",
    "scaled_cos_theta_b1",
    "collapsed_lhs",
    "cos_match",
    "symmetry_condition",
)


def identity_arrays(pa, pb, P_ba, P_ab, rep: dict | None = None):
    """Residuals ``|lhs - rhs|`` of the equivalence proof chain, vectorised.

    The chain, in order:

    * ``interference_a1``: ``pa1`` rebuilt from the a|b phase by the
      interference formula.
    * ``cross_product_expansion``: ``psi2 * conj(psi1)`` of the a|b
      amplitude against its four-term expansion.
    * ``cross_product_polar``: the same product against
      ``sqrt(pa1 pa2) exp(i (gamma2 - gamma1))``, gamma_j = arg psi_j.
    * ``real_part``: real parts of the two previous right-hand sides.
    * ``real_part_doubly_stochastic``: the real part rewritten with
      ``pb2 = 1 - pb1`` and the doubly stochastic parameter ``q``.
    * ``cos_theta_b1``: cosine of the b|a phase against its closed form.
    * ``scaled_cos_theta_b1``: ``2 sqrt(pa1 pa2) cos(theta_b1)`` against
      ``(pa1 - 1 + pb1 + p - 2 p pa1) / sqrt(p (1 - p))``.
    * ``collapsed_lhs``: ``2 sqrt(q(1-q)) sqrt(pa1 pa2) cos(gamma2 - gamma1)``
      against ``pa1 - 1 + pb1 + q - 2 q pa1``.
    * ``cos_match``: ``cos(gamma2 - gamma1)`` against ``cos(theta_b1)``.
    * ``symmetry_condition``: the two scaled numerators divided by
      ``sqrt(p(1-p))`` and ``sqrt(q(1-q))``; zero iff the cosines match.

    All but the last two hold for any trigonometric doubly stochastic data;
    ``cos_match`` and ``symmetry_condition`` vanish for symmetric pairs.
    """
    pa = np.asarray(pa, dtype=float)
    pb = np.asarray(pb, dtype=float)
    P_ba = np.asarray(P_ba, dtype=float)
    P_ab = np.asarray(P_ab, dtype=float)
    if rep is None:
        rep = representation_arrays(pa, pb, P_ba, P_ab)
    a1, a2 = pa[..., 0], pa[..., 1]
    b1, b2 = pb[..., 0], pb[..., 1]
    q11, q12, q21, q22 = P_ab[..., 0, 0], P_ab[..., 0, 1], P_ab[..., 1, 0], P_ab[..., 1, 1]
    p11, p12 = P_ba[..., 0, 0], P_ba[..., 0, 1]
    th_a = rep["theta_a1"]
    th_b = rep["theta_b1"]
    psi = rep["psi_ab"]
    cos_a = np.cos(th_a)
    e = np.exp(1j * th_a)

    out = {}
    out["interference_a1"] = np.abs(
        a1 - (b1 * q11 + b2 * q12 + 2.0 * cos_a * np.sqrt(b1 * q11 * b2 * q12))
    )
    cross = psi[..., 1] * np.conj(psi[..., 0])
    expansion = (
        b1 * np.sqrt(q11 * q21)
        - b2 * np.sqrt(q22 * q12)
        - e * np.sqrt(b2 * q22 * b1 * q11)
        + np.conj(e) * np.sqrt(b1 * q21 * b2 * q12)
    )
    out["cross_product_expansion"] = np.abs(cross - expansion)
    gamma = np.angle(psi)
    dgamma = gamma[..., 1] - gamma[..., 0]
    polar = np.sqrt(a1 * a2) * np.exp(1j * dgamma)
    out["cross_product_polar"] = np.abs(cross - polar)
    real_lhs = np.sqrt(a1 * a2) * np.cos(dgamma)
    out["real_part"] = np.abs(real_lhs - expansion.real)
    q = q11
    nia = (2.0 * b1 - 1.0) * np.sqrt(q * (1.0 - q)) + cos_a * (1.0 - 2.0 * q) * np.sqrt(
        (1.0 - b1) * b1
    )
    out["real_part_doubly_stochastic"] = np.abs(real_lhs - nia)
    cos_b = np.cos(th_b)
    out["cos_theta_b1"] = np.abs(
        cos_b - (b1 - a1 * p11 - a2 * p12) / (2.0 * np.sqrt(a1 * p11 * a2 * p12))
    )
    p = p11
    num_p = a1 - 1.0 + b1 + p - 2.0 * p * a1
    num_q = a1 - 1.0 + b1 + q - 2.0 * q * a1
    out["scaled_cos_theta_b1"] = np.abs(
        2.0 * np.sqrt(a1 * a2) * cos_b - num_p / np.sqrt(p * (1.0 - p))
    )
    out["collapsed_lhs"] = np.abs(2.0 * np.sqrt(q * (1.0 - q)) * real_lhs - num_q)
    out["cos_match"] = np.abs(np.cos(dgamma) - cos_b)
    out["symmetry_condition"] = np.abs(
        num_p / np.sqrt(p * (1.0 - p)) - num_q / np.sqrt(q * (1.0 - q))
    )
    return out


def proof_identity_suite(C: ContextData, P_ba: TransitionMatrix, P_ab: TransitionMatrix) -> dict:
    """Named residuals of the proof chain for one instance; see :func:`identity_arrays`."""
    res = identity_arrays(
        np.array(C.pa), np.array(C.pb), P_ba.entries, P_ab.entries
    )
    return {name: float(res[name]) for name in IDENTITY_NAMES}


def theorem_check(
    C: ContextData,
    P_ba: TransitionMatrix,
    P_ab: TransitionMatrix,
    *,
    tol: float = EPS_NUM,
    equiv_tol: float = EPS_EQUIV,
    sym_tol: float = EPS_SYM,
    strict: bool = True,
) -> EquivalenceReport:
    """Compare ``U psi_ba`` with ``psi_ab`` and the symmetry of the matrices.

    With ``strict`` (the default) a disagreement between the two verdicts
    raises :class:`TheoremViolation` carrying the report.
    """
    if P_ba.orientation is not Orientation.B_GIVEN_A or P_ab.orientation is not Orientation.A_GIVEN_B:
        raise ValueError("expected a b|a matrix followed by an a|b matrix")
    s_ba = build_state(C, P_ba, tol=tol)
    s_ab = build_state(C, P_ab, tol=tol)
    mapped = unitary_map(P_ba).apply(s_ba)
    equivalent, gamma, kind, overlap = phase_equivalent(mapped, s_ab, equiv_tol)
    d, c, _, _ = overlap_arrays(mapped.amp, s_ab.amp)
    symmetric = bool(symmetric_arrays(P_ba.entries, P_ab.entries, sym_tol))
    report = EquivalenceReport(
        matrices_symmetric=symmetric,
        phase_equivalent=equivalent,
        matched_phase=gamma,
        match_kind=kind,
        overlap=overlap,
        direct_overlap=float(d),
        conjugate_overlap=float(c),
        identity_residuals=proof_identity_suite(C, P_ba, P_ab),
    )
    if strict and not report.theorem_holds:
        raise TheoremViolation(
            f"phase_equivalent={equivalent} but matrices_symmetric={symmetric} "
            f"(overlap {overlap:.17g})",
            report,
        )
    return report
